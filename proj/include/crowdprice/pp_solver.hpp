#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "crowdprice/common.hpp"
#include "crowdprice/utility.hpp"
#include "crowdprice/worker.hpp"

namespace crowdprice {

struct GkpInstance {
  std::vector<WorkerProfile> workers;
  double budget = 0.0;
  UtilityFunction utility = make_additive_utility();
};

/// A 0/1 recruitment with its utility U(r∘x) and cost Σ c_i x_i <= B.
struct Selection {
  std::vector<bool> x;
  double utility_value = 0.0;
  double spent = 0.0;
};

struct PpSolution {
  Selection selection;
  PersonalizedPolicy policy;
  std::vector<std::string> diagnostics;
};

inline constexpr std::size_t kEnumerationMaxWorkers = 24;

namespace detail {

inline std::vector<double> qualities_of(const std::vector<WorkerProfile>& ws) {
  std::vector<double> r(ws.size());
  for (std::size_t i = 0; i < ws.size(); ++i) r[i] = ws[i].quality;
  return r;
}

inline double selection_cost(const std::vector<WorkerProfile>& ws, const std::vector<bool>& x) {
  CompensatedSum s;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (x[i]) s.add(ws[i].cost);
  }
  return s.value();
}

inline void check_instance(const GkpInstance& inst) {
  if (!(inst.budget >= 0.0) || !std::isfinite(inst.budget)) throw DomainError("budget must be finite and >= 0");
  validate(inst.workers);
}

inline Selection make_selection(const GkpInstance& inst, std::vector<bool> x) {
  Selection s;
  s.spent = selection_cost(inst.workers, x);
  s.utility_value = inst.utility.of_selection(qualities_of(inst.workers), x);
  s.x = std::move(x);
  return s;
}

}  // namespace detail

/// Per selected worker (p_i, (c_i - p_i)/r_i); unselected workers get (0, 0).
/// Default p_i = c_i gives the zero-bonus form. The bonus is rounded up to the
/// next double where needed so that the worker's own decision rule accepts.
inline PersonalizedPolicy policy_from_selection(const std::vector<WorkerProfile>& ws, const std::vector<bool>& x,
                                                const std::optional<std::vector<double>>& base_choices = {}) {
  if (x.size() != ws.size()) throw ConfigError("policy_from_selection: selection length mismatch");
  if (base_choices && base_choices->size() != ws.size()) {
    throw ConfigError("policy_from_selection: base_choices length mismatch");
  }
  PersonalizedPolicy policy(ws.size());
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (!x[i]) continue;
    const double c = ws[i].cost, r = ws[i].quality;
    const double p = base_choices ? (*base_choices)[i] : c;
    if (!(p >= 0.0 && p <= c)) throw DomainError("policy_from_selection: base outside [0, c_i]");
    double q = 0.0;
    if (p < c) {
      if (!(r > 0.0)) throw DomainError("policy_from_selection: zero quality needs base = cost");
      q = (c - p) / r;
      while (p + q * r < c) q = std::nextafter(q, std::numeric_limits<double>::infinity());
    }
    policy[i] = {p, q};
  }
  return policy;
}

/// Greedy by descending quality/cost while the running cost stays within B
/// (stopping at the first worker that does not fit), compared against the
/// best affordable single worker; the greedy set wins only if strictly better.
inline PpSolution modified_greedy(const GkpInstance& inst,
                                  const std::optional<std::vector<double>>& base_choices = {}) {
  detail::check_instance(inst);
  PpSolution out;
  const auto& f = inst.utility.flags();
  if (!(f.subadditive && f.schur_convex)) {
    out.diagnostics.push_back("utility '" + inst.utility.name() +
                              "' is not declared subadditive and Schur-convex; the 1/2 guarantee does not apply");
  }
  const std::size_t n = inst.workers.size();
  const auto eval = inst.utility.bind(detail::qualities_of(inst.workers));

  std::vector<bool> greedy(n, false);
  CompensatedSum running;
  for (std::size_t i : sort_by_bang_per_buck(inst.workers)) {
    CompensatedSum trial = running;
    trial.add(inst.workers[i].cost);
    if (!(trial.value() <= inst.budget)) break;
    running = trial;
    greedy[i] = true;
  }

  std::optional<std::size_t> best_single;
  double best_single_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(inst.workers[i].cost <= inst.budget)) continue;
    std::vector<bool> e(n, false);
    e[i] = true;
    const double v = eval(e);
    if (v > best_single_value) {
      best_single_value = v;
      best_single = i;
    }
  }

  std::vector<bool> chosen = greedy;
  if (best_single && !(eval(greedy) > best_single_value)) {
    chosen.assign(n, false);
    chosen[*best_single] = true;
  }
  out.selection = detail::make_selection(inst, std::move(chosen));
  out.policy = policy_from_selection(inst.workers, out.selection.x, base_choices);
  return out;
}

namespace detail {

inline bool on_cost_grid(const std::vector<WorkerProfile>& ws, double scale) {
  for (const auto& w : ws) {
    const double v = w.cost * scale;
    if (std::fabs(v - std::nearbyint(v)) > 1e-9 * std::fmax(1.0, v)) return false;
  }
  return true;
}

// Additive utility on a 1e-4 cost grid: suffix table best[i][w] over workers
// i..n-1, reconstructed front to back preferring x_i = 0 on ties.
inline std::vector<bool> additive_dp(const GkpInstance& inst, double scale) {
  const std::size_t n = inst.workers.size();
  const auto cap = static_cast<std::size_t>(std::floor(inst.budget * scale + 1e-9));
  if (static_cast<double>(cap) * static_cast<double>(n + 1) > 5e8) {
    throw SizeLimitError("solve_gkp_exact: knapsack table too large");
  }
  std::vector<std::size_t> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<std::size_t>(std::nearbyint(inst.workers[i].cost * scale));
  std::vector<std::vector<double>> best(n + 1, std::vector<double>(cap + 1, 0.0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t c = 0; c <= cap; ++c) {
      double v = best[i + 1][c];
      if (w[i] <= c) v = std::fmax(v, best[i + 1][c - w[i]] + inst.workers[i].quality);
      best[i][c] = v;
    }
  }
  std::vector<bool> x(n, false);
  std::size_t c = cap;
  for (std::size_t i = 0; i < n; ++i) {
    if (best[i][c] == best[i + 1][c]) continue;
    x[i] = true;
    c -= w[i];
  }
  return x;
}

}  // namespace detail

/// Exact maximizer of U(r∘x) subject to Σ c_i x_i <= B. Subset enumeration for
/// n <= 24, tie-broken to the lexicographically smallest x. Larger additive
/// instances with costs on a 1e-4 grid use a knapsack table instead.
inline Selection solve_gkp_exact(const GkpInstance& inst) {
  detail::check_instance(inst);
  const std::size_t n = inst.workers.size();
  if (n > kEnumerationMaxWorkers) {
    constexpr double kScale = 1e4;
    if (inst.utility.flags().additive && detail::on_cost_grid(inst.workers, kScale)) {
      auto x = detail::additive_dp(inst, kScale);
      if (detail::selection_cost(inst.workers, x) <= inst.budget) return detail::make_selection(inst, std::move(x));
    }
    throw SizeLimitError("solve_gkp_exact: more than 24 workers and no exact knapsack table applies");
  }
  const auto eval = inst.utility.bind(detail::qualities_of(inst.workers));
  std::vector<bool> x(n, false), best_x(n, false);
  double best = -std::numeric_limits<double>::infinity();
  // key bit (n-1-i) holds x_i, so ascending keys walk x in lexicographic order
  for (std::uint64_t key = 0; key < (std::uint64_t{1} << n); ++key) {
    CompensatedSum cost;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = ((key >> (n - 1 - i)) & 1U) != 0;
      if (x[i]) cost.add(inst.workers[i].cost);
    }
    if (!(cost.value() <= inst.budget)) continue;
    const double v = eval(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return detail::make_selection(inst, std::move(best_x));
}

/// Closed-form fractional optimum: full workers in descending quality/cost
/// order until the first one that overflows B, which gets the fraction
/// alpha of the remaining budget; all later workers get 0.
struct RelaxedSolution {
  std::vector<double> z;  // original worker order
  double value = 0.0;     // U(r∘z)
  std::optional<std::size_t> split;  // worker index receiving alpha
  double alpha = 1.0;
};

inline RelaxedSolution solve_gkp_relaxed(const GkpInstance& inst) {
  detail::check_instance(inst);
  const std::size_t n = inst.workers.size();
  RelaxedSolution out;
  out.z.assign(n, 0.0);
  CompensatedSum prefix;
  for (std::size_t i : sort_by_bang_per_buck(inst.workers)) {
    CompensatedSum trial = prefix;
    trial.add(inst.workers[i].cost);
    if (trial.value() > inst.budget) {
      out.split = i;
      out.alpha = (inst.budget - prefix.value()) / inst.workers[i].cost;
      out.z[i] = out.alpha;
      break;
    }
    prefix = trial;
    out.z[i] = 1.0;
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = inst.workers[i].quality * out.z[i];
  out.value = inst.utility(y);
  return out;
}

enum class PpMode { Exact, Greedy };

/// Personalized pricing restricted to zero bonus: p_i = c_i for every selected
/// worker, so the recruitable sets and their costs coincide with the bonus
/// case and the same knapsack solution applies.
inline PpSolution solve_opp_no_bonus(const GkpInstance& inst, PpMode mode = PpMode::Exact) {
  if (mode == PpMode::Greedy) return modified_greedy(inst);
  PpSolution out;
  out.selection = solve_gkp_exact(inst);
  out.policy = policy_from_selection(inst.workers, out.selection.x);
  return out;
}

}  // namespace crowdprice
