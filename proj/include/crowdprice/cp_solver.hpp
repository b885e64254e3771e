#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "crowdprice/common.hpp"
#include "crowdprice/lp2d.hpp"
#include "crowdprice/utility.hpp"
#include "crowdprice/worker.hpp"

namespace crowdprice {

/// Shape of an accepted set over quality-descending ranks (1-based).
struct StructureClass {
  enum class Kind { PickingSuffix, Picking, Blocking, Other };
  Kind kind = Kind::Picking;
  std::size_t l = 0;  // 0 with u = 0 encodes the empty picking
  std::size_t u = 0;

  [[nodiscard]] bool empty() const { return kind == Kind::Picking && l == 0 && u == 0; }
  friend bool operator==(const StructureClass&, const StructureClass&) = default;
};

inline std::string_view to_string(StructureClass::Kind k) {
  switch (k) {
    case StructureClass::Kind::PickingSuffix: return "picking-suffix";
    case StructureClass::Kind::Picking: return "picking";
    case StructureClass::Kind::Blocking: return "blocking";
    case StructureClass::Kind::Other: return "other";
  }
  return "other";
}

struct AcceptedSet {
  std::vector<std::size_t> indices;  // ascending
  double spent = 0.0;
};

/// {i : p + q·r_i >= c_i} and Σ (p + q·r_i) over it.
inline AcceptedSet accepted_set(const std::vector<WorkerProfile>& ws, const CommonPolicy& policy) {
  AcceptedSet out;
  CompensatedSum s;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (decide(ws[i], policy)) {
      out.indices.push_back(i);
      s.add(policy.base + policy.bonus * ws[i].quality);
    }
  }
  out.spent = s.value();
  return out;
}

/// `sorted` is in descending quality; `accepted[k]` refers to rank k + 1.
/// Equal-quality workers form one group that must be wholly in or out.
inline StructureClass classify_structure(const std::vector<WorkerProfile>& sorted, const std::vector<bool>& accepted) {
  using Kind = StructureClass::Kind;
  if (sorted.size() != accepted.size()) throw ConfigError("classify_structure: length mismatch");
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    if (sorted[k].quality > sorted[k - 1].quality) throw ConfigError("classify_structure: input not quality-sorted");
  }
  struct Group {
    std::size_t first, last;
    bool in;
  };
  std::vector<Group> groups;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (!groups.empty() && sorted[k].quality == sorted[groups.back().first].quality) {
      if (groups.back().in != accepted[k]) return {Kind::Other, 0, 0};
      groups.back().last = k;
    } else {
      groups.push_back({k, k, accepted[k]});
    }
  }
  std::vector<std::size_t> in_runs;  // indices of groups starting an accepted run
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].in && (g == 0 || !groups[g - 1].in)) in_runs.push_back(g);
  }
  if (in_runs.empty()) return {Kind::Picking, 0, 0};
  if (in_runs.size() == 1) {
    std::size_t g = in_runs.front(), h = g;
    while (h + 1 < groups.size() && groups[h + 1].in) ++h;
    const std::size_t l = groups[g].first + 1, u = groups[h].last + 1;
    return {h + 1 == groups.size() ? Kind::PickingSuffix : Kind::Picking, l, u};
  }
  if (in_runs.size() == 2 && groups.front().in && groups.back().in) {
    std::size_t g = 0;
    while (groups[g].in) ++g;
    std::size_t h = g;
    while (!groups[h + 1].in) ++h;
    return {Kind::Blocking, groups[g].first + 1, groups[h].last + 1};
  }
  return {Kind::Other, 0, 0};
}

/// Structure of an accepted index set over workers in any order.
inline StructureClass classify_structure_of(const std::vector<WorkerProfile>& ws,
                                            const std::vector<std::size_t>& accepted) {
  const auto order = sort_by_quality(ws);
  std::vector<bool> in(ws.size(), false);
  for (std::size_t i : accepted) in.at(i) = true;
  std::vector<WorkerProfile> sorted;
  std::vector<bool> flags;
  for (std::size_t i : order) {
    sorted.push_back(ws[i]);
    flags.push_back(in[i]);
  }
  return classify_structure(sorted, flags);
}

struct CpSolveReport {
  CommonPolicy policy;
  std::vector<std::size_t> accepted;
  double spent = 0.0;
  double utility_value = 0.0;
  StructureClass structure;
  std::string algorithm;
  std::vector<std::string> diagnostics;
};

inline CpSolveReport make_cp_report(const std::vector<WorkerProfile>& ws, const CommonPolicy& policy,
                                    const UtilityFunction& U, std::string algorithm) {
  CpSolveReport r;
  r.policy = policy;
  auto acc = accepted_set(ws, policy);
  r.accepted = std::move(acc.indices);
  r.spent = acc.spent;
  std::vector<bool> x(ws.size(), false);
  for (std::size_t i : r.accepted) x[i] = true;
  std::vector<double> q(ws.size());
  for (std::size_t i = 0; i < ws.size(); ++i) q[i] = ws[i].quality;
  r.utility_value = U.of_selection(q, x);
  r.structure = classify_structure_of(ws, r.accepted);
  r.algorithm = std::move(algorithm);
  return r;
}

/// Higher utility, then lower spend, then lexicographically smaller (p, q).
inline bool better_report(const CpSolveReport& a, const CpSolveReport& b) {
  if (a.utility_value != b.utility_value) return a.utility_value > b.utility_value;
  if (a.spent != b.spent) return a.spent < b.spent;
  if (a.policy.base != b.policy.base) return a.policy.base < b.policy.base;
  return a.policy.bonus < b.policy.bonus;
}

enum class SearchMode { Binary, Linear };

namespace detail {

inline double max_cost(const std::vector<WorkerProfile>& ws) {
  double m = 0.0;
  for (const auto& w : ws) m = std::fmax(m, w.cost);
  return m;
}

inline lp2d::HalfPlane accept_row(const WorkerProfile& w) {
  return {-1.0, -w.quality, -w.cost, lp2d::Sense::LessEqual};
}

inline lp2d::HalfPlane reject_row(const WorkerProfile& w) {
  return {1.0, w.quality, w.cost, lp2d::Sense::Less};
}

// Walks (p, q) by ulps until decide() yields exactly `target` within budget.
// Starting points come from exact geometry, so only rounding is corrected.
inline std::optional<CommonPolicy> settle(const std::vector<WorkerProfile>& ws, const std::vector<bool>& target,
                                          lp2d::Point start, double budget) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  CommonPolicy o{std::fmax(0.0, start.p), std::fmax(0.0, start.q)};
  for (int step = 0; step < 64; ++step) {
    bool up = false, down = false;
    double deficit = 0.0;
    CompensatedSum spent;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const bool acc = decide(ws[i], o);
      if (acc) spent.add(o.base + o.bonus * ws[i].quality);
      if (target[i] && !acc) {
        up = true;
        deficit = std::fmax(deficit, ws[i].cost - (o.base + o.bonus * ws[i].quality));
      }
      if (!target[i] && acc) down = true;
    }
    if (!up && !down) {
      if (spent.value() <= budget) return o;
      down = true;
    }
    if (up && down) return std::nullopt;
    const double scale = std::fmax(1.0, std::fmax(o.base, o.bonus));
    if (up) {
      if (deficit > 1e-9 * scale) return std::nullopt;
      o.base = std::nextafter(o.base + (step == 0 ? deficit : 0.0), kInf);
    } else if (o.base > 0.0) {
      o.base = std::nextafter(o.base, 0.0);
    } else if (o.bonus > 0.0) {
      o.bonus = std::nextafter(o.bonus, 0.0);
    } else {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

enum class Pick { Witness, MinPayment };

// A policy whose accepted set is exactly `target` and whose spend is within
// budget, found inside the polygon of `rows`. Witness mode starts from the
// repaired lowest-(p+q) vertex; MinPayment walks vertices by the payment
// Σ_{target}(p + q·r_i), each also pulled slightly toward the centroid.
inline std::optional<CommonPolicy> realize(const std::vector<WorkerProfile>& ws, const std::vector<bool>& target,
                                           const std::vector<lp2d::HalfPlane>& rows, double budget, Pick pick) {
  const auto poly = lp2d::feasible_polygon(rows);
  if (poly.empty()) return std::nullopt;
  const double eps0 = 1e-6 * std::fmax(1.0, max_cost(ws));
  if (pick == Pick::Witness) {
    if (auto w = lp2d::strict_point(rows, eps0)) {
      if (auto o = settle(ws, target, *w, budget)) return o;
    }
  }
  double count = 0.0;
  CompensatedSum rsum;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (target[i]) {
      count += 1.0;
      rsum.add(ws[i].quality);
    }
  }
  const double R = rsum.value();
  auto pay = [&](lp2d::Point x) { return count * x.p + R * x.q; };
  lp2d::Point centroid{0.0, 0.0};
  for (const auto& v : poly) {
    centroid.p += v.p / static_cast<double>(poly.size());
    centroid.q += v.q / static_cast<double>(poly.size());
  }
  std::vector<lp2d::Point> verts = poly;
  std::sort(verts.begin(), verts.end(), [&](lp2d::Point a, lp2d::Point b) {
    const double pa = pay(a), pb = pay(b);
    return pa < pb || (pa == pb && (a.p < b.p || (a.p == b.p && a.q < b.q)));
  });
  for (const auto& v : verts) {
    for (double t : {0.0, 0x1p-40, 0x1p-30, 0x1p-20, 0x1p-10}) {
      const lp2d::Point x{v.p + t * (centroid.p - v.p), v.q + t * (centroid.q - v.q)};
      if (t > 0.0 && !lp2d::satisfies_all(rows, x)) continue;
      if (auto o = settle(ws, target, x, budget)) return o;
    }
  }
  if (auto o = settle(ws, target, centroid, budget)) return o;
  return std::nullopt;
}

inline std::vector<lp2d::HalfPlane> full_rows(const std::vector<WorkerProfile>& ws, const std::vector<bool>& target,
                                              double budget) {
  std::vector<lp2d::HalfPlane> rows;
  rows.reserve(ws.size() + 1);
  double count = 0.0;
  CompensatedSum rsum;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (target[i]) {
      rows.push_back(accept_row(ws[i]));
      count += 1.0;
      rsum.add(ws[i].quality);
    } else {
      rows.push_back(reject_row(ws[i]));
    }
  }
  rows.push_back({count, rsum.value(), budget, lp2d::Sense::LessEqual});
  return rows;
}

inline void check_cp_input(const std::vector<WorkerProfile>& ws, double budget) {
  if (!(budget >= 0.0) || !std::isfinite(budget)) throw DomainError("budget must be finite and >= 0");
  validate(ws);
}

inline void regime_diagnostic(CpSolveReport& r, const std::vector<WorkerProfile>& ws, Regime expected) {
  const Regime got = classify_profile(ws);
  if (got != expected) {
    r.diagnostics.push_back("profile classifies as " + std::string(to_string(got)) + ", algorithm assumes " +
                            std::string(to_string(expected)) + "; optimality is not guaranteed");
  }
}

// Interval systems over quality ranks. `rank` maps rank k (0-based) to worker.
class IntervalSearch {
 public:
  IntervalSearch(const std::vector<WorkerProfile>& ws, double budget)
      : ws_(ws), budget_(budget), rank_(sort_by_quality(ws)) {
    prefix_r_.push_back(0.0);
    CompensatedSum s;
    for (std::size_t i : rank_) {
      s.add(ws[i].quality);
      prefix_r_.push_back(s.value());
    }
  }

  [[nodiscard]] std::size_t size() const { return rank_.size(); }

  // Ranks l..u (1-based) accepted, the rest declined.
  std::optional<CommonPolicy> picking(std::size_t l, std::size_t u) {
    return memo(picking_, l, u, [&] {
      const std::size_t n = size();
      std::vector<lp2d::HalfPlane> rows;
      if (l > 1) rows.push_back(reject_row(at(l - 1)));
      rows.push_back(accept_row(at(l)));
      rows.push_back(accept_row(at(u)));
      if (u < n) rows.push_back(reject_row(at(u + 1)));
      rows.push_back({static_cast<double>(u - l + 1), range_r(l, u), budget_, lp2d::Sense::LessEqual});
      return realize(ws_, mask(l, u, true), rows, budget_, Pick::Witness);
    });
  }

  // Ranks l..u (1-based) declined, the rest accepted.
  std::optional<CommonPolicy> blocking(std::size_t l, std::size_t u) {
    return memo(blocking_, l, u, [&] {
      const std::size_t n = size();
      std::vector<lp2d::HalfPlane> rows;
      rows.push_back(reject_row(at(l)));
      rows.push_back(reject_row(at(u)));
      if (l > 1) rows.push_back(accept_row(at(l - 1)));
      if (u < n) rows.push_back(accept_row(at(u + 1)));
      const double outside_r = prefix_r_[n] - range_r(l, u);
      rows.push_back({static_cast<double>(n - (u - l + 1)), outside_r, budget_, lp2d::Sense::LessEqual});
      return realize(ws_, mask(l, u, false), rows, budget_, Pick::Witness);
    });
  }

  // Everybody accepted; needs every acceptance row since convex profiles do
  // not propagate acceptance inward from the endpoints.
  std::optional<CommonPolicy> everyone() {
    std::vector<bool> all(ws_.size(), true);
    return realize(ws_, all, full_rows(ws_, all, budget_), budget_, Pick::Witness);
  }

 private:
  const WorkerProfile& at(std::size_t rank1) const { return ws_[rank_[rank1 - 1]]; }

  double range_r(std::size_t l, std::size_t u) const { return prefix_r_[u] - prefix_r_[l - 1]; }

  std::vector<bool> mask(std::size_t l, std::size_t u, bool inside) const {
    std::vector<bool> m(ws_.size(), !inside);
    for (std::size_t k = l; k <= u; ++k) m[rank_[k - 1]] = inside;
    return m;
  }

  template <class F>
  std::optional<CommonPolicy> memo(std::map<std::pair<std::size_t, std::size_t>, std::optional<CommonPolicy>>& cache,
                                   std::size_t l, std::size_t u, F&& compute) {
    const auto key = std::make_pair(l, u);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    auto v = compute();
    cache.emplace(key, v);
    return v;
  }

  const std::vector<WorkerProfile>& ws_;
  double budget_;
  std::vector<std::size_t> rank_;
  std::vector<double> prefix_r_;
  std::map<std::pair<std::size_t, std::size_t>, std::optional<CommonPolicy>> picking_, blocking_;
};

// Smallest k in [lo, hi] with feasible(k), assuming feasibility is monotone
// (Binary) or checking every k (Linear).
template <class F>
std::optional<std::size_t> smallest_feasible(std::size_t lo, std::size_t hi, SearchMode mode, F&& feasible) {
  if (mode == SearchMode::Linear) {
    for (std::size_t k = lo; k <= hi; ++k) {
      if (feasible(k)) return k;
    }
    return std::nullopt;
  }
  std::optional<std::size_t> found;
  std::size_t a = lo, b = hi;
  while (a <= b) {
    const std::size_t mid = a + (b - a) / 2;
    if (feasible(mid)) {
      found = mid;
      if (mid == lo) break;
      b = mid - 1;
    } else {
      a = mid + 1;
    }
  }
  return found;
}

}  // namespace detail

/// Bonus-only pricing for effort-unresponsive profiles: the largest k in
/// quality/cost order whose policy (0, c_k/r_k) stays within budget. Workers
/// with zero quality and positive cost are never candidates.
inline CpSolveReport cp_unres(const std::vector<WorkerProfile>& ws, double budget, const UtilityFunction& U) {
  detail::check_cp_input(ws, budget);
  std::vector<CommonPolicy> cands;
  for (std::size_t i : sort_by_bang_per_buck(ws)) {
    const auto& w = ws[i];
    if (w.quality == 0.0 && w.cost > 0.0) continue;
    double q = w.cost == 0.0 ? 0.0 : w.cost / w.quality;
    while (q * w.quality < w.cost) q = std::nextafter(q, std::numeric_limits<double>::infinity());
    cands.push_back({0.0, q});
  }
  // spend is nondecreasing along the candidates, so the largest feasible one
  // is found by bisection
  std::size_t lo = 0, hi = cands.size();  // answer in [0, hi]: count of feasible prefix
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (accepted_set(ws, cands[mid - 1]).spent <= budget) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  const CommonPolicy policy = lo == 0 ? CommonPolicy{0.0, 0.0} : cands[lo - 1];
  auto r = make_cp_report(ws, policy, U, "cp-unres");
  if (r.spent > budget) r = make_cp_report(ws, {0.0, 0.0}, U, "cp-unres");
  detail::regime_diagnostic(r, ws, Regime::EffortUnresponsive);
  return r;
}

/// Interval pricing for effort-subresponsive profiles: for each upper rank u,
/// the smallest feasible lower rank l such that exactly ranks l..u accept
/// within budget; the best of these.
inline CpSolveReport cp_subres(const std::vector<WorkerProfile>& ws, double budget, const UtilityFunction& U,
                               SearchMode mode = SearchMode::Binary) {
  detail::check_cp_input(ws, budget);
  detail::IntervalSearch search(ws, budget);
  const std::string name = mode == SearchMode::Binary ? "cp-subres" : "cp-subres(linear)";
  CpSolveReport best = make_cp_report(ws, {0.0, 0.0}, U, name);
  if (best.spent > budget) best.utility_value = -std::numeric_limits<double>::infinity();
  for (std::size_t u = search.size(); u >= 1; --u) {
    const auto l = detail::smallest_feasible(1, u, mode, [&](std::size_t k) { return search.picking(k, u).has_value(); });
    if (l) {
      auto cand = make_cp_report(ws, *search.picking(*l, u), U, name);
      if (better_report(cand, best)) best = std::move(cand);
    }
  }
  if (best.spent > budget) throw InvariantError("cp_subres: no budget-feasible policy");
  detail::regime_diagnostic(best, ws, Regime::EffortSubresponsive);
  return best;
}

/// Blocking pricing for effort-responsive profiles: for each lower rank l, the
/// smallest u such that exactly ranks l..u decline and the rest accept within
/// budget; the best of these and of accepting everybody.
inline CpSolveReport cp_res(const std::vector<WorkerProfile>& ws, double budget, const UtilityFunction& U,
                            SearchMode mode = SearchMode::Binary) {
  detail::check_cp_input(ws, budget);
  detail::IntervalSearch search(ws, budget);
  const std::string name = mode == SearchMode::Binary ? "cp-res" : "cp-res(linear)";
  CpSolveReport best = make_cp_report(ws, {0.0, 0.0}, U, name);
  if (best.spent > budget) best.utility_value = -std::numeric_limits<double>::infinity();
  if (auto all = search.everyone()) {
    auto cand = make_cp_report(ws, *all, U, name);
    if (better_report(cand, best)) best = std::move(cand);
  }
  const std::size_t n = search.size();
  for (std::size_t l = 1; l <= n; ++l) {
    const auto u = detail::smallest_feasible(l, n, mode, [&](std::size_t k) { return search.blocking(l, k).has_value(); });
    if (u) {
      auto cand = make_cp_report(ws, *search.blocking(l, *u), U, name);
      if (better_report(cand, best)) best = std::move(cand);
    }
  }
  if (best.spent > budget) throw InvariantError("cp_res: no budget-feasible policy");
  detail::regime_diagnostic(best, ws, Regime::EffortResponsive);
  return best;
}

/// Best base-only policy (p, 0): p ranges over 0 and the distinct costs.
inline CpSolveReport cp_no_bonus(const std::vector<WorkerProfile>& ws, double budget, const UtilityFunction& U) {
  detail::check_cp_input(ws, budget);
  std::vector<double> prices = {0.0};
  for (const auto& w : ws) prices.push_back(w.cost);
  std::sort(prices.begin(), prices.end());
  prices.erase(std::unique(prices.begin(), prices.end()), prices.end());
  std::optional<CpSolveReport> best;
  for (double p : prices) {
    auto r = make_cp_report(ws, {p, 0.0}, U, "cp-no-bonus");
    if (r.spent > budget) continue;
    if (!best || r.utility_value > best->utility_value) best = std::move(r);
  }
  if (!best) throw InvariantError("cp_no_bonus: no budget-feasible price");
  return *best;
}

inline constexpr std::size_t kOracleMaxWorkers = 64;

/// Exact optimum over all (p, q) >= 0. For fixed q the accepted sets are the
/// prefixes of the workers ordered by threshold c_i - r_i·q, and that order
/// changes only where two thresholds cross or one crosses zero. Every
/// realizable set is therefore a prefix at one of those critical q values or
/// between two consecutive ones. Each distinct set is then priced at its least
/// total payment by vertex enumeration of its exact constraint polygon.
inline CpSolveReport cp_exact_oracle(const std::vector<WorkerProfile>& ws, double budget, const UtilityFunction& U) {
  detail::check_cp_input(ws, budget);
  const std::size_t n = ws.size();
  if (n > kOracleMaxWorkers) throw SizeLimitError("cp_exact_oracle: more than 64 workers");

  std::vector<std::pair<double, double>> lines;  // distinct (r, c)
  for (const auto& w : ws) lines.emplace_back(w.quality, w.cost);
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  std::vector<double> crit = {0.0};
  for (std::size_t a = 0; a < lines.size(); ++a) {
    const auto [ra, ca] = lines[a];
    if (ra > 0.0) crit.push_back(ca / ra);
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      const auto [rb, cb] = lines[b];
      if (ra == rb) continue;
      const double q = (ca - cb) / (ra - rb);
      if (q > 0.0 && std::isfinite(q)) crit.push_back(q);
    }
  }
  std::sort(crit.begin(), crit.end());
  crit.erase(std::unique(crit.begin(), crit.end()), crit.end());
  std::vector<double> probes = crit;
  for (std::size_t k = 0; k + 1 < crit.size(); ++k) probes.push_back(0.5 * (crit[k] + crit[k + 1]));
  probes.push_back(2.0 * crit.back() + 1.0);

  std::unordered_set<std::uint64_t> seen;
  std::vector<std::uint64_t> masks;
  std::vector<std::size_t> order(n);
  std::vector<double> t(n);
  for (double q : probes) {
    for (std::size_t i = 0; i < n; ++i) t[i] = ws[i].cost - ws[i].quality * q;
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
    std::uint64_t m = 0;
    if (seen.insert(m).second) masks.push_back(m);
    for (std::size_t k = 0; k < n; ++k) {
      m |= std::uint64_t{1} << order[k];
      if (seen.insert(m).second) masks.push_back(m);
    }
  }

  std::vector<double> qual(n);
  for (std::size_t i = 0; i < n; ++i) qual[i] = ws[i].quality;
  const auto eval = U.bind(qual);
  auto to_bits = [n](std::uint64_t m) {
    std::vector<bool> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = ((m >> i) & 1U) != 0;
    return x;
  };
  std::vector<std::pair<double, std::uint64_t>> ranked;
  ranked.reserve(masks.size());
  for (auto m : masks) ranked.emplace_back(eval(to_bits(m)), m);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  std::optional<CpSolveReport> best;
  for (const auto& [value, m] : ranked) {
    if (best && value < best->utility_value) break;
    const auto target = to_bits(m);
    const auto policy = detail::realize(ws, target, detail::full_rows(ws, target, budget), budget,
                                        detail::Pick::MinPayment);
    if (!policy) continue;
    auto r = make_cp_report(ws, *policy, U, "cp-oracle");
    if (!best || better_report(r, *best)) best = std::move(r);
  }
  if (!best) throw InvariantError("cp_exact_oracle: no realizable set within budget");
  return *best;
}

}  // namespace crowdprice
