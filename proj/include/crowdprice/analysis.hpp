#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crowdprice/common.hpp"
#include "crowdprice/cp_solver.hpp"
#include "crowdprice/pp_solver.hpp"
#include "crowdprice/utility.hpp"
#include "crowdprice/worker.hpp"

namespace crowdprice {

/// Three groups in index order: n/2 cherry pickers (ε, c), n/4 mid-quality
/// (1, 2c), n/4 high-quality (2, 2c); budget (n + 4)c/2.
struct PobInstance {
  std::size_t n = 0;
  double c = 0.0;
  double epsilon = 0.0;
  std::vector<WorkerProfile> workers;
  double budget = 0.0;
};

/// Strict grouping needs 4 | n. `relaxed` accepts any n >= 2 and places the
/// group boundaries at floor(n/2) and floor(3n/4).
inline PobInstance build_pob_instance(std::size_t n, double c, double epsilon, bool relaxed = false) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("build_pob_instance: c must be positive");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ConfigError("build_pob_instance: epsilon must lie in [0,1)");
  if (relaxed ? n < 2 : (n < 4 || n % 4 != 0)) {
    throw ConfigError("build_pob_instance: n must be a positive multiple of 4");
  }
  PobInstance inst{n, c, epsilon, {}, static_cast<double>(n + 4) * c / 2.0};
  const std::size_t half = n / 2, three_quarters = 3 * n / 4;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::string id = "w" + std::to_string(i);
    if (i <= half) {
      inst.workers.push_back({epsilon, c, id});
    } else if (i <= three_quarters) {
      inst.workers.push_back({1.0, 2.0 * c, id});
    } else {
      inst.workers.push_back({2.0, 2.0 * c, id});
    }
  }
  return inst;
}

struct PobResult {
  double ratio = 0.0;
  CpSolveReport without_bonus;
  CpSolveReport with_bonus;
};

/// Best base-only utility over the exact common-pricing optimum. Throws an
/// InvariantError if the ratio exceeds ε.
inline PobResult pob_ratio(const PobInstance& inst, const UtilityFunction& U = make_additive_utility()) {
  PobResult r;
  r.without_bonus = cp_no_bonus(inst.workers, inst.budget, U);
  r.with_bonus = cp_exact_oracle(inst.workers, inst.budget, U);
  if (!(r.with_bonus.utility_value > 0.0)) throw InvariantError("pob_ratio: zero optimum with bonus");
  r.ratio = r.without_bonus.utility_value / r.with_bonus.utility_value;
  if (U.flags().additive && r.ratio > inst.epsilon) {
    throw InvariantError("pob_ratio: ratio " + std::to_string(r.ratio) + " exceeds epsilon");
  }
  return r;
}

struct PoaCertificate {
  std::size_t k_B = 0;
  double gamma = 1.0;
  double delta = 1.0;
  double u_pp = 0.0;
  double u_cp_scaled = 0.0;
  std::vector<std::size_t> eta_order;  // worker indices, descending quality/cost
};

/// k_B = max{k : c_1 + ... + c_k <= B} over the quality/cost order,
/// γ = 1 - r_{k_B+1}/(r_1 + ... + r_{k_B}) with r_{n+1} = 0, and
/// δ = (c_{k_B}/r_{k_B})·(r_1 + ... + r_{k_B})/(c_1 + ... + c_{k_B}).
/// Workers may come in any order; the certificate records the sort.
inline PoaCertificate poa_constants(const std::vector<WorkerProfile>& ws, double budget) {
  if (!(budget >= 0.0) || !std::isfinite(budget)) throw DomainError("budget must be finite and >= 0");
  validate(ws);
  PoaCertificate cert;
  cert.eta_order = sort_by_bang_per_buck(ws);
  CompensatedSum cs, rs;
  for (std::size_t i : cert.eta_order) {
    CompensatedSum trial = cs;
    trial.add(ws[i].cost);
    if (!(trial.value() <= budget)) break;
    cs = trial;
    rs.add(ws[i].quality);
    ++cert.k_B;
  }
  if (cert.k_B == 0) throw DomainError("poa_constants: budget below the first cost, k_B = 0");
  const auto& last = ws[cert.eta_order[cert.k_B - 1]];
  const double R = rs.value(), C = cs.value();
  if (!(R > 0.0) || !(last.quality > 0.0)) throw DomainError("poa_constants: zero quality inside the k_B prefix");
  const double next_r = cert.k_B < ws.size() ? ws[cert.eta_order[cert.k_B]].quality : 0.0;
  cert.gamma = 1.0 - next_r / R;
  // a zero-cost prefix pays nothing, so no budget scaling is needed
  cert.delta = C > 0.0 ? (last.cost / last.quality) * (R / C) : 1.0;
  return cert;
}

struct PoaAuditReport {
  enum class Status { Passed, Failed, PreconditionFailed };
  Status status = Status::PreconditionFailed;
  PoaCertificate certificate;
  bool half_bound = false;
  std::optional<bool> gamma_bound;  // only under additive utility
  bool delta_at_least_one = false;
  std::string detail;
};

inline std::string_view to_string(PoaAuditReport::Status s) {
  switch (s) {
    case PoaAuditReport::Status::Passed: return "passed";
    case PoaAuditReport::Status::Failed: return "failed";
    case PoaAuditReport::Status::PreconditionFailed: return "precondition-failed";
  }
  return "failed";
}

inline constexpr double kPoaTolerance = 1e-12;

/// Gate: every affordable singleton is worth at most half the exact
/// personalized optimum. Past the gate, checks
/// U*_CP(δB) >= U*_PP(B)/2, δ >= 1, and under additive utility
/// U*_CP(δB) >= γ·U*_PP(B), all to a 1e-12 relative tolerance.
inline PoaAuditReport poa_audit(const std::vector<WorkerProfile>& ws, double budget, const UtilityFunction& U) {
  if (ws.size() > kEnumerationMaxWorkers) throw SizeLimitError("poa_audit: too many workers for exact solvers");
  PoaAuditReport rep;
  const GkpInstance inst{ws, budget, U};
  const auto pp = solve_gkp_exact(inst);
  rep.certificate.u_pp = pp.utility_value;
  const auto eval = U.bind(detail::qualities_of(ws));
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (!(ws[i].cost <= budget)) continue;
    std::vector<bool> e(ws.size(), false);
    e[i] = true;
    if (pp.utility_value < 2.0 * eval(e)) {
      rep.detail = "worker " + std::to_string(i) + " alone exceeds half of the personalized optimum";
      return rep;
    }
  }
  const auto cert = poa_constants(ws, budget);
  rep.certificate.k_B = cert.k_B;
  rep.certificate.gamma = cert.gamma;
  rep.certificate.delta = cert.delta;
  rep.certificate.eta_order = cert.eta_order;
  const auto cp = cp_exact_oracle(ws, cert.delta * budget, U);
  rep.certificate.u_cp_scaled = cp.utility_value;
  const double u_pp = pp.utility_value, u_cp = cp.utility_value;
  rep.half_bound = leq_tol(0.5 * u_pp, u_cp, kPoaTolerance);
  rep.delta_at_least_one = leq_tol(1.0, cert.delta, kPoaTolerance);
  if (U.flags().additive) rep.gamma_bound = leq_tol(cert.gamma * u_pp, u_cp, kPoaTolerance);
  const bool ok = rep.half_bound && rep.delta_at_least_one && rep.gamma_bound.value_or(true);
  rep.status = ok ? PoaAuditReport::Status::Passed : PoaAuditReport::Status::Failed;
  return rep;
}

}  // namespace crowdprice
