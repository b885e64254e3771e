// Prints one PASS/FAIL line per acceptance criterion and a summary line.
// Exit status is 0 unless something throws; --strict makes any FAIL exit 1.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "crowdprice/crowdprice.hpp"
#include "test_support.hpp"

using namespace crowdprice;
namespace t = crowdprice::testing;

namespace {

int g_failures = 0;

void report(const char* id, bool ok, const std::string& what) {
  std::printf("%s %-4s %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Criteria 1-3 share 200 knapsack instances.
void knapsack_criteria() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> size(2, 14);
  const auto U = make_typo_utility(25, 1);
  int ratio_bad = 0, relax_bad = 0, nobonus_bad = 0;
  const auto t0 = std::chrono::steady_clock::now();
  double worst_ratio = 1.0;
  for (int k = 0; k < 200; ++k) {
    const auto ws = t::random_profile(rng, size(rng));
    const GkpInstance inst{ws, t::random_budget(rng, ws), U};
    const double opt = solve_gkp_exact(inst).utility_value;
    const double greedy = modified_greedy(inst).selection.utility_value;
    if (opt > 0.0) worst_ratio = std::fmin(worst_ratio, greedy / opt);
    if (greedy < 0.5 * opt) ++ratio_bad;
    if (solve_gkp_relaxed(inst).value < opt) ++relax_bad;
    if (solve_opp_no_bonus(inst).selection.utility_value != opt) ++nobonus_bad;
  }
  const double secs = seconds_since(t0);
  report("1", ratio_bad == 0 && secs < 60.0,
         fmt("modified greedy >= 1/2 exact on 200 instances: %.0f violations, worst ratio %.4f, %.2f s", ratio_bad,
             worst_ratio, secs));
  report("2", relax_bad == 0, fmt("relaxed value >= exact on 200 instances: %.0f violations", relax_bad));
  report("3", nobonus_bad == 0, fmt("no-bonus personalized = exact on 200 instances: %.0f mismatches", nobonus_bad));
}

int structure_violations(const t::NamedCurve& curve, int regime, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int bad = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto ws = t::curve_profile(rng, 10, curve);
    const double hi = 2.0 * detail::max_cost(ws);
    std::uniform_real_distribution<double> u(0.0, hi);
    const double p = u(rng), q = u(rng);
    const auto s = classify_structure_of(ws, accepted_set(ws, {p, q}).indices);
    using K = StructureClass::Kind;
    bool ok = false;
    if (regime == 0) ok = s.kind == K::PickingSuffix || s.empty();
    if (regime == 1) ok = s.kind == K::PickingSuffix || s.kind == K::Picking;
    if (regime == 2) ok = s.kind != K::Other;
    bad += ok ? 0 : 1;
  }
  return bad;
}

void structure_criterion() {
  const int a = structure_violations(t::sqrt_curve(), 0, 4001);
  const int b = structure_violations(t::pow09_curve(), 1, 4002);
  const int c = structure_violations(t::square_curve(), 2, 4003);
  report("4", a + b + c == 0,
         fmt("accepted-set shapes over 1000 (p,q) per curve: sqrt %.0f, x^0.9 %.0f, x^2 %.0f of shape", a, b, c));
  const int d = structure_violations(t::subresponsive_curve(), 1, 4004);
  report("4+", d == 0, fmt("x-0.1-0.1x^2 (strictly subresponsive) yields intervals: %.0f violations", d));
}

void optimality_criterion() {
  std::mt19937_64 rng(5001);
  std::uniform_int_distribution<std::size_t> size(3, 12);
  const UtilityFunction utils[] = {make_additive_utility(), make_typo_utility(25, 1)};
  const t::NamedCurve curves[] = {t::sqrt_curve(), t::subresponsive_curve(), t::square_curve()};
  int mismatches[3] = {0, 0, 0}, modes = 0;
  double worst = 0.0;
  for (int regime = 0; regime < 3; ++regime) {
    for (int k = 0; k < 100; ++k) {
      const auto& U = utils[k % 2];
      const auto ws = t::curve_profile(rng, size(rng), curves[regime]);
      const double B = t::random_budget(rng, ws);
      const double oracle = cp_exact_oracle(ws, B, U).utility_value;
      double got = 0.0;
      if (regime == 0) got = cp_unres(ws, B, U).utility_value;
      if (regime == 1) {
        got = cp_subres(ws, B, U).utility_value;
        if (got != cp_subres(ws, B, U, SearchMode::Linear).utility_value) ++modes;
      }
      if (regime == 2) got = cp_res(ws, B, U).utility_value;
      worst = std::fmax(worst, std::fabs(oracle - got));
      if (std::fabs(oracle - got) > 1e-9) ++mismatches[regime];
    }
  }
  report("5", mismatches[0] + mismatches[1] + mismatches[2] + modes == 0,
         fmt("regime algorithms vs oracle, 100 instances each: unres %.0f, subres %.0f, res %.0f mismatches",
             mismatches[0], mismatches[1], mismatches[2]) +
             fmt("; max gap %.1e; binary vs linear disagreements %.0f", worst, modes));
}

void pob_criterion() {
  const auto r = pob_ratio(build_pob_instance(16, 1.0, 0.1));
  bool grid_ok = true;
  for (std::size_t n : {4U, 8U, 16U, 32U}) {
    for (double c : {0.5, 1.0, 2.0}) {
      for (double eps : {0.0, 0.1, 0.5, 0.9}) {
        try {
          grid_ok = grid_ok && pob_ratio(build_pob_instance(n, c, eps)).ratio <= eps;
        } catch (const InvariantError&) {
          grid_ok = false;
        }
      }
    }
  }
  const bool exact = std::fabs(r.ratio - 0.1) <= 1e-12 && std::fabs(r.without_bonus.utility_value - 0.8) <= 1e-12 &&
                     r.with_bonus.utility_value == 8.0;
  report("6", exact && grid_ok,
         fmt("ratio(16,1,0.1) = %.15g (%.15g / %.15g)", r.ratio, r.without_bonus.utility_value,
             r.with_bonus.utility_value) +
             (grid_ok ? "; ratio <= eps on the full grid" : "; grid bound violated"));
}

void poa_criterion() {
  std::mt19937_64 rng(7001);
  std::uniform_int_distribution<std::size_t> size(3, 12);
  int gated = 0, half_bad = 0, gamma_bad = 0, delta_bad = 0, attempts = 0;
  while (gated < 100 && attempts < 5000) {
    ++attempts;
    const auto ws = t::random_profile(rng, size(rng));
    const double B = t::random_budget(rng, ws);
    const auto U = gated % 2 == 0 ? make_additive_utility() : make_typo_utility(25, 1);
    PoaAuditReport r;
    try {
      r = poa_audit(ws, B, U);
    } catch (const DomainError&) {
      continue;  // no affordable eta-prefix
    }
    if (r.status == PoaAuditReport::Status::PreconditionFailed) continue;
    ++gated;
    half_bad += r.half_bound ? 0 : 1;
    gamma_bad += r.gamma_bound.value_or(true) ? 0 : 1;
    delta_bad += r.delta_at_least_one ? 0 : 1;
  }
  report("7", gated == 100 && half_bad + gamma_bad + delta_bad == 0,
         fmt("%.0f gated instances: half-bound %.0f, gamma-bound %.0f", gated, half_bad, gamma_bad) +
             fmt(", delta<1 %.0f violations", delta_bad));
}

void simulation_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto run = run_scenario(default_scenario());
  const double secs = seconds_since(t0);
  const auto& pts = run.points;
  double lo = pts.front().pp.selection.utility_value, hi = lo;
  for (const auto& p : pts) {
    lo = std::fmin(lo, p.pp.selection.utility_value);
    hi = std::fmax(hi, p.pp.selection.utility_value);
  }
  report("8a", hi - lo <= 1e-9 && secs < 300.0,
         fmt("personalized utility spread across 12 points %.3g (value %.12g), %.2f s", hi - lo, hi, secs));

  bool dominates = true;
  std::size_t best = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    dominates = dominates && pts[k].cp.utility_value >= pts[k].cp_no_bonus.utility_value;
    if (pts[k].cp.utility_value > pts[best].cp.utility_value) best = k;
  }
  const double gap = pts[best].cp.utility_value - pts[best].cp_no_bonus.utility_value;
  report("8b", dominates && gap > 0.0,
         "common pricing with bonus >= without at every point; gap " + fmt("%.6g", gap) + " at " +
             pts[best].policy.label());

  bool zero_base = true;
  int unres = 0;
  for (const auto& p : pts) {
    if (p.regime != Regime::EffortUnresponsive) continue;
    ++unres;
    zero_base = zero_base && p.cp.policy.base == 0.0;
  }
  report("8c", zero_base && unres > 0, fmt("optimal base payment is 0 at all %.0f unresponsive points", unres));

  std::string labels;
  bool seen_responsive = false, regressed = false, m23 = false;
  for (const auto& p : pts) {
    const auto r = p.regime;
    labels += (labels.empty() ? "" : " ") + p.policy.label() + "=" + std::string(to_string(r));
    if (r == Regime::EffortResponsive || r == Regime::EffortSubresponsive) seen_responsive = true;
    if (r == Regime::EffortUnresponsive && seen_responsive) regressed = true;
    if (p.policy.kind == BonusPolicy::Kind::Threshold && p.policy.m == 23) m23 = r == Regime::EffortResponsive;
  }
  const bool starts_unres = pts.front().regime == Regime::EffortUnresponsive;
  report("8d", starts_unres && seen_responsive && !regressed && m23, "labels: " + labels);
}

void kernel_criteria() {
  double worst = 0.0;
  int bad = 0;
  int flat = 0;
  for (int m : {1, 8, 14, 19, 23}) {
    for (int k = 0; k < 1000; ++k) {
      const double s = k / 999.0;
      const double r = bm(s, 25, m);
      const double err = std::fabs(invert_bm(r, 25, m) - s);
      worst = std::fmax(worst, err);
      if (err > 1e-9) {
        ++bad;
        flat += (r == 1.0 || r == 0.0) ? 1 : 0;
      }
    }
  }
  report("9a", bad == 0,
         fmt("invert_bm round trip on 5000 grid points: %.0f above 1e-9 (worst %.3g); %.0f of them where b_m rounds "
             "to exactly 0 or 1",
             bad, worst, flat));

  std::mt19937_64 rng(9002);
  std::uniform_real_distribution<double> coef(-1.0, 1.0), rhs(-0.3, 1.0), coin(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, 3);
  int disagree = 0, feasible = 0;
  for (int k = 0; k < 500; ++k) {
    std::vector<lp2d::HalfPlane> rows = {{1, 0, 1, lp2d::Sense::LessEqual}, {0, 1, 1, lp2d::Sense::LessEqual}};
    const int extra = count(rng);
    for (int i = 0; i < extra; ++i) {
      rows.push_back({coef(rng), coef(rng), rhs(rng), coin(rng) < 0.5 ? lp2d::Sense::Less : lp2d::Sense::LessEqual});
    }
    const auto fr = lp2d::feasible_point(rows);
    bool grid = false;
    for (int a = 0; a < 400 && !grid; ++a) {
      for (int b = 0; b < 400 && !grid; ++b) {
        grid = lp2d::satisfies_all(rows, {(a + 0.5) / 400.0, (b + 0.5) / 400.0}, 0.0);
      }
    }
    auto loosened = rows;
    for (auto& h : loosened) h.sense = lp2d::Sense::LessEqual;
    if (grid && !fr.feasible) ++disagree;
    if (fr.feasible && !lp2d::satisfies_all(loosened, *fr.witness)) ++disagree;
    feasible += fr.feasible ? 1 : 0;
  }
  report("9b", disagree == 0,
         fmt("lp2d vs 400x400 grid on 500 systems: %.0f disagreements (%.0f feasible)", disagree, feasible));
}

void utility_criterion() {
  const auto U = make_typo_utility(25, 1);
  const ProbeConfig probe{6, 0.0, 1.0, 10001, 1e-9};
  const AuditReport reps[] = {check_symmetric(U, 1000, probe), check_monotone(U, 1000, probe),
                              check_subadditive(U, 1000, probe), check_schur_convex(U, 1000, probe)};
  std::string detail;
  bool ok = true;
  for (const auto& r : reps) {
    ok = ok && r.passed();
    detail += " " + r.property + "=" + std::to_string(r.violations);
  }
  std::mt19937_64 rng(10002);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bl_bad = 0;
  for (int k = 0; k < 100; ++k) {
    const double r = u(rng);
    const std::vector<double> y = {r};
    if (std::fabs(binary_labeling_utility(y) - 2.0 * r) > 1e-15) ++bl_bad;
  }
  report("10", ok && bl_bad == 0,
         "typo(m=1) audits, violations:" + detail + fmt("; binary labeling 2r mismatches %.0f of 100", bl_bad));
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  knapsack_criteria();
  structure_criterion();
  optimality_criterion();
  pob_criterion();
  poa_criterion();
  simulation_criterion();
  kernel_criteria();
  utility_criterion();
  std::printf("SUMMARY %d line(s) failed\n", g_failures);
  return strict && g_failures > 0 ? 1 : 0;
}
