#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "crowdprice/bonus.hpp"
#include "crowdprice/common.hpp"

namespace crowdprice {

/// Properties a utility declares about itself. Symmetric and nondecreasing
/// hold for every built-in family; the rest vary.
struct UtilityFlags {
  bool symmetric = true;
  bool nondecreasing = true;
  bool additive = false;
  bool subadditive = false;
  bool schur_convex = false;
};

/// Immutable, shareable map from an effective-quality sequence r∘x to a real.
class UtilityFunction {
 public:
  using Evaluate = std::function<double(std::span<const double>)>;
  /// U(r∘x) for selections x over fixed qualities r.
  using SelectionEvaluator = std::function<double(const std::vector<bool>&)>;
  using Binder = std::function<SelectionEvaluator(std::vector<double>)>;

  UtilityFunction(std::string name, UtilityFlags flags, Evaluate evaluate, Binder binder = {})
      : state_(std::make_shared<const State>(State{std::move(name), flags, std::move(evaluate),
                                                   std::move(binder)})) {}

  double operator()(std::span<const double> effective) const { return state_->evaluate(effective); }
  double operator()(const std::vector<double>& effective) const {
    return state_->evaluate(std::span<const double>(effective));
  }

  [[nodiscard]] const std::string& name() const { return state_->name; }
  [[nodiscard]] const UtilityFlags& flags() const { return state_->flags; }

  /// Binds the qualities once so that repeated selection evaluations can skip
  /// per-call preprocessing (the typo utility inverts b_m here).
  [[nodiscard]] SelectionEvaluator bind(std::vector<double> qualities) const {
    if (state_->binder) return state_->binder(std::move(qualities));
    auto state = state_;
    return [state, r = std::move(qualities)](const std::vector<bool>& x) {
      std::vector<double> y(r.size(), 0.0);
      for (std::size_t i = 0; i < r.size(); ++i) y[i] = x[i] ? r[i] : 0.0;
      return state->evaluate(std::span<const double>(y));
    };
  }

  /// U(r∘x) for a 0/1 selection.
  [[nodiscard]] double of_selection(std::span<const double> r, const std::vector<bool>& x) const {
    std::vector<double> y(r.size(), 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) y[i] = x[i] ? r[i] : 0.0;
    return state_->evaluate(std::span<const double>(y));
  }

 private:
  struct State {
    std::string name;
    UtilityFlags flags;
    Evaluate evaluate;
    Binder binder;
  };
  std::shared_ptr<const State> state_;
};

namespace detail {

inline void require_unit_interval(std::span<const double> y, const char* who) {
  for (double v : y) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(who) + ": entry outside [0,1]");
  }
}

inline double typo_from_abilities(std::span<const double> s, int M) {
  double miss = 1.0;
  for (double v : s) miss *= 1.0 - v;
  return M * (1.0 - miss);
}

}  // namespace detail

/// Expected number of the M typos found by at least one worker, where entry
/// y_i is the bonus probability of worker i under the given policy and the
/// ability behind it is recovered by inverting that policy.
inline double typo_utility(std::span<const double> y, const BonusPolicy& policy) {
  detail::require_unit_interval(y, "typo_utility");
  double miss = 1.0;
  for (double v : y) {
    if (v > 0.0) miss *= 1.0 - policy.ability_of(v);
  }
  return policy.M * (1.0 - miss);
}

inline double typo_utility(std::span<const double> y, int M, int m) {
  return typo_utility(y, BonusPolicy::threshold(m, M));
}

inline double additive_utility(std::span<const double> y) { return compensated_sum(y); }

inline constexpr std::size_t kBinaryLabelingMaxWorkers = 20;

/// Sum over all 2^n label vectors of |P(y | truth 1) - P(y | truth 0)|, with
/// worker i correct with probability (1 + y_i)/2. Proportionality constant 1.
inline double binary_labeling_utility(std::span<const double> y) {
  if (y.size() > kBinaryLabelingMaxWorkers) {
    throw SizeLimitError("binary_labeling_utility: more than 20 workers");
  }
  detail::require_unit_interval(y, "binary_labeling_utility");
  const std::size_t n = y.size();
  CompensatedSum total;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double a = 1.0, b = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double hi = 0.5 * (1.0 + y[i]), lo = 0.5 * (1.0 - y[i]);
      if ((mask >> i) & 1U) {
        a *= hi;
        b *= lo;
      } else {
        a *= lo;
        b *= hi;
      }
    }
    total.add(std::fabs(a - b));
  }
  return total.value();
}

inline UtilityFunction make_additive_utility() {
  UtilityFlags flags{.symmetric = true, .nondecreasing = true, .additive = true,
                     .subadditive = true, .schur_convex = true};
  return UtilityFunction(
      "additive", flags, [](std::span<const double> y) { return additive_utility(y); },
      [](std::vector<double> r) -> UtilityFunction::SelectionEvaluator {
        return [r = std::move(r)](const std::vector<bool>& x) {
          CompensatedSum s;
          for (std::size_t i = 0; i < r.size(); ++i) {
            if (x[i]) s.add(r[i]);
          }
          return s.value();
        };
      });
}

namespace detail {

using AbilityOf = std::function<double(double)>;

inline UtilityFunction make_typo(const BonusPolicy& policy, AbilityOf ability_of) {
  const bool schur = policy.kind == BonusPolicy::Kind::Linear || policy.m == 1;
  UtilityFlags flags{.symmetric = true, .nondecreasing = true, .additive = false,
                     .subadditive = true, .schur_convex = schur};
  std::string name = "typo(M=" + std::to_string(policy.M) + "," + policy.label() + ")";
  return UtilityFunction(
      std::move(name), flags,
      [M = policy.M, ability_of](std::span<const double> y) {
        require_unit_interval(y, "typo_utility");
        double miss = 1.0;
        for (double v : y) {
          if (v > 0.0) miss *= 1.0 - ability_of(v);
        }
        return M * (1.0 - miss);
      },
      [M = policy.M, ability_of](std::vector<double> r) -> UtilityFunction::SelectionEvaluator {
        require_unit_interval(r, "typo_utility");
        std::vector<double> keep(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) keep[i] = r[i] > 0.0 ? 1.0 - ability_of(r[i]) : 1.0;
        return [keep = std::move(keep), M](const std::vector<bool>& x) {
          double miss = 1.0;
          for (std::size_t i = 0; i < keep.size(); ++i) {
            if (x[i]) miss *= keep[i];
          }
          return M * (1.0 - miss);
        };
      });
}

}  // namespace detail

/// Subadditive on disjoint supports for every policy. Schur-convexity is
/// declared only where it is established: m = 1 and the linear policy.
inline UtilityFunction make_typo_utility(const BonusPolicy& policy) {
  return detail::make_typo(policy, [policy](double r) { return policy.ability_of(r); });
}

/// Same utility, but a quality equal to b_m(s) for a known ability s maps back
/// to s exactly instead of through bisection, which loses digits where b_m is
/// flat. Qualities shared by different abilities fall back to bisection.
inline UtilityFunction make_typo_utility(const BonusPolicy& policy, std::span<const double> known_abilities) {
  std::vector<std::pair<double, double>> table;  // (quality, ability), sorted
  for (double s : known_abilities) table.emplace_back(policy.quality_of(s), s);
  std::sort(table.begin(), table.end());
  table.erase(std::unique(table.begin(), table.end()), table.end());
  std::vector<std::pair<double, double>> unique;
  for (std::size_t k = 0; k < table.size(); ++k) {
    const bool shared = (k > 0 && table[k - 1].first == table[k].first) ||
                        (k + 1 < table.size() && table[k + 1].first == table[k].first);
    if (!shared) unique.push_back(table[k]);
  }
  return detail::make_typo(policy, [policy, unique = std::move(unique)](double r) {
    const auto it = std::lower_bound(unique.begin(), unique.end(), std::make_pair(r, -1.0));
    if (it != unique.end() && it->first == r) return it->second;
    return policy.ability_of(r);
  });
}

inline UtilityFunction make_typo_utility(int M, int m) {
  return make_typo_utility(BonusPolicy::threshold(m, M));
}

inline UtilityFunction make_binary_labeling_utility() {
  UtilityFlags flags{.symmetric = true, .nondecreasing = true, .additive = false,
                     .subadditive = true, .schur_convex = true};
  return UtilityFunction("binary_labeling", flags,
                         [](std::span<const double> y) { return binary_labeling_utility(y); });
}

/// Named utility selection as used in configuration files.
struct UtilityConfig {
  enum class Kind { Additive, Typo, BinaryLabeling };
  Kind kind = Kind::Additive;
  int M = 25;
  int m = 1;
};

inline UtilityFunction make_utility(const UtilityConfig& cfg) {
  switch (cfg.kind) {
    case UtilityConfig::Kind::Additive: return make_additive_utility();
    case UtilityConfig::Kind::Typo: return make_typo_utility(cfg.M, cfg.m);
    case UtilityConfig::Kind::BinaryLabeling: return make_binary_labeling_utility();
  }
  throw ConfigError("unknown utility kind");
}

/// Prefix sums of descending-sorted a dominate those of b.
inline bool weakly_majorizes(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ConfigError("weakly_majorizes: length mismatch");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end(), std::greater<>());
  std::sort(sb.begin(), sb.end(), std::greater<>());
  CompensatedSum pa, pb;
  for (std::size_t k = 0; k < sa.size(); ++k) {
    pa.add(sa[k]);
    pb.add(sb[k]);
    if (pa.value() < pb.value()) return false;
  }
  return true;
}

/// Weak majorization with equal totals.
inline bool majorizes(std::span<const double> a, std::span<const double> b) {
  return weakly_majorizes(a, b) && compensated_sum(a) == compensated_sum(b);
}

/// Outcome of a randomized property audit. Passing is evidence, not proof.
struct AuditReport {
  std::string property;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;
  std::string first_counterexample;

  [[nodiscard]] bool passed() const { return violations == 0; }
};

/// Probe vectors live in [lo, hi]^dimension.
struct ProbeConfig {
  std::size_t dimension = 6;
  double lo = 0.0;
  double hi = 1.0;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
};

namespace detail {

inline std::string format_vector(std::span<const double> v) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ']';
  return os.str();
}

inline AuditReport new_report(std::string property, std::size_t trials) {
  AuditReport rep;
  rep.property = std::move(property);
  rep.trials = trials;
  return rep;
}

inline void record(AuditReport& rep, double excess, const std::string& example) {
  if (excess <= 0.0) return;
  if (rep.violations == 0) rep.first_counterexample = example;
  ++rep.violations;
  rep.worst_excess = std::max(rep.worst_excess, excess);
}

inline std::vector<double> random_vector(std::mt19937_64& rng, const ProbeConfig& probe) {
  std::uniform_real_distribution<double> u(probe.lo, probe.hi);
  std::vector<double> v(probe.dimension);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace detail

/// |U(y) - U(πy)| within tolerance for random permutations π.
inline AuditReport check_symmetric(const UtilityFunction& U, std::size_t trials, const ProbeConfig& probe = {}) {
  AuditReport rep = detail::new_report("symmetric", trials);
  std::mt19937_64 rng(probe.seed);
  for (std::size_t t = 0; t < trials; ++t) {
    auto y = detail::random_vector(rng, probe);
    auto z = y;
    std::shuffle(z.begin(), z.end(), rng);
    const double a = U(y), b = U(z);
    const double excess = std::fabs(a - b) - probe.tolerance * std::fmax(1.0, std::fabs(a));
    detail::record(rep, excess, detail::format_vector(y));
  }
  return rep;
}

/// Raising one entry never lowers U.
inline AuditReport check_monotone(const UtilityFunction& U, std::size_t trials, const ProbeConfig& probe = {}) {
  AuditReport rep = detail::new_report("nondecreasing", trials);
  std::mt19937_64 rng(probe.seed);
  std::uniform_int_distribution<std::size_t> pick(0, probe.dimension - 1);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (std::size_t t = 0; t < trials; ++t) {
    auto y = detail::random_vector(rng, probe);
    auto z = y;
    const std::size_t k = pick(rng);
    z[k] += frac(rng) * (probe.hi - z[k]);
    const double a = U(y), b = U(z);
    const double excess = (a - b) - probe.tolerance * std::fmax(1.0, std::fabs(a));
    detail::record(rep, excess, detail::format_vector(y) + " -> " + detail::format_vector(z));
  }
  return rep;
}

/// U(a + b) <= U(a) + U(b) on pairs with disjoint supports.
inline AuditReport check_subadditive(const UtilityFunction& U, std::size_t trials, const ProbeConfig& probe = {}) {
  AuditReport rep = detail::new_report("subadditive(disjoint supports)", trials);
  std::mt19937_64 rng(probe.seed);
  std::uniform_int_distribution<int> side(0, 2);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto v = detail::random_vector(rng, probe);
    std::vector<double> a(v.size(), 0.0), b(v.size(), 0.0), sum(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const int s = side(rng);
      if (s == 0) a[i] = v[i];
      if (s == 1) b[i] = v[i];
      sum[i] = a[i] + b[i];
    }
    const double lhs = U(sum), rhs = U(a) + U(b);
    const double excess = (lhs - rhs) - probe.tolerance * std::fmax(1.0, std::fabs(rhs));
    detail::record(rep, excess, detail::format_vector(a) + " + " + detail::format_vector(b));
  }
  return rep;
}

/// Majorization pairs built by transfers: a Robin-Hood transfer (rich to poor,
/// at most half the gap) yields a ≺ b; the reverse transfer yields b ≻ a.
/// Each pair must satisfy U(a) <= U(b). When `schur_ostrowski` is set, also
/// checks (y_i - y_j)(∂_i U - ∂_j U) >= 0 by central differences.
inline AuditReport check_schur_convex(const UtilityFunction& U, std::size_t trials, const ProbeConfig& probe = {},
                                      bool schur_ostrowski = true) {
  AuditReport rep = detail::new_report("schur-convex", trials);
  if (probe.dimension < 2) return rep;
  std::mt19937_64 rng(probe.seed);
  std::uniform_int_distribution<std::size_t> pick(0, probe.dimension - 1);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  std::uniform_int_distribution<int> steps(1, 4);
  for (std::size_t t = 0; t < trials; ++t) {
    auto major = detail::random_vector(rng, probe);
    auto minor = major;
    const bool robin_hood = (t % 2) == 0;
    const int nsteps = steps(rng);
    for (int s = 0; s < nsteps; ++s) {
      std::size_t i = pick(rng), j = pick(rng);
      if (i == j) continue;
      if (robin_hood) {
        // minor: move from the richer to the poorer entry
        if (minor[i] < minor[j]) std::swap(i, j);
        const double amount = frac(rng) * 0.5 * (minor[i] - minor[j]);
        minor[i] -= amount;
        minor[j] += amount;
      } else {
        // major: move from the poorer to the richer entry, staying in range
        if (major[i] < major[j]) std::swap(i, j);
        const double amount = frac(rng) * std::min(major[j] - probe.lo, probe.hi - major[i]);
        major[i] += amount;
        major[j] -= amount;
      }
    }
    const double lo = U(minor), hi = U(major);
    const double excess = (lo - hi) - probe.tolerance * std::fmax(1.0, std::fabs(hi));
    detail::record(rep, excess, detail::format_vector(minor) + " < " + detail::format_vector(major));

    if (!schur_ostrowski) continue;
    // Interior probe keeps the difference stencil inside the domain.
    const double width = probe.hi - probe.lo;
    std::vector<double> y(probe.dimension);
    for (auto& v : y) v = probe.lo + width * (0.05 + 0.9 * frac(rng));
    std::size_t i = pick(rng), j = pick(rng);
    if (i == j) j = (i + 1) % probe.dimension;
    const double h = 1e-5 * width;
    auto partial = [&](std::size_t k) {
      auto p = y, m = y;
      p[k] += h;
      m[k] -= h;
      return (U(p) - U(m)) / (2.0 * h);
    };
    const double di = partial(i), dj = partial(j);
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::fmax(1.0, std::fabs(U(y))) / h;
    const double value = (y[i] - y[j]) * (di - dj);
    const double so_excess = -value - (probe.tolerance + std::fabs(y[i] - y[j]) * 2.0 * noise);
    detail::record(rep, so_excess, "schur-ostrowski at " + detail::format_vector(y));
  }
  return rep;
}

}  // namespace crowdprice
