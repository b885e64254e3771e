#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "crowdprice/common.hpp"
#include "crowdprice/worker.hpp"

namespace crowdprice {

/// Binomial upper tail b_m(s) = P(Y >= m), Y ~ Bin(M, s); whichever tail is
/// lighter is summed directly. Coefficients are built by exact-ish products
/// for M <= 1000 and in log space beyond, where they would overflow.
inline double bm(double s, int M, int m) {
  if (M < 1 || m < 0 || m > M) throw DomainError("bm: need 0 <= m <= M, M >= 1");
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("bm: s outside [0,1]");
  if (m == 0) return 1.0;
  if (s == 0.0) return 0.0;
  if (s == 1.0) return 1.0;
  const double t = 1.0 - s;
  const bool direct = M <= 1000;
  const double ls = std::log(s), l1s = std::log1p(-s);
  auto term = [&](int k, double coef) {
    return direct ? coef * std::pow(s, k) * std::pow(t, M - k) : std::exp(coef + k * ls + (M - k) * l1s);
  };
  CompensatedSum acc;
  if (static_cast<double>(m - 1) >= static_cast<double>(M) * s) {
    double coef = direct ? 1.0 : 0.0;  // C(M, k), walking k = M down to m
    for (int k = M; k >= m; --k) {
      acc.add(term(k, coef));
      if (direct) {
        coef = coef * k / (M - k + 1);
      } else {
        coef += std::log(static_cast<double>(k)) - std::log(static_cast<double>(M - k + 1));
      }
    }
    return std::fmin(1.0, acc.value());
  }
  double coef = direct ? 1.0 : 0.0;  // C(M, k), walking k = 0 up to m - 1
  for (int k = 0; k < m; ++k) {
    acc.add(term(k, coef));
    if (direct) {
      coef = coef * (M - k) / (k + 1);
    } else {
      coef += std::log(static_cast<double>(M - k)) - std::log(static_cast<double>(k + 1));
    }
  }
  return std::fmax(0.0, 1.0 - acc.value());
}

/// Inverse of b_m on [0,1] by bisection to adjacent doubles. Exact at 0 and 1.
/// b_m saturates to 1.0 in double precision once P(Y < m) drops below half an
/// ulp, so abilities in that flat region are not recoverable from r.
inline double invert_bm(double r, int M, int m) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("invert_bm: r outside [0,1]");
  if (r == 0.0) return 0.0;
  if (r == 1.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (bm(mid, M, m) < r) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::fabs(bm(lo, M, m) - r) < std::fabs(bm(hi, M, m) - r) ? lo : hi;
}

/// How ability s becomes quality r: m-threshold pays the bonus iff at least m
/// of M subtasks succeed; linear pays Y/M of it.
struct BonusPolicy {
  enum class Kind { Threshold, Linear };
  Kind kind = Kind::Linear;
  int M = 25;
  int m = 1;

  static BonusPolicy threshold(int m, int M = 25) {
    if (M < 1 || m < 1 || m > M) throw ConfigError("threshold policy needs 1 <= m <= M");
    return {Kind::Threshold, M, m};
  }
  static BonusPolicy linear(int M = 25) {
    if (M < 1) throw ConfigError("linear policy needs M >= 1");
    return {Kind::Linear, M, 1};
  }

  [[nodiscard]] double quality_of(double s) const {
    return kind == Kind::Linear ? s : bm(s, M, m);
  }
  [[nodiscard]] double ability_of(double r) const {
    return kind == Kind::Linear ? r : invert_bm(r, M, m);
  }
  [[nodiscard]] std::string label() const {
    return kind == Kind::Linear ? std::string("linear") : "m=" + std::to_string(m);
  }
};

struct AbilityWorker {
  double ability = 0.0;
  double cost = 0.0;
  std::string id;
};

using AbilityProfile = std::vector<AbilityWorker>;

inline std::vector<WorkerProfile> translate(const AbilityProfile& profile, const BonusPolicy& policy) {
  std::vector<WorkerProfile> out;
  out.reserve(profile.size());
  for (const auto& a : profile) out.push_back({policy.quality_of(a.ability), a.cost, a.id});
  return out;
}

/// Cost law Beta(alpha, beta); ability s = 1 / (1 + exp(-slope·c)).
struct PopulationParams {
  double alpha = 5.0;
  double beta = 5.0;
  double slope = 3.0;
};

/// Recorded in outputs; bump whenever any sampling step below changes.
inline constexpr std::string_view kGeneratorVersion = "mt19937_64/marsaglia-tsang-beta/v1";

namespace detail {

// Every step is spelled out so streams match across standard libraries.
class PortableSampler {
 public:
  explicit PortableSampler(std::uint64_t seed) : engine_(seed) {}

  double uniform_open() {  // (0,1)
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
  }

  double normal() {  // Marsaglia polar, second variate discarded
    for (;;) {
      const double u = 2.0 * uniform_open() - 1.0;
      const double v = 2.0 * uniform_open() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

  double gamma(double shape) {  // Marsaglia-Tsang, unit scale
    if (shape < 1.0) return gamma(shape + 1.0) * std::pow(uniform_open(), 1.0 / shape);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      const double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform_open();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

/// Deterministic in (n, seed, probe) for a fixed kGeneratorVersion.
inline AbilityProfile generate_population(std::size_t n, std::uint64_t seed,
                                          const PopulationParams& probe = {}) {
  if (n == 0) throw ConfigError("generate_population: n must be positive");
  if (!(probe.alpha > 0.0) || !(probe.beta > 0.0)) {
    throw ConfigError("generate_population: beta parameters must be positive");
  }
  if (!std::isfinite(probe.slope)) throw ConfigError("generate_population: slope must be finite");
  detail::PortableSampler rng(seed);
  AbilityProfile out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = rng.beta(probe.alpha, probe.beta);
    const double s = 1.0 / (1.0 + std::exp(-probe.slope * c));
    out.push_back({s, c, "w" + std::to_string(i + 1)});
  }
  return out;
}

}  // namespace crowdprice
