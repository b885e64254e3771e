#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crowdprice/common.hpp"

namespace crowdprice {

/// One worker: expected quality r (normalized expected bonus) and opportunity
/// cost c. Quality is not capped at 1 unless validated in strict mode.
struct WorkerProfile {
  double quality = 0.0;
  double cost = 0.0;
  std::string id;
};

/// A (base, bonus) payment pair. A common policy is one offer for everybody;
/// a personalized policy is one offer per worker.
struct Offer {
  double base = 0.0;
  double bonus = 0.0;

  friend bool operator==(const Offer&, const Offer&) = default;
};

using CommonPolicy = Offer;
using PersonalizedPolicy = std::vector<Offer>;

enum class Regime { EffortUnresponsive, EffortSubresponsive, EffortResponsive, Unclassified };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::EffortUnresponsive: return "unresponsive";
    case Regime::EffortSubresponsive: return "subresponsive";
    case Regime::EffortResponsive: return "responsive";
    case Regime::Unclassified: return "unclassified";
  }
  return "unclassified";
}

/// Throws DomainError on negative or non-finite fields. With `strict_quality`
/// the quality must also lie in [0, 1].
inline void validate(const WorkerProfile& w, bool strict_quality = false) {
  if (!std::isfinite(w.quality) || !std::isfinite(w.cost)) {
    throw DomainError("worker '" + w.id + "': non-finite quality or cost");
  }
  if (w.cost < 0.0 || w.quality < 0.0) {
    throw DomainError("worker '" + w.id + "': negative quality or cost");
  }
  if (strict_quality && w.quality > 1.0) {
    throw DomainError("worker '" + w.id + "': quality above 1 in strict mode");
  }
}

inline void validate(const std::vector<WorkerProfile>& ws, bool strict_quality = false) {
  for (const auto& w : ws) validate(w, strict_quality);
}

/// Rational worker: accepts iff p + q·r >= c (ties accept).
inline bool decide(const WorkerProfile& w, const Offer& o) {
  return o.base + o.bonus * w.quality >= w.cost;
}

/// p + q·r when the worker accepts, else 0.
inline double expected_payment(const WorkerProfile& w, const Offer& o) {
  return decide(w, o) ? o.base + o.bonus * w.quality : 0.0;
}

/// +inf for cost-0 workers.
inline double bang_per_buck(const WorkerProfile& w) {
  if (w.cost == 0.0) return std::numeric_limits<double>::infinity();
  return w.quality / w.cost;
}

/// Indices ordered by descending quality/cost; cost-0 workers first; ties by
/// ascending index.
inline std::vector<std::size_t> sort_by_bang_per_buck(const std::vector<WorkerProfile>& ws) {
  std::vector<std::size_t> order(ws.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> eta(ws.size());
  for (std::size_t i = 0; i < ws.size(); ++i) eta[i] = bang_per_buck(ws[i]);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return eta[a] > eta[b]; });
  return order;
}

/// Indices ordered by descending quality (rank 1 = best). Equal qualities are
/// ordered by descending cost, then ascending index.
inline std::vector<std::size_t> sort_by_quality(const std::vector<WorkerProfile>& ws) {
  std::vector<std::size_t> order(ws.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (ws[a].quality != ws[b].quality) return ws[a].quality > ws[b].quality;
    return ws[a].cost > ws[b].cost;
  });
  return order;
}

/// Cost-to-quality map r = f(c). Analytic derivatives are used when present,
/// otherwise central differences with step 1e-5 times the probed domain width.
struct CostQualityCurve {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
};

namespace detail {

inline constexpr double kRegimeTolerance = 1e-9;

// Classifies from per-sample (f, f', f'') with tolerance on f'' widened by the
// known roundoff floor of its estimate.
struct RegimeSample {
  double x, f, df, d2f, d2f_noise;
};

inline Regime classify_samples(const std::vector<RegimeSample>& s, double tau) {
  bool unres = true, star = true, concave = true, convex = true;
  for (const auto& p : s) {
    const double ratio = p.f / p.x;
    unres = unres && leq_tol(p.df, ratio, tau);
    star = star && leq_tol(ratio, p.df, tau);
    const double slack = tau * std::fmax(1.0, std::fabs(p.d2f)) + p.d2f_noise;
    concave = concave && p.d2f <= slack;
    convex = convex && p.d2f >= -slack;
  }
  if (unres) return Regime::EffortUnresponsive;
  if (star && concave) return Regime::EffortSubresponsive;
  if (star && convex) return Regime::EffortResponsive;
  return Regime::Unclassified;
}

}  // namespace detail

/// Regime of a curve on [lo, hi] from `samples` evenly spaced probes.
/// Precedence on ties: unresponsive, then subresponsive, then responsive.
inline Regime classify_regime(const CostQualityCurve& curve, double lo, double hi,
                              std::size_t samples = 400,
                              double tau = detail::kRegimeTolerance) {
  if (!curve.f) throw ConfigError("classify_regime: curve has no evaluator");
  if (samples < 2) throw ConfigError("classify_regime: need at least 2 samples");
  if (!(lo < hi)) throw DomainError("classify_regime: empty domain");
  if (lo <= 0.0) throw DomainError("classify_regime: domain must exclude 0 (f(x)/x singular)");
  const double h = 1e-5 * (hi - lo);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<detail::RegimeSample> pts;
  pts.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
    const double fx = curve.f(x);
    double d1 = 0.0, d2 = 0.0, noise = 0.0;
    if (curve.df) {
      d1 = curve.df(x);
    } else {
      d1 = (curve.f(x + h) - curve.f(x - h)) / (2.0 * h);
    }
    if (curve.d2f) {
      d2 = curve.d2f(x);
    } else {
      const double fp = curve.f(x + h), fm = curve.f(x - h);
      d2 = (fp - 2.0 * fx + fm) / (h * h);
      noise = 8.0 * eps * (std::fabs(fp) + 2.0 * std::fabs(fx) + std::fabs(fm)) / (h * h);
    }
    pts.push_back({x, fx, d1, d2, noise});
  }
  return detail::classify_samples(pts, tau);
}

/// Regime of a finite profile from its sample points alone: the ratio r/c
/// stands in for f(x)/x and secant slopes for f'. The profile must be a
/// nondecreasing function of cost with positive costs, otherwise Unclassified.
/// These are exactly the conditions under which the structure results hold for
/// the given workers.
inline Regime classify_profile(const std::vector<WorkerProfile>& ws,
                               double tau = detail::kRegimeTolerance) {
  std::vector<std::pair<double, double>> pts;  // (cost, quality)
  pts.reserve(ws.size());
  for (const auto& w : ws) {
    if (!(w.cost > 0.0)) return Regime::Unclassified;
    pts.emplace_back(w.cost, w.quality);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].first == pts[i - 1].first) return Regime::Unclassified;  // not a function
    if (pts[i].second < pts[i - 1].second) return Regime::Unclassified;  // not monotone
  }
  if (pts.size() <= 1) return Regime::EffortUnresponsive;

  bool ratio_down = true, ratio_up = true, concave = true, convex = true;
  double prev_slope = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double a = pts[i - 1].second / pts[i - 1].first;
    const double b = pts[i].second / pts[i].first;
    ratio_down = ratio_down && leq_tol(b, a, tau);
    ratio_up = ratio_up && leq_tol(a, b, tau);
    const double slope = (pts[i].second - pts[i - 1].second) / (pts[i].first - pts[i - 1].first);
    if (i >= 2) {
      concave = concave && leq_tol(slope, prev_slope, tau);
      convex = convex && leq_tol(prev_slope, slope, tau);
    }
    prev_slope = slope;
  }
  if (ratio_down) return Regime::EffortUnresponsive;
  if (ratio_up && concave) return Regime::EffortSubresponsive;
  if (ratio_up && convex) return Regime::EffortResponsive;
  return Regime::Unclassified;
}

}  // namespace crowdprice
