#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace crowdprice::lp2d {

enum class Sense { LessEqual, Less };

/// a_p·p + a_q·q (<= or <) rhs.
struct HalfPlane {
  double a_p = 0.0;
  double a_q = 0.0;
  double rhs = 0.0;
  Sense sense = Sense::LessEqual;
};

struct Point {
  double p = 0.0;
  double q = 0.0;
};

inline constexpr double kOrientationTolerance = 1e-12;

/// Exact float evaluation for strict rows; non-strict rows allow `tol`
/// relative to the magnitude of the terms involved.
inline bool satisfies(const HalfPlane& h, Point x, double tol = kOrientationTolerance) {
  const double lhs = h.a_p * x.p + h.a_q * x.q;
  if (h.sense == Sense::Less) return lhs < h.rhs;
  const double scale = std::fmax(std::fabs(h.a_p * x.p) + std::fabs(h.a_q * x.q), std::fabs(h.rhs));
  return lhs <= h.rhs + tol * scale;
}

inline bool satisfies_all(const std::vector<HalfPlane>& rows, Point x, double tol = kOrientationTolerance) {
  if (x.p < 0.0 || x.q < 0.0) return false;
  return std::all_of(rows.begin(), rows.end(), [&](const HalfPlane& h) { return satisfies(h, x, tol); });
}

namespace detail {

// Row normalized so that max(|a_p|, |a_q|, |rhs|) = 1.
struct Line {
  double a = 0.0, b = 0.0, c = 0.0;
};

struct Vertex {
  Point x;
  std::size_t edge;  // line carrying the edge from this vertex to the next
};

inline Line normalize(const HalfPlane& h) {
  const double s = std::fmax(std::fmax(std::fabs(h.a_p), std::fabs(h.a_q)), std::fabs(h.rhs));
  if (s == 0.0) return {0.0, 0.0, 0.0};
  return {h.a_p / s, h.a_q / s, h.rhs / s};
}

inline double excess(const Line& l, Point x) { return l.a * x.p + l.b * x.q - l.c; }

inline bool inside(const Line& l, Point x) {
  const double scale = std::fmax(1.0, std::fabs(l.a * x.p) + std::fabs(l.b * x.q));
  return excess(l, x) <= kOrientationTolerance * scale;
}

inline Point intersect(const Line& e, const Line& k, Point from, Point to, double s_from, double s_to) {
  const double det = e.a * k.b - k.a * e.b;
  if (std::fabs(det) > 1e-9) {
    return {(e.c * k.b - k.c * e.b) / det, (e.a * k.c - k.a * e.c) / det};
  }
  const double t = s_from / (s_from - s_to);
  return {from.p + t * (to.p - from.p), from.q + t * (to.q - from.q)};
}

inline bool same_point(Point u, Point v) {
  const double tp = 1e-14 * std::fmax(1.0, std::fmax(std::fabs(u.p), std::fabs(v.p)));
  const double tq = 1e-14 * std::fmax(1.0, std::fmax(std::fabs(u.q), std::fabs(v.q)));
  return std::fabs(u.p - v.p) <= tp && std::fabs(u.q - v.q) <= tq;
}

inline void dedupe(std::vector<Vertex>& poly) {
  if (poly.size() < 2) return;
  std::vector<Vertex> out;
  for (const auto& v : poly) {
    if (!out.empty() && same_point(out.back().x, v.x)) {
      out.back().edge = v.edge;
    } else {
      out.push_back(v);
    }
  }
  while (out.size() > 1 && same_point(out.back().x, out.front().x)) {
    out.back().edge = out.front().edge;
    out.erase(out.begin());
  }
  poly = std::move(out);
}

inline std::vector<Vertex> clip(const std::vector<Vertex>& poly, const std::vector<Line>& lines, std::size_t k) {
  const Line& L = lines[k];
  const std::size_t n = poly.size();
  std::vector<double> s(n);
  std::vector<bool> in(n);
  bool any_in = false, all_in = true;
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = excess(L, poly[i].x);
    in[i] = inside(L, poly[i].x);
    any_in = any_in || in[i];
    all_in = all_in && in[i];
  }
  if (all_in) return poly;
  if (!any_in) return {};
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const Line& e = lines[poly[i].edge];
    if (in[i]) {
      out.push_back(poly[i]);
      if (!in[j]) out.push_back({intersect(e, L, poly[i].x, poly[j].x, s[i], s[j]), k});
    } else if (in[j]) {
      out.push_back({intersect(e, L, poly[i].x, poly[j].x, s[i], s[j]), poly[i].edge});
    }
  }
  dedupe(out);
  return out;
}

}  // namespace detail

/// Vertices (counter-clockwise) of the intersection of the loosened rows with
/// the nonnegative quadrant. The quadrant is capped by a box far outside the
/// scale of the data; empty when infeasible.
inline std::vector<Point> feasible_polygon(const std::vector<HalfPlane>& rows) {
  using detail::Line;
  double scale = 1.0;
  for (const auto& h : rows) {
    const double a = std::fmax(std::fabs(h.a_p), std::fabs(h.a_q));
    if (a > 0.0) scale = std::fmax(scale, std::fabs(h.rhs) / a);
  }
  const double L = 1e6 * scale;
  std::vector<Line> lines = {{0.0, -1.0, 0.0}, {1.0, 0.0, L}, {0.0, 1.0, L}, {-1.0, 0.0, 0.0}};
  std::vector<detail::Vertex> poly = {{{0.0, 0.0}, 0}, {{L, 0.0}, 1}, {{L, L}, 2}, {{0.0, L}, 3}};
  for (const auto& h : rows) {
    if (h.a_p == 0.0 && h.a_q == 0.0) {
      const bool ok = h.rhs >= 0.0;  // loosened constant row 0 <= rhs
      if (!ok) return {};
      continue;
    }
    lines.push_back(detail::normalize(h));
    poly = detail::clip(poly, lines, lines.size() - 1);
    if (poly.empty()) return {};
  }
  std::vector<Point> out;
  out.reserve(poly.size());
  for (const auto& v : poly) out.push_back(v.x);
  return out;
}

struct FeasibilityResult {
  bool feasible = false;
  std::optional<Point> witness;
  /// Per input row: strict row satisfied only with equality at the witness.
  std::vector<bool> on_strict_boundary;
  std::vector<Point> polygon;
};

/// Feasibility of the loosened system on p, q >= 0. The witness is the vertex
/// of least p + q, then least p.
inline FeasibilityResult feasible_point(const std::vector<HalfPlane>& rows) {
  FeasibilityResult r;
  r.on_strict_boundary.assign(rows.size(), false);
  r.polygon = feasible_polygon(rows);
  if (r.polygon.empty()) return r;
  r.feasible = true;
  Point best = r.polygon.front();
  for (const auto& v : r.polygon) {
    const double a = v.p + v.q, b = best.p + best.q;
    if (a < b || (a == b && v.p < best.p)) best = v;
  }
  best.p = std::fmax(0.0, best.p);
  best.q = std::fmax(0.0, best.q);
  r.witness = best;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].sense == Sense::Less) r.on_strict_boundary[i] = !satisfies(rows[i], best);
  }
  return r;
}

/// Moves p down by eps0·2^-k, k = 0..60, until every strict row holds strictly
/// and every other row still holds. Empty when no step works.
inline std::optional<Point> repair_strict(Point witness, const std::vector<HalfPlane>& rows, double eps0) {
  if (satisfies_all(rows, witness)) return witness;
  double eps = eps0;
  for (int k = 0; k <= 60; ++k, eps *= 0.5) {
    const Point c{witness.p - eps, witness.q};
    if (c.p >= 0.0 && satisfies_all(rows, c)) return c;
  }
  return std::nullopt;
}

/// A point satisfying every row including the strict ones, or empty if the
/// strict system is infeasible. Tries the repaired witness first, then points
/// pulled from vertices toward the vertex centroid, which lie in the relative
/// interior and so clear every strict row whose line does not contain the
/// whole polygon.
inline std::optional<Point> strict_point(const std::vector<HalfPlane>& rows, double eps0) {
  const auto fr = feasible_point(rows);
  if (!fr.feasible) return std::nullopt;
  if (auto w = repair_strict(*fr.witness, rows, eps0)) return w;
  Point centroid{0.0, 0.0};
  for (const auto& v : fr.polygon) {
    centroid.p += v.p;
    centroid.q += v.q;
  }
  centroid.p /= static_cast<double>(fr.polygon.size());
  centroid.q /= static_cast<double>(fr.polygon.size());
  std::vector<Point> verts = fr.polygon;
  std::sort(verts.begin(), verts.end(), [](Point a, Point b) {
    return a.p + a.q < b.p + b.q || (a.p + a.q == b.p + b.q && a.p < b.p);
  });
  for (double t : {0x1p-40, 0x1p-30, 0x1p-20, 0x1p-10, 0.25}) {
    for (const auto& v : verts) {
      const Point c{v.p + t * (centroid.p - v.p), v.q + t * (centroid.q - v.q)};
      if (satisfies_all(rows, c)) return c;
    }
  }
  if (satisfies_all(rows, centroid)) return centroid;
  return std::nullopt;
}

}  // namespace crowdprice::lp2d
