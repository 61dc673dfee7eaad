#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace scenesmith {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vec2&) const = default;
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double length(Vec2 a) { return std::hypot(a.x, a.y); }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Vec3&) const = default;
};

// Wraps into [0, 2pi). Exact multiples of 2pi map to 0 and -0 becomes +0.
inline double normalize_yaw(double yaw) {
  double y = std::fmod(yaw, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  if (y >= kTwoPi || y == 0.0) y = 0.0;
  return y;
}

// Axis-aligned rectangle.
struct Rect2 {
  Vec2 min;
  Vec2 max;

  bool operator==(const Rect2&) const = default;
  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double area() const { return width() * height(); }
  Vec2 center() const { return {(min.x + max.x) * 0.5, (min.y + max.y) * 0.5}; }
};

// Rectangle rotated by yaw about its center (counter-clockwise, radians).
struct OrientedRect {
  Vec2 center;
  double half_x = 0.0;
  double half_y = 0.0;
  double yaw = 0.0;

  Vec2 axis_x() const { return {std::cos(yaw), std::sin(yaw)}; }
  Vec2 axis_y() const { return {-std::sin(yaw), std::cos(yaw)}; }

  // Counter-clockwise, starting at local (-x, -y).
  std::array<Vec2, 4> corners() const {
    const Vec2 ax = axis_x() * half_x;
    const Vec2 ay = axis_y() * half_y;
    return {center - ax - ay, center + ax - ay, center + ax + ay,
            center - ax + ay};
  }

  double area() const { return 4.0 * half_x * half_y; }

  OrientedRect inset(double d) const {
    return {center, std::max(0.0, half_x - d), std::max(0.0, half_y - d), yaw};
  }

  static OrientedRect from_aabb(const Rect2& r) {
    return {r.center(), r.width() * 0.5, r.height() * 0.5, 0.0};
  }
};

using Polygon = std::vector<Vec2>;

// Signed shoelace area; positive for counter-clockwise winding.
inline double signed_area(const Polygon& poly) {
  double a = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    a += cross(poly[i], poly[(i + 1) % n]);
  }
  return 0.5 * a;
}

inline double polygon_area(const Polygon& poly) { return std::abs(signed_area(poly)); }

inline Rect2 bounding_box(const Polygon& poly) {
  Rect2 r{{std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity()},
          {-std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()}};
  for (const Vec2& p : poly) {
    r.min.x = std::min(r.min.x, p.x);
    r.min.y = std::min(r.min.y, p.y);
    r.max.x = std::max(r.max.x, p.x);
    r.max.y = std::max(r.max.y, p.y);
  }
  return r;
}

inline bool is_rectilinear(const Polygon& poly) {
  if (poly.size() < 4) return false;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    if (a.x != b.x && a.y != b.y) return false;
    if (a == b) return false;
  }
  return true;
}

namespace detail {

inline int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

inline bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

inline bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace detail

// O(n^2) check that no two non-adjacent edges touch.
inline bool is_simple(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (detail::segments_intersect(poly[i], poly[(i + 1) % n], poly[j],
                                     poly[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

// Even-odd ray cast. Points exactly on the boundary may go either way.
inline bool point_in_polygon(const Polygon& poly, Vec2 p) {
  bool inside = false;
  for (std::size_t i = 0, n = poly.size(), j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

// Splits a rectilinear polygon into disjoint axis-aligned rectangles using
// vertical slabs between consecutive distinct vertex x coordinates.
inline std::vector<Rect2> decompose_rectilinear(const Polygon& poly) {
  std::vector<double> xs;
  for (const Vec2& p : poly) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Rect2> out;
  for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
    const double mid = 0.5 * (xs[s] + xs[s + 1]);
    std::vector<double> ys;
    for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
      const Vec2 a = poly[i];
      const Vec2 b = poly[(i + 1) % n];
      if (a.y != b.y) continue;
      if ((a.x < mid) != (b.x < mid)) ys.push_back(a.y);
    }
    std::sort(ys.begin(), ys.end());
    for (std::size_t k = 0; k + 1 < ys.size(); k += 2) {
      out.push_back({{xs[s], ys[k]}, {xs[s + 1], ys[k + 1]}});
    }
  }
  return out;
}

// Clips a convex polygon against an axis-aligned rectangle.
inline Polygon clip_to_rect(const Polygon& subject, const Rect2& r) {
  Polygon poly = subject;
  auto clip = [&](auto inside, auto intersect) {
    Polygon out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 cur = poly[i];
      const Vec2 prev = poly[(i + n - 1) % n];
      const bool ci = inside(cur);
      const bool pi = inside(prev);
      if (ci) {
        if (!pi) out.push_back(intersect(prev, cur));
        out.push_back(cur);
      } else if (pi) {
        out.push_back(intersect(prev, cur));
      }
    }
    poly = std::move(out);
  };
  auto at_x = [](double x) {
    return [x](Vec2 a, Vec2 b) {
      const double t = (x - a.x) / (b.x - a.x);
      return Vec2{x, a.y + t * (b.y - a.y)};
    };
  };
  auto at_y = [](double y) {
    return [y](Vec2 a, Vec2 b) {
      const double t = (y - a.y) / (b.y - a.y);
      return Vec2{a.x + t * (b.x - a.x), y};
    };
  };
  clip([&](Vec2 p) { return p.x >= r.min.x; }, at_x(r.min.x));
  if (poly.empty()) return poly;
  clip([&](Vec2 p) { return p.x <= r.max.x; }, at_x(r.max.x));
  if (poly.empty()) return poly;
  clip([&](Vec2 p) { return p.y >= r.min.y; }, at_y(r.min.y));
  if (poly.empty()) return poly;
  clip([&](Vec2 p) { return p.y <= r.max.y; }, at_y(r.max.y));
  return poly;
}

// True when the rectangle, shrunk by `tolerance`, lies inside the union of
// the disjoint pieces (within 1e-9 m^2 of uncovered area).
inline bool contained_in(const OrientedRect& rect, const std::vector<Rect2>& pieces,
                         double tolerance) {
  const OrientedRect shrunk = rect.inset(tolerance);
  const auto c = shrunk.corners();
  const Polygon quad(c.begin(), c.end());
  const double total = shrunk.area();
  if (total <= 0.0) return true;
  double covered = 0.0;
  for (const Rect2& piece : pieces) {
    const Polygon part = clip_to_rect(quad, piece);
    if (part.size() >= 3) covered += polygon_area(part);
  }
  return total - covered <= 1e-9;
}

// Signed separation along the separating axes of two oriented rectangles:
// the smallest projection overlap across the four candidate axes. Positive
// values are penetration depth; zero means touching; negative means a gap.
inline double sat_penetration(const OrientedRect& a, const OrientedRect& b) {
  const std::array<Vec2, 4> axes = {a.axis_x(), a.axis_y(), b.axis_x(), b.axis_y()};
  const auto ca = a.corners();
  const auto cb = b.corners();
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& axis : axes) {
    double amin = std::numeric_limits<double>::infinity();
    double amax = -amin;
    double bmin = amin;
    double bmax = -amin;
    for (const Vec2& p : ca) {
      const double d = dot(p, axis);
      amin = std::min(amin, d);
      amax = std::max(amax, d);
    }
    for (const Vec2& p : cb) {
      const double d = dot(p, axis);
      bmin = std::min(bmin, d);
      bmax = std::max(bmax, d);
    }
    best = std::min(best, std::min(amax, bmax) - std::max(amin, bmin));
  }
  return best;
}

// Point expressed in the local frame of `frame` (origin at its center).
inline Vec2 to_local(const OrientedRect& frame, Vec2 p) {
  const Vec2 d = p - frame.center;
  return {dot(d, frame.axis_x()), dot(d, frame.axis_y())};
}

inline Vec2 to_world(Vec2 origin, double yaw, Vec2 local) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {origin.x + c * local.x - s * local.y, origin.y + s * local.x + c * local.y};
}

// `inner` lies within `outer`, allowing `tolerance` of protrusion.
inline bool rect_within(const OrientedRect& inner, const OrientedRect& outer,
                        double tolerance) {
  for (const Vec2& p : inner.corners()) {
    const Vec2 l = to_local(outer, p);
    if (std::abs(l.x) > outer.half_x + tolerance ||
        std::abs(l.y) > outer.half_y + tolerance) {
      return false;
    }
  }
  return true;
}

inline Vec2 polygon_centroid(const Polygon& poly) {
  const double a = signed_area(poly);
  double cx = 0.0;
  double cy = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    const Vec2 p = poly[i];
    const Vec2 q = poly[(i + 1) % n];
    const double w = cross(p, q);
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

}  // namespace scenesmith
