#pragma once

#include <cmath>
#include <numbers>

namespace magstrip {

inline constexpr double kPi = std::numbers::pi;
/// Height of the strip {0 < x2 < pi}.
inline constexpr double kStripHeight = std::numbers::pi;

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Vec2 {
  double a1 = 0.0;
  double a2 = 0.0;

  double norm_sq() const { return a1 * a1 + a2 * a2; }
};

inline double distance(Point a, Point b) { return std::hypot(a.x1 - b.x1, a.x2 - b.x2); }

/// Strip of height pi with a Neumann window |x1| < l on the lower edge,
/// truncated to |x1| <= L for computations.
struct StripGeometry {
  double window_l = 0.0;
  double truncation_L = 20.0;

  void validate() const;
};

struct Ball {
  Point center;
  double radius = 0.0;
};

/// Closed axis-aligned box used as a sampling region.
struct Box {
  double x1_min = 0.0;
  double x1_max = 0.0;
  double x2_min = 0.0;
  double x2_max = kStripHeight;

  bool contains(Point p) const {
    return p.x1 >= x1_min && p.x1 <= x1_max && p.x2 >= x2_min && p.x2 <= x2_max;
  }
};

/// True when the closed ball lies in the closed strip.
inline bool ball_in_strip(const Ball& b) {
  return b.radius >= 0.0 && b.center.x2 - b.radius >= 0.0 && b.center.x2 + b.radius <= kStripHeight;
}

}  // namespace magstrip
