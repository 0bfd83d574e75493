#pragma once

// Shared fixtures and independent oracles. Nothing here calls into the code
// under test except to load fixture files.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "wheelsim/level.hpp"

namespace wheelsim::testing {

inline std::filesystem::path source_path(const std::string& rel) {
  return std::filesystem::path(WHEELSIM_SOURCE_DIR) / rel;
}

inline std::shared_ptr<const Level> fixture_level(const std::string& id) {
  return std::make_shared<const Level>(load_level_file(source_path("levels/" + id + ".level.json")));
}

inline double wrap(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

struct EulerPose {
  double x, y, heading;
};

// Forward Euler for a unicycle with constant body speeds. The heading
// recurrence is carried as a rotating unit vector and re-anchored with exact
// trig every `anchor_every` substeps, which keeps it cheap without letting
// rounding drift accumulate.
inline EulerPose euler_oracle(EulerPose p, double v, double w, double horizon, long substeps,
                              long anchor_every = 4096) {
  const double h = horizon / static_cast<double>(substeps);
  const double cr = std::cos(w * h);
  const double sr = std::sin(w * h);
  const double theta0 = p.heading;
  double c = std::cos(theta0);
  double s = std::sin(theta0);
  for (long k = 0; k < substeps; ++k) {
    if (k % anchor_every == 0) {
      const double theta = theta0 + w * h * static_cast<double>(k);
      c = std::cos(theta);
      s = std::sin(theta);
    }
    p.x += v * c * h;
    p.y += v * s * h;
    const double nc = c * cr - s * sr;
    s = s * cr + c * sr;
    c = nc;
  }
  p.heading = wrap(theta0 + w * horizon);
  return p;
}

// Distance from p to segment ab, computed in the segment's own frame.
inline double segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double len = std::hypot(bx - ax, by - ay);
  const double ux = (bx - ax) / len;
  const double uy = (by - ay) / len;
  const double along = (px - ax) * ux + (py - ay) * uy;
  const double across = -(px - ax) * uy + (py - ay) * ux;
  if (along < 0.0) return std::hypot(px - ax, py - ay);
  if (along > len) return std::hypot(px - bx, py - by);
  return std::abs(across);
}

inline double route_distance(double px, double py, const std::vector<Vec2>& route) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < route.size(); ++i)
    best = std::min(best, segment_distance(px, py, route[i].x, route[i].y, route[i + 1].x, route[i + 1].y));
  return best;
}

// Straight from the WCAG 2.x definitions.
inline double wcag_luminance(int r8, int g8, int b8) {
  auto channel = [](int v) {
    const double c = v / 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
  };
  return 0.2126 * channel(r8) + 0.7152 * channel(g8) + 0.0722 * channel(b8);
}

inline double wcag_ratio(double l1, double l2) {
  return (std::max(l1, l2) + 0.05) / (std::min(l1, l2) + 0.05);
}

// Clearance of a chair centre to every obstacle, without the library's
// proximity code: walls by segment distance, circles by centre distance,
// rects by clamping (negative inside).
inline double min_clearance(double px, double py, double chair_radius, const Level& level) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : level.walls)
    best = std::min(best, segment_distance(px, py, w.a.x, w.a.y, w.b.x, w.b.y) - chair_radius);
  for (const auto& c : level.circles)
    best = std::min(best, std::hypot(px - c.center.x, py - c.center.y) - c.radius - chair_radius);
  for (const auto& r : level.rects) {
    const double cx = std::clamp(px, r.xmin, r.xmax);
    const double cy = std::clamp(py, r.ymin, r.ymax);
    double d = std::hypot(px - cx, py - cy);
    if (d == 0.0) d = -std::min({px - r.xmin, r.xmax - px, py - r.ymin, r.ymax - py});
    best = std::min(best, d - chair_radius);
  }
  return best;
}

}  // namespace wheelsim::testing
