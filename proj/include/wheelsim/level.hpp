#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wheelsim/chair.hpp"
#include "wheelsim/geometry.hpp"

namespace wheelsim {

struct Circle {
  Vec2 center;
  double radius{0.0};
  friend bool operator==(const Circle&, const Circle&) = default;
};

/// Axis-aligned rectangle.
struct Rect {
  double xmin{0.0};
  double ymin{0.0};
  double xmax{0.0};
  double ymax{0.0};
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Pose {
  double x{0.0};
  double y{0.0};
  double heading{0.0};
  friend bool operator==(const Pose&, const Pose&) = default;
};

struct Rgb {
  std::uint8_t r{0};
  std::uint8_t g{0};
  std::uint8_t b{0};
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Parses "#RRGGBB" (case-insensitive). Throws std::invalid_argument.
Rgb parse_hex_color(std::string_view text);
std::string to_hex(Rgb c);

struct Palette {
  Rgb background{255, 255, 255};
  Rgb route{0, 0, 0};
  Rgb chair{0, 0, 0};
  Rgb obstacle{0, 0, 0};
  Rgb reward{0, 0, 0};
  friend bool operator==(const Palette&, const Palette&) = default;
};

struct Level {
  std::string id;
  std::vector<Segment> walls;
  std::vector<Circle> circles;
  std::vector<Rect> rects;
  std::vector<Vec2> route;
  double corridor_half_width{0.5};
  Pose start;
  Circle goal;
  std::vector<Circle> waypoints;
  Palette palette;
  int decoration_count{0};

  friend bool operator==(const Level&, const Level&) = default;
};

enum class ObstacleKind : std::uint8_t { Wall, Circle, Rect };

/// Identifies one obstacle of a level by kind and index within that list.
/// Rendered as "wall:3", "circle:0", "rect:1".
struct ObstacleId {
  ObstacleKind kind{ObstacleKind::Wall};
  std::size_t index{0};
  friend bool operator==(const ObstacleId&, const ObstacleId&) = default;
};

std::string to_string(ObstacleId id);
/// Throws std::invalid_argument on malformed text.
ObstacleId parse_obstacle_id(std::string_view text);

/// Distance from a point to one obstacle's surface.
struct ObstacleProximity {
  ObstacleId id;
  double distance{0.0};  ///< negative when the point is inside a solid obstacle
  Vec2 normal;           ///< unit vector pointing from the obstacle toward the point
  Vec2 closest;          ///< nearest surface point
};

/// Proximity to every obstacle, walls first, then circles, then rects.
std::vector<ObstacleProximity> obstacle_proximities(Vec2 p, const Level& level);

struct RouteProjection {
  double distance{0.0};  ///< m, to the nearest point of the route
  double s{0.0};         ///< m, arc length from route start to that point
};

/// Nearest point of a polyline. Ties go to the smaller arc length.
RouteProjection project_to_route(Vec2 p, std::span<const Vec2> route);
double route_length(std::span<const Vec2> route);

/// Inclusive corridor test on the chair center.
bool is_on_track(Vec2 p, const Level& level);
/// Strictly inside the goal circle.
bool goal_reached(Vec2 p, const Level& level);
inline bool goal_reached(const ChairState& st, const Level& level) {
  return goal_reached(Vec2{st.x, st.y}, level);
}

/// Structural invariants (route shape, on-track start, start clearance for
/// `chair_radius`, goal inside corridor). Empty when valid.
std::vector<std::string> check_level(const Level& level, double chair_radius = ChairParams{}.chair_radius);

/// Parses the level JSON format and checks invariants.
/// Throws ParseError or ValidationError.
Level load_level(std::string_view text);
Level load_level_file(const std::filesystem::path& path);

/// Canonical JSON text of `level`; load_level(serialize_level(l)) == l.
std::string serialize_level(const Level& level);

}  // namespace wheelsim
