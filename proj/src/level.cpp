#include "wheelsim/level.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wheelsim/errors.hpp"
#include "wheelsim/json_io.hpp"

namespace wheelsim {

namespace {

constexpr double kMinRouteSegment = 1e-6;

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

ObstacleProximity wall_proximity(Vec2 p, const Segment& s, std::size_t i) {
  const Vec2 q = closest_point(p, s);
  const Vec2 d = p - q;
  const double dist = norm(d);
  Vec2 n;
  if (dist > 0.0) {
    n = (1.0 / dist) * d;
  } else {
    // On the wall itself: use the segment's left normal.
    const Vec2 t = s.b - s.a;
    const double len = norm(t);
    n = len > 0.0 ? Vec2{-t.y / len, t.x / len} : Vec2{1.0, 0.0};
  }
  return {{ObstacleKind::Wall, i}, dist, n, q};
}

ObstacleProximity circle_proximity(Vec2 p, const Circle& c, std::size_t i) {
  const Vec2 d = p - c.center;
  const double len = norm(d);
  const Vec2 n = len > 0.0 ? (1.0 / len) * d : Vec2{1.0, 0.0};
  return {{ObstacleKind::Circle, i}, len - c.radius, n, c.center + c.radius * n};
}

ObstacleProximity rect_proximity(Vec2 p, const Rect& r, std::size_t i) {
  const bool inside = p.x >= r.xmin && p.x <= r.xmax && p.y >= r.ymin && p.y <= r.ymax;
  if (!inside) {
    const Vec2 q{std::clamp(p.x, r.xmin, r.xmax), std::clamp(p.y, r.ymin, r.ymax)};
    const Vec2 d = p - q;
    const double dist = norm(d);
    return {{ObstacleKind::Rect, i}, dist, (1.0 / dist) * d, q};
  }
  // Inside (or on the boundary): exit through the nearest edge.
  const double left = p.x - r.xmin;
  const double right = r.xmax - p.x;
  const double bottom = p.y - r.ymin;
  const double top = r.ymax - p.y;
  double depth = left;
  Vec2 n{-1.0, 0.0};
  Vec2 q{r.xmin, p.y};
  if (right < depth) depth = right, n = {1.0, 0.0}, q = {r.xmax, p.y};
  if (bottom < depth) depth = bottom, n = {0.0, -1.0}, q = {p.x, r.ymin};
  if (top < depth) depth = top, n = {0.0, 1.0}, q = {p.x, r.ymax};
  return {{ObstacleKind::Rect, i}, -depth, n, q};
}

}  // namespace

Rgb parse_hex_color(std::string_view text) {
  if (text.size() != 7 || text[0] != '#')
    throw std::invalid_argument("expected a color of the form #RRGGBB, got '" + std::string(text) + "'");
  std::uint8_t channels[3];
  for (int c = 0; c < 3; ++c) {
    const int hi = hex_digit(text[1 + 2 * c]);
    const int lo = hex_digit(text[2 + 2 * c]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("bad hex digit in color '" + std::string(text) + "'");
    channels[c] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return {channels[0], channels[1], channels[2]};
}

std::string to_hex(Rgb c) {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  std::string out = "#";
  for (const std::uint8_t v : {c.r, c.g, c.b}) {
    out += kDigits[v >> 4];
    out += kDigits[v & 0xF];
  }
  return out;
}

std::string to_string(ObstacleId id) {
  const char* kind = id.kind == ObstacleKind::Wall ? "wall" : id.kind == ObstacleKind::Circle ? "circle" : "rect";
  return std::string(kind) + ":" + std::to_string(id.index);
}

ObstacleId parse_obstacle_id(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("bad obstacle id '" + std::string(text) + "'");
  const auto kind = text.substr(0, colon);
  const auto num = text.substr(colon + 1);
  ObstacleId id;
  if (kind == "wall") id.kind = ObstacleKind::Wall;
  else if (kind == "circle") id.kind = ObstacleKind::Circle;
  else if (kind == "rect") id.kind = ObstacleKind::Rect;
  else throw std::invalid_argument("bad obstacle kind in '" + std::string(text) + "'");
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), id.index);
  if (ec != std::errc{} || ptr != num.data() + num.size() || num.empty())
    throw std::invalid_argument("bad obstacle index in '" + std::string(text) + "'");
  return id;
}

std::vector<ObstacleProximity> obstacle_proximities(Vec2 p, const Level& level) {
  std::vector<ObstacleProximity> out;
  out.reserve(level.walls.size() + level.circles.size() + level.rects.size());
  for (std::size_t i = 0; i < level.walls.size(); ++i) out.push_back(wall_proximity(p, level.walls[i], i));
  for (std::size_t i = 0; i < level.circles.size(); ++i) out.push_back(circle_proximity(p, level.circles[i], i));
  for (std::size_t i = 0; i < level.rects.size(); ++i) out.push_back(rect_proximity(p, level.rects[i], i));
  return out;
}

RouteProjection project_to_route(Vec2 p, std::span<const Vec2> route) {
  if (route.empty()) throw std::invalid_argument("route is empty");
  if (route.size() == 1) return {distance(p, route[0]), 0.0};
  RouteProjection best{std::numeric_limits<double>::infinity(), 0.0};
  double start_s = 0.0;
  for (std::size_t i = 0; i + 1 < route.size(); ++i) {
    const Segment seg{route[i], route[i + 1]};
    const double len = distance(seg.a, seg.b);
    const double t = closest_param(p, seg);
    const double d = distance(p, seg.a + t * (seg.b - seg.a));
    if (d < best.distance) best = {d, start_s + t * len};
    start_s += len;
  }
  return best;
}

double route_length(std::span<const Vec2> route) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < route.size(); ++i) total += distance(route[i], route[i + 1]);
  return total;
}

bool is_on_track(Vec2 p, const Level& level) {
  return project_to_route(p, level.route).distance <= level.corridor_half_width;
}

bool goal_reached(Vec2 p, const Level& level) {
  return distance(p, level.goal.center) < level.goal.radius;
}

std::vector<std::string> check_level(const Level& level, double chair_radius) {
  std::vector<std::string> out;
  if (level.id.empty()) out.emplace_back("id must not be empty");
  if (level.route.size() < 2) out.emplace_back("route needs at least 2 vertices");
  for (std::size_t i = 0; i + 1 < level.route.size(); ++i)
    if (!(distance(level.route[i], level.route[i + 1]) > kMinRouteSegment))
      out.push_back("route segment " + std::to_string(i) + " is degenerate");
  if (!(level.corridor_half_width > 0.0)) out.emplace_back("corridor_half_width must be > 0");
  if (!(level.goal.radius > 0.0)) out.emplace_back("goal radius must be > 0");
  for (std::size_t i = 0; i < level.circles.size(); ++i)
    if (!(level.circles[i].radius > 0.0)) out.push_back("circle " + std::to_string(i) + " radius must be > 0");
  for (std::size_t i = 0; i < level.rects.size(); ++i) {
    const auto& r = level.rects[i];
    if (!(r.xmin < r.xmax && r.ymin < r.ymax)) out.push_back("rect " + std::to_string(i) + " is empty");
  }
  for (std::size_t i = 0; i < level.waypoints.size(); ++i)
    if (!(level.waypoints[i].radius > 0.0)) out.push_back("waypoint " + std::to_string(i) + " radius must be > 0");
  if (level.decoration_count < 0) out.emplace_back("decoration_count must be >= 0");
  // Remaining checks need a usable route.
  if (!out.empty()) return out;

  const Vec2 start{level.start.x, level.start.y};
  if (!is_on_track(start, level)) out.emplace_back("start is off the route corridor");
  for (const auto& prox : obstacle_proximities(start, level)) {
    if (prox.distance < chair_radius) {
      out.push_back("start collides with " + to_string(prox.id));
    }
  }
  if (!is_on_track(level.goal.center, level)) out.emplace_back("goal center is outside the route corridor");
  return out;
}

Level load_level(std::string_view text) {
  json_io::Json doc;
  try {
    doc = json_io::Json::parse(text);
  } catch (const json_io::Json::parse_error& e) {
    throw ParseError("", e.what(), json_io::line_of(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  Level level;
  try {
    level = json_io::level_from_json(doc);
  } catch (const json_io::FieldError& e) {
    throw ParseError(e.path(), e.what());
  }
  if (auto problems = check_level(level); !problems.empty()) throw ValidationError(std::move(problems));
  return level;
}

Level load_level_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open level file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_level(buf.str());
}

std::string serialize_level(const Level& level) { return json_io::to_json(level).dump(2) + "\n"; }

}  // namespace wheelsim
