#include "wheelsim/json_io.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>

namespace wheelsim::json_io {

std::string field(const std::string& parent, std::string_view key) {
  if (parent.empty()) return std::string(key);
  return parent + "." + std::string(key);
}

std::string index(const std::string& parent, std::size_t i) {
  return parent + "[" + std::to_string(i) + "]";
}

const Json& as_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw FieldError(path, "expected an object");
  return j;
}

const Json& require(const Json& obj, std::string_view key, const std::string& path) {
  as_object(obj, path);
  const auto it = obj.find(key);
  if (it == obj.end()) throw FieldError(field(path, key), "missing required field");
  return *it;
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw FieldError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw FieldError(path, "expected a finite number");
  return v;
}

std::int64_t as_integer(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  throw FieldError(path, "expected an integer");
}

bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw FieldError(path, "expected a boolean");
  return j.get<bool>();
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw FieldError(path, "expected a string");
  return j.get<std::string>();
}

const Json& as_array(const Json& j, const std::string& path, std::optional<std::size_t> size) {
  if (!j.is_array()) throw FieldError(path, "expected an array");
  if (size && j.size() != *size)
    throw FieldError(path, "expected " + std::to_string(*size) + " elements, got " +
                               std::to_string(j.size()));
  return j;
}

std::size_t line_of(std::string_view text, std::size_t pos) {
  pos = std::min(pos, text.size());
  std::size_t line = 1;
  for (std::size_t i = 0; i < pos; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

namespace {

template <std::size_t N>
std::array<double, N> numbers(const Json& j, const std::string& path) {
  as_array(j, path, N);
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = as_number(j[i], index(path, i));
  return out;
}

template <typename T, typename F>
std::vector<T> list(const Json& j, const std::string& path, F&& each) {
  as_array(j, path);
  std::vector<T> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(each(j[i], index(path, i)));
  return out;
}

template <typename T, typename F>
std::vector<T> optional_list(const Json& obj, std::string_view key, const std::string& path, F&& each) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  return list<T>(*it, field(path, key), each);
}

Circle circle_from(const Json& j, const std::string& path) {
  const auto v = numbers<3>(j, path);
  return {{v[0], v[1]}, v[2]};
}

Json circle_to(const Circle& c) { return Json::array({c.center.x, c.center.y, c.radius}); }

Rgb color_from(const Json& j, const std::string& path) {
  try {
    return parse_hex_color(as_string(j, path));
  } catch (const std::invalid_argument& e) {
    throw FieldError(path, e.what());
  }
}

std::string_view role_name(AxisRole r) {
  switch (r) {
    case AxisRole::Lateral: return "lateral";
    case AxisRole::Forward: return "forward";
    case AxisRole::Unused: return "unused";
  }
  return "unused";
}

}  // namespace

// ---- Level ----------------------------------------------------------------

Json to_json(const Level& l) {
  Json walls = Json::array();
  for (const auto& w : l.walls) walls.push_back({w.a.x, w.a.y, w.b.x, w.b.y});
  Json circles = Json::array();
  for (const auto& c : l.circles) circles.push_back(circle_to(c));
  Json rects = Json::array();
  for (const auto& r : l.rects) rects.push_back({r.xmin, r.ymin, r.xmax, r.ymax});
  Json route = Json::array();
  for (const auto& p : l.route) route.push_back({p.x, p.y});
  Json waypoints = Json::array();
  for (const auto& w : l.waypoints) waypoints.push_back(circle_to(w));
  return Json{
      {"id", l.id},
      {"walls", walls},
      {"circles", circles},
      {"rects", rects},
      {"route", route},
      {"corridor_half_width", l.corridor_half_width},
      {"start", {l.start.x, l.start.y, l.start.heading}},
      {"goal", circle_to(l.goal)},
      {"waypoints", waypoints},
      {"palette",
       {{"background", to_hex(l.palette.background)},
        {"route", to_hex(l.palette.route)},
        {"chair", to_hex(l.palette.chair)},
        {"obstacle", to_hex(l.palette.obstacle)},
        {"reward", to_hex(l.palette.reward)}}},
      {"decoration_count", l.decoration_count},
  };
}

Level level_from_json(const Json& j, const std::string& path) {
  as_object(j, path);
  Level l;
  l.id = as_string(require(j, "id", path), field(path, "id"));
  l.walls = optional_list<Segment>(j, "walls", path, [](const Json& e, const std::string& p) {
    const auto v = numbers<4>(e, p);
    return Segment{{v[0], v[1]}, {v[2], v[3]}};
  });
  l.circles = optional_list<Circle>(j, "circles", path, circle_from);
  l.rects = optional_list<Rect>(j, "rects", path, [](const Json& e, const std::string& p) {
    const auto v = numbers<4>(e, p);
    return Rect{v[0], v[1], v[2], v[3]};
  });
  l.route = list<Vec2>(require(j, "route", path), field(path, "route"),
                       [](const Json& e, const std::string& p) {
                         const auto v = numbers<2>(e, p);
                         return Vec2{v[0], v[1]};
                       });
  l.corridor_half_width =
      as_number(require(j, "corridor_half_width", path), field(path, "corridor_half_width"));
  const auto start = numbers<3>(require(j, "start", path), field(path, "start"));
  l.start = {start[0], start[1], start[2]};
  l.goal = circle_from(require(j, "goal", path), field(path, "goal"));
  l.waypoints = optional_list<Circle>(j, "waypoints", path, circle_from);

  const std::string pal_path = field(path, "palette");
  const Json& pal = as_object(require(j, "palette", path), pal_path);
  auto color = [&](std::string_view key) { return color_from(require(pal, key, pal_path), field(pal_path, key)); };
  l.palette = {color("background"), color("route"), color("chair"), color("obstacle"), color("reward")};

  if (const auto it = j.find("decoration_count"); it != j.end()) {
    const auto n = as_integer(*it, field(path, "decoration_count"));
    if (n < 0 || n > std::numeric_limits<int>::max())
      throw FieldError(field(path, "decoration_count"), "expected a non-negative integer");
    l.decoration_count = static_cast<int>(n);
  }
  return l;
}

// ---- Chair ----------------------------------------------------------------

Json to_json(const ChairParams& p) {
  return Json{{"track_width", p.track_width},   {"wheel_radius", p.wheel_radius},
              {"chair_radius", p.chair_radius}, {"max_speed", p.max_speed},
              {"max_yaw_rate", p.max_yaw_rate}, {"max_accel", p.max_accel}};
}

ChairParams params_from_json(const Json& j, const std::string& path) {
  ChairParams p;
  auto num = [&](std::string_view key) { return as_number(require(j, key, path), field(path, key)); };
  p.track_width = num("track_width");
  p.wheel_radius = num("wheel_radius");
  p.chair_radius = num("chair_radius");
  p.max_speed = num("max_speed");
  p.max_yaw_rate = num("max_yaw_rate");
  p.max_accel = num("max_accel");
  return p;
}

Json to_json(const ChairState& s) {
  return Json{{"x", s.x},
              {"y", s.y},
              {"heading", s.heading},
              {"v_left", s.v_left},
              {"v_right", s.v_right},
              {"wheel_spin", s.wheel_spin}};
}

ChairState chair_from_json(const Json& j, const std::string& path) {
  ChairState s;
  auto num = [&](std::string_view key) { return as_number(require(j, key, path), field(path, key)); };
  s.x = num("x");
  s.y = num("y");
  s.heading = num("heading");
  s.v_left = num("v_left");
  s.v_right = num("v_right");
  s.wheel_spin = numbers<4>(require(j, "wheel_spin", path), field(path, "wheel_spin"));
  return s;
}

Json to_json(const JoystickSample& s) { return Json{{"t", s.t}, {"x", s.x}, {"y", s.y}}; }

JoystickSample sample_from_json(const Json& j, const std::string& path) {
  auto num = [&](std::string_view key) { return as_number(require(j, key, path), field(path, key)); };
  return {num("x"), num("y"), num("t")};
}

// ---- Events and session ---------------------------------------------------

Json to_json(const SimEvent& e) {
  Json j{{"tick", e.tick}, {"kind", std::string(to_string(e.kind))}};
  if (e.waypoint) j["index"] = *e.waypoint;
  if (e.obstacle) j["obstacle"] = to_string(*e.obstacle);
  return j;
}

SimEvent event_from_json(const Json& j, const std::string& path) {
  SimEvent e;
  e.tick = as_integer(require(j, "tick", path), field(path, "tick"));
  const std::string kind_path = field(path, "kind");
  try {
    e.kind = parse_event_kind(as_string(require(j, "kind", path), kind_path));
  } catch (const std::invalid_argument& ex) {
    throw FieldError(kind_path, ex.what());
  }
  if (e.kind == EventKind::WaypointReached) {
    const auto i = as_integer(require(j, "index", path), field(path, "index"));
    if (i < 0) throw FieldError(field(path, "index"), "expected a non-negative integer");
    e.waypoint = static_cast<std::size_t>(i);
  }
  if (e.kind == EventKind::Collision) {
    const std::string ob_path = field(path, "obstacle");
    try {
      e.obstacle = parse_obstacle_id(as_string(require(j, "obstacle", path), ob_path));
    } catch (const std::invalid_argument& ex) {
      throw FieldError(ob_path, ex.what());
    }
  }
  return e;
}

Json to_json(const SessionConfig& c) {
  return Json{{"dt", c.dt}, {"assist_gain", c.assist_gain}, {"max_duration", c.max_duration}};
}

SessionConfig config_from_json(const Json& j, const std::string& path) {
  auto num = [&](std::string_view key) { return as_number(require(j, key, path), field(path, key)); };
  return {num("dt"), num("assist_gain"), num("max_duration")};
}

Json to_json(const SessionMetrics& m) {
  return Json{{"elapsed", m.elapsed},
              {"off_route_time", m.off_route_time},
              {"on_route_time", m.on_route_time},
              {"collision_count", m.collision_count},
              {"waypoints_hit", m.waypoints_hit},
              {"completed", m.completed},
              {"completion_time", m.completion_time ? Json(*m.completion_time) : Json(nullptr)}};
}

SessionMetrics metrics_from_json(const Json& j, const std::string& path) {
  SessionMetrics m;
  auto num = [&](std::string_view key) { return as_number(require(j, key, path), field(path, key)); };
  auto integer = [&](std::string_view key) { return as_integer(require(j, key, path), field(path, key)); };
  m.elapsed = num("elapsed");
  m.off_route_time = num("off_route_time");
  m.on_route_time = num("on_route_time");
  m.collision_count = integer("collision_count");
  m.waypoints_hit = integer("waypoints_hit");
  m.completed = as_bool(require(j, "completed", path), field(path, "completed"));
  if (const auto it = j.find("completion_time"); it != j.end() && !it->is_null())
    m.completion_time = as_number(*it, field(path, "completion_time"));
  return m;
}

Json to_json(const Frame& f) {
  Json events = Json::array();
  for (const auto& e : f.events) events.push_back(to_json(e));
  return Json{{"tick", f.tick},         {"sim_time", f.sim_time}, {"chair", to_json(f.chair)},
              {"on_track", f.on_track}, {"events", events},       {"metrics", to_json(f.metrics)}};
}

Frame frame_from_json(const Json& j, const std::string& path) {
  Frame f;
  f.tick = as_integer(require(j, "tick", path), field(path, "tick"));
  f.sim_time = as_number(require(j, "sim_time", path), field(path, "sim_time"));
  f.chair = chair_from_json(require(j, "chair", path), field(path, "chair"));
  f.on_track = as_bool(require(j, "on_track", path), field(path, "on_track"));
  f.events = list<SimEvent>(require(j, "events", path), field(path, "events"), event_from_json);
  f.metrics = metrics_from_json(require(j, "metrics", path), field(path, "metrics"));
  return f;
}

Json to_json(const TraceEntry& e) {
  return Json{{"tick", e.tick}, {"t", e.sample.t}, {"x", e.sample.x}, {"y", e.sample.y}};
}

TraceEntry trace_entry_from_json(const Json& j, const std::string& path) {
  return {as_integer(require(j, "tick", path), field(path, "tick")), sample_from_json(j, path)};
}

Json to_json(const SessionReport& r) {
  Json events = Json::array();
  for (const auto& e : r.events) events.push_back(to_json(e));
  Json trace = Json::array();
  for (const auto& e : r.trace) trace.push_back(to_json(e));
  return Json{{"level_id", r.level_id},
              {"params", to_json(r.params)},
              {"config", to_json(r.config)},
              {"metrics", to_json(r.metrics)},
              {"end_reason", std::string(to_string(r.end_reason))},
              {"events", events},
              {"trace", trace}};
}

SessionReport report_from_json(const Json& j, const std::string& path) {
  SessionReport r;
  r.level_id = as_string(require(j, "level_id", path), field(path, "level_id"));
  r.params = params_from_json(require(j, "params", path), field(path, "params"));
  r.config = config_from_json(require(j, "config", path), field(path, "config"));
  r.metrics = metrics_from_json(require(j, "metrics", path), field(path, "metrics"));
  const std::string reason_path = field(path, "end_reason");
  try {
    r.end_reason = parse_end_reason(as_string(require(j, "end_reason", path), reason_path));
  } catch (const std::invalid_argument& e) {
    throw FieldError(reason_path, e.what());
  }
  r.events = list<SimEvent>(require(j, "events", path), field(path, "events"), event_from_json);
  r.trace = list<TraceEntry>(require(j, "trace", path), field(path, "trace"), trace_entry_from_json);
  return r;
}

// ---- Devices --------------------------------------------------------------

Json to_json(const DeviceDescriptor& d) {
  Json ranges = Json::array();
  for (const auto& r : d.axis_ranges) ranges.push_back({r.raw_min, r.raw_max});
  Json roles = Json::array();
  for (const auto r : d.axis_roles) roles.push_back(std::string(role_name(r)));
  return Json{{"device_id", d.device_id}, {"axis_ranges", ranges}, {"axis_roles", roles}};
}

DeviceDescriptor descriptor_from_json(const Json& j, const std::string& path) {
  DeviceDescriptor d;
  d.device_id = as_string(require(j, "device_id", path), field(path, "device_id"));
  d.axis_ranges = list<AxisRange>(require(j, "axis_ranges", path), field(path, "axis_ranges"),
                                  [](const Json& e, const std::string& p) {
                                    as_array(e, p, 2);
                                    return AxisRange{as_integer(e[0], index(p, 0)), as_integer(e[1], index(p, 1))};
                                  });
  d.axis_roles = list<AxisRole>(require(j, "axis_roles", path), field(path, "axis_roles"),
                                [](const Json& e, const std::string& p) {
                                  const auto name = as_string(e, p);
                                  if (name == "lateral") return AxisRole::Lateral;
                                  if (name == "forward") return AxisRole::Forward;
                                  if (name == "unused") return AxisRole::Unused;
                                  throw FieldError(p, "unknown axis role '" + name + "'");
                                });
  return d;
}

Json to_json(const Calibration& c) {
  return Json{{"device_id", c.device_id},
              {"center", c.center},
              {"deadzone", c.deadzone},
              {"gain", c.gain},
              {"invert", c.invert}};
}

Calibration calibration_from_json(const Json& j, const std::string& path) {
  Calibration c;
  c.device_id = as_string(require(j, "device_id", path), field(path, "device_id"));
  c.center = list<std::int64_t>(require(j, "center", path), field(path, "center"), as_integer);
  c.deadzone = as_number(require(j, "deadzone", path), field(path, "deadzone"));
  c.gain = list<double>(require(j, "gain", path), field(path, "gain"), as_number);
  c.invert = list<bool>(require(j, "invert", path), field(path, "invert"), as_bool);
  return c;
}

}  // namespace wheelsim::json_io
