#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include "wheelsim/contrast.hpp"
#include "wheelsim/errors.hpp"
#include "wheelsim/input.hpp"
#include "wheelsim/json_io.hpp"
#include "wheelsim/level.hpp"
#include "wheelsim/protocol.hpp"
#include "wheelsim/session.hpp"
#include "wheelsim/sim.hpp"

namespace py = pybind11;
using namespace wheelsim;

namespace {

using Point = std::pair<double, double>;

Vec2 vec(const Point& p) { return {p.first, p.second}; }

std::vector<Vec2> polyline(const std::vector<Point>& pts) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(vec(p));
  return out;
}

void bind_types(py::module_& m) {
  py::class_<ChairParams>(m, "ChairParams")
      .def(py::init<>())
      .def_readwrite("track_width", &ChairParams::track_width)
      .def_readwrite("wheel_radius", &ChairParams::wheel_radius)
      .def_readwrite("chair_radius", &ChairParams::chair_radius)
      .def_readwrite("max_speed", &ChairParams::max_speed)
      .def_readwrite("max_yaw_rate", &ChairParams::max_yaw_rate)
      .def_readwrite("max_accel", &ChairParams::max_accel)
      .def("check", &check_params)
      .def(py::self == py::self);

  py::class_<JoystickSample>(m, "JoystickSample")
      .def(py::init<>())
      .def(py::init([](double x, double y, double t) { return JoystickSample{x, y, t}; }), py::arg("x"),
           py::arg("y"), py::arg("t") = 0.0)
      .def_readwrite("x", &JoystickSample::x)
      .def_readwrite("y", &JoystickSample::y)
      .def_readwrite("t", &JoystickSample::t)
      .def("__repr__", [](const JoystickSample& s) {
        return "JoystickSample(x=" + std::to_string(s.x) + ", y=" + std::to_string(s.y) + ", t=" + std::to_string(s.t) + ")";
      });

  py::class_<WheelCommand>(m, "WheelCommand")
      .def(py::init<>())
      .def(py::init([](double l, double r) { return WheelCommand{l, r}; }), py::arg("v_left"), py::arg("v_right"))
      .def_readwrite("v_left", &WheelCommand::v_left)
      .def_readwrite("v_right", &WheelCommand::v_right)
      .def(py::self == py::self);

  py::class_<ChairState>(m, "ChairState")
      .def(py::init<>())
      .def(py::init(&at_rest), py::arg("x"), py::arg("y"), py::arg("heading"))
      .def_readwrite("x", &ChairState::x)
      .def_readwrite("y", &ChairState::y)
      .def_readwrite("heading", &ChairState::heading)
      .def_readwrite("v_left", &ChairState::v_left)
      .def_readwrite("v_right", &ChairState::v_right)
      .def_readwrite("wheel_spin", &ChairState::wheel_spin)
      .def(py::self == py::self);

  py::class_<SimEvent>(m, "SimEvent")
      .def_property_readonly("kind", [](const SimEvent& e) { return std::string(to_string(e.kind)); })
      .def_readonly("tick", &SimEvent::tick)
      .def_readonly("waypoint", &SimEvent::waypoint)
      .def_property_readonly("obstacle", [](const SimEvent& e) -> std::optional<std::string> {
        if (!e.obstacle) return std::nullopt;
        return to_string(*e.obstacle);
      });

  py::class_<Level>(m, "Level")
      .def_readonly("id", &Level::id)
      .def_readonly("corridor_half_width", &Level::corridor_half_width)
      .def_readonly("decoration_count", &Level::decoration_count)
      .def_property_readonly("route", [](const Level& l) {
        std::vector<Point> out;
        for (const auto& p : l.route) out.emplace_back(p.x, p.y);
        return out;
      })
      .def_property_readonly("start", [](const Level& l) { return std::tuple{l.start.x, l.start.y, l.start.heading}; })
      .def_property_readonly("goal", [](const Level& l) { return std::tuple{l.goal.center.x, l.goal.center.y, l.goal.radius}; })
      .def("to_json", &serialize_level)
      .def(py::self == py::self);

  py::class_<SessionMetrics>(m, "SessionMetrics")
      .def_readonly("elapsed", &SessionMetrics::elapsed)
      .def_readonly("off_route_time", &SessionMetrics::off_route_time)
      .def_readonly("on_route_time", &SessionMetrics::on_route_time)
      .def_readonly("collision_count", &SessionMetrics::collision_count)
      .def_readonly("waypoints_hit", &SessionMetrics::waypoints_hit)
      .def_readonly("completed", &SessionMetrics::completed)
      .def_readonly("completion_time", &SessionMetrics::completion_time);

  py::class_<Frame>(m, "Frame")
      .def_readonly("tick", &Frame::tick)
      .def_readonly("sim_time", &Frame::sim_time)
      .def_readonly("chair", &Frame::chair)
      .def_readonly("on_track", &Frame::on_track)
      .def_readonly("events", &Frame::events)
      .def_readonly("metrics", &Frame::metrics);

  py::class_<SessionReport>(m, "SessionReport")
      .def_readonly("level_id", &SessionReport::level_id)
      .def_readonly("metrics", &SessionReport::metrics)
      .def_readonly("events", &SessionReport::events)
      .def_property_readonly("end_reason", [](const SessionReport& r) { return std::string(to_string(r.end_reason)); })
      .def("to_json", &canonical_report_json)
      .def(py::self == py::self);
}

void bind_sim(py::module_& m) {
  m.def("map_joystick", &map_joystick, py::arg("sample"), py::arg("params") = ChairParams{});
  m.def("apply_slew", &apply_slew, py::arg("state"), py::arg("command"), py::arg("dt"),
        py::arg("params") = ChairParams{});
  m.def("integrate_pose", &integrate_pose, py::arg("state"), py::arg("dt"), py::arg("params") = ChairParams{});
  m.def(
      "step",
      [](const ChairState& st, const JoystickSample& s, const Level& level, const ChairParams& p, double dt,
         double assist_gain) {
        auto r = step(st, s, level, p, {dt, assist_gain});
        return std::make_pair(r.state, r.events);
      },
      py::arg("state"), py::arg("sample"), py::arg("level"), py::arg("params") = ChairParams{},
      py::arg("dt") = kDefaultDt, py::arg("assist_gain") = 0.0);
}

void bind_level(py::module_& m) {
  m.def("load_level", &load_level, py::arg("text"));
  m.def("load_level_file", [](const std::string& path) { return load_level_file(path); }, py::arg("path"));
  m.def(
      "project_to_route",
      [](const Point& p, const std::vector<Point>& route) {
        const auto pts = polyline(route);
        const auto proj = project_to_route(vec(p), pts);
        return std::make_pair(proj.distance, proj.s);
      },
      py::arg("point"), py::arg("route"));
  m.def("is_on_track", [](const Point& p, const Level& l) { return is_on_track(vec(p), l); });
  m.def("goal_reached", [](const Point& p, const Level& l) { return goal_reached(vec(p), l); });
  m.def("contrast_ratio", [](const std::string& a, const std::string& b) {
    return contrast_ratio(parse_hex_color(a), parse_hex_color(b));
  });
  m.def("relative_luminance", [](const std::string& c) { return relative_luminance(parse_hex_color(c)); });
  m.def(
      "validate_accessibility",
      [](const Level& l, int max_decorations, double min_contrast) {
        std::vector<std::string> out;
        for (const auto& v : validate_accessibility(l, {max_decorations, min_contrast})) out.push_back(v.message);
        return out;
      },
      py::arg("level"), py::arg("max_decorations") = 5, py::arg("min_contrast") = 4.5);
}

void bind_input(py::module_& m) {
  m.def(
      "normalize",
      [](const std::vector<std::int64_t>& raw, double t, double deadzone) {
        const auto d = default_descriptor();
        auto c = default_calibration(d);
        c.deadzone = deadzone;
        return normalize(raw, d, c, t);
      },
      py::arg("raw"), py::arg("t") = 0.0, py::arg("deadzone") = kDefaultDeadzone,
      "Normalize raw counts from the default 10-bit two-axis joystick.");
  m.def(
      "calibrate_center",
      [](const std::vector<std::vector<std::int64_t>>& samples) {
        const auto c = calibrate_center(samples, default_descriptor());
        return std::make_pair(c.center, c.deadzone);
      },
      py::arg("resting_samples"));
}

void bind_session(py::module_& m) {
  py::class_<Session>(m, "Session")
      .def(py::init([](const Level& level, const ChairParams& p, double assist_gain, double max_duration) {
             SessionConfig cfg;
             cfg.assist_gain = assist_gain;
             cfg.max_duration = max_duration;
             return Session(std::make_shared<const Level>(level), p, cfg);
           }),
           py::arg("level"), py::arg("params") = ChairParams{}, py::arg("assist_gain") = 0.0,
           py::arg("max_duration") = 180.0)
      .def("tick", &Session::tick, py::arg("sample"))
      .def("end", [](Session& s) { s.end(EndReason::ClientEnded); })
      .def_property_readonly("ended", &Session::ended)
      .def_property_readonly("chair", &Session::chair)
      .def_property_readonly("metrics", &Session::metrics)
      .def("finalize", &Session::finalize);

  m.def(
      "replay",
      [](const Level& level, const std::vector<JoystickSample>& samples, const ChairParams& p, double assist_gain,
         double max_duration) {
        SessionConfig cfg;
        cfg.assist_gain = assist_gain;
        cfg.max_duration = max_duration;
        const auto schedule = schedule_samples(samples, cfg.dt);
        return run_schedule(std::make_shared<const Level>(level), p, cfg, schedule);
      },
      py::arg("level"), py::arg("samples"), py::arg("params") = ChairParams{}, py::arg("assist_gain") = 0.0,
      py::arg("max_duration") = 180.0);
  m.def("parse_report", &parse_report_json, py::arg("text"));

  m.def(
      "wire_roundtrip", [](const std::string& text) { return wire::encode(wire::decode(text)); },
      py::arg("text"), "Decode a wire message and encode it again.");
  m.def(
      "wire_type", [](const std::string& text) { return std::string(wire::type_name(wire::decode(text))); },
      py::arg("text"));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Wheelchair simulator core: kinematics, levels, input normalization and sessions.";

  static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
  static py::exception<DecodeError> decode_error(m, "DecodeError", PyExc_ValueError);
  static py::exception<SessionEnded> session_ended(m, "SessionEnded", PyExc_RuntimeError);
  static py::exception<SessionNotEnded> session_not_ended(m, "SessionNotEnded", PyExc_RuntimeError);
  static py::exception<InsufficientSamples> insufficient(m, "InsufficientSamples", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      parse_error(e.what());
    } catch (const ValidationError& e) {
      validation_error(e.what());
    } catch (const DecodeError& e) {
      decode_error(e.what());
    } catch (const SessionEnded& e) {
      session_ended(e.what());
    } catch (const SessionNotEnded& e) {
      session_not_ended(e.what());
    } catch (const InsufficientSamples& e) {
      insufficient(e.what());
    }
  });

  m.attr("DEFAULT_DT") = kDefaultDt;
  bind_types(m);
  bind_sim(m);
  bind_level(m);
  bind_input(m);
  bind_session(m);
}
