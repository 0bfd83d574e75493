#include "wheelsim/protocol.hpp"

#include "wheelsim/errors.hpp"
#include "wheelsim/json_io.hpp"

namespace wheelsim::wire {

namespace {

using json_io::Json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Json body(const Hello& m) {
  Json j{{"level_id", m.level_id}};
  if (m.device_descriptor) j["device_descriptor"] = json_io::to_json(*m.device_descriptor);
  if (m.calibration) j["calibration"] = json_io::to_json(*m.calibration);
  return j;
}
Json body(const Input& m) { return Json{{"t", m.t}, {"axes", m.axes}}; }
Json body(const End&) { return Json::object(); }
Json body(const Welcome& m) {
  return Json{{"level", json_io::to_json(m.level)}, {"params", json_io::to_json(m.params)}, {"dt", m.dt}};
}
Json body(const FrameMsg& m) { return Json{{"frame", json_io::to_json(m.frame)}}; }
Json body(const Ended& m) { return Json{{"report", json_io::to_json(m.report)}}; }
Json body(const Error& m) { return Json{{"code", m.code}, {"message", m.message}}; }

Message decode_body(const std::string& type, const Json& j) {
  using namespace json_io;
  if (type == "hello") {
    Hello m;
    m.level_id = as_string(require(j, "level_id", ""), "level_id");
    if (auto it = j.find("device_descriptor"); it != j.end() && !it->is_null())
      m.device_descriptor = descriptor_from_json(*it, "device_descriptor");
    if (auto it = j.find("calibration"); it != j.end() && !it->is_null())
      m.calibration = calibration_from_json(*it, "calibration");
    return m;
  }
  if (type == "input") {
    Input m;
    m.t = as_number(require(j, "t", ""), "t");
    const auto& axes = as_array(require(j, "axes", ""), "axes");
    for (std::size_t i = 0; i < axes.size(); ++i) m.axes.push_back(as_number(axes[i], index("axes", i)));
    return m;
  }
  if (type == "end") return End{};
  if (type == "welcome") {
    return Welcome{level_from_json(require(j, "level", ""), "level"),
                   params_from_json(require(j, "params", ""), "params"),
                   as_number(require(j, "dt", ""), "dt")};
  }
  if (type == "frame") return FrameMsg{frame_from_json(require(j, "frame", ""), "frame")};
  if (type == "ended") return Ended{report_from_json(require(j, "report", ""), "report")};
  if (type == "error") {
    return Error{as_string(require(j, "code", ""), "code"), as_string(require(j, "message", ""), "message")};
  }
  throw FieldError("type", "unknown message type '" + type + "'");
}

}  // namespace

std::string_view type_name(const Message& m) {
  return std::visit(overloaded{
                        [](const Hello&) { return std::string_view("hello"); },
                        [](const Input&) { return std::string_view("input"); },
                        [](const End&) { return std::string_view("end"); },
                        [](const Welcome&) { return std::string_view("welcome"); },
                        [](const FrameMsg&) { return std::string_view("frame"); },
                        [](const Ended&) { return std::string_view("ended"); },
                        [](const Error&) { return std::string_view("error"); },
                    },
                    m);
}

std::string encode(const Message& m) {
  Json j = std::visit([](const auto& msg) { return body(msg); }, m);
  j["type"] = std::string(type_name(m));
  return j.dump();
}

Message decode(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DecodeError("", std::string("malformed JSON: ") + e.what());
  }
  try {
    json_io::as_object(j, "");
    const auto type = json_io::as_string(json_io::require(j, "type", ""), "type");
    return decode_body(type, j);
  } catch (const json_io::FieldError& e) {
    throw DecodeError(e.path().empty() ? "$" : e.path(), e.what());
  }
}

}  // namespace wheelsim::wire
