#pragma once

// JSON mapping for every persisted or transmitted type. Readers take the JSON
// path of the value they decode and throw FieldError naming it.

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "wheelsim/chair.hpp"
#include "wheelsim/events.hpp"
#include "wheelsim/input.hpp"
#include "wheelsim/level.hpp"
#include "wheelsim/session.hpp"

namespace wheelsim::json_io {

using Json = nlohmann::json;

class FieldError : public std::runtime_error {
 public:
  FieldError(std::string path, const std::string& what)
      : std::runtime_error(what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Child path helpers: field("a", "b") == "a.b", index("a", 2) == "a[2]".
std::string field(const std::string& parent, std::string_view key);
std::string index(const std::string& parent, std::size_t i);

const Json& require(const Json& obj, std::string_view key, const std::string& path);
double as_number(const Json& j, const std::string& path);
std::int64_t as_integer(const Json& j, const std::string& path);
bool as_bool(const Json& j, const std::string& path);
std::string as_string(const Json& j, const std::string& path);
const Json& as_array(const Json& j, const std::string& path, std::optional<std::size_t> size = {});
const Json& as_object(const Json& j, const std::string& path);

Json to_json(const Level& l);
Level level_from_json(const Json& j, const std::string& path = "");

Json to_json(const ChairParams& p);
ChairParams params_from_json(const Json& j, const std::string& path);

Json to_json(const ChairState& s);
ChairState chair_from_json(const Json& j, const std::string& path);

Json to_json(const JoystickSample& s);
JoystickSample sample_from_json(const Json& j, const std::string& path);

Json to_json(const SimEvent& e);
SimEvent event_from_json(const Json& j, const std::string& path);

Json to_json(const SessionConfig& c);
SessionConfig config_from_json(const Json& j, const std::string& path);

Json to_json(const SessionMetrics& m);
SessionMetrics metrics_from_json(const Json& j, const std::string& path);

Json to_json(const Frame& f);
Frame frame_from_json(const Json& j, const std::string& path);

Json to_json(const TraceEntry& e);
TraceEntry trace_entry_from_json(const Json& j, const std::string& path);

Json to_json(const SessionReport& r);
SessionReport report_from_json(const Json& j, const std::string& path = "");

Json to_json(const DeviceDescriptor& d);
DeviceDescriptor descriptor_from_json(const Json& j, const std::string& path);

Json to_json(const Calibration& c);
Calibration calibration_from_json(const Json& j, const std::string& path);

/// 1-based line of byte offset `pos` in `text`.
std::size_t line_of(std::string_view text, std::size_t pos);

}  // namespace wheelsim::json_io
