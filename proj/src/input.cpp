#include "wheelsim/input.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wheelsim/errors.hpp"
#include "wheelsim/json_io.hpp"

namespace wheelsim {

namespace {

std::size_t role_axis(const DeviceDescriptor& d, AxisRole role) {
  for (std::size_t i = 0; i < d.axis_roles.size(); ++i)
    if (d.axis_roles[i] == role) return i;
  throw DescriptorMismatch("descriptor '" + d.device_id + "' has no " +
                           (role == AxisRole::Lateral ? "lateral" : "forward") + " axis");
}

void require_usable(const DeviceDescriptor& d, const Calibration& c) {
  auto problems = check_descriptor(d);
  auto more = check_calibration(c, d);
  problems.insert(problems.end(), more.begin(), more.end());
  if (problems.empty()) return;
  std::string msg = "device '" + d.device_id + "'";
  for (const auto& p : problems) msg += "; " + p;
  throw DescriptorMismatch(msg);
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char ch) { return std::isspace(ch); });
}

json_io::Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json_io::Json::parse(text);
  } catch (const json_io::Json::parse_error& e) {
    throw ParseError("", e.what(), json_io::line_of(text, e.byte == 0 ? 0 : e.byte - 1));
  }
}

}  // namespace

DeviceDescriptor default_descriptor() {
  return {"hybrid-joystick-10bit", {{0, 1023}, {0, 1023}}, {AxisRole::Lateral, AxisRole::Forward}};
}

DeviceDescriptor gamepad_descriptor() {
  return {"gamepad", {{0, kGamepadRawMax}, {0, kGamepadRawMax}}, {AxisRole::Lateral, AxisRole::Forward}};
}

Calibration default_calibration(const DeviceDescriptor& d) {
  Calibration c;
  c.device_id = d.device_id;
  for (const auto& r : d.axis_ranges) {
    c.center.push_back(std::llround((static_cast<double>(r.raw_min) + static_cast<double>(r.raw_max)) / 2.0));
    c.gain.push_back(1.0);
    c.invert.push_back(false);
  }
  c.deadzone = kDefaultDeadzone;
  return c;
}

std::vector<std::string> check_descriptor(const DeviceDescriptor& d) {
  std::vector<std::string> out;
  if (d.axis_ranges.size() != d.axis_roles.size()) out.emplace_back("axis_ranges and axis_roles differ in length");
  for (std::size_t i = 0; i < d.axis_ranges.size(); ++i)
    if (!(d.axis_ranges[i].raw_min < d.axis_ranges[i].raw_max))
      out.push_back("axis " + std::to_string(i) + " needs raw_min < raw_max");
  const auto lateral = std::count(d.axis_roles.begin(), d.axis_roles.end(), AxisRole::Lateral);
  const auto forward = std::count(d.axis_roles.begin(), d.axis_roles.end(), AxisRole::Forward);
  if (lateral != 1) out.emplace_back("exactly one lateral axis required");
  if (forward != 1) out.emplace_back("exactly one forward axis required");
  return out;
}

std::vector<std::string> check_calibration(const Calibration& c, const DeviceDescriptor& d) {
  std::vector<std::string> out;
  const auto n = d.axis_ranges.size();
  if (c.center.size() != n || c.gain.size() != n || c.invert.size() != n) {
    out.push_back("calibration must list " + std::to_string(n) + " axes");
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (c.center[i] < d.axis_ranges[i].raw_min || c.center[i] > d.axis_ranges[i].raw_max)
      out.push_back("center of axis " + std::to_string(i) + " outside its raw range");
    if (!(c.gain[i] > 0.0) || !std::isfinite(c.gain[i])) out.push_back("gain of axis " + std::to_string(i) + " must be > 0");
  }
  if (!(c.deadzone >= 0.0 && c.deadzone < 1.0)) out.emplace_back("deadzone must be in [0, 1)");
  return out;
}

std::size_t lateral_axis(const DeviceDescriptor& d) { return role_axis(d, AxisRole::Lateral); }
std::size_t forward_axis(const DeviceDescriptor& d) { return role_axis(d, AxisRole::Forward); }

double axis_deflection(std::int64_t raw, const AxisRange& range, std::int64_t center) {
  raw = std::clamp(raw, range.raw_min, range.raw_max);
  const double offset = static_cast<double>(raw - center);
  const double span = static_cast<double>(offset > 0.0 ? range.raw_max - center : center - range.raw_min);
  if (span <= 0.0) return 0.0;
  return std::clamp(offset / span, -1.0, 1.0);
}

JoystickSample normalize(std::span<const std::int64_t> raw, const DeviceDescriptor& d,
                         const Calibration& c, double t) {
  if (raw.size() != d.axis_ranges.size())
    throw DescriptorMismatch("expected " + std::to_string(d.axis_ranges.size()) + " axes, got " +
                             std::to_string(raw.size()));
  require_usable(d, c);

  auto axis = [&](std::size_t i) {
    double u = axis_deflection(raw[i], d.axis_ranges[i], c.center[i]);
    if (c.invert[i]) u = -u;
    return std::clamp(u * c.gain[i], -1.0, 1.0);
  };
  double x = axis(lateral_axis(d));
  double y = axis(forward_axis(d));

  const double magnitude = std::hypot(x, y);
  if (magnitude <= c.deadzone) return {0.0, 0.0, t};
  const double scale = (magnitude - c.deadzone) / (1.0 - c.deadzone) / magnitude;
  x *= scale;
  y *= scale;
  // Diagonals can exceed the unit square; shrink without turning.
  const double largest = std::max(std::abs(x), std::abs(y));
  if (largest > 1.0) {
    x /= largest;
    y /= largest;
  }
  return {x, y, t};
}

JoystickSample clamp_axes(std::span<const double> axes, double t) {
  if (axes.size() != 2) throw DescriptorMismatch("expected 2 normalized axes, got " + std::to_string(axes.size()));
  if (!std::isfinite(axes[0]) || !std::isfinite(axes[1]) || !std::isfinite(t))
    throw std::invalid_argument("axes and t must be finite");
  return {std::clamp(axes[0], -1.0, 1.0), std::clamp(axes[1], -1.0, 1.0), t};
}

Calibration calibrate_center(std::span<const std::vector<std::int64_t>> resting_samples,
                             const DeviceDescriptor& d) {
  if (resting_samples.size() < kMinCalibrationSamples)
    throw InsufficientSamples("calibration needs at least " + std::to_string(kMinCalibrationSamples) +
                              " resting samples, got " + std::to_string(resting_samples.size()));
  if (auto problems = check_descriptor(d); !problems.empty()) throw DescriptorMismatch(problems.front());
  const std::size_t n_axes = d.axis_ranges.size();

  std::vector<std::int64_t> sums(n_axes, 0);
  for (const auto& sample : resting_samples) {
    if (sample.size() != n_axes)
      throw DescriptorMismatch("resting sample has " + std::to_string(sample.size()) + " axes, expected " +
                               std::to_string(n_axes));
    for (std::size_t a = 0; a < n_axes; ++a)
      sums[a] += std::clamp(sample[a], d.axis_ranges[a].raw_min, d.axis_ranges[a].raw_max);
  }

  Calibration c;
  c.device_id = d.device_id;
  const auto count = static_cast<double>(resting_samples.size());
  for (std::size_t a = 0; a < n_axes; ++a) {
    c.center.push_back(std::llround(static_cast<double>(sums[a]) / count));
    c.gain.push_back(1.0);
    c.invert.push_back(false);
  }

  const std::size_t lat = lateral_axis(d);
  const std::size_t fwd = forward_axis(d);
  double noise = 0.0;
  for (const auto& sample : resting_samples) {
    const double x = axis_deflection(sample[lat], d.axis_ranges[lat], c.center[lat]);
    const double y = axis_deflection(sample[fwd], d.axis_ranges[fwd], c.center[fwd]);
    noise = std::max(noise, std::hypot(x, y));
  }
  c.deadzone = std::min(std::max(kMinDeadzone, 2.0 * noise), kMaxCalibratedDeadzone);
  return c;
}

std::optional<RawSample> TraceReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (blank(line)) continue;
    json_io::Json j;
    try {
      j = json_io::Json::parse(line);
    } catch (const json_io::Json::parse_error& e) {
      throw ParseError("", e.what(), line_);
    }
    RawSample s;
    try {
      s.t = json_io::as_number(json_io::require(j, "t", ""), "t");
      const auto& axes = json_io::as_array(json_io::require(j, "axes", ""), "axes");
      for (std::size_t i = 0; i < axes.size(); ++i)
        s.axes.push_back(json_io::as_integer(axes[i], json_io::index("axes", i)));
    } catch (const json_io::FieldError& e) {
      throw ParseError(e.path(), e.what(), line_);
    }
    if (last_t_ && s.t < *last_t_)
      throw NonMonotonicTimestamps("line " + std::to_string(line_) + ": timestamp " + std::to_string(s.t) +
                                   " precedes " + std::to_string(*last_t_));
    last_t_ = s.t;
    return s;
  }
  return std::nullopt;
}

std::vector<RawSample> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace " + path.string());
  TraceReader reader(in);
  std::vector<RawSample> out;
  while (auto s = reader.next()) out.push_back(std::move(*s));
  return out;
}

void write_trace(std::ostream& out, std::span<const RawSample> samples) {
  for (const auto& s : samples) out << json_io::Json{{"t", s.t}, {"axes", s.axes}}.dump() << '\n';
}

Calibration load_calibration_file(const std::filesystem::path& path) {
  try {
    return json_io::calibration_from_json(read_json_file(path), "");
  } catch (const json_io::FieldError& e) {
    throw ParseError(e.path(), e.what());
  }
}

DeviceDescriptor load_descriptor_file(const std::filesystem::path& path) {
  try {
    return json_io::descriptor_from_json(read_json_file(path), "");
  } catch (const json_io::FieldError& e) {
    throw ParseError(e.path(), e.what());
  }
}

}  // namespace wheelsim
