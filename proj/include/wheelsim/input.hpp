#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wheelsim/chair.hpp"

namespace wheelsim {

enum class AxisRole : std::uint8_t { Lateral, Forward, Unused };

struct AxisRange {
  std::int64_t raw_min{0};
  std::int64_t raw_max{1023};
  friend bool operator==(const AxisRange&, const AxisRange&) = default;
};

/// Describes an input device's raw axes and which of them steer.
struct DeviceDescriptor {
  std::string device_id;
  std::vector<AxisRange> axis_ranges;
  std::vector<AxisRole> axis_roles;  ///< same length as axis_ranges

  friend bool operator==(const DeviceDescriptor&, const DeviceDescriptor&) = default;
};

struct Calibration {
  std::string device_id;
  std::vector<std::int64_t> center;
  double deadzone{0.1};
  std::vector<double> gain;
  std::vector<bool> invert;

  friend bool operator==(const Calibration&, const Calibration&) = default;
};

inline constexpr double kMinDeadzone = 0.05;
inline constexpr double kMaxCalibratedDeadzone = 0.95;
inline constexpr double kDefaultDeadzone = 0.1;
inline constexpr std::size_t kMinCalibrationSamples = 30;
/// Synthetic raw range for float gamepad axes.
inline constexpr std::int64_t kGamepadRawMax = 65535;

/// Two axes on a 10-bit ADC, lateral then forward.
DeviceDescriptor default_descriptor();
/// Browser gamepad prescaled onto [0, kGamepadRawMax].
DeviceDescriptor gamepad_descriptor();
/// Midpoint centers, kDefaultDeadzone, unit gain, no inversion.
Calibration default_calibration(const DeviceDescriptor& d);

std::vector<std::string> check_descriptor(const DeviceDescriptor& d);
std::vector<std::string> check_calibration(const Calibration& c, const DeviceDescriptor& d);

std::size_t lateral_axis(const DeviceDescriptor& d);
std::size_t forward_axis(const DeviceDescriptor& d);

/// Per-axis value in [-1, 1] before gain, inversion and deadzone. Each side
/// of the center scales independently so both extremes map to +-1.
double axis_deflection(std::int64_t raw, const AxisRange& range, std::int64_t center);

/// Raw counts to a JoystickSample with a radial rescaled deadzone.
/// Throws DescriptorMismatch when the axis count is wrong.
JoystickSample normalize(std::span<const std::int64_t> raw, const DeviceDescriptor& d,
                         const Calibration& c, double t);

/// Already-normalized float axes (lateral, forward), clamped to [-1, 1].
/// Throws DescriptorMismatch unless exactly two finite axes are given.
JoystickSample clamp_axes(std::span<const double> axes, double t);

/// Center from the mean resting position, deadzone from the resting noise.
/// Throws InsufficientSamples below kMinCalibrationSamples.
Calibration calibrate_center(std::span<const std::vector<std::int64_t>> resting_samples,
                             const DeviceDescriptor& d);

struct RawSample {
  double t{0.0};
  std::vector<std::int64_t> axes;
  friend bool operator==(const RawSample&, const RawSample&) = default;
};

/// Streams a JSON Lines trace ({"t": seconds, "axes": [int, ...]} per line).
/// Blank lines are skipped.
class TraceReader {
 public:
  explicit TraceReader(std::istream& in) : in_(in) {}

  /// Next sample, or nullopt at end of input. Throws ParseError and
  /// NonMonotonicTimestamps.
  std::optional<RawSample> next();

 private:
  std::istream& in_;
  std::size_t line_{0};
  std::optional<double> last_t_;
};

std::vector<RawSample> read_trace(const std::filesystem::path& path);
void write_trace(std::ostream& out, std::span<const RawSample> samples);

Calibration load_calibration_file(const std::filesystem::path& path);
DeviceDescriptor load_descriptor_file(const std::filesystem::path& path);

}  // namespace wheelsim
