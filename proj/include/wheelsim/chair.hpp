#pragma once

#include <array>
#include <string>
#include <vector>

#include "wheelsim/geometry.hpp"

namespace wheelsim {

/// Physical envelope of the virtual chair. Defaults are typical powered-chair
/// magnitudes; levels and sessions may override them.
struct ChairParams {
  double track_width{0.6};     ///< m, distance between the driven wheels
  double wheel_radius{0.17};   ///< m
  double chair_radius{0.45};   ///< m, collision circle
  double max_speed{1.5};       ///< m/s, per wheel
  double max_yaw_rate{1.2};    ///< rad/s
  double max_accel{1.0};       ///< m/s^2, per-wheel slew limit

  friend bool operator==(const ChairParams&, const ChairParams&) = default;
};

/// Human-readable list of broken invariants; empty when `p` is usable.
std::vector<std::string> check_params(const ChairParams& p);

/// Throws std::invalid_argument listing every broken invariant.
void validate_params(const ChairParams& p);

/// Normalized two-axis joystick reading. +x turns right, +y drives forward.
struct JoystickSample {
  double x{0.0};
  double y{0.0};
  double t{0.0};  ///< s, session clock

  friend bool operator==(const JoystickSample&, const JoystickSample&) = default;
};

/// Per-wheel speed pair, used both for commands and for slewed speeds.
struct WheelCommand {
  double v_left{0.0};
  double v_right{0.0};

  friend bool operator==(const WheelCommand&, const WheelCommand&) = default;
};

enum WheelIndex : std::size_t { kRearLeft = 0, kRearRight = 1, kFrontLeft = 2, kFrontRight = 3 };

/// Kinematic state. Rear wheels are driven; the front casters are passive and
/// their spin exists only for rendering.
struct ChairState {
  double x{0.0};
  double y{0.0};
  double heading{0.0};  ///< rad in (-pi, pi], CCW from +x
  double v_left{0.0};   ///< m/s, actual
  double v_right{0.0};  ///< m/s, actual
  std::array<double, 4> wheel_spin{};  ///< rad, indexed by WheelIndex

  friend bool operator==(const ChairState&, const ChairState&) = default;
};

inline ChairState at_rest(double x, double y, double heading) {
  ChairState s;
  s.x = x;
  s.y = y;
  s.heading = normalize_angle(heading);
  return s;
}

}  // namespace wheelsim
