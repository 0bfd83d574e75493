#pragma once

#include <optional>
#include <vector>

#include "wheelsim/chair.hpp"
#include "wheelsim/events.hpp"
#include "wheelsim/level.hpp"

namespace wheelsim {

inline constexpr double kDefaultDt = 1.0 / 60.0;
/// Below this yaw rate the pose update uses the straight-line formula.
inline constexpr double kStraightYawEpsilon = 1e-6;
/// A wheel faster than this counts as moving (MoveStarted/MoveStopped).
inline constexpr double kMotionThreshold = 1e-3;
/// Extra push-out beyond the penetration depth.
inline constexpr double kContactSkin = 1e-6;
/// A new Collision event needs the pre-step clearance to exceed this.
inline constexpr double kContactTolerance = 1e-3;
inline constexpr double kAssistEpsilon = 1e-3;
inline constexpr double kAssistLookaheadFactor = 3.0;

struct CollisionInfo {
  ObstacleId obstacle;
  Vec2 contact_normal;     ///< unit, points from the obstacle toward the chair
  double penetration{0.0};
};

struct StepConfig {
  double dt{kDefaultDt};
  double assist_gain{0.0};
};

struct StepResult {
  ChairState state;
  std::vector<SimEvent> events;  ///< tick left at 0; the caller stamps it
};

/// Linear arcade mapping, then both wheels clamped to +-max_speed.
WheelCommand map_joystick(const JoystickSample& s, const ChairParams& p);

/// Moves each actual wheel speed toward `cmd` by at most max_accel * dt.
WheelCommand apply_slew(const ChairState& current, const WheelCommand& cmd, double dt,
                        const ChairParams& p);

/// Exact unicycle arc for the wheel speeds held in `st`.
ChairState integrate_pose(const ChairState& st, double dt, const ChairParams& p);

/// Deepest contact between the chair circle and any obstacle.
std::optional<CollisionInfo> detect_collision(const ChairState& st, const Level& level,
                                              const ChairParams& p);

/// Push-out along the contact normal; the chair stops.
ChairState resolve_collision(const ChairState& st, const CollisionInfo& c, const ChairParams& p);

/// Repulsive yaw away from obstacles ahead. gain == 0 returns `cmd` untouched.
WheelCommand assist_adjust(const ChairState& st, const WheelCommand& cmd, const Level& level,
                           const ChairParams& p, double gain);

bool is_moving(const ChairState& st);

/// One fixed-timestep tick: map, assist, slew, integrate, collide.
StepResult step(const ChairState& st, const JoystickSample& s, const Level& level,
                const ChairParams& p, const StepConfig& cfg);

}  // namespace wheelsim
