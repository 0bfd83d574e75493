#include "wheelsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wheelsim {

namespace {

double clamp_speed(double v, double max_speed) { return std::clamp(v, -max_speed, max_speed); }

double slew_toward(double current, double target, double max_delta) {
  const double diff = target - current;
  if (std::abs(diff) <= max_delta) return target;
  return current + (diff > 0.0 ? max_delta : -max_delta);
}

// Signed roll distance of a passive caster at body-frame offset (ahead, left)
// for body velocity v and yaw rate w over dt.
double caster_travel(double v, double w, double ahead, double left, double dt) {
  const double vx = v - w * left;
  const double vy = w * ahead;
  const double speed = std::hypot(vx, vy);
  return (vx < 0.0 ? -speed : speed) * dt;
}

constexpr std::size_t kMaxResolveIterations = 8;

}  // namespace

std::vector<std::string> check_params(const ChairParams& p) {
  std::vector<std::string> out;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) out.push_back(std::string(name) + " must be > 0");
  };
  positive(p.track_width, "track_width");
  positive(p.wheel_radius, "wheel_radius");
  positive(p.chair_radius, "chair_radius");
  positive(p.max_speed, "max_speed");
  positive(p.max_yaw_rate, "max_yaw_rate");
  positive(p.max_accel, "max_accel");
  if (p.chair_radius < p.track_width / 2.0) out.emplace_back("chair_radius must be >= track_width / 2");
  if (p.max_yaw_rate * p.track_width / 2.0 > p.max_speed)
    out.emplace_back("max_yaw_rate * track_width / 2 must be <= max_speed");
  return out;
}

void validate_params(const ChairParams& p) {
  const auto problems = check_params(p);
  if (problems.empty()) return;
  std::string msg = "invalid chair parameters";
  for (const auto& s : problems) msg += "; " + s;
  throw std::invalid_argument(msg);
}

WheelCommand map_joystick(const JoystickSample& s, const ChairParams& p) {
  const double v = s.y * p.max_speed;
  const double w = -s.x * p.max_yaw_rate;
  const double half_track = p.track_width / 2.0;
  return {clamp_speed(v - w * half_track, p.max_speed), clamp_speed(v + w * half_track, p.max_speed)};
}

WheelCommand apply_slew(const ChairState& current, const WheelCommand& cmd, double dt,
                        const ChairParams& p) {
  const double max_delta = p.max_accel * dt;
  return {slew_toward(current.v_left, cmd.v_left, max_delta),
          slew_toward(current.v_right, cmd.v_right, max_delta)};
}

ChairState integrate_pose(const ChairState& st, double dt, const ChairParams& p) {
  ChairState out = st;
  const double v = (st.v_left + st.v_right) / 2.0;
  const double w = (st.v_right - st.v_left) / p.track_width;

  if (std::abs(w) < kStraightYawEpsilon) {
    out.x += v * std::cos(st.heading) * dt;
    out.y += v * std::sin(st.heading) * dt;
  } else {
    // Chord of the arc: length 2R sin(w dt / 2) along the mean heading.
    const double dtheta = w * dt;
    const double chord = 2.0 * (v / w) * std::sin(dtheta / 2.0);
    const double mid = st.heading + dtheta / 2.0;
    out.x += chord * std::cos(mid);
    out.y += chord * std::sin(mid);
    out.heading = normalize_angle(st.heading + dtheta);
  }

  const double half_track = p.track_width / 2.0;
  // Casters sit one chair radius ahead of the drive axle.
  const double caster_ahead = p.chair_radius;
  out.wheel_spin[kRearLeft] = normalize_angle(st.wheel_spin[kRearLeft] + st.v_left * dt / p.wheel_radius);
  out.wheel_spin[kRearRight] = normalize_angle(st.wheel_spin[kRearRight] + st.v_right * dt / p.wheel_radius);
  out.wheel_spin[kFrontLeft] = normalize_angle(
      st.wheel_spin[kFrontLeft] + caster_travel(v, w, caster_ahead, half_track, dt) / p.wheel_radius);
  out.wheel_spin[kFrontRight] = normalize_angle(
      st.wheel_spin[kFrontRight] + caster_travel(v, w, caster_ahead, -half_track, dt) / p.wheel_radius);
  return out;
}

std::optional<CollisionInfo> detect_collision(const ChairState& st, const Level& level,
                                              const ChairParams& p) {
  std::optional<CollisionInfo> deepest;
  for (const auto& prox : obstacle_proximities({st.x, st.y}, level)) {
    if (!(prox.distance < p.chair_radius)) continue;
    const double penetration = p.chair_radius - prox.distance;
    if (!deepest || penetration > deepest->penetration)
      deepest = CollisionInfo{prox.id, prox.normal, penetration};
  }
  return deepest;
}

ChairState resolve_collision(const ChairState& st, const CollisionInfo& c, const ChairParams&) {
  ChairState out = st;
  const double push = c.penetration + kContactSkin;
  out.x += c.contact_normal.x * push;
  out.y += c.contact_normal.y * push;
  out.v_left = 0.0;
  out.v_right = 0.0;
  return out;
}

WheelCommand assist_adjust(const ChairState& st, const WheelCommand& cmd, const Level& level,
                           const ChairParams& p, double gain) {
  if (gain == 0.0) return cmd;
  if (gain < 0.0) throw std::invalid_argument("assist gain must be >= 0");
  // Only forward driving has a meaningful front arc.
  if ((cmd.v_left + cmd.v_right) / 2.0 <= 0.0) return cmd;

  const Vec2 center{st.x, st.y};
  const Vec2 facing{std::cos(st.heading), std::sin(st.heading)};
  const double lookahead = kAssistLookaheadFactor * p.chair_radius;

  double yaw = 0.0;
  bool any = false;
  for (const auto& prox : obstacle_proximities(center, level)) {
    if (prox.distance > lookahead) continue;
    const Vec2 to_obstacle = prox.closest - center;
    if (!(dot(to_obstacle, facing) > 0.0)) continue;
    const double clearance = std::max(prox.distance - p.chair_radius, 0.0);
    // Obstacle on the left turns right; dead ahead turns left.
    const double away = cross(facing, to_obstacle) > 0.0 ? -1.0 : 1.0;
    yaw += away * gain / (clearance + kAssistEpsilon);
    any = true;
  }
  if (!any) return cmd;

  yaw = std::clamp(yaw, -p.max_yaw_rate, p.max_yaw_rate);
  const double half_track = p.track_width / 2.0;
  return {clamp_speed(cmd.v_left - yaw * half_track, p.max_speed),
          clamp_speed(cmd.v_right + yaw * half_track, p.max_speed)};
}

bool is_moving(const ChairState& st) {
  return std::max(std::abs(st.v_left), std::abs(st.v_right)) > kMotionThreshold;
}

StepResult step(const ChairState& st, const JoystickSample& s, const Level& level,
                const ChairParams& p, const StepConfig& cfg) {
  StepResult result;
  WheelCommand cmd = map_joystick(s, p);
  cmd = assist_adjust(st, cmd, level, p, cfg.assist_gain);
  const WheelCommand slewed = apply_slew(st, cmd, cfg.dt, p);

  ChairState next = st;
  next.v_left = slewed.v_left;
  next.v_right = slewed.v_right;
  next = integrate_pose(next, cfg.dt, p);

  const auto before = obstacle_proximities({st.x, st.y}, level);
  auto already_touching = [&](const ObstacleId& id) {
    for (const auto& prox : before)
      if (prox.id == id) return prox.distance - p.chair_radius <= kContactTolerance;
    return false;
  };
  auto already_reported = [&](const ObstacleId& id) {
    return std::any_of(result.events.begin(), result.events.end(),
                       [&](const SimEvent& e) { return e.obstacle == id; });
  };

  std::size_t iterations = 0;
  for (auto hit = detect_collision(next, level, p); hit; hit = detect_collision(next, level, p)) {
    if (iterations++ == kMaxResolveIterations) {
      // Pinned between obstacles: fall back to the last valid pose.
      const auto spin = next.wheel_spin;
      next = st;
      next.wheel_spin = spin;
      next.v_left = 0.0;
      next.v_right = 0.0;
      break;
    }
    if (!already_touching(hit->obstacle) && !already_reported(hit->obstacle))
      result.events.push_back(SimEvent{EventKind::Collision, 0, std::nullopt, hit->obstacle});
    next = resolve_collision(next, *hit, p);
  }

  const bool was_moving = is_moving(st);
  const bool moving = is_moving(next);
  if (!was_moving && moving) result.events.push_back(SimEvent{EventKind::MoveStarted});
  if (was_moving && !moving) result.events.push_back(SimEvent{EventKind::MoveStopped});

  result.state = next;
  return result;
}

}  // namespace wheelsim
