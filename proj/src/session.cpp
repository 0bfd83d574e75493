#include "wheelsim/session.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wheelsim/errors.hpp"
#include "wheelsim/json_io.hpp"

namespace wheelsim {

namespace {

constexpr std::array<std::pair<EndReason, std::string_view>, 6> kReasonNames{{
    {EndReason::Running, "running"},
    {EndReason::Completed, "completed"},
    {EndReason::Timeout, "timeout"},
    {EndReason::ClientEnded, "client_ended"},
    {EndReason::Disconnected, "disconnected"},
    {EndReason::Shutdown, "shutdown"},
}};

// Tolerance for float tick arithmetic such as 180 / (1/60).
constexpr double kTickSlack = 1e-9;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string_view to_string(EndReason r) {
  for (const auto& [reason, name] : kReasonNames)
    if (reason == r) return name;
  return "running";
}

EndReason parse_end_reason(std::string_view name) {
  for (const auto& [reason, n] : kReasonNames)
    if (n == name) return reason;
  throw std::invalid_argument("unknown end reason '" + std::string(name) + "'");
}

Session::Session(std::shared_ptr<const Level> level, ChairParams params, SessionConfig config)
    : level_(std::move(level)), params_(params), config_(config) {
  if (!level_) throw std::invalid_argument("session needs a level");
  validate_params(params_);
  if (!(config_.dt > 0.0) || !(config_.max_duration > 0.0) || !(config_.assist_gain >= 0.0))
    throw std::invalid_argument("session config needs dt > 0, max_duration > 0, assist_gain >= 0");
  if (auto problems = check_level(*level_, params_.chair_radius); !problems.empty())
    throw ValidationError(std::move(problems));

  max_ticks_ = static_cast<std::int64_t>(std::ceil(config_.max_duration / config_.dt - kTickSlack));
  chair_ = at_rest(level_->start.x, level_->start.y, level_->start.heading);
  on_track_ = is_on_track({chair_.x, chair_.y}, *level_);
}

void Session::sync_times() {
  metrics_.elapsed = static_cast<double>(tick_) * config_.dt;
  metrics_.on_route_time = static_cast<double>(on_ticks_) * config_.dt;
  metrics_.off_route_time = static_cast<double>(off_ticks_) * config_.dt;
}

Frame Session::tick(const JoystickSample& sample) {
  if (ended()) throw SessionEnded();
  if (trace_.empty() || trace_.back().sample != sample) trace_.push_back({tick_, sample});

  StepResult r = step(chair_, sample, *level_, params_, {config_.dt, config_.assist_gain});
  chair_ = r.state;
  ++tick_;

  Frame frame;
  auto emit = [&](SimEvent e) {
    e.tick = tick_;
    frame.events.push_back(e);
  };
  for (auto& e : r.events) {
    if (e.kind == EventKind::Collision) ++metrics_.collision_count;
    emit(e);
  }

  const Vec2 center{chair_.x, chair_.y};
  const bool now_on = is_on_track(center, *level_);
  ++(now_on ? on_ticks_ : off_ticks_);
  if (now_on != on_track_) {
    if (now_on) {
      emit({EventKind::OnTrackEntered});
      emit({EventKind::RewardShown});
    } else {
      emit({EventKind::OnTrackExited});
    }
    on_track_ = now_on;
  }

  if (next_waypoint_ < level_->waypoints.size()) {
    const Circle& wp = level_->waypoints[next_waypoint_];
    if (distance(center, wp.center) < wp.radius) {
      emit({EventKind::WaypointReached, 0, next_waypoint_});
      ++next_waypoint_;
      ++metrics_.waypoints_hit;
    }
  }

  sync_times();
  if (goal_reached(center, *level_)) {
    metrics_.completed = true;
    metrics_.completion_time = metrics_.elapsed;
    reason_ = EndReason::Completed;
    emit({EventKind::LevelCompleted});
  } else if (tick_ >= max_ticks_) {
    reason_ = EndReason::Timeout;
    emit({EventKind::SessionTimeout});
  }

  events_.insert(events_.end(), frame.events.begin(), frame.events.end());
  frame.tick = tick_;
  frame.sim_time = metrics_.elapsed;
  frame.chair = chair_;
  frame.on_track = on_track_;
  frame.metrics = metrics_;
  return frame;
}

void Session::end(EndReason reason) {
  if (reason == EndReason::Running) throw std::invalid_argument("end reason must not be 'running'");
  if (ended()) return;
  reason_ = reason;
}

SessionReport Session::finalize() const {
  if (!ended()) throw SessionNotEnded();
  return {level_->id, params_, config_, metrics_, reason_, events_, trace_};
}

std::vector<TraceEntry> schedule_samples(std::span<const JoystickSample> samples, double dt) {
  std::vector<TraceEntry> out;
  for (const auto& s : samples) {
    const auto k = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(s.t / dt - kTickSlack)));
    if (!out.empty() && out.back().tick > k) throw NonMonotonicTimestamps("samples are not in time order");
    if (!out.empty() && out.back().tick == k) {
      out.back().sample = s;
    } else {
      out.push_back({k, s});
    }
  }
  return out;
}

SessionReport run_schedule(std::shared_ptr<const Level> level, const ChairParams& params,
                           const SessionConfig& config, std::span<const TraceEntry> schedule,
                           std::optional<std::int64_t> stop_tick, EndReason stop_reason) {
  Session session(std::move(level), params, config);
  JoystickSample held;
  std::size_t next = 0;
  while (!session.ended()) {
    if (stop_tick && session.ticks() >= *stop_tick) {
      session.end(stop_reason);
      break;
    }
    while (next < schedule.size() && schedule[next].tick <= session.ticks()) held = schedule[next++].sample;
    session.tick(held);
  }
  return session.finalize();
}

SessionReport replay_report(std::shared_ptr<const Level> level, const SessionReport& report) {
  if (!level || level->id != report.level_id)
    throw std::invalid_argument("report was recorded on level '" + report.level_id + "'");
  std::optional<std::int64_t> stop;
  switch (report.end_reason) {
    case EndReason::ClientEnded:
    case EndReason::Disconnected:
    case EndReason::Shutdown:
      stop = std::llround(report.metrics.elapsed / report.config.dt);
      break;
    default:
      break;
  }
  return run_schedule(std::move(level), report.params, report.config, report.trace, stop, report.end_reason);
}

std::string canonical_report_json(const SessionReport& report) { return json_io::to_json(report).dump(2) + "\n"; }

SessionReport parse_report_json(std::string_view text) {
  json_io::Json doc;
  try {
    doc = json_io::Json::parse(text);
  } catch (const json_io::Json::parse_error& e) {
    throw ParseError("", e.what(), json_io::line_of(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  try {
    return json_io::report_from_json(doc);
  } catch (const json_io::FieldError& e) {
    throw ParseError(e.path(), e.what());
  }
}

void write_report_file(const std::filesystem::path& path, const SessionReport& report) {
  auto doc = json_io::to_json(report);
  doc["written_at"] = utc_now();
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << doc.dump(2) << '\n';
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

SessionReport read_report_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open report " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_report_json(buf.str());
}

}  // namespace wheelsim
