#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wheelsim/chair.hpp"
#include "wheelsim/events.hpp"
#include "wheelsim/input.hpp"
#include "wheelsim/level.hpp"
#include "wheelsim/sim.hpp"

namespace wheelsim {

struct SessionConfig {
  double dt{kDefaultDt};
  double assist_gain{0.0};
  double max_duration{180.0};  ///< s

  friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

struct SessionMetrics {
  double elapsed{0.0};
  double off_route_time{0.0};
  double on_route_time{0.0};
  std::int64_t collision_count{0};
  std::int64_t waypoints_hit{0};
  bool completed{false};
  std::optional<double> completion_time;

  friend bool operator==(const SessionMetrics&, const SessionMetrics&) = default;
};

struct Frame {
  std::int64_t tick{0};
  double sim_time{0.0};
  ChairState chair;
  bool on_track{false};
  std::vector<SimEvent> events;
  SessionMetrics metrics;

  friend bool operator==(const Frame&, const Frame&) = default;
};

enum class EndReason : std::uint8_t { Running, Completed, Timeout, ClientEnded, Disconnected, Shutdown };

std::string_view to_string(EndReason r);
EndReason parse_end_reason(std::string_view name);

/// A joystick sample that becomes the held input from `tick` onward.
struct TraceEntry {
  std::int64_t tick{0};
  JoystickSample sample;
  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct SessionReport {
  std::string level_id;
  ChairParams params;
  SessionConfig config;
  SessionMetrics metrics;
  EndReason end_reason{EndReason::Running};
  std::vector<SimEvent> events;
  std::vector<TraceEntry> trace;

  friend bool operator==(const SessionReport&, const SessionReport&) = default;
};

/// Single-owner state machine for one run of one level. Copyable, so a
/// snapshot taken between ticks resumes exactly.
class Session {
 public:
  Session(std::shared_ptr<const Level> level, ChairParams params, SessionConfig config = {});

  /// Advances one fixed step with `sample` as the held input.
  /// Throws SessionEnded once the session has terminated.
  Frame tick(const JoystickSample& sample);

  /// Terminates without a completion or timeout event (End, disconnect).
  void end(EndReason reason);

  bool ended() const { return reason_ != EndReason::Running; }
  EndReason end_reason() const { return reason_; }
  std::int64_t ticks() const { return tick_; }
  const ChairState& chair() const { return chair_; }
  bool on_track() const { return on_track_; }
  const SessionMetrics& metrics() const { return metrics_; }
  const std::vector<SimEvent>& events() const { return events_; }
  const Level& level() const { return *level_; }
  const ChairParams& params() const { return params_; }
  const SessionConfig& config() const { return config_; }
  std::int64_t max_ticks() const { return max_ticks_; }

  /// Throws SessionNotEnded while running.
  SessionReport finalize() const;

 private:
  void sync_times();

  std::shared_ptr<const Level> level_;
  ChairParams params_;
  SessionConfig config_;
  std::int64_t max_ticks_{0};

  ChairState chair_;
  std::int64_t tick_{0};
  std::int64_t on_ticks_{0};
  std::int64_t off_ticks_{0};
  bool on_track_{true};
  std::size_t next_waypoint_{0};
  EndReason reason_{EndReason::Running};
  SessionMetrics metrics_;
  std::vector<SimEvent> events_;
  std::vector<TraceEntry> trace_;
};

/// Maps timestamped samples onto the fixed tick grid: a sample at time t is
/// held from the first tick k with k * dt >= t. Later samples on the same
/// tick win.
std::vector<TraceEntry> schedule_samples(std::span<const JoystickSample> samples, double dt);

/// Runs a session from a tick-indexed schedule. The run stops at completion
/// or timeout, or at `stop_tick` with `stop_reason` when given.
SessionReport run_schedule(std::shared_ptr<const Level> level, const ChairParams& params,
                           const SessionConfig& config, std::span<const TraceEntry> schedule,
                           std::optional<std::int64_t> stop_tick = std::nullopt,
                           EndReason stop_reason = EndReason::ClientEnded);

/// Re-runs a recorded report against `level`, ending the same way it ended.
SessionReport replay_report(std::shared_ptr<const Level> level, const SessionReport& report);

/// Canonical JSON body (no wall-clock data); byte-stable for equal reports.
std::string canonical_report_json(const SessionReport& report);
SessionReport parse_report_json(std::string_view text);

/// Writes the canonical body plus a "written_at" timestamp via temp file + rename.
void write_report_file(const std::filesystem::path& path, const SessionReport& report);
SessionReport read_report_file(const std::filesystem::path& path);

}  // namespace wheelsim
