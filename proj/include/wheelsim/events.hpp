#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "wheelsim/level.hpp"

namespace wheelsim {

enum class EventKind : std::uint8_t {
  MoveStarted,
  MoveStopped,
  OnTrackEntered,
  OnTrackExited,
  WaypointReached,
  Collision,
  RewardShown,
  LevelCompleted,
  SessionTimeout,
};

std::string_view to_string(EventKind k);
/// Throws std::invalid_argument for unknown names.
EventKind parse_event_kind(std::string_view name);

struct SimEvent {
  EventKind kind{EventKind::MoveStarted};
  std::int64_t tick{0};
  std::optional<std::size_t> waypoint;   ///< WaypointReached only
  std::optional<ObstacleId> obstacle;    ///< Collision only

  friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

}  // namespace wheelsim
