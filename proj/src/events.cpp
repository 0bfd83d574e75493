#include "wheelsim/events.hpp"

#include <array>
#include <stdexcept>
#include <utility>

namespace wheelsim {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 9> kEventNames{{
    {EventKind::MoveStarted, "MoveStarted"},
    {EventKind::MoveStopped, "MoveStopped"},
    {EventKind::OnTrackEntered, "OnTrackEntered"},
    {EventKind::OnTrackExited, "OnTrackExited"},
    {EventKind::WaypointReached, "WaypointReached"},
    {EventKind::Collision, "Collision"},
    {EventKind::RewardShown, "RewardShown"},
    {EventKind::LevelCompleted, "LevelCompleted"},
    {EventKind::SessionTimeout, "SessionTimeout"},
}};

}  // namespace

std::string_view to_string(EventKind k) {
  for (const auto& [kind, name] : kEventNames)
    if (kind == k) return name;
  return "Unknown";
}

EventKind parse_event_kind(std::string_view name) {
  for (const auto& [kind, n] : kEventNames)
    if (n == name) return kind;
  throw std::invalid_argument("unknown event kind '" + std::string(name) + "'");
}

}  // namespace wheelsim
