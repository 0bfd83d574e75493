#include <algorithm>
#include <cmath>

#include "wheelsim/errors.hpp"
#include "wheelsim/level.hpp"
#include "wheelsim/service.hpp"

namespace wheelsim::service {

// ---- LevelRegistry --------------------------------------------------------

LevelRegistry LevelRegistry::load_dir(const std::filesystem::path& dir) {
  LevelRegistry reg;
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.ends_with(".level.json")) files.push_back(entry.path());
  }
  if (ec) {
    reg.problems_.push_back(dir.string() + ": " + ec.message());
    return reg;
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      reg.add(load_level_file(f));
    } catch (const std::exception& e) {
      reg.problems_.push_back(f.filename().string() + ": " + e.what());
    }
  }
  return reg;
}

void LevelRegistry::add(Level level) {
  auto id = level.id;
  levels_[std::move(id)] = std::make_shared<const Level>(std::move(level));
}

std::shared_ptr<const Level> LevelRegistry::find(std::string_view id) const {
  const auto it = levels_.find(id);
  return it == levels_.end() ? nullptr : it->second;
}

std::vector<std::string> LevelRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : levels_) out.push_back(id);
  return out;
}

// ---- OutboundQueue --------------------------------------------------------

void OutboundQueue::push(wire::Message m) {
  if (auto* incoming = std::get_if<wire::FrameMsg>(&m); incoming && !queue_.empty()) {
    if (auto* pending = std::get_if<wire::FrameMsg>(&queue_.back())) {
      auto events = std::move(pending->frame.events);
      events.insert(events.end(), incoming->frame.events.begin(), incoming->frame.events.end());
      incoming->frame.events = std::move(events);
      queue_.back() = std::move(m);
      ++coalesced_;
      return;
    }
  }
  queue_.push_back(std::move(m));
}

std::optional<wire::Message> OutboundQueue::pop() {
  if (queue_.empty()) return std::nullopt;
  auto m = std::move(queue_.front());
  queue_.pop_front();
  return m;
}

// ---- LiveSession ----------------------------------------------------------

LiveSession::LiveSession(std::shared_ptr<const LevelRegistry> levels, ChairParams params,
                         SessionConfig config, int frame_every)
    : levels_(std::move(levels)), params_(params), config_(config), frame_every_(std::max(frame_every, 1)) {}

std::vector<wire::Message> LiveSession::on_text(std::string_view text) {
  try {
    return on_message(wire::decode(text));
  } catch (const DecodeError& e) {
    return {wire::Error{"bad_message", e.what()}};
  }
}

JoystickSample LiveSession::to_sample(const wire::Input& in) const {
  if (!descriptor_) return clamp_axes(in.axes, in.t);
  std::vector<std::int64_t> raw;
  raw.reserve(in.axes.size());
  for (const double a : in.axes) {
    if (!std::isfinite(a)) throw std::invalid_argument("axes must be finite");
    raw.push_back(std::llround(a));
  }
  return normalize(raw, *descriptor_, *calibration_, in.t);
}

std::vector<wire::Message> LiveSession::on_message(const wire::Message& m) {
  if (phase_ == Phase::Finished) {
    return {wire::Error{"session_ended", "the session has already ended"}};
  }

  if (const auto* hello = std::get_if<wire::Hello>(&m)) {
    if (phase_ != Phase::AwaitingHello) return {wire::Error{"bad_message", "hello already received"}};
    auto level = levels_->find(hello->level_id);
    if (!level) return {wire::Error{"unknown_level", "no level with id '" + hello->level_id + "'"}};
    if (hello->calibration && !hello->device_descriptor)
      return {wire::Error{"bad_message", "calibration requires a device_descriptor"}};
    if (hello->device_descriptor) {
      const auto& d = *hello->device_descriptor;
      const Calibration c = hello->calibration ? *hello->calibration : default_calibration(d);
      auto problems = check_descriptor(d);
      if (problems.empty()) problems = check_calibration(c, d);
      if (!problems.empty()) return {wire::Error{"bad_message", "device: " + problems.front()}};
      descriptor_ = d;
      calibration_ = c;
    }
    try {
      session_.emplace(level, params_, config_);
    } catch (const std::exception& e) {
      return {wire::Error{"unknown_level", std::string("level unusable: ") + e.what()}};
    }
    held_ = JoystickSample{};
    phase_ = Phase::Running;
    return {wire::Welcome{*level, params_, config_.dt}};
  }

  if (const auto* input = std::get_if<wire::Input>(&m)) {
    if (phase_ != Phase::Running) return {wire::Error{"bad_message", "input before hello"}};
    try {
      held_ = to_sample(*input);
    } catch (const std::invalid_argument& e) {
      return {wire::Error{"bad_message", e.what()}};
    }
    return {};
  }

  if (std::holds_alternative<wire::End>(m)) {
    if (phase_ != Phase::Running) return {wire::Error{"bad_message", "end before hello"}};
    return finish(EndReason::ClientEnded);
  }

  return {wire::Error{"bad_message", "unexpected '" + std::string(wire::type_name(m)) + "' from client"}};
}

std::vector<wire::Message> LiveSession::on_tick() {
  if (phase_ != Phase::Running) return {};
  Frame frame = session_->tick(held_);
  std::vector<wire::Message> out;
  if (!frame.events.empty() || frame.tick % frame_every_ == 0) out.emplace_back(wire::FrameMsg{std::move(frame)});
  if (session_->ended()) {
    phase_ = Phase::Finished;
    out.emplace_back(wire::Ended{session_->finalize()});
  }
  return out;
}

std::vector<wire::Message> LiveSession::finish(EndReason reason) {
  session_->end(reason);
  phase_ = Phase::Finished;
  return {wire::Ended{session_->finalize()}};
}

std::vector<wire::Message> LiveSession::on_shutdown() {
  if (phase_ != Phase::Running) return {};
  return finish(EndReason::Shutdown);
}

void LiveSession::on_disconnect() {
  if (phase_ == Phase::Running) session_->end(EndReason::Disconnected);
  phase_ = Phase::Finished;
}

std::optional<SessionReport> LiveSession::report() const {
  if (!session_ || !session_->ended()) return std::nullopt;
  return session_->finalize();
}

}  // namespace wheelsim::service
