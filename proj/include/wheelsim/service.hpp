#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wheelsim/protocol.hpp"
#include "wheelsim/session.hpp"

namespace wheelsim::service {

inline constexpr unsigned short kDefaultPort = 8032;
inline constexpr const char* kLevelDirEnv = "WHEELSIM_LEVEL_DIR";

/// Read-only set of levels, keyed by id.
class LevelRegistry {
 public:
  /// Loads every *.level.json in `dir`. Files that fail to load are skipped
  /// and listed in problems().
  static LevelRegistry load_dir(const std::filesystem::path& dir);

  void add(Level level);
  std::shared_ptr<const Level> find(std::string_view id) const;
  std::vector<std::string> ids() const;
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::map<std::string, std::shared_ptr<const Level>, std::less<>> levels_;
  std::vector<std::string> problems_;
};

struct ServiceConfig {
  std::string address{"0.0.0.0"};
  unsigned short port{kDefaultPort};  ///< 0 picks a free port
  std::filesystem::path level_dir{"levels"};
  std::optional<std::filesystem::path> static_dir;
  std::optional<std::filesystem::path> report_dir;
  ChairParams params;
  SessionConfig session;
  int frame_every{2};  ///< ticks between unforced frames
};

/// Client-bound messages awaiting the socket. A frame queued behind another
/// undelivered frame replaces it and inherits its events, so state is
/// latest-wins while no event is lost.
class OutboundQueue {
 public:
  void push(wire::Message m);
  std::optional<wire::Message> pop();
  bool empty() const { return queue_.empty(); }
  std::size_t size() const { return queue_.size(); }
  std::size_t coalesced_frames() const { return coalesced_; }

 private:
  std::deque<wire::Message> queue_;
  std::size_t coalesced_{0};
};

/// One connection's protocol state machine, independent of sockets and
/// clocks. The transport feeds it messages and ticks and ships whatever it
/// returns.
class LiveSession {
 public:
  enum class Phase { AwaitingHello, Running, Finished };

  LiveSession(std::shared_ptr<const LevelRegistry> levels, ChairParams params, SessionConfig config,
              int frame_every = 2);

  std::vector<wire::Message> on_text(std::string_view text);
  std::vector<wire::Message> on_message(const wire::Message& m);
  /// Advances the simulation one tick with the held input.
  std::vector<wire::Message> on_tick();
  /// Ends a running session for server shutdown; returns the Ended message.
  std::vector<wire::Message> on_shutdown();
  /// The connection is gone; nothing can be sent.
  void on_disconnect();

  Phase phase() const { return phase_; }
  bool running() const { return phase_ == Phase::Running; }
  const std::optional<Session>& session() const { return session_; }
  const JoystickSample& held_input() const { return held_; }
  /// Report of a session that has ended, however it ended.
  std::optional<SessionReport> report() const;
  double dt() const { return config_.dt; }

 private:
  std::vector<wire::Message> finish(EndReason reason);
  JoystickSample to_sample(const wire::Input& in) const;

  std::shared_ptr<const LevelRegistry> levels_;
  ChairParams params_;
  SessionConfig config_;
  int frame_every_;
  Phase phase_{Phase::AwaitingHello};
  std::optional<Session> session_;
  std::optional<DeviceDescriptor> descriptor_;
  std::optional<Calibration> calibration_;
  JoystickSample held_;
};

/// HTTP + WebSocket front end: GET /levels, GET /levels/{id}, WS /session,
/// and optional static files.
class Server {
 public:
  explicit Server(ServiceConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  unsigned short port() const;
  const LevelRegistry& levels() const;

  /// Serves until shutdown() or, when `handle_signals`, SIGINT/SIGTERM.
  void run(std::size_t threads = 1, bool handle_signals = false);
  /// Thread-safe. Running sessions receive Ended before their socket closes.
  void shutdown();

  struct Impl;

 private:
  std::shared_ptr<Impl> impl_;
};

}  // namespace wheelsim::service
