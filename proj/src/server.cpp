#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/asio/signal_set.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <nlohmann/json.hpp>

#include "wheelsim/service.hpp"

namespace wheelsim::service {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kMaxCatchUpTicks = 30;
constexpr auto kShutdownGrace = std::chrono::seconds(3);

std::string_view mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".wav") return "audio/wav";
  if (ext == ".mp3") return "audio/mpeg";
  return "application/octet-stream";
}

}  // namespace

class WsSession;

struct Server::Impl : std::enable_shared_from_this<Server::Impl> {
  ServiceConfig config;
  std::shared_ptr<const LevelRegistry> levels;
  net::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::mutex sessions_mutex;
  std::vector<std::weak_ptr<WsSession>> sessions;
  std::atomic<bool> stopping{false};
  std::atomic<std::uint64_t> report_counter{0};

  void accept();
  void register_session(const std::shared_ptr<WsSession>& s);
  void begin_shutdown();
  void save_report(const SessionReport& report);
  http::response<http::string_body> handle(const http::request<http::string_body>& req);
};

// One WebSocket client running one session at a fixed wall-clock tick rate.
class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, std::shared_ptr<Server::Impl> server)
      : ws_(std::move(socket)),
        timer_(ws_.get_executor()),
        server_(std::move(server)),
        live_(server_->levels, server_->config.params, server_->config.session, server_->config.frame_every) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

  void shutdown() {
    net::post(ws_.get_executor(), [self = shared_from_this()] {
      self->deliver(self->live_.on_shutdown());
      self->closing_ = true;
      self->flush();
    });
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    if (server_->stopping) {
      closing_ = true;
      flush();
      return;
    }
    read();
  }

  void read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      gone();
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    const bool was_waiting = live_.phase() == LiveSession::Phase::AwaitingHello;
    deliver(live_.on_text(text));
    if (was_waiting && live_.running()) start_clock();
    if (!closed_) read();
  }

  void start_clock() {
    epoch_ = Clock::now();
    ticks_ = 0;
    schedule_tick();
  }

  Clock::time_point deadline(std::int64_t tick) const {
    const auto offset = std::chrono::duration<double>(static_cast<double>(tick) * live_.dt());
    return epoch_ + std::chrono::duration_cast<Clock::duration>(offset);
  }

  void schedule_tick() {
    timer_.expires_at(deadline(ticks_ + 1));
    timer_.async_wait(beast::bind_front_handler(&WsSession::on_timer, shared_from_this()));
  }

  void on_timer(beast::error_code ec) {
    if (ec || !live_.running()) return;
    const auto now = Clock::now();
    for (int i = 0; i < kMaxCatchUpTicks && live_.running() && deadline(ticks_ + 1) <= now; ++i) {
      ++ticks_;
      deliver(live_.on_tick());
    }
    if (live_.running()) schedule_tick();
  }

  void deliver(std::vector<wire::Message> msgs) {
    for (auto& m : msgs) {
      if (const auto* ended = std::get_if<wire::Ended>(&m)) {
        server_->save_report(ended->report);
        closing_ = true;
      }
      outbox_.push(std::move(m));
    }
    flush();
  }

  void flush() {
    if (writing_ || closed_) return;
    auto next = outbox_.pop();
    if (!next) {
      if (closing_) close();
      return;
    }
    writing_ = true;
    current_ = wire::encode(*next);
    ws_.text(true);
    ws_.async_write(net::buffer(current_), beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    writing_ = false;
    if (ec) {
      gone();
      return;
    }
    flush();
  }

  void close() {
    if (closed_) return;
    closed_ = true;
    timer_.cancel();
    ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {});
  }

  void gone() {
    if (live_.running()) {
      live_.on_disconnect();
      if (auto r = live_.report()) server_->save_report(*r);
    }
    closed_ = true;
    timer_.cancel();
  }

  websocket::stream<beast::tcp_stream> ws_;
  net::steady_timer timer_;
  std::shared_ptr<Server::Impl> server_;
  LiveSession live_;
  beast::flat_buffer buffer_;
  OutboundQueue outbox_;
  std::string current_;
  bool writing_{false};
  bool closing_{false};
  bool closed_{false};
  Clock::time_point epoch_;
  std::int64_t ticks_{0};
};

// Plain HTTP connection; hands WebSocket upgrades on /session to WsSession.
class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, std::shared_ptr<Server::Impl> server)
      : stream_(std::move(socket)), server_(std::move(server)) {}

  void run() {
    net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::read, shared_from_this()));
  }

 private:
  void read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (ec) return;

    if (websocket::is_upgrade(req_)) {
      if (req_.target() == "/session" && !server_->stopping) {
        stream_.expires_never();
        auto ws = std::make_shared<WsSession>(stream_.release_socket(), server_);
        server_->register_session(ws);
        ws->run(std::move(req_));
        return;
      }
      res_ = std::make_shared<http::response<http::string_body>>(http::status::not_found, req_.version());
      res_->set(http::field::content_type, "text/plain");
      res_->body() = "no websocket endpoint here\n";
      res_->prepare_payload();
    } else {
      res_ = std::make_shared<http::response<http::string_body>>(server_->handle(req_));
    }
    http::async_write(stream_, *res_, beast::bind_front_handler(&HttpSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) return;
    if (!res_->keep_alive()) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    read();
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  std::shared_ptr<http::response<http::string_body>> res_;
  std::shared_ptr<Server::Impl> server_;
};

void Server::Impl::accept() {
  acceptor.async_accept(net::make_strand(ioc), [self = shared_from_this()](beast::error_code ec, tcp::socket socket) {
    if (ec) return;  // acceptor closed
    std::make_shared<HttpSession>(std::move(socket), self)->run();
    if (!self->stopping) self->accept();
  });
}

void Server::Impl::register_session(const std::shared_ptr<WsSession>& s) {
  std::lock_guard lock(sessions_mutex);
  std::erase_if(sessions, [](const auto& w) { return w.expired(); });
  sessions.push_back(s);
}

void Server::Impl::begin_shutdown() {
  if (stopping.exchange(true)) return;
  net::post(ioc, [self = shared_from_this()] {
    beast::error_code ec;
    self->acceptor.close(ec);
    std::vector<std::shared_ptr<WsSession>> live;
    {
      std::lock_guard lock(self->sessions_mutex);
      for (auto& w : self->sessions)
        if (auto s = w.lock()) live.push_back(std::move(s));
    }
    for (auto& s : live) s->shutdown();

    // Stop once every session object is gone, or after the grace period.
    auto timer = std::make_shared<net::steady_timer>(self->ioc);
    auto give_up = Clock::now() + kShutdownGrace;
    auto poll = std::make_shared<std::function<void()>>();
    *poll = [self, timer, give_up, poll] {
      bool any = false;
      {
        std::lock_guard lock(self->sessions_mutex);
        for (auto& w : self->sessions) any = any || !w.expired();
      }
      if (!any || Clock::now() >= give_up) {
        self->ioc.stop();
        *poll = nullptr;
        return;
      }
      timer->expires_after(std::chrono::milliseconds(20));
      timer->async_wait([poll](beast::error_code) {
        if (*poll) (*poll)();
      });
    };
    (*poll)();
  });
}

void Server::Impl::save_report(const SessionReport& report) {
  if (!config.report_dir) return;
  const auto n = ++report_counter;
  const auto path = *config.report_dir / (report.level_id + "-" + std::to_string(n) + ".report.json");
  try {
    std::filesystem::create_directories(*config.report_dir);
    write_report_file(path, report);
  } catch (const std::exception& e) {
    std::cerr << "wheelsim: could not save report " << path << ": " << e.what() << "\n";
  }
}

http::response<http::string_body> Server::Impl::handle(const http::request<http::string_body>& req) {
  auto reply = [&](http::status status, std::string_view type, std::string body) {
    http::response<http::string_body> res{status, req.version()};
    res.set(http::field::server, "wheelsim");
    res.set(http::field::content_type, std::string(type));
    res.keep_alive(req.keep_alive());
    res.body() = std::move(body);
    res.prepare_payload();
    return res;
  };

  if (req.method() != http::verb::get && req.method() != http::verb::head)
    return reply(http::status::method_not_allowed, "text/plain", "only GET is supported\n");

  std::string target(req.target());
  if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);

  if (target == "/levels" || target == "/levels/") {
    return reply(http::status::ok, "application/json", nlohmann::json(levels->ids()).dump() + "\n");
  }
  if (target.starts_with("/levels/")) {
    const auto id = target.substr(8);
    if (auto level = levels->find(id)) return reply(http::status::ok, "application/json", serialize_level(*level));
    return reply(http::status::not_found, "application/json",
                 nlohmann::json{{"code", "unknown_level"}, {"message", "no level '" + id + "'"}}.dump() + "\n");
  }

  if (config.static_dir && target.find("..") == std::string::npos) {
    auto rel = target == "/" ? std::string("index.html") : target.substr(1);
    const auto path = *config.static_dir / rel;
    std::ifstream in(path, std::ios::binary);
    if (in && std::filesystem::is_regular_file(path)) {
      std::ostringstream buf;
      buf << in.rdbuf();
      return reply(http::status::ok, mime_type(path), buf.str());
    }
  }
  return reply(http::status::not_found, "text/plain", "not found\n");
}

Server::Server(ServiceConfig config) : impl_(std::make_shared<Impl>()) {
  impl_->config = std::move(config);
  auto registry = LevelRegistry::load_dir(impl_->config.level_dir);
  for (const auto& p : registry.problems()) std::cerr << "wheelsim: skipping level " << p << "\n";
  impl_->levels = std::make_shared<const LevelRegistry>(std::move(registry));

  const auto address = net::ip::make_address(impl_->config.address);
  const tcp::endpoint endpoint{address, impl_->config.port};
  auto& acc = impl_->acceptor;
  acc.open(endpoint.protocol());
  acc.set_option(net::socket_base::reuse_address(true));
  acc.bind(endpoint);
  acc.listen(net::socket_base::max_listen_connections);
}

Server::~Server() {
  impl_->stopping = true;
  impl_->ioc.stop();
}

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

const LevelRegistry& Server::levels() const { return *impl_->levels; }

void Server::run(std::size_t threads, bool handle_signals) {
  std::optional<net::signal_set> signals;
  if (handle_signals) {
    signals.emplace(impl_->ioc, SIGINT, SIGTERM);
    signals->async_wait([impl = impl_](beast::error_code ec, int) {
      if (!ec) impl->begin_shutdown();
    });
  }
  impl_->accept();

  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back([this] { impl_->ioc.run(); });
  impl_->ioc.run();
  for (auto& t : pool) t.join();
}

void Server::shutdown() { impl_->begin_shutdown(); }

}  // namespace wheelsim::service
