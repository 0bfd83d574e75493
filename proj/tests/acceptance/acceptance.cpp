// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "wheelsim/cli.hpp"
#include "wheelsim/contrast.hpp"
#include "wheelsim/input.hpp"
#include "wheelsim/service.hpp"
#include "wheelsim/session.hpp"
#include "wheelsim/sim.hpp"
#include "wire_gen.hpp"

using namespace wheelsim;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ChairParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ChairParams p;
  p.track_width = 0.4 + 0.4 * u(rng);
  p.wheel_radius = 0.1 + 0.15 * u(rng);
  p.chair_radius = p.track_width / 2.0 + 0.3 * u(rng);
  p.max_speed = 0.5 + 1.5 * u(rng);
  p.max_yaw_rate = (0.2 + 0.8 * u(rng)) * p.max_speed / (p.track_width / 2.0);
  p.max_accel = 0.3 + 2.0 * u(rng);
  return p;
}

// ---------------------------------------------------------------------------

Outcome kinematics() {
  constexpr int kCases = 1000;
  constexpr long kSubstepsPerDt = 4000;  // finer than dt/1000, see README
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double dt = kDefaultDt;

  double worst_pos = 0.0, worst_heading = 0.0, worst_pos_coarse = 0.0;
  const auto t0 = Clock::now();
  for (int i = 0; i < kCases; ++i) {
    const ChairParams p = random_params(rng);
    ChairState s = at_rest(20.0 * u(rng) - 10.0, 20.0 * u(rng) - 10.0, 6.0 * u(rng) - 3.0);
    s.v_left = p.max_speed * (2.0 * u(rng) - 1.0);
    s.v_right = p.max_speed * (2.0 * u(rng) - 1.0);
    if (i % 10 == 0) s.v_right = s.v_left;  // exercise the straight branch
    const double horizon = 5.0 * (1.0 - u(rng));
    const double v = (s.v_left + s.v_right) / 2.0;
    const double w = (s.v_right - s.v_left) / p.track_width;
    const testing::EulerPose start{s.x, s.y, s.heading};

    const auto full = static_cast<long>(std::floor(horizon / dt));
    ChairState exact = s;
    for (long k = 0; k < full; ++k) exact = integrate_pose(exact, dt, p);
    const double rest = horizon - static_cast<double>(full) * dt;
    if (rest > 0.0) exact = integrate_pose(exact, rest, p);

    const long steps = full + 1;
    const auto fine = testing::euler_oracle(start, v, w, horizon, steps * kSubstepsPerDt);
    const auto coarse = testing::euler_oracle(start, v, w, horizon, steps * 1000);
    worst_pos = std::max({worst_pos, std::abs(fine.x - exact.x), std::abs(fine.y - exact.y)});
    worst_heading = std::max(worst_heading, std::abs(testing::wrap(fine.heading - exact.heading)));
    worst_pos_coarse = std::max({worst_pos_coarse, std::abs(coarse.x - exact.x), std::abs(coarse.y - exact.y)});
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool pass = worst_pos <= 1e-5 && worst_heading <= 1e-5 && seconds < 10.0;
  return {pass, fmt("%d cases, max |dpos| %.2e m, max |dheading| %.2e rad vs Euler dt/%ld (dt/1000: %.2e m), %.2f s",
                    kCases, worst_pos, worst_heading, kSubstepsPerDt, worst_pos_coarse, seconds)};
}

// ---------------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string without_timestamp(const std::string& text) {
  static const std::regex stamp(R"("written_at": "[^"]*")");
  return std::regex_replace(text, stamp, R"("written_at": "")");
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "wheelsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

// Feeds a report's input schedule through the transport-free service core.
std::optional<SessionReport> online(const SessionReport& offline) {
  auto reg = std::make_shared<service::LevelRegistry>(
      service::LevelRegistry::load_dir(testing::source_path("levels")));
  service::LiveSession live(reg, offline.params, offline.config);
  live.on_message(wire::Hello{offline.level_id});
  std::size_t next = 0;
  std::optional<SessionReport> report;
  for (std::int64_t tick = 0; live.running(); ++tick) {
    while (next < offline.trace.size() && offline.trace[next].tick == tick) {
      const auto& s = offline.trace[next++].sample;
      live.on_message(wire::Input{s.t, {s.x, s.y}});
    }
    for (auto& m : live.on_tick())
      if (auto* e = std::get_if<wire::Ended>(&m)) report = e->report;
  }
  return report;
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "wheelsim_acceptance";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> runs{{"straight_corridor", "straight_full_forward"},
                                                              {"l_turn", "l_turn_drive"},
                                                              {"slalom", "wander"},
                                                              {"obstacle_dense", "wander"}};
  int identical = 0, equivalent = 0;
  std::string failures;
  for (const auto& [level, trace] : runs) {
    std::string body[2];
    for (int k = 0; k < 2; ++k) {
      const auto out = dir / (level + "-" + std::to_string(k) + ".json");
      if (cli({"replay", "--level", testing::source_path("levels/" + level + ".level.json").string(), "--trace",
               testing::source_path("traces/" + trace + ".jsonl").string(), "--report", out.string()}) != 0) {
        failures += " " + level + ":replay-failed";
        continue;
      }
      body[k] = without_timestamp(slurp(out));
    }
    if (!body[0].empty() && body[0] == body[1] &&
        canonical_report_json(parse_report_json(body[0])) == canonical_report_json(parse_report_json(body[1]))) {
      ++identical;
    } else {
      failures += " " + level + ":bytes-differ";
    }

    const auto offline = read_report_file(dir / (level + "-0.json"));
    const auto live = online(offline);
    if (live && live->metrics == offline.metrics && live->events == offline.events &&
        live->end_reason == offline.end_reason) {
      ++equivalent;
    } else {
      failures += " " + level + ":online-differs";
    }
  }
  std::filesystem::remove_all(dir);
  const int n = static_cast<int>(runs.size());
  return {identical == n && equivalent == n,
          fmt("%d/%d fixture traces byte-identical, %d/%d offline == online%s", identical, n, equivalent, n,
              failures.c_str())};
}

// ---------------------------------------------------------------------------

Outcome mapping_limits() {
  constexpr int kCases = 20000;
  std::mt19937_64 rng(515);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto sym = [&] { return 2.0 * u(rng) - 1.0; };
  int bad_clamp = 0, bad_mirror = 0, bad_slew = 0, bad_step_slew = 0, bad_norm_range = 0, bad_odd = 0,
      bad_deadzone = 0, bad_monotone = 0;

  // map_joystick
  for (int i = 0; i < kCases; ++i) {
    const ChairParams p = random_params(rng);
    const JoystickSample s{sym(), sym()};
    const auto c = map_joystick(s, p);
    if (std::abs(c.v_left) > p.max_speed || std::abs(c.v_right) > p.max_speed) ++bad_clamp;
    const auto m = map_joystick({-s.x, s.y}, p);
    if (m.v_left != c.v_right || m.v_right != c.v_left) ++bad_mirror;
  }

  // apply_slew, directly and through step in open space
  Level open;
  open.id = "open";
  open.route = {{-1e4, 0.0}, {1e4, 0.0}};
  open.corridor_half_width = 1e4;
  open.goal = {{1e4, 0.0}, 1.0};
  for (int i = 0; i < kCases; ++i) {
    const ChairParams p = random_params(rng);
    ChairState s = at_rest(0.0, 0.0, 0.0);
    s.v_left = p.max_speed * sym();
    s.v_right = p.max_speed * sym();
    const WheelCommand cmd{p.max_speed * sym(), p.max_speed * sym()};
    const double dt = 0.1 * u(rng) + 1e-4;
    const auto out = apply_slew(s, cmd, dt, p);
    const double bound = p.max_accel * dt + 1e-12;
    auto check = [&](double cur, double target, double got) {
      if (std::abs(got - cur) > bound) return false;
      if (std::abs(target - cur) <= p.max_accel * dt) return got == target;
      return (got - cur) * (target - cur) > 0.0;
    };
    if (!check(s.v_left, cmd.v_left, out.v_left) || !check(s.v_right, cmd.v_right, out.v_right)) ++bad_slew;

    const auto r = step(s, {sym(), sym()}, open, p, {kDefaultDt, 0.0});
    if (std::abs(r.state.v_left - s.v_left) > p.max_accel * kDefaultDt + 1e-12 ||
        std::abs(r.state.v_right - s.v_right) > p.max_accel * kDefaultDt + 1e-12)
      ++bad_step_slew;
  }

  // normalize: range and deadzone over the full raw domain of the default device
  const auto dev = default_descriptor();
  std::uniform_int_distribution<std::int64_t> count(-300, 1323);
  for (int i = 0; i < kCases; ++i) {
    auto cal = default_calibration(dev);
    cal.deadzone = 0.9 * u(rng);
    const std::vector<std::int64_t> raw{count(rng), count(rng)};
    const auto s = normalize(raw, dev, cal, 0.0);
    if (!(std::abs(s.x) <= 1.0 && std::abs(s.y) <= 1.0)) ++bad_norm_range;
    // deflection computed here from the descriptor, not by the library
    auto defl = [](std::int64_t r, std::int64_t lo, std::int64_t hi, std::int64_t c) {
      r = std::clamp(r, lo, hi);
      return r >= c ? double(r - c) / double(hi - c) : -double(c - r) / double(c - lo);
    };
    const double m = std::hypot(defl(raw[0], 0, 1023, 512), defl(raw[1], 0, 1023, 512));
    if (m <= cal.deadzone && (s.x != 0.0 || s.y != 0.0)) ++bad_deadzone;
  }

  // odd symmetry on a device whose range is symmetric about its centre
  DeviceDescriptor symmetric{"symmetric", {{0, 1024}, {0, 1024}}, {AxisRole::Lateral, AxisRole::Forward}};
  const auto sym_cal = default_calibration(symmetric);
  std::uniform_int_distribution<std::int64_t> offset(-600, 600);
  for (int i = 0; i < kCases; ++i) {
    const std::int64_t dx = offset(rng), dy = offset(rng);
    const auto a = normalize(std::vector<std::int64_t>{512 + dx, 512 + dy}, symmetric, sym_cal, 0.0);
    const auto b = normalize(std::vector<std::int64_t>{512 - dx, 512 - dy}, symmetric, sym_cal, 0.0);
    if (a.x != -b.x || a.y != -b.y) ++bad_odd;
  }

  // monotone along rays from the centre on a fine-grained device
  const auto pad = gamepad_descriptor();
  const auto pad_cal = default_calibration(pad);
  std::uniform_int_distribution<std::int64_t> dir(-40, 40);
  std::uniform_int_distribution<std::int64_t> steps(0, 900);
  for (int i = 0; i < kCases; ++i) {
    std::int64_t dx = dir(rng), dy = dir(rng);
    if (dx == 0 && dy == 0) dx = 1;
    std::int64_t k1 = steps(rng), k2 = steps(rng);
    if (k1 == k2) continue;
    if (k1 > k2) std::swap(k1, k2);
    auto at = [&](std::int64_t k) {
      return normalize(std::vector<std::int64_t>{pad_cal.center[0] + k * dx, pad_cal.center[1] + k * dy}, pad, pad_cal,
                       0.0);
    };
    const auto a = at(k1), b = at(k2);
    const double ma = std::hypot(a.x, a.y), mb = std::hypot(b.x, b.y);
    const bool saturated = std::max(std::abs(b.x), std::abs(b.y)) >= 1.0;
    if (mb < ma) ++bad_monotone;
    else if (ma > 0.0 && mb == ma && !saturated) ++bad_monotone;
  }

  const int total = bad_clamp + bad_mirror + bad_slew + bad_step_slew + bad_norm_range + bad_odd + bad_deadzone + bad_monotone;
  return {total == 0,
          fmt("%d cases per property; violations: clamp %d, mirror %d, slew %d, step-slew %d, normalize-range %d, "
              "odd %d, deadzone %d, monotone %d",
              kCases, bad_clamp, bad_mirror, bad_slew, bad_step_slew, bad_norm_range, bad_odd, bad_deadzone,
              bad_monotone)};
}

// ---------------------------------------------------------------------------

std::vector<JoystickSample> random_drive(std::mt19937_64& rng, int ticks, int hold_min, int hold_max) {
  std::uniform_real_distribution<double> axis(-1.0, 1.0);
  std::uniform_int_distribution<int> hold(hold_min, hold_max);
  std::vector<JoystickSample> out;
  JoystickSample cur{};
  int left = 0;
  for (int i = 0; i < ticks; ++i) {
    if (left-- <= 0) {
      cur = {axis(rng), 0.3 + 0.7 * (axis(rng) + 1.0) / 2.0 * (i % 3 == 0 ? -1.0 : 1.0), 0.0};
      left = hold(rng);
    }
    out.push_back(cur);
  }
  return out;
}

Outcome metrics_oracle() {
  const std::vector<std::string> levels{"straight_corridor", "l_turn", "slalom", "obstacle_dense"};
  std::mt19937_64 rng(4242);
  const double dt = kDefaultDt;
  double worst_off = 0.0, worst_sum = 0.0, total_off = 0.0;
  for (int run = 0; run < 20; ++run) {
    const auto level = testing::fixture_level(levels[run % levels.size()]);
    Session s(level, ChairParams{});
    std::int64_t off = 0;
    for (const auto& in : random_drive(rng, 60 * 40, 20, 120)) {
      if (s.ended()) break;
      const auto f = s.tick(in);
      if (testing::route_distance(f.chair.x, f.chair.y, level->route) > level->corridor_half_width) ++off;
    }
    s.end(EndReason::ClientEnded);
    const auto m = s.finalize().metrics;
    worst_off = std::max(worst_off, std::abs(m.off_route_time - static_cast<double>(off) * dt));
    worst_sum = std::max(worst_sum, std::abs(m.on_route_time + m.off_route_time - m.elapsed));
    total_off += m.off_route_time;
  }
  return {worst_off <= dt && worst_sum <= dt && total_off > 0.0,
          fmt("20 runs, max |off_route - oracle| %.2e s, max |on+off-elapsed| %.2e s (dt %.4f), %.1f s off-route in total",
              worst_off, worst_sum, dt, total_off)};
}

// ---------------------------------------------------------------------------

bool alternates(const std::vector<SimEvent>& events, EventKind first, EventKind second) {
  int expect = 0;
  for (const auto& e : events) {
    if (e.kind != first && e.kind != second) continue;
    if (e.kind != (expect == 0 ? first : second)) return false;
    expect ^= 1;
  }
  return true;
}

Outcome collision_safety() {
  const auto level = testing::fixture_level("obstacle_dense");
  std::mt19937_64 rng(909);
  constexpr std::int64_t kSteps = 100000;
  constexpr int kRuns = 10;
  const ChairParams p;
  double worst = std::numeric_limits<double>::infinity();
  std::int64_t steps = 0, collisions = 0;
  int bad_track = 0, bad_move = 0;
  for (int run = 0; run < kRuns; ++run) {
    SessionConfig cfg;
    cfg.max_duration = 1e6;
    cfg.assist_gain = run % 2 == 0 ? 0.0 : 0.05 * run;
    Session s(level, p, cfg);
    for (const auto& in : random_drive(rng, static_cast<int>(kSteps / kRuns), 10, 90)) {
      if (s.ended()) break;
      const auto f = s.tick(in);
      ++steps;
      worst = std::min(worst, testing::min_clearance(f.chair.x, f.chair.y, p.chair_radius, *level));
    }
    s.end(EndReason::ClientEnded);
    const auto r = s.finalize();
    collisions += r.metrics.collision_count;
    if (!alternates(r.events, EventKind::OnTrackExited, EventKind::OnTrackEntered)) ++bad_track;
    if (!alternates(r.events, EventKind::MoveStarted, EventKind::MoveStopped)) ++bad_move;
  }
  return {steps >= kSteps && worst >= -1e-6 && bad_track == 0 && bad_move == 0 && collisions > 0,
          fmt("%lld steps, min clearance %.3e m, %lld collisions, alternation failures: track %d, move %d",
              static_cast<long long>(steps), worst, static_cast<long long>(collisions), bad_track, bad_move)};
}

// ---------------------------------------------------------------------------

Outcome contrast() {
  const double bw = contrast_ratio({0, 0, 0}, {255, 255, 255});
  const double grey = contrast_ratio({0x77, 0x77, 0x77}, {255, 255, 255});
  const double oracle =
      testing::wcag_ratio(testing::wcag_luminance(0x77, 0x77, 0x77), testing::wcag_luminance(255, 255, 255));
  Level l = load_level_file(testing::source_path("tests/fixtures/low_contrast.level.json"));
  const auto v = validate_accessibility(l);
  const bool flagged = v.size() == 1 && v[0].kind == ViolationKind::Contrast;
  const int exit_code = cli({"validate", "--level", testing::source_path("tests/fixtures/low_contrast.level.json").string()});
  const bool pass = bw == 21.0 && grey < 4.5 && std::abs(grey - oracle) <= 1e-12 && flagged && exit_code == 1;
  return {pass, fmt("black/white %.17g, #777777/#FFFFFF %.6f (oracle %.6f), validator %s, validate exit %d", bw, grey,
                    oracle, flagged ? "flags it" : "misses it", exit_code)};
}

// ---------------------------------------------------------------------------

Outcome timeout() {
  const double dt = kDefaultDt;
  const SessionConfig defaults;
  auto reg = std::make_shared<service::LevelRegistry>(
      service::LevelRegistry::load_dir(testing::source_path("levels")));
  service::LiveSession live(reg, ChairParams{}, defaults);
  live.on_message(wire::Hello{"straight_corridor"});
  std::optional<SessionReport> report;
  while (live.running())
    for (auto& m : live.on_tick())
      if (auto* e = std::get_if<wire::Ended>(&m)) report = e->report;
  const bool timed_out = report && report->end_reason == EndReason::Timeout && !report->events.empty() &&
                         report->events.back().kind == EventKind::SessionTimeout;
  const double elapsed = report ? report->metrics.elapsed : -1.0;
  const bool pass = defaults.max_duration == 180.0 && timed_out && std::abs(elapsed - 180.0) <= dt;
  return {pass, fmt("default max_duration %.1f s, silent session ended %s at %.4f s", defaults.max_duration,
                    timed_out ? "with SessionTimeout" : "without SessionTimeout", elapsed)};
}

// ---------------------------------------------------------------------------

Outcome protocol() {
  constexpr int kPerVariant = 1000;
  testing::WireGen gen(77);
  int failures = 0;
  for (int variant = 0; variant < testing::kWireVariants; ++variant)
    for (int i = 0; i < kPerVariant; ++i) {
      const auto m = gen.message(variant);
      if (m.index() != static_cast<std::size_t>(variant) || wire::decode(wire::encode(m)) != m) ++failures;
    }

  // slow client: the socket drains one message every few ticks
  auto reg = std::make_shared<service::LevelRegistry>(
      service::LevelRegistry::load_dir(testing::source_path("levels")));
  SessionConfig cfg;
  cfg.max_duration = 90.0;
  service::LiveSession live(reg, ChairParams{}, cfg);
  service::OutboundQueue queue;
  for (auto& m : live.on_message(wire::Hello{"obstacle_dense"})) queue.push(std::move(m));
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> gap(1, 25);
  std::vector<SimEvent> delivered;
  std::optional<SessionReport> ended;
  int frames_delivered = 0;
  auto deliver = [&] {
    auto m = queue.pop();
    if (!m) return;
    if (auto* f = std::get_if<wire::FrameMsg>(&*m)) {
      ++frames_delivered;
      delivered.insert(delivered.end(), f->frame.events.begin(), f->frame.events.end());
    } else if (auto* e = std::get_if<wire::Ended>(&*m)) {
      ended = e->report;
    }
  };
  const auto drive = random_drive(rng, 60 * 90, 5, 60);
  int until_next = gap(rng);
  for (std::size_t tick = 0; live.running(); ++tick) {
    const auto& s = drive[std::min(tick, drive.size() - 1)];
    live.on_message(wire::Input{s.t, {s.x, s.y}});
    for (auto& m : live.on_tick()) queue.push(std::move(m));
    if (--until_next == 0) {
      deliver();
      until_next = gap(rng);
    }
  }
  while (!queue.empty()) deliver();
  const bool no_loss = ended && delivered == ended->events && !delivered.empty();
  return {failures == 0 && no_loss && queue.coalesced_frames() > 0,
          fmt("%d messages x %d variants, %d round-trip failures; slow client: %zu events delivered in %d frames "
              "(%zu frames coalesced), %s",
              kPerVariant, testing::kWireVariants, failures, delivered.size(), frames_delivered,
              queue.coalesced_frames(), no_loss ? "none lost" : "events lost or duplicated")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"kinematics oracle", kinematics},
      {"determinism", determinism},
      {"mapping/limits", mapping_limits},
      {"metrics oracle", metrics_oracle},
      {"collision safety", collision_safety},
      {"contrast validator", contrast},
      {"session timeout", timeout},
      {"protocol", protocol},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
