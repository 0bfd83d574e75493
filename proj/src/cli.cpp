#include "wheelsim/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "wheelsim/contrast.hpp"
#include "wheelsim/errors.hpp"
#include "wheelsim/input.hpp"
#include "wheelsim/json_io.hpp"
#include "wheelsim/level.hpp"
#include "wheelsim/service.hpp"
#include "wheelsim/session.hpp"

namespace wheelsim::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitInputError = 2;

struct ReplayOptions {
  std::string level;
  std::string trace;
  std::string from_report;
  std::string calibration;
  std::string descriptor;
  std::string params;
  std::string report;
  double assist{0.0};
  double max_duration{SessionConfig{}.max_duration};
};

struct ValidateOptions {
  std::string level;
  AccessibilityRules rules;
};

struct ServeOptions {
  int port{service::kDefaultPort};
  std::string address{"0.0.0.0"};
  std::string level_dir;
  std::string static_dir;
  std::string report_dir;
  double assist{0.0};
  double max_duration{SessionConfig{}.max_duration};
  int threads{2};
};

ChairParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open params file " + path);
  try {
    return json_io::params_from_json(json_io::Json::parse(in), "");
  } catch (const json_io::Json::parse_error& e) {
    throw ParseError("", e.what());
  } catch (const json_io::FieldError& e) {
    throw ParseError(e.path(), e.what());
  }
}

void print_summary(std::ostream& out, const SessionReport& r) {
  const auto& m = r.metrics;
  out << std::fixed << std::setprecision(3);
  out << "level          " << r.level_id << "\n"
      << "ended          " << to_string(r.end_reason) << "\n"
      << "completed      " << (m.completed ? "yes" : "no") << "\n"
      << "elapsed        " << m.elapsed << " s\n"
      << "on route       " << m.on_route_time << " s\n"
      << "off route      " << m.off_route_time << " s\n"
      << "collisions     " << m.collision_count << "\n"
      << "waypoints hit  " << m.waypoints_hit << "\n";
  if (m.completion_time) out << "completion     " << *m.completion_time << " s\n";
  out.unsetf(std::ios::floatfield);
}

int cmd_replay(const ReplayOptions& o, std::ostream& out, std::ostream& err) {
  SessionReport report;
  try {
    auto level = std::make_shared<const Level>(load_level_file(o.level));
    if (!o.from_report.empty()) {
      report = replay_report(level, read_report_file(o.from_report));
    } else {
      const DeviceDescriptor descriptor = o.descriptor.empty() ? default_descriptor() : load_descriptor_file(o.descriptor);
      const Calibration calibration =
          o.calibration.empty() ? default_calibration(descriptor) : load_calibration_file(o.calibration);
      std::vector<JoystickSample> samples;
      for (const auto& raw : read_trace(o.trace)) samples.push_back(normalize(raw.axes, descriptor, calibration, raw.t));

      const ChairParams params = o.params.empty() ? ChairParams{} : load_params(o.params);
      SessionConfig config;
      config.assist_gain = o.assist;
      config.max_duration = o.max_duration;
      const auto schedule = schedule_samples(samples, config.dt);
      report = run_schedule(level, params, config, schedule);
    }
    write_report_file(o.report, report);
  } catch (const std::exception& e) {
    err << "wheelsim replay: " << e.what() << "\n";
    return kExitInputError;
  }
  print_summary(out, report);
  return kExitOk;
}

int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err) {
  Level level;
  try {
    level = load_level_file(o.level);
  } catch (const ParseError& e) {
    out << o.level << ": parse error: " << e.what() << "\n";
    return kExitViolations;
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations()) out << o.level << ": invalid: " << v << "\n";
    return kExitViolations;
  } catch (const std::exception& e) {
    err << "wheelsim validate: " << e.what() << "\n";
    return kExitInputError;
  }
  const auto violations = validate_accessibility(level, o.rules);
  for (const auto& v : violations) out << o.level << ": accessibility: " << v.message << "\n";
  if (!violations.empty()) return kExitViolations;
  out << o.level << ": ok\n";
  return kExitOk;
}

int cmd_serve(const ServeOptions& o, std::ostream& out, std::ostream& err) {
  service::ServiceConfig cfg;
  cfg.port = static_cast<unsigned short>(o.port);
  cfg.address = o.address;
  if (!o.level_dir.empty()) {
    cfg.level_dir = o.level_dir;
  } else if (const char* env = std::getenv(service::kLevelDirEnv); env && *env) {
    cfg.level_dir = env;
  }
  if (!o.static_dir.empty()) cfg.static_dir = o.static_dir;
  if (!o.report_dir.empty()) cfg.report_dir = o.report_dir;
  cfg.session.assist_gain = o.assist;
  cfg.session.max_duration = o.max_duration;
  try {
    service::Server server(cfg);
    out << "wheelsim: serving " << server.levels().ids().size() << " level(s) from " << cfg.level_dir.string()
        << " on port " << server.port() << std::endl;
    server.run(static_cast<std::size_t>(std::max(o.threads, 1)), true);
  } catch (const std::exception& e) {
    err << "wheelsim serve: " << e.what() << "\n";
    return kExitInputError;
  }
  out << "wheelsim: stopped" << std::endl;
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wheelchair driving simulator: replay traces, validate levels, serve sessions"};
  app.require_subcommand(1);

  ReplayOptions replay;
  auto* rp = app.add_subcommand("replay", "Run a recorded input trace headless and write a session report");
  rp->add_option("--level", replay.level, "Level file")->required()->check(CLI::ExistingFile);
  auto* trace_opt = rp->add_option("--trace", replay.trace, "JSON Lines trace of raw axes")->check(CLI::ExistingFile);
  auto* from_opt =
      rp->add_option("--from-report", replay.from_report, "Re-run the input trace stored in a report")->check(CLI::ExistingFile);
  trace_opt->excludes(from_opt);
  rp->add_option("--calibration", replay.calibration, "Calibration file")->check(CLI::ExistingFile);
  rp->add_option("--descriptor", replay.descriptor, "Device descriptor file")->check(CLI::ExistingFile);
  rp->add_option("--params", replay.params, "Chair parameters file")->check(CLI::ExistingFile);
  rp->add_option("--report", replay.report, "Output report path")->required();
  rp->add_option("--assist", replay.assist, "Obstacle assist gain")->check(CLI::NonNegativeNumber);
  rp->add_option("--max-duration", replay.max_duration, "Session limit in seconds")->check(CLI::PositiveNumber);

  ValidateOptions validate;
  auto* vp = app.add_subcommand("validate", "Check a level's invariants, clutter budget and contrast");
  vp->add_option("--level", validate.level, "Level file")->required()->check(CLI::ExistingFile);
  vp->add_option("--max-decorations", validate.rules.max_decorations, "Clutter budget")->check(CLI::NonNegativeNumber);
  vp->add_option("--min-contrast", validate.rules.min_contrast, "Minimum contrast ratio")->check(CLI::Range(1.0, 21.0));

  ServeOptions serve;
  auto* sp = app.add_subcommand("serve", "Run the session service");
  sp->add_option("--port", serve.port, "TCP port")->check(CLI::Range(1, 65535));
  sp->add_option("--address", serve.address, "Bind address");
  sp->add_option("--level-dir", serve.level_dir, "Level directory (default $WHEELSIM_LEVEL_DIR or ./levels)");
  sp->add_option("--static-dir", serve.static_dir, "Directory of UI assets served over HTTP")->check(CLI::ExistingDirectory);
  sp->add_option("--report-dir", serve.report_dir, "Directory for finished session reports");
  sp->add_option("--assist", serve.assist, "Obstacle assist gain")->check(CLI::NonNegativeNumber);
  sp->add_option("--max-duration", serve.max_duration, "Session limit in seconds")->check(CLI::PositiveNumber);
  sp->add_option("--threads", serve.threads, "I/O threads")->check(CLI::Range(1, 64));

  try {
    app.parse(argc, argv);
    if (rp->parsed() && replay.trace.empty() && replay.from_report.empty())
      throw CLI::RequiredError("--trace or --from-report");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (rp->parsed()) return cmd_replay(replay, out, err);
  if (vp->parsed()) return cmd_validate(validate, out, err);
  return cmd_serve(serve, out, err);
}

}  // namespace wheelsim::cli
