#include "trapzopt/cli.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "trapzopt/errors.hpp"
#include "trapzopt/io.hpp"
#include "trapzopt/objectives.hpp"
#include "trapzopt/optimizer.hpp"
#include "trapzopt/time_scaling.hpp"
#include "trapzopt/trajectory.hpp"

namespace trapzopt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kDefaultSampleRate = 500.0;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string robot_path;
  std::string waypoints_path;
  std::optional<double> sample_rate;
};

// Settings merged from the config file and command-line flags.
struct RunConfig {
  json doc = json::object();
  fs::path base_dir = ".";
  fs::path out_dir = ".";
  fs::path robot;
  fs::path waypoints;
  double sample_rate = kDefaultSampleRate;
  std::optional<std::uint64_t> seed;

  bool has_block(const char* key) const { return doc.contains(key); }
  const json& block(const char* key) const {
    if (!doc.contains(key)) throw BadConfig(std::string("config is missing the \"") + key + "\" block");
    return doc.at(key);
  }
};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

RunConfig load_run_config(const CommonOptions& opts) {
  RunConfig cfg;
  if (!opts.config_path.empty()) {
    cfg.doc = io::read_json(opts.config_path);
    if (!cfg.doc.is_object()) throw BadConfig("run config must be a JSON object");
    cfg.base_dir = fs::path(opts.config_path).parent_path();
    if (cfg.base_dir.empty()) cfg.base_dir = ".";
    auto path_field = [&](const char* key) -> fs::path {
      if (!cfg.doc.contains(key)) return {};
      if (!cfg.doc.at(key).is_string()) throw BadConfig(std::string("\"") + key + "\" must be a path string");
      return resolve(cfg.base_dir, cfg.doc.at(key).get<std::string>());
    };
    cfg.robot = path_field("robot");
    cfg.waypoints = path_field("waypoints");
    cfg.out_dir = path_field("output_dir");
    if (cfg.out_dir.empty()) cfg.out_dir = ".";
    if (cfg.doc.contains("sample_rate")) {
      if (!cfg.doc.at("sample_rate").is_number()) throw BadConfig("sample_rate must be a number");
      cfg.sample_rate = cfg.doc.at("sample_rate").get<double>();
    }
    if (cfg.doc.contains("pso") && cfg.doc.at("pso").is_object() && cfg.doc.at("pso").contains("seed")) {
      cfg.seed = io::parse_pso_block(cfg.doc.at("pso")).pso.seed;
    }
  }
  if (!opts.robot_path.empty()) cfg.robot = opts.robot_path;
  if (!opts.waypoints_path.empty()) cfg.waypoints = opts.waypoints_path;
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (opts.sample_rate) cfg.sample_rate = *opts.sample_rate;
  if (opts.seed) cfg.seed = opts.seed;
  if (!(cfg.sample_rate > 0.0) || !std::isfinite(cfg.sample_rate)) throw BadConfig("sample rate must be positive");
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw BadConfig("cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());
  return cfg;
}

RobotDescription require_robot(const RunConfig& cfg) {
  if (cfg.robot.empty()) throw BadConfig("no robot description given (--robot or \"robot\" in config)");
  return io::load_robot(cfg.robot);
}

io::WaypointFile require_waypoints(const RunConfig& cfg) {
  if (cfg.waypoints.empty()) throw BadConfig("no waypoint file given (--waypoints or \"waypoints\" in config)");
  return io::load_waypoints(cfg.waypoints);
}

std::vector<double> sample_times(double T, double rate) {
  std::vector<double> times;
  const double dt = 1.0 / rate;
  const auto n = static_cast<std::size_t>(std::floor(T * rate));
  for (std::size_t k = 0; k <= n; ++k) times.push_back(static_cast<double>(k) * dt);
  if (times.back() < T) times.push_back(T);
  return times;
}

json params_json(const std::vector<SegmentParams>& params) {
  json arr = json::array();
  for (const auto& p : params) arr.push_back({p.v, p.a});
  return arr;
}

// --- profile -----------------------------------------------------------------

struct ProfileArgs {
  std::optional<double> v, a, T;
};

int cmd_profile(const CommonOptions& opts, ProfileArgs args, std::ostream& out) {
  const RunConfig cfg = load_run_config(opts);
  if (cfg.has_block("profile")) {
    const json& b = cfg.block("profile");
    auto take = [&](const char* key, std::optional<double>& dst) {
      if (!dst && b.contains(key)) {
        if (!b.at(key).is_number()) throw BadConfig(std::string("profile.") + key + " must be a number");
        dst = b.at(key).get<double>();
      }
    };
    take("v", args.v);
    take("a", args.a);
    take("T", args.T);
  }
  const int given = int(args.v.has_value()) + int(args.a.has_value()) + int(args.T.has_value());
  if (given != 2) {
    throw BadConfig("profile needs exactly two of --v, --a, --T (got " + std::to_string(given) + ")");
  }

  const TrapezoidProfile p = !args.T ? profile_from_v_a(*args.v, *args.a)
                             : !args.a ? profile_from_v_T(*args.v, *args.T)
                                       : profile_from_a_T(*args.a, *args.T);

  out << "v = " << io::format_number(p.v()) << '\n'
      << "a = " << io::format_number(p.a()) << '\n'
      << "T = " << io::format_number(p.duration()) << '\n'
      << "t_a = " << io::format_number(p.ramp_time()) << '\n';

  io::CsvWriter csv(cfg.out_dir / "profile.csv");
  csv.header({"t", "s", "sdot", "sddot"});
  for (double t : sample_times(p.duration(), cfg.sample_rate)) {
    const ProfileState st = p.eval(t);
    csv.row(std::vector<double>{t, st.s, st.s_dot, st.s_ddot});
  }
  return kExitOk;
}

// --- simulate ----------------------------------------------------------------

int cmd_simulate(const CommonOptions& opts, std::ostream& out) {
  const RunConfig cfg = load_run_config(opts);
  const RobotDescription robot = require_robot(cfg);
  const io::WaypointFile wp = require_waypoints(cfg);
  std::optional<std::vector<SegmentParams>> params = wp.params;
  if (cfg.has_block("params")) params = io::parse_waypoints({{"waypoints", json::array()}, {"params", cfg.block("params")}}).params;
  if (!params) throw BadConfig("simulate needs per-segment \"params\" in the waypoint file or config");

  const Trajectory traj = plan_trajectory(wp.waypoints, *params, robot.limits);

  io::CsvWriter curves(cfg.out_dir / "trajectory.csv");
  io::CsvWriter path(cfg.out_dir / "path.csv");
  std::vector<std::string> head{"t"};
  for (const char* prefix : {"q", "qd", "qdd"}) {
    for (std::size_t m = 1; m <= kNumJoints; ++m) head.push_back(prefix + std::to_string(m));
  }
  curves.header(head);
  path.header({"t", "x", "y", "z"});
  for (double t : sample_times(traj.duration(), cfg.sample_rate)) {
    const JointSample s = traj.sample(t);
    std::vector<double> row{t};
    for (const JointVector* vec : {&s.q, &s.q_dot, &s.q_ddot}) row.insert(row.end(), vec->begin(), vec->end());
    curves.row(row);
    const Eigen::Vector3d p = forward_kinematics(robot.model, s.q).position;
    path.row(std::vector<double>{t, p.x(), p.y(), p.z()});
  }

  const ObjectiveReport rep = evaluate_objectives(traj);
  json report = io::to_json(rep);
  report["boundary_times"] = traj.boundary_times();
  report["params"] = params_json(*params);
  io::write_json(cfg.out_dir / "report.json", report);

  out << "segments = " << traj.segments().size() << '\n'
      << "S1 = " << io::format_number(rep.s1) << '\n'
      << "S2 = " << io::format_number(rep.s2) << '\n';
  return kExitOk;
}

// --- sweep -------------------------------------------------------------------

struct SweepArgs {
  std::optional<double> a_fixed;
  std::optional<double> a_per_v;
  std::optional<std::size_t> count;
};

AccelRule parse_accel_rule(const json& sweep_block, const SweepArgs& args, const io::WaypointFile& wp,
                           const JointLimits& limits) {
  if (args.a_fixed) return {AccelRule::Kind::Fixed, *args.a_fixed};
  if (args.a_per_v) return {AccelRule::Kind::Proportional, *args.a_per_v};
  if (sweep_block.contains("a_rule")) {
    const json& r = sweep_block.at("a_rule");
    if (r.contains("fixed") && r.at("fixed").is_number()) return {AccelRule::Kind::Fixed, r.at("fixed").get<double>()};
    if (r.contains("proportional") && r.at("proportional").is_number()) {
      return {AccelRule::Kind::Proportional, r.at("proportional").get<double>()};
    }
    throw BadConfig("sweep.a_rule must be {\"fixed\": a} or {\"proportional\": c}");
  }
  return default_accel_rule(wp.waypoints, limits);
}

int cmd_sweep(const CommonOptions& opts, const SweepArgs& args, std::ostream& out) {
  const RunConfig cfg = load_run_config(opts);
  const json sweep_block = cfg.has_block("sweep") ? cfg.block("sweep") : json::object();
  if (!sweep_block.is_object()) throw BadConfig("\"sweep\" block must be an object");
  const RobotDescription robot = require_robot(cfg);
  const io::WaypointFile wp = require_waypoints(cfg);
  if (wp.waypoints.size() < 2) throw EmptyTrajectory("sweep needs at least 2 waypoints");

  const AccelRule rule = parse_accel_rule(sweep_block, args, wp, robot.limits);
  if (!(rule.value > 0.0)) throw BadConfig("acceleration rule parameter must be positive");

  std::vector<double> grid;
  if (sweep_block.contains("v_grid")) {
    const json& g = sweep_block.at("v_grid");
    if (!g.is_array()) throw BadConfig("sweep.v_grid must be an array of velocities");
    for (const json& v : g) {
      if (!v.is_number()) throw BadConfig("sweep.v_grid entries must be numbers");
      grid.push_back(v.get<double>());
    }
  } else {
    std::size_t count = 50;
    if (sweep_block.contains("count")) {
      if (!sweep_block.at("count").is_number_unsigned()) throw BadConfig("sweep.count must be a positive integer");
      count = sweep_block.at("count").get<std::size_t>();
    }
    if (args.count) count = *args.count;
    grid = default_velocity_grid(wp.waypoints, robot.limits, rule, count);
  }

  const SweepResult res = sweep(wp.waypoints, robot.limits, robot.model, grid, rule);

  io::CsvWriter csv(cfg.out_dir / "sweep.csv");
  csv.header({"v", "end_effector_v", "S1", "S2", "S1_norm", "S2_norm", "ff", "feasible"});
  for (const SweepRow& r : res.rows) {
    csv.row(std::vector<std::string>{io::format_number(r.v), io::format_number(r.end_effector_v),
                                     io::format_number(r.s1), io::format_number(r.s2), io::format_number(r.s1_norm),
                                     io::format_number(r.s2_norm), io::format_number(r.ff),
                                     r.feasible ? "true" : "false"});
  }

  const SweepRow& best = res.rows[res.best];
  const bool interior = res.best != 0 && res.best + 1 != res.rows.size();
  json summary = {
      {"ff_best", res.ff_best},
      {"ff_average", res.ff_average},
      {"ff_worst", res.ff_worst},
      {"F_worst", res.f_worst},
      {"F_average", res.f_average},
      {"best", {{"v", best.v}, {"a", best.a}, {"end_effector_v", best.end_effector_v}, {"S1", best.s1}, {"S2", best.s2}}},
      {"interior_optimum", interior},
      {"feasible_rows", std::count_if(res.rows.begin(), res.rows.end(), [](const SweepRow& r) { return r.feasible; })},
      {"accel_rule", res.accel_rule},
      {"normalization", "min-max over feasible sweep rows"},
      {"end_effector_velocity", "v times mean Cartesian chord length between segment endpoints"},
      {"mean_chord_length", res.mean_chord_length},
  };
  io::write_json(cfg.out_dir / "summary.json", summary);

  out << "best v = " << io::format_number(best.v) << " (end-effector " << io::format_number(best.end_effector_v)
      << " m/s), ff = " << io::format_number(res.ff_best) << '\n'
      << "F_worst = " << io::format_number(res.f_worst) << "%, F_average = " << io::format_number(res.f_average)
      << "%\n";
  return kExitOk;
}

// --- optimize ----------------------------------------------------------------

int cmd_optimize(const CommonOptions& opts, std::optional<std::size_t> threads, std::ostream& out) {
  const RunConfig cfg = load_run_config(opts);
  TrajectoryPsoConfig pso = io::parse_pso_block(cfg.block("pso"));
  if (cfg.seed) pso.pso.seed = *cfg.seed;
  if (threads) pso.pso.threads = *threads;
  const RobotDescription robot = require_robot(cfg);
  const io::WaypointFile wp = require_waypoints(cfg);

  const TrajectoryOptimum best = optimize_trajectory(wp.waypoints, robot.limits, pso);

  io::write_json(cfg.out_dir / "best_params.json", {{"params", params_json(best.params)}});

  io::CsvWriter csv(cfg.out_dir / "convergence.csv");
  csv.header({"iter", "gbest_f"});
  for (std::size_t i = 0; i < best.history.size(); ++i) {
    csv.row(std::vector<std::string>{std::to_string(i), io::format_number(best.history[i])});
  }

  json report = io::to_json(best.report);
  report["params"] = params_json(best.params);
  report["iterations"] = best.history.size() - 1;
  report["seed"] = pso.pso.seed;
  report["audit_grid"] = {{"size", pso.audit_grid},
                          {"feasible_points", best.audit_points},
                          {"ff_best", best.audit_best},
                          {"ff_average", best.audit_mean},
                          {"ff_worst", best.audit_worst}};
  io::write_json(cfg.out_dir / "report.json", report);

  out << "best ff = " << io::format_number(best.report.ff) << " after " << best.history.size() - 1
      << " iterations\n";
  for (std::size_t i = 0; i < best.params.size(); ++i) {
    out << "segment " << i + 1 << ": v = " << io::format_number(best.params[i].v)
        << ", a = " << io::format_number(best.params[i].a) << '\n';
  }
  if (best.report.f_average) out << "F vs audit-grid mean = " << io::format_number(*best.report.f_average) << "%\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trapezoidal trajectory planning with energy/time PSO optimization", "trapzopt"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::uint64_t seed = 0;
  double rate = 0.0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "Run-config JSON file");
    sub->add_option("--seed", seed, "RNG seed (overrides the config)");
    sub->add_option("--out", opts.out_dir, "Output directory");
    sub->add_option("--rate", rate, "Curve sample rate in Hz");
  };
  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("--robot", opts.robot_path, "Robot description JSON");
    sub->add_option("--waypoints", opts.waypoints_path, "Waypoint JSON");
  };

  ProfileArgs profile_args;
  double pv = 0, pa = 0, pT = 0;
  CLI::App* profile = app.add_subcommand("profile", "Build one normalized profile from two of v, a, T");
  add_common(profile);
  auto* opt_v = profile->add_option("--v", pv, "Peak path velocity (1/s)");
  auto* opt_a = profile->add_option("--a", pa, "Path acceleration (1/s^2)");
  auto* opt_T = profile->add_option("--T", pT, "Duration (s)");

  CLI::App* simulate = app.add_subcommand("simulate", "Plan a trajectory and export joint curves");
  add_common(simulate);
  add_inputs(simulate);

  SweepArgs sweep_args;
  double a_fixed = 0, a_per_v = 0;
  std::size_t count = 0;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Sweep peak velocity and score energy/time trade-off");
  add_common(sweep_cmd);
  add_inputs(sweep_cmd);
  auto* opt_af = sweep_cmd->add_option("--a", a_fixed, "Fixed path acceleration");
  auto* opt_ac = sweep_cmd->add_option("--a-per-v", a_per_v, "Use a = c * v with this c");
  opt_af->excludes(opt_ac);
  auto* opt_count = sweep_cmd->add_option("--count", count, "Grid size for the default velocity grid");

  std::size_t threads = 0;
  CLI::App* optimize = app.add_subcommand("optimize", "PSO search for per-segment (v, a)");
  add_common(optimize);
  add_inputs(optimize);
  auto* opt_threads = optimize->add_option("--threads", threads, "Objective evaluation threads (0 = all cores)");

  std::vector<std::string> argv_store{"trapzopt"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  for (CLI::App* sub : app.get_subcommands()) {
    if (sub->count("--seed")) opts.seed = seed;
    if (sub->count("--rate")) opts.sample_rate = rate;
  }

  try {
    if (profile->parsed()) {
      if (opt_v->count()) profile_args.v = pv;
      if (opt_a->count()) profile_args.a = pa;
      if (opt_T->count()) profile_args.T = pT;
      return cmd_profile(opts, profile_args, out);
    }
    if (simulate->parsed()) return cmd_simulate(opts, out);
    if (sweep_cmd->parsed()) {
      if (opt_af->count()) sweep_args.a_fixed = a_fixed;
      if (opt_ac->count()) sweep_args.a_per_v = a_per_v;
      if (opt_count->count()) sweep_args.count = count;
      return cmd_sweep(opts, sweep_args, out);
    }
    if (optimize->parsed()) {
      return cmd_optimize(opts, opt_threads->count() ? std::optional<std::size_t>(threads) : std::nullopt, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace trapzopt::cli
