#include "trapzopt/io.hpp"

#include <cstdio>
#include <sstream>

#include "trapzopt/errors.hpp"

namespace trapzopt::io {

using nlohmann::json;

namespace {

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw BadConfig(what + " must be a number");
  return j.get<double>();
}

JointVector six_vector(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != kNumJoints) throw BadConfig(what + " must be an array of 6 numbers");
  JointVector out;
  for (std::size_t m = 0; m < kNumJoints; ++m) out[m] = number(j[m], what);
  return out;
}

Bounds bounds_pair(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw BadConfig(what + " must be [lo, hi]");
  return {number(j[0], what), number(j[1], what)};
}

template <typename T>
T unsigned_field(const json& block, const char* key, T fallback) {
  if (!block.contains(key)) return fallback;
  const json& j = block.at(key);
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw BadConfig(std::string("pso.") + key + " must be a non-negative integer");
  }
  return j.get<T>();
}

}  // namespace

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BadConfig("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw BadConfig("malformed JSON in " + path.string() + ": " + e.what());
  }
}

RobotDescription parse_robot(const json& j) {
  if (!j.is_object() || !j.contains("dh")) throw BadConfig("robot description needs a \"dh\" table");
  const json& dh = j.at("dh");
  if (!dh.is_array() || dh.size() != kNumJoints) throw BadConfig("\"dh\" must have exactly 6 rows");
  std::array<DhRow, kNumJoints> rows{};
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const json& r = dh[i];
    if (!r.is_array() || r.size() != 3) throw BadConfig("each DH row must be [a, d, alpha]");
    rows[i] = {number(r[0], "dh.a"), number(r[1], "dh.d"), number(r[2], "dh.alpha")};
  }
  JointLimits limits;
  if (j.contains("v_max")) limits.v_max = six_vector(j.at("v_max"), "v_max");
  if (j.contains("a_max")) limits.a_max = six_vector(j.at("a_max"), "a_max");
  limits.validate();
  return {KinematicModel(rows), limits};
}

RobotDescription load_robot(const std::filesystem::path& path) { return parse_robot(read_json(path)); }

WaypointFile parse_waypoints(const json& j) {
  if (!j.is_object() || !j.contains("waypoints") || !j.at("waypoints").is_array()) {
    throw BadConfig("waypoint file needs a \"waypoints\" array");
  }
  WaypointFile out;
  for (const json& w : j.at("waypoints")) out.waypoints.push_back(six_vector(w, "waypoint"));
  if (j.contains("params")) {
    const json& p = j.at("params");
    if (!p.is_array()) throw BadConfig("\"params\" must be an array of [v, a] pairs");
    std::vector<SegmentParams> params;
    for (const json& pair : p) {
      if (!pair.is_array() || pair.size() != 2) throw BadConfig("each params entry must be [v, a]");
      params.push_back({number(pair[0], "params.v"), number(pair[1], "params.a")});
    }
    out.params = std::move(params);
  }
  return out;
}

WaypointFile load_waypoints(const std::filesystem::path& path) { return parse_waypoints(read_json(path)); }

TrajectoryPsoConfig parse_pso_block(const json& j) {
  if (!j.is_object()) throw BadConfig("\"pso\" block must be an object");
  TrajectoryPsoConfig cfg;
  PsoConfig& pso = cfg.pso;
  pso.swarm_size = unsigned_field(j, "swarm_size", pso.swarm_size);
  pso.max_iters = unsigned_field(j, "max_iters", pso.max_iters);
  pso.stall_iters = unsigned_field(j, "stall_iters", pso.stall_iters);
  pso.threads = unsigned_field(j, "threads", pso.threads);
  pso.seed = unsigned_field<std::uint64_t>(j, "seed", pso.seed);
  cfg.audit_grid = unsigned_field(j, "audit_grid", cfg.audit_grid);
  if (j.contains("w")) pso.w = number(j.at("w"), "pso.w");
  if (j.contains("c1")) pso.c1 = number(j.at("c1"), "pso.c1");
  if (j.contains("c2")) pso.c2 = number(j.at("c2"), "pso.c2");
  if (j.contains("stall_tol")) pso.stall_tol = number(j.at("stall_tol"), "pso.stall_tol");
  if (j.contains("bounds")) {
    const json& b = j.at("bounds");
    if (!b.is_object()) throw BadConfig("pso.bounds must be {\"v\": [lo, hi], \"a\": [lo, hi]}");
    if (b.contains("v")) cfg.v_bounds = bounds_pair(b.at("v"), "pso.bounds.v");
    if (b.contains("a")) cfg.a_bounds = bounds_pair(b.at("a"), "pso.bounds.a");
  }
  return cfg;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw BadConfig("cannot write " + path.string());
}

void CsvWriter::header(const std::vector<std::string>& names) { row(names); }

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_number(values[i]);
  }
  out_ << "\r\n";
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << fields[i];
  }
  out_ << "\r\n";
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BadConfig("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json to_json(const ObjectiveReport& report) {
  json j = {{"S1", report.s1},
            {"S2", report.s2},
            {"S1_norm", report.s1_norm},
            {"S2_norm", report.s2_norm},
            {"ff", report.ff},
            {"normalization", report.normalization}};
  json segs = json::array();
  for (const auto& s : report.segments) segs.push_back({{"T", s.duration}, {"S1", s.energy}});
  j["segments"] = std::move(segs);
  if (report.f_worst) j["F_worst"] = *report.f_worst;
  if (report.f_average) j["F_average"] = *report.f_average;
  return j;
}

}  // namespace trapzopt::io
