#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trapzopt/objectives.hpp"
#include "trapzopt/optimizer.hpp"
#include "trapzopt/robot_model.hpp"
#include "trapzopt/trajectory.hpp"

namespace trapzopt::io {

/// Reads a JSON file; throws BadConfig if it is missing or malformed.
nlohmann::json read_json(const std::filesystem::path& path);

/// `{ "dh": [[a, d, alpha] x 6], "v_max": [x6], "a_max": [x6] }`; the limit
/// arrays are optional and default to JointLimits{}.
RobotDescription parse_robot(const nlohmann::json& j);
RobotDescription load_robot(const std::filesystem::path& path);

struct WaypointFile {
  std::vector<JointConfig> waypoints;
  std::optional<std::vector<SegmentParams>> params;
};

/// `{ "waypoints": [[q1..q6] x n], "params": [[v, a] x (n-1)] }`, radians.
WaypointFile parse_waypoints(const nlohmann::json& j);
WaypointFile load_waypoints(const std::filesystem::path& path);

/// Applies a `pso` config block on top of defaults.
TrajectoryPsoConfig parse_pso_block(const nlohmann::json& j);

/// Nine significant digits, round-trip stable for the CSV outputs.
std::string format_number(double x);

/// Writes CRLF-terminated rows; fields are numbers or plain identifiers, so no
/// quoting is ever needed.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& fields);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json to_json(const ObjectiveReport& report);

}  // namespace trapzopt::io
