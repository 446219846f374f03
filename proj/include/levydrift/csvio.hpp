#pragma once

#include <string>
#include <vector>

#include "levydrift/estimate.hpp"
#include "levydrift/sde.hpp"

namespace levydrift {

/// Columns t,X_1..X_d; one row per grid point.
std::string path_to_csv(const SamplePath& path);

/// Columns interval_index,jump_time,size_1..size_d (axis jumps: one nonzero).
std::string jumps_to_csv(const SamplePath& path);

struct LoadedPath {
  std::vector<double> times;
  std::vector<double> states;
  int d = 0;
};

/// Strict reader for the path CSV schema; errors name the offending row.
LoadedPath path_from_csv(const std::string& content);

/// Reader for the jump-log CSV; returns n_intervals buckets of jump records.
std::vector<std::vector<JumpRecordObs>> jumps_from_csv(const std::string& content,
                                                       int d, int n_intervals);

/// Flat key=value record (JSON object) with the fixed field names
/// theta_hat_*, norm_err_*, retained, retained_fraction, status, objective.
std::string result_to_json(const EstimationResult& result);
/// Same record as a CSV row (header + one line).
std::string result_to_csv(const EstimationResult& result);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace levydrift
