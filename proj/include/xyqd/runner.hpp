#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "xyqd/run_config.hpp"
#include "xyqd/scaling_fit.hpp"
#include "xyqd/sweep.hpp"

namespace xyqd {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ResultEnvelope {
  nlohmann::json config;
  std::string tool_version;
  std::uint64_t seed = 0;
  double wall_time_seconds = 0.0;
  nlohmann::json payload;
};

struct RunOutcome {
  std::filesystem::path directory;
  bool skipped = false;  // cached result reused
  ResultEnvelope envelope;
  std::vector<std::filesystem::path> files;
};

// Serialization of analysis types. Non-finite numbers become JSON null.
nlohmann::json to_json(const SweepSeries& s, const AnisotropyChoice& a);
SweepSeries series_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScalingFit& f);
nlohmann::json to_json(const ResultEnvelope& e);
ResultEnvelope envelope_from_json(const nlohmann::json& j);

/// Header: h,total_gqd,nn_pair_sum,residual,ground_energy,fidelity_to_prev,degenerate
std::string sweep_csv(const SweepSeries& s);
SweepSeries parse_sweep_csv(const std::string& text);

/// "sweep_theta60_L5" style stem.
std::string series_stem(const AnisotropyChoice& a, int size);

/// Writes via a temporary sibling and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Directory that holds the outputs of `c`: <output_dir>/<mode>-<hash>.
std::filesystem::path result_directory(const RunConfig& c);

RunOutcome run_point(const RunConfig& c);
RunOutcome run_sweep(const RunConfig& c);
RunOutcome run_scan(const RunConfig& c);
RunOutcome run_fit(const RunConfig& c);
RunOutcome run(const RunConfig& c);

/// Critical-point estimate of one series: refined location of the maximum of
/// `q` (total discord by default) over the points after the last ground-state
/// level crossing.
double critical_point_estimate(const SweepSeries& s, Quantity q = Quantity::total_gqd);

}  // namespace xyqd
