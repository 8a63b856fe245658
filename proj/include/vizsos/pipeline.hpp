#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vizsos/model.hpp"

namespace vizsos {

struct Tolerances {
  double gap = 1e-8;  // residual and gap threshold of the solver
  double eig = 1e-6;  // relative eigenvalue cut of the spectral factor
  double col = 1e-5;  // column cut of the suggested mask
  long max_den = 99;  // rounding denominator bound
};

enum class Stage { kIdeal, kGroebner, kSdp, kSolve, kFactor, kRound, kVerify };
const char* to_string(Stage s);
Stage parse_stage(const std::string& text);

/// Everything a run depends on. The JSON form lists every key; missing keys
/// take the defaults below, unknown keys are rejected.
///
///   {
///     "params": "3,2,3,2",
///     "ell": 2,
///     "basis": "monomial",        // or "grouped": {1} and e_q(g) sums
///     "mask": null,               // mask file, monomial basis only
///     "objective": "zero",        // zero | trace-min | trace-max | orbit | custom:FILE
///     "tolerances": {"gap": 1e-8, "eig": 1e-6, "col": 1e-5, "max_den": 99},
///     "max_iterations": 200,
///     "max_steps": 10000000,
///     "cache_dir": "vizsos-cache",
///     "output_dir": "vizsos-out",
///     "stop_after": "verify"
///   }
struct PipelineConfig {
  GraphClassParams params{3, 2, 3, 2};
  unsigned ell = 2;
  std::string basis = "monomial";
  std::optional<std::string> mask;
  std::string objective = "zero";
  Tolerances tol;
  int max_iterations = 200;
  std::uint64_t max_steps = 10'000'000;
  std::string cache_dir = "vizsos-cache";
  std::string output_dir = "vizsos-out";
  Stage stop_after = Stage::kVerify;

  /// Throws std::invalid_argument on a bad value.
  void validate() const;
  nlohmann::ordered_json to_json() const;
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig load(const std::filesystem::path& path);
};

struct StageReport {
  Stage stage;
  bool ok = false;
  nlohmann::ordered_json info;  // dimensions, statuses, file names
  double seconds = 0;
};

struct PipelineReport {
  std::vector<StageReport> stages;
  std::string status;      // outcome of the last stage that ran
  std::string sdp_status;  // Feasible, Infeasible or Indeterminate once solved
  std::string suggestion;  // what to change for the next run, if anything
  bool success = false;    // every stage up to stop_after succeeded

  nlohmann::ordered_json to_json() const;
  /// Stage name to seconds; kept apart from the report so reruns compare equal.
  nlohmann::ordered_json timings_json() const;
  int exit_code() const { return success ? 0 : 1; }
};

/// Runs the stages in order up to config.stop_after, writing every artifact
/// into config.output_dir plus report.json and timings.json there.
PipelineReport run_pipeline(const PipelineConfig& config);

}  // namespace vizsos
