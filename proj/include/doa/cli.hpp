#pragma once

// Command implementations behind the doawb binary. Each command loads its
// inputs, runs, and writes reports; errors surface as ConfigError (exit 2)
// or NumericError (exit 3), mapped in main().

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "doa/config.hpp"

namespace doa {

struct RunManifest {
  std::filesystem::path config_path;
  std::filesystem::path output_dir;
  std::optional<std::uint64_t> seed_override;
  std::optional<ControllerVariant> variant;
  std::vector<std::filesystem::path> controller_files;
  ExecMode exec = ExecMode::openmp;
};

// tune: WOA-optimize the chosen variant on the configured cohort; writes
// optimum_<variant>.cfg and trace_<variant>.csv.
void cmd_tune(const RunManifest& m);

// evaluate: run one saved controller over the cohort; writes
// traj_patient_<id>.csv per patient plus summary.csv (with a mean row).
void cmd_evaluate(const RunManifest& m);

// compare: run two saved controllers; writes compare_summary.csv and a
// long-format pair_patient_<id>.csv per patient for plotting.
void cmd_compare(const RunManifest& m);

// replay: recompute metrics from trajectory CSVs in the output directory
// and verify them against summary.csv to 1e-9.
void cmd_replay(const RunManifest& m);

// Fixed CSV headers (golden contract, also asserted by tests).
inline constexpr const char* kTrajHeader = "t_min,bis,u_mg_per_min,ce_mg_per_l";
inline constexpr const char* kSummaryHeader = "patient_id,settling_time_min,sse,iae,itae,cost";
inline constexpr const char* kTraceHeader = "iteration,best_fitness";
inline constexpr const char* kCompareHeader = "patient_id,metric,a,b,delta";
inline constexpr const char* kPairHeader = "t_min,controller,bis,u_mg_per_min,ce_mg_per_l";

// Serialize one report's series in the trajectory CSV format.
std::string trajectory_csv(const SimReport& report);

// Parse a trajectory CSV back into samples (inverse of trajectory_csv).
std::vector<SimSample> parse_trajectory_csv(const std::filesystem::path& path);

// One formatted summary row recomputed from a written trajectory, so that
// replay reproduces summary.csv exactly: metrics are measured on the
// quantized samples as they appear in the file, and the cost cell is the
// sum of the parsed printed iae and itae cells.
struct SummaryRow {
  std::string id, settling, sse, iae, itae, cost;
  std::string line() const;
};
SummaryRow summary_row_from_samples(const std::string& id,
                                    const std::vector<SimSample>& samples,
                                    const SimConfig& sim);
SummaryRow summary_mean_row(const std::vector<SummaryRow>& rows);

}  // namespace doa
