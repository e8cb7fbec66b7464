#pragma once

// Human-readable experiment and controller files. The format is a strict
// INI dialect: '#' comments, '[section]' or '[section arg]' headers and
// 'key = value' entries where a value is a scalar or a space-separated
// list. Unknown sections and keys are rejected with file:line messages.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "doa/control.hpp"
#include "doa/pkpd.hpp"
#include "doa/simloop.hpp"
#include "doa/tuning.hpp"
#include "doa/woa.hpp"

namespace doa {

// --- low-level document model ---------------------------------------------

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct ConfigSection {
  std::string name;  // e.g. "patient"
  std::string arg;   // e.g. "3"; empty when absent
  int line = 0;
  std::vector<ConfigEntry> entries;
};

struct ConfigDoc {
  std::string label;  // used in error messages
  std::vector<ConfigSection> sections;
};

ConfigDoc parse_config_text(const std::string& text, const std::string& label);

// --- experiment configuration ---------------------------------------------

struct ExperimentConfig {
  SimConfig sim{};
  PdParams pd{};  // cohort-wide defaults; patients may override
  std::vector<PatientProfile> patients;
  WoaConfig woa{};  // dim and box are filled per tuning run
  ControllerBounds bounds_pid{}, bounds_fopid{}, bounds_fofpid{};
  ControllerConfig base{};  // u_max / memory / anti-windup / rules / mf defaults

  const ControllerBounds& bounds_for(ControllerVariant v) const;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// --- controller files -------------------------------------------------------

struct ControllerFile {
  ControllerConfig config;
  std::optional<TuneAudit> audit;
};

// Numbers are written in shortest round-trip form, so save followed by
// load reproduces the exact config.
std::string controller_file_text(const ControllerConfig& cfg, const TuneAudit* audit);
void save_controller_file(const std::filesystem::path& path, const ControllerConfig& cfg,
                          const TuneAudit* audit);
ControllerFile load_controller_file(const std::filesystem::path& path);

// Shortest exact decimal representation (config files only; CSVs use format9).
std::string format_full(double v);

}  // namespace doa
