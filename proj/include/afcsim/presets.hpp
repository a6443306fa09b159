#pragma once

#include "afcsim/config.hpp"

#include <string>
#include <utility>
#include <vector>

namespace afcsim {

struct PresetResult {
    std::string preset;
    std::vector<std::string> files_written;
    nlohmann::json summary;
};

/// Preset names with one-line descriptions, in listing order.
std::vector<std::pair<std::string, std::string>> list_presets();

/// Run a named experiment preset and write its report bundle (tables + a
/// summary.json embedding the config, seed, and content hash) into out_dir.
/// Throws std::invalid_argument for an unknown preset.
PresetResult run_preset(const std::string& name, const ExperimentConfig& config,
                        const std::string& out_dir);

// Pieces reused by tests and the acceptance suite.

/// Control-pulse noise at the detector plane plus its budget, for the standard
/// single-write cycle described by the config.
ChainResult standard_noise_chain(const ExperimentConfig& config, bool with_input_cycle_c1 = true);

/// Detection window [t_echo - hw, t_echo + hw) of the standard cycle.
std::pair<double, double> detection_window(const ExperimentConfig& config);

ProtocolTimeline standard_timeline(const ExperimentConfig& config);

TimeAxis standard_time_axis(const ExperimentConfig& config);

}  // namespace afcsim
