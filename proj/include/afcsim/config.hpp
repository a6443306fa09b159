#pragma once

#include "afcsim/comb.hpp"
#include "afcsim/counting.hpp"
#include "afcsim/noise.hpp"
#include "afcsim/spinwave.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace afcsim {

struct GridConfig {
    double span_mhz = 20.0;
    std::uint64_t n_points = 16384;
};

struct PulseConfig {
    double fwhm_us = 2.0;
    double center_us = 0.0;
    double carrier_detuning_mhz = 0.0;
};

struct CombConfig {
    double afc_delay_us = 6.0;  // 1/Delta
    double finesse = 3.0;
    double peak_depth = 2.4;
    double background_depth = 0.0;
    std::string tooth_shape = "square";
    double bandwidth_mhz = 8.0;
    double max_total_depth = 2.4;
    double blur_sigma_khz = 30.0;  // laser-linewidth tooth blur
    int pass_count = 1;            // configured depth is the double-pass total
};

struct TimelineConfig {
    double t_s_us = 21.0;
    double t_c1_offset_us = 3.5;
};

struct FilterConfig {
    double spatial_suppression = 1.0;
    double fp_fwhm_mhz = 7.5;
    double fp_center_detuning_mhz = 0.0;
    bool fp_enabled = true;
    double aom_off_transmission = 1e-6;
    double aom_ramp_us = 0.0;
    double grating_band_mhz = 1e5;
    double grating_out_of_band = 1e-3;
};

struct SnrConfig {
    std::vector<double> nbar_list = {2.5, 5.0, 11.2};
    double effective_efficiency = 3.8e-3;  // configured global rate
    std::uint64_t noise_reference_trials = 400000;
    double window_halfwidth_us = 2.0;
};

struct VisibilityConfig {
    std::vector<double> nbar_list = {176.0, 51.0};
    double eta_s = 6.3e-4;
    double sigma_f_khz = 25.0;
    double bin_separation_us = 2.0;
    double afc_delay_us = 8.0;
    double t_s_us = 21.0;
    double t_c1_offset_us = 6.0;
    int phase_points = 13;
    std::uint64_t trials_per_point = 30000;
    double bin_noise_floor = 5.1e-3;
    int bootstrap_resamples = 200;
};

struct BrightConfig {
    double t_s_us = 18.0;
    double input_nbar = 1.0;
};

struct ExperimentConfig {
    GridConfig grid;
    PulseConfig pulse;
    CombConfig comb;
    SpinParams spin;
    TimelineConfig timeline;
    NoiseSourceParams noise;
    FilterConfig filter;
    DetectorParams detector;
    SnrConfig snr;
    VisibilityConfig visibility;
    BrightConfig bright;
};

ExperimentConfig default_config();

nlohmann::json to_json(const ExperimentConfig& config);

struct ValidationError {
    std::string path;
    std::string message;
};

/// Structural + semantic validation of a raw config document. Returns the
/// complete list of violations (never stops at the first). Unknown keys and
/// type mismatches are violations.
std::vector<ValidationError> validate_config_json(const nlohmann::json& raw);

/// Defaults overlaid with the (validated) document. Throws std::invalid_argument
/// with all violations joined if the document is invalid.
ExperimentConfig config_from_json(const nlohmann::json& raw);

/// Parse + validate a config file; empty path yields the defaults.
ExperimentConfig load_config_file(const std::string& path);

/// Sorted-key, single-line serialization; stable bytes for hashing.
std::string canonical_serialization(const ExperimentConfig& config);

std::string config_hash_hex(const ExperimentConfig& config);

// Lowering into the module parameter records.
CombParams comb_params(const ExperimentConfig& config);
SpectralGrid make_grid(const ExperimentConfig& config);
FilterChainParams filter_chain(const ExperimentConfig& config, double aom_window_start_us,
                               double aom_window_end_us);

}  // namespace afcsim
