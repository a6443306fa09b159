#include "afcsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace afcsim {

using nlohmann::json;

ExperimentConfig default_config() {
    return ExperimentConfig{};
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["grid"] = {{"span_mhz", c.grid.span_mhz}, {"n_points", c.grid.n_points}};
    j["pulse"] = {{"fwhm_us", c.pulse.fwhm_us},
                  {"center_us", c.pulse.center_us},
                  {"carrier_detuning_mhz", c.pulse.carrier_detuning_mhz}};
    j["comb"] = {{"afc_delay_us", c.comb.afc_delay_us},
                 {"finesse", c.comb.finesse},
                 {"peak_depth", c.comb.peak_depth},
                 {"background_depth", c.comb.background_depth},
                 {"tooth_shape", c.comb.tooth_shape},
                 {"bandwidth_mhz", c.comb.bandwidth_mhz},
                 {"max_total_depth", c.comb.max_total_depth},
                 {"blur_sigma_khz", c.comb.blur_sigma_khz},
                 {"pass_count", c.comb.pass_count}};
    j["spin"] = {{"gamma_spin_khz", c.spin.gamma_spin_khz},
                 {"transfer_efficiency", c.spin.transfer_efficiency},
                 {"t2_spin_ms", c.spin.t2_spin_ms}};
    j["timeline"] = {{"t_s_us", c.timeline.t_s_us}, {"t_c1_offset_us", c.timeline.t_c1_offset_us}};
    j["noise"] = {{"fluor_photons_per_pulse", c.noise.fluor_photons_per_pulse},
                  {"fluor_lifetime_us", c.noise.fluor_lifetime_us},
                  {"fluor_spectral_width_mhz", c.noise.fluor_spectral_width_mhz},
                  {"fid_photons_per_pulse", c.noise.fid_photons_per_pulse},
                  {"fid_decay_us", c.noise.fid_decay_us},
                  {"fid_detuning_mhz", c.noise.fid_detuning_mhz},
                  {"oreo_amplitude_c2", c.noise.oreo_amplitude_c2},
                  {"oreo_gain_c1", c.noise.oreo_gain_c1},
                  {"oreo_fwhm_us", c.noise.oreo_fwhm_us}};
    j["filter"] = {{"spatial_suppression", c.filter.spatial_suppression},
                   {"fp_fwhm_mhz", c.filter.fp_fwhm_mhz},
                   {"fp_center_detuning_mhz", c.filter.fp_center_detuning_mhz},
                   {"fp_enabled", c.filter.fp_enabled},
                   {"aom_off_transmission", c.filter.aom_off_transmission},
                   {"aom_ramp_us", c.filter.aom_ramp_us},
                   {"grating_band_mhz", c.filter.grating_band_mhz},
                   {"grating_out_of_band", c.filter.grating_out_of_band}};
    j["detector"] = {{"quantum_efficiency", c.detector.quantum_efficiency},
                     {"dark_rate_per_us", c.detector.dark_rate_per_us},
                     {"time_bin_us", c.detector.time_bin_us},
                     {"trials", c.detector.trials},
                     {"seed", c.detector.seed}};
    j["snr"] = {{"nbar_list", c.snr.nbar_list},
                {"effective_efficiency", c.snr.effective_efficiency},
                {"noise_reference_trials", c.snr.noise_reference_trials},
                {"window_halfwidth_us", c.snr.window_halfwidth_us}};
    j["visibility"] = {{"nbar_list", c.visibility.nbar_list},
                       {"eta_s", c.visibility.eta_s},
                       {"sigma_f_khz", c.visibility.sigma_f_khz},
                       {"bin_separation_us", c.visibility.bin_separation_us},
                       {"afc_delay_us", c.visibility.afc_delay_us},
                       {"t_s_us", c.visibility.t_s_us},
                       {"t_c1_offset_us", c.visibility.t_c1_offset_us},
                       {"phase_points", c.visibility.phase_points},
                       {"trials_per_point", c.visibility.trials_per_point},
                       {"bin_noise_floor", c.visibility.bin_noise_floor},
                       {"bootstrap_resamples", c.visibility.bootstrap_resamples}};
    j["bright"] = {{"t_s_us", c.bright.t_s_us}, {"input_nbar", c.bright.input_nbar}};
    return j;
}

namespace {

// Structural pass: every key present in `raw` must exist in the default
// document with a compatible type.
void check_structure(const json& raw, const json& schema, const std::string& path,
                     std::vector<ValidationError>& errors) {
    if (!raw.is_object()) {
        errors.push_back({path.empty() ? "(root)" : path, "expected an object"});
        return;
    }
    for (const auto& [key, value] : raw.items()) {
        const std::string here = path.empty() ? key : path + "." + key;
        if (!schema.contains(key)) {
            errors.push_back({here, "unknown key"});
            continue;
        }
        const json& ref = schema.at(key);
        if (ref.is_object()) {
            check_structure(value, ref, here, errors);
        } else if (ref.is_number() && !value.is_number()) {
            errors.push_back({here, "expected a number"});
        } else if (ref.is_string() && !value.is_string()) {
            errors.push_back({here, "expected a string"});
        } else if (ref.is_boolean() && !value.is_boolean()) {
            errors.push_back({here, "expected a boolean"});
        } else if (ref.is_array() && !value.is_array()) {
            errors.push_back({here, "expected an array"});
        }
    }
}

void overlay(const json& raw, ExperimentConfig& c) {
    auto get = [&raw](const char* section, const char* key, auto& target) {
        if (raw.contains(section) && raw.at(section).contains(key))
            raw.at(section).at(key).get_to(target);
    };
    get("grid", "span_mhz", c.grid.span_mhz);
    get("grid", "n_points", c.grid.n_points);
    get("pulse", "fwhm_us", c.pulse.fwhm_us);
    get("pulse", "center_us", c.pulse.center_us);
    get("pulse", "carrier_detuning_mhz", c.pulse.carrier_detuning_mhz);
    get("comb", "afc_delay_us", c.comb.afc_delay_us);
    get("comb", "finesse", c.comb.finesse);
    get("comb", "peak_depth", c.comb.peak_depth);
    get("comb", "background_depth", c.comb.background_depth);
    get("comb", "tooth_shape", c.comb.tooth_shape);
    get("comb", "bandwidth_mhz", c.comb.bandwidth_mhz);
    get("comb", "max_total_depth", c.comb.max_total_depth);
    get("comb", "blur_sigma_khz", c.comb.blur_sigma_khz);
    get("comb", "pass_count", c.comb.pass_count);
    get("spin", "gamma_spin_khz", c.spin.gamma_spin_khz);
    get("spin", "transfer_efficiency", c.spin.transfer_efficiency);
    get("spin", "t2_spin_ms", c.spin.t2_spin_ms);
    get("timeline", "t_s_us", c.timeline.t_s_us);
    get("timeline", "t_c1_offset_us", c.timeline.t_c1_offset_us);
    get("noise", "fluor_photons_per_pulse", c.noise.fluor_photons_per_pulse);
    get("noise", "fluor_lifetime_us", c.noise.fluor_lifetime_us);
    get("noise", "fluor_spectral_width_mhz", c.noise.fluor_spectral_width_mhz);
    get("noise", "fid_photons_per_pulse", c.noise.fid_photons_per_pulse);
    get("noise", "fid_decay_us", c.noise.fid_decay_us);
    get("noise", "fid_detuning_mhz", c.noise.fid_detuning_mhz);
    get("noise", "oreo_amplitude_c2", c.noise.oreo_amplitude_c2);
    get("noise", "oreo_gain_c1", c.noise.oreo_gain_c1);
    get("noise", "oreo_fwhm_us", c.noise.oreo_fwhm_us);
    get("filter", "spatial_suppression", c.filter.spatial_suppression);
    get("filter", "fp_fwhm_mhz", c.filter.fp_fwhm_mhz);
    get("filter", "fp_center_detuning_mhz", c.filter.fp_center_detuning_mhz);
    get("filter", "fp_enabled", c.filter.fp_enabled);
    get("filter", "aom_off_transmission", c.filter.aom_off_transmission);
    get("filter", "aom_ramp_us", c.filter.aom_ramp_us);
    get("filter", "grating_band_mhz", c.filter.grating_band_mhz);
    get("filter", "grating_out_of_band", c.filter.grating_out_of_band);
    get("detector", "quantum_efficiency", c.detector.quantum_efficiency);
    get("detector", "dark_rate_per_us", c.detector.dark_rate_per_us);
    get("detector", "time_bin_us", c.detector.time_bin_us);
    get("detector", "trials", c.detector.trials);
    get("detector", "seed", c.detector.seed);
    get("snr", "nbar_list", c.snr.nbar_list);
    get("snr", "effective_efficiency", c.snr.effective_efficiency);
    get("snr", "noise_reference_trials", c.snr.noise_reference_trials);
    get("snr", "window_halfwidth_us", c.snr.window_halfwidth_us);
    get("visibility", "nbar_list", c.visibility.nbar_list);
    get("visibility", "eta_s", c.visibility.eta_s);
    get("visibility", "sigma_f_khz", c.visibility.sigma_f_khz);
    get("visibility", "bin_separation_us", c.visibility.bin_separation_us);
    get("visibility", "afc_delay_us", c.visibility.afc_delay_us);
    get("visibility", "t_s_us", c.visibility.t_s_us);
    get("visibility", "t_c1_offset_us", c.visibility.t_c1_offset_us);
    get("visibility", "phase_points", c.visibility.phase_points);
    get("visibility", "trials_per_point", c.visibility.trials_per_point);
    get("visibility", "bin_noise_floor", c.visibility.bin_noise_floor);
    get("visibility", "bootstrap_resamples", c.visibility.bootstrap_resamples);
    get("bright", "t_s_us", c.bright.t_s_us);
    get("bright", "input_nbar", c.bright.input_nbar);
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

// Semantic pass: range and cross-field rules, all collected.
void check_semantics(const ExperimentConfig& c, std::vector<ValidationError>& errors) {
    auto fail = [&errors](const std::string& path, const std::string& msg) {
        errors.push_back({path, msg});
    };

    if (!(c.grid.span_mhz > 0.0)) fail("grid.span_mhz", "span must be positive");
    if (c.grid.n_points == 0 || (c.grid.n_points & (c.grid.n_points - 1)) != 0)
        fail("grid.n_points", "must be a power of two");
    if (!(c.pulse.fwhm_us > 0.0)) fail("pulse.fwhm_us", "pulse duration must be positive");

    if (!(c.comb.afc_delay_us > 0.0)) fail("comb.afc_delay_us", "AFC delay must be positive");
    if (!(c.comb.finesse > 1.0)) fail("comb.finesse", "finesse must exceed 1");
    if (c.comb.peak_depth < 0.0) fail("comb.peak_depth", "must be non-negative");
    if (c.comb.background_depth < 0.0) fail("comb.background_depth", "must be non-negative");
    if (c.comb.peak_depth + c.comb.background_depth > c.comb.max_total_depth)
        fail("comb.peak_depth", "peak+background depth " +
                                    fmt(c.comb.peak_depth + c.comb.background_depth) +
                                    " exceeds configured maximum " + fmt(c.comb.max_total_depth));
    if (c.comb.tooth_shape != "square" && c.comb.tooth_shape != "gaussian")
        fail("comb.tooth_shape", "must be \"square\" or \"gaussian\"");
    if (c.comb.blur_sigma_khz < 0.0) fail("comb.blur_sigma_khz", "must be non-negative");
    if (c.comb.pass_count != 1 && c.comb.pass_count != 2)
        fail("comb.pass_count", "must be 1 or 2");

    if (c.grid.span_mhz > 0.0 && c.grid.n_points > 0 && c.comb.afc_delay_us > 0.0) {
        const double resolution = c.grid.span_mhz / static_cast<double>(c.grid.n_points);
        const double period = 1.0 / c.comb.afc_delay_us;
        if (resolution > period / 10.0)
            fail("grid.n_points", "grid resolution " + fmt(resolution) +
                                      " MHz exceeds comb period/10 = " + fmt(period / 10.0) +
                                      " MHz");
    }
    if (c.pulse.fwhm_us > 0.0 && c.comb.bandwidth_mhz < 5.0 / c.pulse.fwhm_us)
        fail("comb.bandwidth_mhz", "comb bandwidth " + fmt(c.comb.bandwidth_mhz) +
                                       " MHz does not cover the input-pulse spectrum (need >= " +
                                       fmt(5.0 / c.pulse.fwhm_us) + " MHz)");

    if (!(c.spin.gamma_spin_khz > 0.0)) fail("spin.gamma_spin_khz", "must be positive");
    if (c.spin.transfer_efficiency < 0.0 || c.spin.transfer_efficiency > 1.0)
        fail("spin.transfer_efficiency", "transfer efficiency outside [0,1]");
    if (!(c.spin.t2_spin_ms > 0.0)) fail("spin.t2_spin_ms", "must be positive");

    if (!(c.timeline.t_s_us > 0.0)) fail("timeline.t_s_us", "storage time must be positive");
    if (!(c.timeline.t_c1_offset_us > 0.0))
        fail("timeline.t_c1_offset_us", "C1 offset must be positive");
    else if (c.comb.afc_delay_us > 0.0 && c.timeline.t_c1_offset_us >= c.comb.afc_delay_us)
        fail("timeline.t_c1_offset_us",
             "C1 offset " + fmt(c.timeline.t_c1_offset_us) + " must precede the AFC delay " +
                 fmt(c.comb.afc_delay_us));

    if (c.noise.fluor_photons_per_pulse < 0.0 || c.noise.fid_photons_per_pulse < 0.0 ||
        c.noise.oreo_amplitude_c2 < 0.0)
        fail("noise", "photon means must be non-negative");
    if (!(c.noise.fluor_lifetime_us > 0.0) || !(c.noise.fid_decay_us > 0.0) ||
        !(c.noise.oreo_fwhm_us > 0.0))
        fail("noise", "lifetimes must be positive");
    if (!(c.noise.fluor_spectral_width_mhz > 0.0))
        fail("noise.fluor_spectral_width_mhz", "must be positive");
    if (c.noise.oreo_gain_c1 < 1.0) fail("noise.oreo_gain_c1", "must be >= 1");

    auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in01(c.filter.spatial_suppression))
        fail("filter.spatial_suppression", "transmission outside [0,1]");
    if (!in01(c.filter.aom_off_transmission))
        fail("filter.aom_off_transmission", "transmission outside [0,1]");
    if (!in01(c.filter.grating_out_of_band))
        fail("filter.grating_out_of_band", "transmission outside [0,1]");
    if (!(c.filter.fp_fwhm_mhz > 0.0)) fail("filter.fp_fwhm_mhz", "must be positive");
    if (c.filter.aom_ramp_us < 0.0) fail("filter.aom_ramp_us", "must be non-negative");

    if (!in01(c.detector.quantum_efficiency))
        fail("detector.quantum_efficiency", "quantum efficiency outside [0,1]");
    if (c.detector.dark_rate_per_us < 0.0) fail("detector.dark_rate_per_us", "must be non-negative");
    if (!(c.detector.time_bin_us > 0.0)) fail("detector.time_bin_us", "must be positive");
    if (c.detector.trials < 1) fail("detector.trials", "must be >= 1");

    if (c.snr.nbar_list.empty()) fail("snr.nbar_list", "must not be empty");
    for (double nb : c.snr.nbar_list) {
        if (nb < 0.0) {
            fail("snr.nbar_list", "nbar values must be non-negative");
            break;
        }
    }
    if (!in01(c.snr.effective_efficiency))
        fail("snr.effective_efficiency", "efficiency outside [0,1]");
    if (c.snr.noise_reference_trials < 1) fail("snr.noise_reference_trials", "must be >= 1");
    if (!(c.snr.window_halfwidth_us > 0.0)) fail("snr.window_halfwidth_us", "must be positive");

    if (!in01(c.visibility.eta_s)) fail("visibility.eta_s", "storage efficiency outside [0,1]");
    if (c.visibility.sigma_f_khz < 0.0) fail("visibility.sigma_f_khz", "must be non-negative");
    if (!(c.visibility.bin_separation_us > 0.0))
        fail("visibility.bin_separation_us", "must be positive");
    else if (c.visibility.bin_separation_us >= c.visibility.afc_delay_us / 2.0)
        fail("visibility.bin_separation_us",
             "bin separation " + fmt(c.visibility.bin_separation_us) +
                 " exceeds the AFC window (afc_delay " + fmt(c.visibility.afc_delay_us) + ")");
    if (c.visibility.phase_points < 5) fail("visibility.phase_points", "need >= 5 phase points");
    if (c.visibility.trials_per_point < 1) fail("visibility.trials_per_point", "must be >= 1");
    if (c.visibility.bin_noise_floor < 0.0)
        fail("visibility.bin_noise_floor", "must be non-negative");
    if (c.visibility.bootstrap_resamples < 0)
        fail("visibility.bootstrap_resamples", "must be non-negative");
    if (!(c.visibility.t_s_us > 0.0)) fail("visibility.t_s_us", "must be positive");
    if (!(c.visibility.t_c1_offset_us > 0.0) ||
        c.visibility.t_c1_offset_us >= c.visibility.afc_delay_us)
        fail("visibility.t_c1_offset_us", "must lie strictly inside (0, afc_delay)");

    if (!(c.bright.t_s_us > 0.0)) fail("bright.t_s_us", "must be positive");
    if (c.bright.input_nbar < 0.0) fail("bright.input_nbar", "must be non-negative");
}

}  // namespace

std::vector<ValidationError> validate_config_json(const json& raw) {
    std::vector<ValidationError> errors;
    const json schema = to_json(default_config());
    check_structure(raw, schema, "", errors);

    // Still collect the semantic violations when the values are readable, so
    // the caller sees the complete list rather than the first layer only.
    ExperimentConfig c = default_config();
    try {
        overlay(raw, c);
    } catch (const json::exception& e) {
        if (errors.empty()) errors.push_back({"(root)", std::string("parse error: ") + e.what()});
        return errors;
    }
    check_semantics(c, errors);
    return errors;
}

ExperimentConfig config_from_json(const json& raw) {
    const auto errors = validate_config_json(raw);
    if (!errors.empty()) {
        std::ostringstream os;
        os << "invalid config:";
        for (const auto& e : errors) os << "\n  " << e.path << ": " << e.message;
        throw std::invalid_argument(os.str());
    }
    ExperimentConfig c = default_config();
    overlay(raw, c);
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    if (path.empty()) return default_config();
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json raw;
    try {
        in >> raw;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(raw);
}

std::string canonical_serialization(const ExperimentConfig& config) {
    // nlohmann::json keeps keys sorted; dump() prints shortest-roundtrip
    // numbers, so these bytes are stable for hashing.
    return to_json(config).dump();
}

std::string config_hash_hex(const ExperimentConfig& config) {
    const std::uint64_t h = fnv1a64(canonical_serialization(config));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

CombParams comb_params(const ExperimentConfig& c) {
    CombParams p;
    p.period_mhz = 1.0 / c.comb.afc_delay_us;
    p.finesse = c.comb.finesse;
    p.peak_depth = c.comb.peak_depth;
    p.background_depth = c.comb.background_depth;
    p.tooth_shape = c.comb.tooth_shape == "gaussian" ? ToothShape::gaussian : ToothShape::square;
    p.bandwidth_mhz = c.comb.bandwidth_mhz;
    p.max_total_depth = c.comb.max_total_depth;
    return p;
}

SpectralGrid make_grid(const ExperimentConfig& c) {
    return SpectralGrid(c.grid.span_mhz, c.grid.n_points);
}

FilterChainParams filter_chain(const ExperimentConfig& c, double aom_window_start_us,
                               double aom_window_end_us) {
    FilterChainParams p;
    p.spatial_suppression = c.filter.spatial_suppression;
    p.fp_fwhm_mhz = c.filter.fp_fwhm_mhz;
    p.fp_center_detuning_mhz = c.filter.fp_center_detuning_mhz;
    p.fp_enabled = c.filter.fp_enabled;
    p.aom_window_start_us = aom_window_start_us;
    p.aom_window_end_us = aom_window_end_us;
    p.aom_off_transmission = c.filter.aom_off_transmission;
    p.aom_ramp_us = c.filter.aom_ramp_us;
    p.grating_band_mhz = c.filter.grating_band_mhz;
    p.grating_out_of_band = c.filter.grating_out_of_band;
    return p;
}

}  // namespace afcsim
