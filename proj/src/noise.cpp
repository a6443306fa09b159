#include "afcsim/noise.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace afcsim {

namespace {

constexpr double kLn2 = std::numbers::ln2_v<double>;

FluxTimeline blank(const TimeAxis& axis, std::string source, double detuning,
                   SpectralClass cls, double width = 0.0) {
    FluxTimeline f;
    f.source = std::move(source);
    f.carrier_detuning_mhz = detuning;
    f.spectral_class = cls;
    f.spectral_width_mhz = width;
    f.t0_us = axis.t0_us;
    f.dt_us = axis.dt_us;
    f.flux.assign(axis.n, 0.0);
    return f;
}

void add_exponential(FluxTimeline& f, double t_on, double photons, double decay_us) {
    if (photons <= 0.0) return;
    const double rate = photons / decay_us;
    for (std::size_t i = 0; i < f.flux.size(); ++i) {
        const double t = f.time(i);
        if (t >= t_on) f.flux[i] += rate * std::exp(-(t - t_on) / decay_us);
    }
}

void add_gaussian(FluxTimeline& f, double center, double photons, double fwhm_us) {
    if (photons <= 0.0) return;
    const double coeff = 4.0 * kLn2 / (fwhm_us * fwhm_us);
    const double norm = photons * std::sqrt(coeff / std::numbers::pi);
    for (std::size_t i = 0; i < f.flux.size(); ++i) {
        const double x = f.time(i) - center;
        f.flux[i] += norm * std::exp(-coeff * x * x);
    }
}

}  // namespace

void NoiseSourceParams::validate() const {
    if (fluor_photons_per_pulse < 0.0 || fid_photons_per_pulse < 0.0 || oreo_amplitude_c2 < 0.0)
        throw std::invalid_argument("NoiseSourceParams: photon means must be non-negative");
    if (!(fluor_lifetime_us > 0.0) || !(fid_decay_us > 0.0) || !(oreo_fwhm_us > 0.0))
        throw std::invalid_argument("NoiseSourceParams: lifetimes must be positive");
    if (!(fluor_spectral_width_mhz > 0.0))
        throw std::invalid_argument("NoiseSourceParams: fluorescence spectral width must be positive");
    if (oreo_gain_c1 < 1.0)
        throw std::invalid_argument("NoiseSourceParams: OREO gain with C1 must be >= 1");
}

void FilterChainParams::validate() const {
    auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in01(spatial_suppression) || !in01(aom_off_transmission) || !in01(grating_out_of_band))
        throw std::invalid_argument("FilterChainParams: transmissions must lie in [0,1]");
    if (!(fp_fwhm_mhz > 0.0))
        throw std::invalid_argument("FilterChainParams: FP bandwidth must be positive");
    if (aom_window_end_us < aom_window_start_us)
        throw std::invalid_argument("FilterChainParams: AOM window is not well-ordered");
    if (aom_ramp_us < 0.0)
        throw std::invalid_argument("FilterChainParams: AOM ramp must be non-negative");
}

double FluxTimeline::integral(double a_us, double b_us) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < flux.size(); ++i) {
        const double t = time(i);
        if (t >= a_us && t < b_us) sum += flux[i];
    }
    return sum * dt_us;
}

std::vector<FluxTimeline> emit_noise(const ProtocolTimeline& timeline,
                                     const NoiseSourceParams& params, const TimeAxis& axis,
                                     ControlPulsePresence pulses) {
    params.validate();

    auto fluor = blank(axis, "fluorescence", 0.0, SpectralClass::broadband,
                       params.fluor_spectral_width_mhz);
    auto fid = blank(axis, "fid", params.fid_detuning_mhz, SpectralClass::narrowband);
    auto oreo = blank(axis, "oreo", 0.0, SpectralClass::narrowband);

    if (pulses.c1) {
        add_exponential(fluor, timeline.t_c1_us, params.fluor_photons_per_pulse,
                        params.fluor_lifetime_us);
        add_exponential(fid, timeline.t_c1_us, params.fid_photons_per_pulse, params.fid_decay_us);
    }
    if (pulses.c2) {
        add_exponential(fluor, timeline.t_c2_us, params.fluor_photons_per_pulse,
                        params.fluor_lifetime_us);
        add_exponential(fid, timeline.t_c2_us, params.fid_photons_per_pulse, params.fid_decay_us);
        // The off-resonant echo is read out by C2; a preceding C1 strengthens it.
        const double amp = params.oreo_amplitude_c2 * (pulses.c1 ? params.oreo_gain_c1 : 1.0);
        add_gaussian(oreo, timeline.t_oreo_us, amp, params.oreo_fwhm_us);
    }
    return {std::move(fluor), std::move(fid), std::move(oreo)};
}

double fp_transmission(double detuning_mhz, double fp_fwhm_mhz) {
    if (!(fp_fwhm_mhz > 0.0))
        throw std::invalid_argument("fp_transmission: bandwidth must be positive");
    const double x = 2.0 * detuning_mhz / fp_fwhm_mhz;
    return 1.0 / (1.0 + x * x);
}

double aom_gate(double t_us, double window_start_us, double window_end_us,
                double off_transmission, double ramp_us) {
    auto edge = [&](double distance_inward) {
        // Linear ramp of width ramp_us centered on the edge.
        if (ramp_us <= 0.0) return distance_inward >= 0.0 ? 1.0 : off_transmission;
        const double x = distance_inward / ramp_us + 0.5;
        if (x <= 0.0) return off_transmission;
        if (x >= 1.0) return 1.0;
        return off_transmission + (1.0 - off_transmission) * x;
    };
    return std::min(edge(t_us - window_start_us), edge(window_end_us - t_us));
}

double grating_suppression(double detuning_mhz, const FilterChainParams& chain) {
    return std::abs(detuning_mhz) <= chain.grating_band_mhz ? 1.0 : chain.grating_out_of_band;
}

ChainResult apply_chain(const std::vector<FluxTimeline>& crystal_fluxes,
                        const FilterChainParams& chain, double window_start_us,
                        double window_end_us, double dark_rate_per_us) {
    chain.validate();
    if (dark_rate_per_us < 0.0)
        throw std::invalid_argument("apply_chain: dark rate must be non-negative");

    ChainResult result;
    result.budget.window_start_us = window_start_us;
    result.budget.window_end_us = window_end_us;

    for (const auto& in : crystal_fluxes) {
        const double delta = in.carrier_detuning_mhz - chain.fp_center_detuning_mhz;
        double fp = 1.0;
        if (chain.fp_enabled) {
            // Broadband light sees the cavity as a bandwidth ratio rather than
            // a single Lorentzian point.
            fp = in.spectral_class == SpectralClass::broadband
                     ? std::min(1.0, chain.fp_fwhm_mhz / in.spectral_width_mhz)
                     : fp_transmission(delta, chain.fp_fwhm_mhz);
        }
        const double grating = grating_suppression(in.carrier_detuning_mhz, chain);
        const double spectral = chain.spatial_suppression * grating * fp;

        FluxTimeline out = in;
        for (std::size_t i = 0; i < out.flux.size(); ++i) {
            const double gate = aom_gate(out.time(i), chain.aom_window_start_us,
                                         chain.aom_window_end_us, chain.aom_off_transmission,
                                         chain.aom_ramp_us);
            out.flux[i] *= spectral * gate;
        }

        SourceBudgetRow row;
        row.source = in.source;
        row.at_crystal = in.integral(window_start_us, window_end_us);
        row.spatial_factor = chain.spatial_suppression;
        row.grating_factor = grating;
        row.fp_factor = fp;
        row.at_detector = out.integral(window_start_us, window_end_us);
        result.budget.rows.push_back(row);
        result.detector_fluxes.push_back(std::move(out));
    }

    result.budget.dark_contribution = dark_rate_per_us * (window_end_us - window_start_us);
    double total = result.budget.dark_contribution;
    for (const auto& row : result.budget.rows) total += row.at_detector;
    result.budget.total_noise_floor = total;
    return result;
}

std::string NoiseBudget::report() const {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof(line), "noise budget, window [%.3f, %.3f) us\n", window_start_us,
                  window_end_us);
    os << line;
    os << "source        at_crystal   spatial  grating  fabry-perot  at_detector\n";
    for (const auto& r : rows) {
        std::snprintf(line, sizeof(line), "%-12s  %.4e   %.3f    %.3f    %.4e   %.4e\n",
                      r.source.c_str(), r.at_crystal, r.spatial_factor, r.grating_factor,
                      r.fp_factor, r.at_detector);
        os << line;
    }
    std::snprintf(line, sizeof(line), "%-12s  %.4e\n", "dark", dark_contribution);
    os << line;
    std::snprintf(line, sizeof(line), "total noise floor: %.4e photons/mode\n", total_noise_floor);
    os << line;
    return os.str();
}

}  // namespace afcsim
