#pragma once

#include "afcsim/spinwave.hpp"

#include <string>
#include <vector>

namespace afcsim {

/// Calibrated noise source magnitudes at the crystal, per memory cycle.
struct NoiseSourceParams {
    double fluor_photons_per_pulse = 8.0;   // broadband, into the detection mode
    double fluor_lifetime_us = 1900.0;
    double fluor_spectral_width_mhz = 500.0;
    double fid_photons_per_pulse = 0.76;    // narrowband at the control frequency
    double fid_decay_us = 2.0;
    double fid_detuning_mhz = 35.4;         // control-input splitting
    double oreo_amplitude_c2 = 0.035;       // mean photons per cycle, C2 alone
    double oreo_gain_c1 = 1.6;              // enhancement when C1 precedes
    double oreo_fwhm_us = 1.5;

    void validate() const;
};

struct FilterChainParams {
    double spatial_suppression = 1.0;
    double fp_fwhm_mhz = 7.5;
    double fp_center_detuning_mhz = 0.0;
    bool fp_enabled = true;
    double aom_window_start_us = 0.0;
    double aom_window_end_us = 0.0;
    double aom_off_transmission = 1e-6;
    double aom_ramp_us = 0.0;
    double grating_band_mhz = 1e5;     // pass band halfwidth around the carrier
    double grating_out_of_band = 1e-3;

    void validate() const;
};

enum class SpectralClass { narrowband, broadband };

/// Photon flux (per microsecond) vs time on a uniform grid, midpoint-sampled,
/// with the carrier detuning and spectral class the filters act on.
struct FluxTimeline {
    std::string source;
    double carrier_detuning_mhz = 0.0;
    SpectralClass spectral_class = SpectralClass::narrowband;
    double spectral_width_mhz = 0.0;  // only meaningful for broadband
    double t0_us = 0.0;
    double dt_us = 0.0;
    std::vector<double> flux;

    double time(std::size_t i) const { return t0_us + (static_cast<double>(i) + 0.5) * dt_us; }
    /// Integrated photons over [a, b) (midpoint rule on the stored samples).
    double integral(double a_us, double b_us) const;
};

struct TimeAxis {
    double t0_us = -5.0;
    double dt_us = 0.01;
    std::size_t n = 5000;
};

struct ControlPulsePresence {
    bool c1 = true;
    bool c2 = true;
};

/// Noise emitted by the control pulses: exponential fluorescence and FID after
/// each pulse present, and the off-resonant echo a time 1/Delta after C2
/// (boosted by oreo_gain_c1 when C1 is present).
std::vector<FluxTimeline> emit_noise(const ProtocolTimeline& timeline,
                                     const NoiseSourceParams& params, const TimeAxis& axis,
                                     ControlPulsePresence pulses = {});

/// Lorentzian Fabry-Perot amplitude-squared transmission 1/(1+(2 d/fwhm)^2).
double fp_transmission(double detuning_mhz, double fp_fwhm_mhz);

/// Detector time gate: 1 inside the window, off_transmission outside, with an
/// optional linear ramp of the given width centered on each edge.
double aom_gate(double t_us, double window_start_us, double window_end_us,
                double off_transmission, double ramp_us = 0.0);

double grating_suppression(double detuning_mhz, const FilterChainParams& chain);

struct SourceBudgetRow {
    std::string source;
    double at_crystal = 0.0;       // photons in the budget window before filtering
    double spatial_factor = 1.0;
    double grating_factor = 1.0;
    double fp_factor = 1.0;
    double at_detector = 0.0;      // photons in the budget window after the chain
};

struct NoiseBudget {
    std::vector<SourceBudgetRow> rows;
    double dark_contribution = 0.0;
    double total_noise_floor = 0.0;  // photons per temporal mode (= budget window)
    double window_start_us = 0.0;
    double window_end_us = 0.0;

    std::string report() const;  // per-source, per-stage attenuation table
};

struct ChainResult {
    std::vector<FluxTimeline> detector_fluxes;
    NoiseBudget budget;
};

/// Attenuate each flux by spatial x grating x Fabry-Perot x AOM gate and tally
/// the per-source budget over [window_start, window_end).
ChainResult apply_chain(const std::vector<FluxTimeline>& crystal_fluxes,
                        const FilterChainParams& chain, double window_start_us,
                        double window_end_us, double dark_rate_per_us);

}  // namespace afcsim
