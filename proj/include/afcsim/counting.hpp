#pragma once

#include "afcsim/noise.hpp"
#include "afcsim/rng.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace afcsim {

struct DetectorParams {
    double quantum_efficiency = 1.0;
    double dark_rate_per_us = 1e-4;
    double time_bin_us = 0.5;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 12345;

    void validate() const;
};

/// Poisson-sampled detector counts aggregated over trials. Bit-exact for a
/// fixed (seed, stream): trial i draws from its own substream, so the result
/// does not depend on evaluation order.
struct CountHistogram {
    std::vector<double> edges_us;      // size = bins + 1
    std::vector<std::uint64_t> counts; // size = bins
    std::vector<double> expected;      // per-trial Poisson mean per bin
    std::uint64_t trials = 0;

    std::size_t bins() const { return counts.size(); }
    double bin_center(std::size_t i) const { return 0.5 * (edges_us[i] + edges_us[i + 1]); }
    /// Total counts over bins whose centers lie in [a, b).
    std::uint64_t window_counts(double a_us, double b_us) const;
    double window_duration(double a_us, double b_us) const;
};

/// Per-bin mean = qe * integral(flux) + dark_rate * bin width; counts are
/// independent Poisson draws per bin and trial. Throws on negative flux.
CountHistogram simulate_counts(const std::vector<FluxTimeline>& fluxes,
                               const DetectorParams& detector, double t_start_us, double t_end_us,
                               std::uint64_t stream);

/// Gaussian signal flux at the detector plane: photons = nbar * efficiency.
FluxTimeline signal_flux(const TimeAxis& axis, double center_us, double fwhm_us, double nbar,
                         double efficiency);

struct SnrEstimate {
    double snr = 0.0;
    double err = 0.0;
    double signal_counts = 0.0;
    double noise_counts_scaled = 0.0;
};

/// SNR = signal-window counts / noise-reference counts scaled to the same
/// duration and trial count. Throws if the noise reference is empty.
SnrEstimate estimate_snr(const CountHistogram& signal, double sig_start_us, double sig_end_us,
                         const CountHistogram& noise, double noise_start_us, double noise_end_us);

struct SnrCycleConfig {
    std::vector<FluxTimeline> noise_fluxes;  // detector plane, no input pulse
    double echo_center_us = 27.0;
    double echo_fwhm_us = 2.0;
    double effective_efficiency = 3.8e-3;
    double window_halfwidth_us = 2.0;
    double readout_start_us = -5.0;
    double readout_end_us = 45.0;
    std::uint64_t noise_reference_trials = 400000;
};

struct SnrScanResult {
    std::vector<double> nbar;
    std::vector<double> snr;
    std::vector<double> err;
    double slope = 0.0;       // k in SNR = 1 + k nbar
    double slope_err = 0.0;
    double r_squared = 0.0;
};

/// Monte Carlo SNR at each nbar plus the weighted least-squares slope through
/// (0, 1). Throws if every histogram is empty.
SnrScanResult snr_scan(const std::vector<double>& nbar_list, const SnrCycleConfig& cycle,
                       const DetectorParams& detector);

/// Fringe contrast left by Gaussian laser phase noise accumulated over the
/// bin separation: exp(-(2 pi sigma_f T)^2 / 2).
double coherence_visibility(double sigma_f_khz, double t_us);

/// Monte Carlo check of the same quantity: mean of cos(dphi) over trials.
double visibility_phase_jitter_mc(double sigma_f_khz, double t_us, std::uint64_t trials,
                                  std::uint64_t seed);

struct TimebinConfig {
    double nbar = 176.0;
    double eta_s = 6.3e-4;             // storage efficiency per mode
    double bin_separation_us = 2.0;    // T, matches the W1-W2 separation
    double sigma_f_khz = 25.0;
    double afc_delay_us = 8.0;
    double bin_noise_floor = 5.1e-3;   // photons per output bin
    int phase_points = 13;             // inclusive scan over [0, 2pi]
    std::uint64_t trials_per_point = 30000;
    std::uint64_t seed = 12345;
    int bootstrap_resamples = 200;

    void validate() const;
};

/// Expected counts in the (early, middle, late) output bins for one phase.
/// The middle bin carries (eta_s nbar / 2)(1 + V_coh cos phi); the outer bins
/// are phase-independent; the noise floor is added to every bin.
std::array<double, 3> timebin_cycle(double phase_rad, const TimebinConfig& config);

struct PhaseScanData {
    std::vector<double> phases;
    std::vector<std::vector<std::uint32_t>> middle_counts;  // [point][trial]
    std::vector<double> middle_mean;
    std::vector<double> early_mean;
    std::vector<double> late_mean;
    std::uint64_t trials = 0;
};

/// Monte Carlo phase scan with per-trial laser phase jitter and Poisson counts.
PhaseScanData timebin_phase_scan(const TimebinConfig& config);

struct VisibilityResult {
    double v = 0.0;
    double v_err = 0.0;
    double amplitude = 0.0;
    double phase_offset = 0.0;
    std::vector<double> phases;
    std::vector<double> means;
};

/// Least-squares fit of A(1 + V cos(phi - phi0)) to mean counts; V clamped to
/// [0,1]. Requires >= 5 points spanning >= 2 pi.
VisibilityResult fit_visibility_means(const std::vector<double>& phases,
                                      const std::vector<double>& means);

/// Same fit on a Monte Carlo scan, with the error from bootstrap resampling
/// of the trials.
VisibilityResult fit_visibility(const PhaseScanData& scan, int bootstrap_resamples,
                                std::uint64_t seed);

}  // namespace afcsim
