#include "afcsim/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace afcsim {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

void DetectorParams::validate() const {
    if (quantum_efficiency < 0.0 || quantum_efficiency > 1.0)
        throw std::invalid_argument("DetectorParams: quantum efficiency outside [0,1]");
    if (dark_rate_per_us < 0.0)
        throw std::invalid_argument("DetectorParams: dark rate must be non-negative");
    if (!(time_bin_us > 0.0)) throw std::invalid_argument("DetectorParams: time bin must be positive");
    if (trials < 1) throw std::invalid_argument("DetectorParams: trials must be >= 1");
}

std::uint64_t CountHistogram::window_counts(double a_us, double b_us) const {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double c = bin_center(i);
        if (c >= a_us && c < b_us) sum += counts[i];
    }
    return sum;
}

double CountHistogram::window_duration(double a_us, double b_us) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double c = bin_center(i);
        if (c >= a_us && c < b_us) sum += edges_us[i + 1] - edges_us[i];
    }
    return sum;
}

CountHistogram simulate_counts(const std::vector<FluxTimeline>& fluxes,
                               const DetectorParams& detector, double t_start_us, double t_end_us,
                               std::uint64_t stream) {
    detector.validate();
    if (!(t_end_us > t_start_us))
        throw std::invalid_argument("simulate_counts: empty readout span");

    const auto n_bins = static_cast<std::size_t>(
        std::ceil((t_end_us - t_start_us) / detector.time_bin_us - 1e-9));
    CountHistogram hist;
    hist.trials = detector.trials;
    hist.edges_us.resize(n_bins + 1);
    for (std::size_t i = 0; i <= n_bins; ++i)
        hist.edges_us[i] = t_start_us + static_cast<double>(i) * detector.time_bin_us;
    hist.expected.assign(n_bins, detector.dark_rate_per_us * detector.time_bin_us);
    hist.counts.assign(n_bins, 0);

    for (const auto& f : fluxes) {
        for (std::size_t i = 0; i < f.flux.size(); ++i) {
            if (f.flux[i] < 0.0)
                throw std::invalid_argument("simulate_counts: negative flux in " + f.source);
            const double t = f.time(i);
            if (t < t_start_us || t >= t_end_us) continue;
            const auto b = static_cast<std::size_t>((t - t_start_us) / detector.time_bin_us);
            if (b < n_bins) hist.expected[b] += detector.quantum_efficiency * f.flux[i] * f.dt_us;
        }
    }

    const std::uint64_t base = mix_seed(detector.seed, stream);
    for (std::uint64_t trial = 0; trial < detector.trials; ++trial) {
        Rng rng = trial_rng(base, trial);
        for (std::size_t b = 0; b < n_bins; ++b) {
            if (hist.expected[b] > 0.0) hist.counts[b] += rng.poisson(hist.expected[b]);
        }
    }
    return hist;
}

FluxTimeline signal_flux(const TimeAxis& axis, double center_us, double fwhm_us, double nbar,
                         double efficiency) {
    FluxTimeline f;
    f.source = "signal";
    f.carrier_detuning_mhz = 0.0;
    f.spectral_class = SpectralClass::narrowband;
    f.t0_us = axis.t0_us;
    f.dt_us = axis.dt_us;
    f.flux.assign(axis.n, 0.0);
    const double photons = nbar * efficiency;
    if (photons > 0.0) {
        const double coeff = 4.0 * std::numbers::ln2_v<double> / (fwhm_us * fwhm_us);
        const double norm = photons * std::sqrt(coeff / kPi);
        for (std::size_t i = 0; i < f.flux.size(); ++i) {
            const double x = f.time(i) - center_us;
            f.flux[i] += norm * std::exp(-coeff * x * x);
        }
    }
    return f;
}

SnrEstimate estimate_snr(const CountHistogram& signal, double sig_start_us, double sig_end_us,
                         const CountHistogram& noise, double noise_start_us, double noise_end_us) {
    const auto s = static_cast<double>(signal.window_counts(sig_start_us, sig_end_us));
    const auto n = static_cast<double>(noise.window_counts(noise_start_us, noise_end_us));
    if (n <= 0.0) throw std::invalid_argument("estimate_snr: empty noise reference");
    const double sig_dur = signal.window_duration(sig_start_us, sig_end_us);
    const double noise_dur = noise.window_duration(noise_start_us, noise_end_us);
    if (sig_dur <= 0.0 || noise_dur <= 0.0)
        throw std::invalid_argument("estimate_snr: window outside histogram");

    const double scale = (sig_dur / noise_dur) * (static_cast<double>(signal.trials) /
                                                  static_cast<double>(noise.trials));
    SnrEstimate est;
    est.signal_counts = s;
    est.noise_counts_scaled = n * scale;
    est.snr = s / est.noise_counts_scaled;
    est.err = est.snr * std::sqrt(1.0 / std::max(1.0, s) + 1.0 / n);
    return est;
}

SnrScanResult snr_scan(const std::vector<double>& nbar_list, const SnrCycleConfig& cycle,
                       const DetectorParams& detector) {
    if (nbar_list.empty()) throw std::invalid_argument("snr_scan: empty nbar list");
    for (double nb : nbar_list) {
        if (nb < 0.0) throw std::invalid_argument("snr_scan: nbar must be non-negative");
    }

    TimeAxis axis;
    if (!cycle.noise_fluxes.empty()) {
        axis.t0_us = cycle.noise_fluxes.front().t0_us;
        axis.dt_us = cycle.noise_fluxes.front().dt_us;
        axis.n = cycle.noise_fluxes.front().flux.size();
    }
    const double w0 = cycle.echo_center_us - cycle.window_halfwidth_us;
    const double w1 = cycle.echo_center_us + cycle.window_halfwidth_us;

    DetectorParams noise_det = detector;
    noise_det.trials = cycle.noise_reference_trials;
    const CountHistogram noise_hist = simulate_counts(cycle.noise_fluxes, noise_det,
                                                      cycle.readout_start_us, cycle.readout_end_us,
                                                      fnv1a64("snr-noise-reference"));

    SnrScanResult result;
    std::uint64_t total_counts = noise_hist.window_counts(w0, w1);
    for (std::size_t i = 0; i < nbar_list.size(); ++i) {
        auto fluxes = cycle.noise_fluxes;
        fluxes.push_back(signal_flux(axis, cycle.echo_center_us, cycle.echo_fwhm_us, nbar_list[i],
                                     cycle.effective_efficiency));
        const CountHistogram hist =
            simulate_counts(fluxes, detector, cycle.readout_start_us, cycle.readout_end_us,
                            fnv1a64("snr-scan-point", i + 1));
        total_counts += hist.window_counts(w0, w1);
        const SnrEstimate est = estimate_snr(hist, w0, w1, noise_hist, w0, w1);
        result.nbar.push_back(nbar_list[i]);
        result.snr.push_back(est.snr);
        result.err.push_back(est.err);
    }
    if (total_counts == 0) throw std::runtime_error("snr_scan: all histograms empty");

    // Weighted least squares of SNR = 1 + k nbar (intercept fixed by the
    // definition of the estimator).
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < result.nbar.size(); ++i) {
        const double w = 1.0 / std::max(1e-12, result.err[i] * result.err[i]);
        sxx += w * result.nbar[i] * result.nbar[i];
        sxy += w * result.nbar[i] * (result.snr[i] - 1.0);
    }
    result.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    result.slope_err = sxx > 0.0 ? 1.0 / std::sqrt(sxx) : 0.0;

    double sw = 0.0, swy = 0.0;
    for (std::size_t i = 0; i < result.nbar.size(); ++i) {
        const double w = 1.0 / std::max(1e-12, result.err[i] * result.err[i]);
        sw += w;
        swy += w * result.snr[i];
    }
    const double ybar = swy / sw;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < result.nbar.size(); ++i) {
        const double w = 1.0 / std::max(1e-12, result.err[i] * result.err[i]);
        const double fit = 1.0 + result.slope * result.nbar[i];
        ss_res += w * (result.snr[i] - fit) * (result.snr[i] - fit);
        ss_tot += w * (result.snr[i] - ybar) * (result.snr[i] - ybar);
    }
    result.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
    return result;
}

double coherence_visibility(double sigma_f_khz, double t_us) {
    const double s = kTwoPi * sigma_f_khz * 1e-3 * t_us;
    return std::exp(-s * s / 2.0);
}

double visibility_phase_jitter_mc(double sigma_f_khz, double t_us, std::uint64_t trials,
                                  std::uint64_t seed) {
    const double s = kTwoPi * sigma_f_khz * 1e-3 * t_us;
    double sum = 0.0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        Rng rng = trial_rng(seed, i);
        sum += std::cos(s * rng.gaussian());
    }
    return sum / static_cast<double>(trials);
}

void TimebinConfig::validate() const {
    if (nbar < 0.0) throw std::invalid_argument("TimebinConfig: nbar must be non-negative");
    if (eta_s < 0.0 || eta_s > 1.0)
        throw std::invalid_argument("TimebinConfig: storage efficiency outside [0,1]");
    if (!(bin_separation_us > 0.0))
        throw std::invalid_argument("TimebinConfig: bin separation must be positive");
    if (bin_separation_us >= afc_delay_us / 2.0)
        throw std::invalid_argument(
            "TimebinConfig: bin separation exceeds the AFC window (pulses collide)");
    if (bin_noise_floor < 0.0)
        throw std::invalid_argument("TimebinConfig: noise floor must be non-negative");
    if (phase_points < 5) throw std::invalid_argument("TimebinConfig: need >= 5 phase points");
    if (trials_per_point < 1)
        throw std::invalid_argument("TimebinConfig: trials per point must be >= 1");
}

namespace {

// Per-trial expected counts given the realized interference phase.
std::array<double, 3> timebin_means(double cos_term, const TimebinConfig& c) {
    const double retrieved = c.eta_s * c.nbar;
    return {
        retrieved / 4.0 + c.bin_noise_floor,
        (retrieved / 2.0) * (1.0 + cos_term) + c.bin_noise_floor,
        retrieved / 4.0 + c.bin_noise_floor,
    };
}

}  // namespace

std::array<double, 3> timebin_cycle(double phase_rad, const TimebinConfig& config) {
    config.validate();
    const double v_coh = coherence_visibility(config.sigma_f_khz, config.bin_separation_us);
    return timebin_means(v_coh * std::cos(phase_rad), config);
}

PhaseScanData timebin_phase_scan(const TimebinConfig& config) {
    config.validate();
    PhaseScanData scan;
    scan.trials = config.trials_per_point;
    const int points = config.phase_points;
    const double jitter = kTwoPi * config.sigma_f_khz * 1e-3 * config.bin_separation_us;

    for (int p = 0; p < points; ++p) {
        const double phase = kTwoPi * static_cast<double>(p) / static_cast<double>(points - 1);
        scan.phases.push_back(phase);
        std::vector<std::uint32_t> mids(config.trials_per_point);
        double sum_mid = 0.0, sum_early = 0.0, sum_late = 0.0;
        const std::uint64_t point_seed = mix_seed(config.seed, 1000 + static_cast<std::uint64_t>(p));
        for (std::uint64_t t = 0; t < config.trials_per_point; ++t) {
            Rng rng = trial_rng(point_seed, t);
            const double realized = std::cos(phase + jitter * rng.gaussian());
            const auto means = timebin_means(realized, config);
            const auto early = rng.poisson(means[0]);
            const auto mid = rng.poisson(means[1]);
            const auto late = rng.poisson(means[2]);
            mids[t] = static_cast<std::uint32_t>(mid);
            sum_early += static_cast<double>(early);
            sum_mid += static_cast<double>(mid);
            sum_late += static_cast<double>(late);
        }
        scan.middle_counts.push_back(std::move(mids));
        const auto n = static_cast<double>(config.trials_per_point);
        scan.middle_mean.push_back(sum_mid / n);
        scan.early_mean.push_back(sum_early / n);
        scan.late_mean.push_back(sum_late / n);
    }
    return scan;
}

VisibilityResult fit_visibility_means(const std::vector<double>& phases,
                                      const std::vector<double>& means) {
    if (phases.size() != means.size() || phases.size() < 5)
        throw std::invalid_argument("fit_visibility: need >= 5 phase points");
    const auto [mn, mx] = std::minmax_element(phases.begin(), phases.end());
    if (*mx - *mn < kTwoPi - 1e-9)
        throw std::invalid_argument("fit_visibility: phase scan must span >= 2 pi");

    // Linear model y = a + b cos(phi) + c sin(phi); solve the 3x3 normal
    // equations, then V = |(b, c)| / a.
    double s[3][3] = {{0}};
    double rhs[3] = {0};
    for (std::size_t i = 0; i < phases.size(); ++i) {
        const double basis[3] = {1.0, std::cos(phases[i]), std::sin(phases[i])};
        for (int r = 0; r < 3; ++r) {
            rhs[r] += basis[r] * means[i];
            for (int c = 0; c < 3; ++c) s[r][c] += basis[r] * basis[c];
        }
    }
    // Gaussian elimination with partial pivoting.
    double m[3][4];
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) m[r][c] = s[r][c];
        m[r][3] = rhs[r];
    }
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        std::swap(m[col], m[pivot]);
        if (std::abs(m[col][col]) < 1e-30)
            throw std::invalid_argument("fit_visibility: degenerate phase scan");
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    const double a = m[0][3] / m[0][0];
    const double b = m[1][3] / m[1][1];
    const double c = m[2][3] / m[2][2];
    if (!(a > 0.0)) throw std::invalid_argument("fit_visibility: fitted amplitude not positive");

    VisibilityResult res;
    res.amplitude = a;
    res.phase_offset = std::atan2(c, b);
    res.v = std::clamp(std::hypot(b, c) / a, 0.0, 1.0);
    res.phases = phases;
    res.means = means;
    return res;
}

VisibilityResult fit_visibility(const PhaseScanData& scan, int bootstrap_resamples,
                                std::uint64_t seed) {
    VisibilityResult res = fit_visibility_means(scan.phases, scan.middle_mean);
    if (bootstrap_resamples <= 0 || scan.trials < 2) return res;

    const auto points = scan.phases.size();
    const auto trials = static_cast<std::uint64_t>(scan.trials);
    double sum = 0.0, sum2 = 0.0;
    int used = 0;
    for (int r = 0; r < bootstrap_resamples; ++r) {
        Rng rng(mix_seed(seed, 7000 + static_cast<std::uint64_t>(r)));
        std::vector<double> means(points, 0.0);
        for (std::size_t p = 0; p < points; ++p) {
            double acc = 0.0;
            for (std::uint64_t t = 0; t < trials; ++t) {
                const auto pick = static_cast<std::size_t>(rng.next_u64() % trials);
                acc += static_cast<double>(scan.middle_counts[p][pick]);
            }
            means[p] = acc / static_cast<double>(trials);
        }
        try {
            const VisibilityResult rf = fit_visibility_means(scan.phases, means);
            sum += rf.v;
            sum2 += rf.v * rf.v;
            ++used;
        } catch (const std::invalid_argument&) {
            // A pathological resample (all-zero counts) is skipped.
        }
    }
    if (used > 1) {
        const double mean = sum / used;
        res.v_err = std::sqrt(std::max(0.0, sum2 / used - mean * mean));
    }
    return res;
}

}  // namespace afcsim
