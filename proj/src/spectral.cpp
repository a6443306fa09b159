#include "afcsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace afcsim {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(std::size_t n) {
    return n > 0 && (n & (n - 1)) == 0;
}

// Profiles fed to the Hilbert transform must be flat over the outer 5% of the
// grid on each side; anything else wraps around the cyclic transform.
void check_edge_flatness(const std::vector<double>& v, const char* what) {
    const std::size_t n = v.size();
    const std::size_t margin = std::max<std::size_t>(2, n / 20);
    double lo = v[0], hi = v[0];
    for (std::size_t i = 0; i < margin; ++i) {
        lo = std::min({lo, v[i], v[n - 1 - i]});
        hi = std::max({hi, v[i], v[n - 1 - i]});
    }
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    const double tol = std::max(1e-12, 1e-3 * peak);
    if (hi - lo > tol) {
        throw std::invalid_argument(std::string(what) +
                                    ": profile not flat over the outer 5% of the grid");
    }
}

}  // namespace

SpectralGrid::SpectralGrid(double span_mhz, std::size_t n_points) : span_(span_mhz), n_(n_points) {
    if (!(span_mhz > 0.0)) throw std::invalid_argument("SpectralGrid: span must be positive");
    if (!is_power_of_two(n_points))
        throw std::invalid_argument("SpectralGrid: n_points must be a power of two, got " +
                                    std::to_string(n_points));
}

std::vector<double> SpectralGrid::frequencies() const {
    std::vector<double> f(n_);
    for (std::size_t i = 0; i < n_; ++i) f[i] = frequency(i);
    return f;
}

TemporalEnvelope::TemporalEnvelope(SpectralGrid grid, cvec samples, double carrier_detuning_mhz)
    : TemporalEnvelope(grid, std::move(samples), carrier_detuning_mhz, -grid.duration() / 2.0) {}

TemporalEnvelope::TemporalEnvelope(SpectralGrid grid, cvec samples, double carrier_detuning_mhz,
                                   double t_start_us)
    : grid_(grid), samples_(std::move(samples)), carrier_detuning_(carrier_detuning_mhz),
      t_start_(t_start_us) {
    if (samples_.size() != grid_.size())
        throw std::invalid_argument("TemporalEnvelope: sample count does not match grid");
}

double TemporalEnvelope::mean_photon_number() const {
    double e = 0.0;
    for (const auto& a : samples_) e += std::norm(a);
    return e * time_step();
}

double TemporalEnvelope::energy_in(double t0_us, double t1_us) const {
    double e = 0.0;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const double t = time(i);
        if (t >= t0_us && t < t1_us) e += std::norm(samples_[i]);
    }
    return e * time_step();
}

double TemporalEnvelope::intensity_centroid(double t0_us, double t1_us) const {
    double e = 0.0, te = 0.0;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const double t = time(i);
        if (t >= t0_us && t < t1_us) {
            const double w = std::norm(samples_[i]);
            e += w;
            te += w * t;
        }
    }
    if (e <= 0.0) throw std::runtime_error("intensity_centroid: no energy in window");
    return te / e;
}

cvec TemporalEnvelope::spectrum() const {
    cvec spec = samples_;
    fft_forward(spec);
    const double dt = time_step();
    for (auto& z : spec) z *= dt;
    fftshift(spec);
    return spec;
}

std::vector<double> TemporalEnvelope::spectral_intensity() const {
    const cvec spec = spectrum();
    std::vector<double> out(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) out[i] = std::norm(spec[i]);
    return out;
}

TemporalEnvelope gaussian_pulse(const SpectralGrid& grid, double center_us, double fwhm_us,
                                double nbar, double carrier_detuning_mhz) {
    if (!(fwhm_us > 0.0)) throw std::invalid_argument("gaussian_pulse: fwhm must be positive");
    if (nbar < 0.0) throw std::invalid_argument("gaussian_pulse: nbar must be non-negative");

    const double t_start = -grid.duration() / 2.0;
    const double t_end = t_start + grid.duration();

    // Intensity ~ exp(-4 ln2 (t-c)^2 / w^2); clipped-tail fraction via erfc.
    const double sigma_i = fwhm_us / (2.0 * std::sqrt(2.0 * std::numbers::ln2_v<double>));
    const double tail_lo = 0.5 * std::erfc((center_us - t_start) / (sigma_i * std::sqrt(2.0)));
    const double tail_hi = 0.5 * std::erfc((t_end - center_us) / (sigma_i * std::sqrt(2.0)));
    if (tail_lo + tail_hi > 1e-6)
        throw std::invalid_argument("gaussian_pulse: pulse clipped by window edge beyond tolerance");

    const std::size_t n = grid.size();
    cvec samples(n);
    const double dt = grid.time_step();
    const double field_coeff = 2.0 * std::numbers::ln2_v<double> / (fwhm_us * fwhm_us);
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t_start + static_cast<double>(i) * dt - center_us;
        const double amp = std::exp(-field_coeff * t * t);
        const double phase = 2.0 * kPi * carrier_detuning_mhz * t;
        samples[i] = std::polar(amp, phase);
        energy += amp * amp;
    }
    energy *= dt;
    if (nbar == 0.0) {
        std::fill(samples.begin(), samples.end(), std::complex<double>(0.0, 0.0));
    } else {
        const double scale = std::sqrt(nbar / energy);
        for (auto& z : samples) z *= scale;
    }
    return TemporalEnvelope(grid, std::move(samples), carrier_detuning_mhz, t_start);
}

std::vector<double> hilbert_transform(const SpectralGrid& grid, const std::vector<double>& values) {
    const std::size_t n = grid.size();
    if (values.size() != n)
        throw std::invalid_argument("hilbert_transform: size does not match grid");
    check_edge_flatness(values, "hilbert_transform");

    // Go to the conjugate (delay) domain, flip the sign of negative-delay
    // components by i*sgn(tau), and come back. This makes -a + i*H[a] a
    // positive-delay (causal) response for any real a.
    cvec work(n);
    for (std::size_t i = 0; i < n; ++i) work[i] = values[i];
    fftshift(work);   // ascending-frequency -> FFT bin order
    fft_inverse(work);
    work[0] = 0.0;
    work[n / 2] = 0.0;
    const std::complex<double> plus_i(0.0, 1.0);
    for (std::size_t m = 1; m < n / 2; ++m) work[m] *= plus_i;
    for (std::size_t m = n / 2 + 1; m < n; ++m) work[m] *= -plus_i;
    fft_forward(work);
    fftshift(work);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = work[i].real();
    return out;
}

std::vector<double> hilbert_phase(const SpectralGrid& grid, const std::vector<double>& depth) {
    for (double d : depth) {
        if (d < 0.0) throw std::invalid_argument("hilbert_phase: depth must be non-negative");
    }
    std::vector<double> half(depth.size());
    for (std::size_t i = 0; i < depth.size(); ++i) half[i] = 0.5 * depth[i];
    return hilbert_transform(grid, half);
}

SpectralProfile::SpectralProfile(SpectralGrid grid, std::vector<double> depth)
    : grid_(grid), depth_(std::move(depth)) {
    if (depth_.size() != grid_.size())
        throw std::invalid_argument("SpectralProfile: depth size does not match grid");
    phase_ = hilbert_phase(grid_, depth_);
}

double SpectralProfile::peak_depth() const {
    double peak = 0.0;
    for (double d : depth_) peak = std::max(peak, d);
    return peak;
}

}  // namespace afcsim
