#pragma once

#include "afcsim/fft.hpp"

#include <cstddef>
#include <vector>

namespace afcsim {

// Units: time in microseconds, frequency in MHz (exact conjugates, 1/us == 1 MHz).

/// Uniform frequency grid, symmetric about zero detuning. n_points must be a
/// power of two; the conjugate time axis has step 1/span and length n/span.
class SpectralGrid {
public:
    SpectralGrid(double span_mhz, std::size_t n_points);

    double span() const { return span_; }
    std::size_t size() const { return n_; }
    double resolution() const { return span_ / static_cast<double>(n_); }
    double time_step() const { return 1.0 / span_; }
    double duration() const { return static_cast<double>(n_) / span_; }
    /// Ascending detuning of bin i: (i - n/2) * resolution.
    double frequency(std::size_t i) const {
        return (static_cast<double>(i) - static_cast<double>(n_ / 2)) * resolution();
    }
    std::vector<double> frequencies() const;

    bool operator==(const SpectralGrid&) const = default;

private:
    double span_;
    std::size_t n_;
};

/// Complex field amplitude vs time on the conjugate axis of a SpectralGrid.
/// The integrated intensity sum|a|^2 dt is the mean photon number.
class TemporalEnvelope {
public:
    TemporalEnvelope(SpectralGrid grid, cvec samples, double carrier_detuning_mhz = 0.0);
    TemporalEnvelope(SpectralGrid grid, cvec samples, double carrier_detuning_mhz, double t_start_us);

    const SpectralGrid& grid() const { return grid_; }
    const cvec& samples() const { return samples_; }
    double time_step() const { return grid_.time_step(); }
    double t_start() const { return t_start_; }
    double time(std::size_t i) const { return t_start_ + static_cast<double>(i) * time_step(); }
    double carrier_detuning() const { return carrier_detuning_; }

    double mean_photon_number() const;
    /// Integrated intensity over [t0, t1).
    double energy_in(double t0_us, double t1_us) const;
    /// Intensity-weighted mean time over [t0, t1).
    double intensity_centroid(double t0_us, double t1_us) const;

    /// Complex spectrum in ascending-frequency order (forward DFT * dt).
    cvec spectrum() const;
    std::vector<double> spectral_intensity() const;

private:
    SpectralGrid grid_;
    cvec samples_;
    double carrier_detuning_;
    double t_start_;
};

/// Gaussian pulse with the given intensity FWHM, normalized so the integrated
/// intensity equals nbar exactly. Throws if the tails clipped by the time
/// window exceed 1e-6 of the pulse energy.
TemporalEnvelope gaussian_pulse(const SpectralGrid& grid, double center_us, double fwhm_us,
                                double nbar, double carrier_detuning_mhz = 0.0);

/// Discrete Hilbert transform of `values` on the grid (conjugate-delay sign
/// convention: a causal single-trip response exp(-a + i*H[a]) has its impulse
/// response at positive delay). Requires flatness over the outer 5% of the grid.
std::vector<double> hilbert_transform(const SpectralGrid& grid, const std::vector<double>& values);

/// Dispersion phase accompanying an absorption depth profile: H[d/2].
std::vector<double> hilbert_phase(const SpectralGrid& grid, const std::vector<double>& depth);

/// Optical depth vs detuning plus the cached Kramers-Kronig phase of d/2.
/// Immutable after construction (phase is computed once, in the constructor).
class SpectralProfile {
public:
    SpectralProfile(SpectralGrid grid, std::vector<double> depth);

    const SpectralGrid& grid() const { return grid_; }
    const std::vector<double>& depth() const { return depth_; }
    const std::vector<double>& phase() const { return phase_; }
    double peak_depth() const;

private:
    SpectralGrid grid_;
    std::vector<double> depth_;
    std::vector<double> phase_;
};

}  // namespace afcsim
