#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "afcsim/rng.hpp"
#include "afcsim/spectral.hpp"

#include <cmath>
#include <numbers>

using namespace afcsim;

namespace {

// Smooth random profile that is exactly flat at the grid edges: a sum of
// Gaussians confined to the inner half of the span.
std::vector<double> random_smooth_profile(const SpectralGrid& grid, Rng& rng) {
    std::vector<double> d(grid.size(), 0.0);
    const int humps = 2 + static_cast<int>(rng.next_u64() % 4);
    for (int h = 0; h < humps; ++h) {
        const double center = (rng.uniform() - 0.5) * grid.span() * 0.4;
        const double width = 0.05 + rng.uniform() * 0.3;
        const double amp = 0.1 + rng.uniform();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = grid.frequency(i) - center;
            d[i] += amp * std::exp(-x * x / (2.0 * width * width));
        }
    }
    return d;
}

}  // namespace

TEST_CASE("grid construction and resolution") {
    const SpectralGrid grid(20.0, 1 << 14);
    CHECK(grid.resolution() == doctest::Approx(0.001220703125).epsilon(1e-12));
    // a comb of period 1/6 MHz is representable: resolution <= period/10
    CHECK(grid.resolution() <= (1.0 / 6.0) / 10.0);
    CHECK(grid.frequency(grid.size() / 2) == 0.0);
    CHECK(grid.frequency(0) == doctest::Approx(-10.0));

    CHECK_THROWS_AS(SpectralGrid(20.0, 1000), std::invalid_argument);
    CHECK_THROWS_AS(SpectralGrid(0.0, 1024), std::invalid_argument);
    CHECK_THROWS_AS(SpectralGrid(-5.0, 1024), std::invalid_argument);
}

TEST_CASE("grid conjugacy: window length x resolution = 1") {
    const SpectralGrid grid(20.0, 1 << 14);
    CHECK(grid.duration() * grid.resolution() == 1.0);
    CHECK(grid.time_step() * grid.span() == 1.0);

    Rng rng(99);
    for (int i = 0; i < 50; ++i) {
        const double span = 1.0 + 99.0 * rng.uniform();
        const SpectralGrid g(span, 1 << 10);
        // binary rounding allows one ulp here
        CHECK(g.duration() * g.resolution() == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("gaussian pulse normalization and shape") {
    const SpectralGrid grid(20.0, 1 << 14);

    const TemporalEnvelope pulse = gaussian_pulse(grid, 0.0, 2.0, 2.5);
    CHECK(pulse.mean_photon_number() == doctest::Approx(2.5).epsilon(1e-9));
    // intensity FWHM: half max at +-1 us
    const auto& s = pulse.samples();
    const std::size_t i0 = grid.size() / 2;  // t = 0 given t_start = -duration/2
    const double peak = std::norm(s[i0]);
    const std::size_t per_us = static_cast<std::size_t>(1.0 / grid.time_step());
    CHECK(std::norm(s[i0 + per_us]) == doctest::Approx(peak / 2.0).epsilon(1e-6));

    const TemporalEnvelope zero = gaussian_pulse(grid, 0.0, 2.0, 0.0);
    CHECK(zero.mean_photon_number() == 0.0);
    for (const auto& a : zero.samples()) CHECK(a == std::complex<double>(0.0, 0.0));

    // clipped by the window edge
    CHECK_THROWS_AS(gaussian_pulse(grid, grid.duration() / 2.0 - 1.0, 2.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("carrier detuning shifts the spectral peak") {
    const SpectralGrid grid(100.0, 1 << 14);
    const TemporalEnvelope pulse = gaussian_pulse(grid, 0.0, 2.0, 1.0, 35.4);
    const auto intensity = pulse.spectral_intensity();
    std::size_t arg = 0;
    for (std::size_t i = 1; i < intensity.size(); ++i)
        if (intensity[i] > intensity[arg]) arg = i;
    CHECK(std::abs(grid.frequency(arg) - 35.4) <= grid.resolution());
}

TEST_CASE("fft round trip preserves the envelope (Parseval)") {
    const SpectralGrid grid(20.0, 1 << 12);
    const TemporalEnvelope pulse = gaussian_pulse(grid, 3.0, 2.0, 1.7, 0.5);

    cvec data = pulse.samples();
    fft_forward(data);
    fft_inverse(data);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        num += std::norm(data[i] - pulse.samples()[i]);
        den += std::norm(pulse.samples()[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-9);

    // spectral energy equals temporal energy
    const auto spec = pulse.spectrum();
    double e_spec = 0.0;
    for (const auto& z : spec) e_spec += std::norm(z);
    e_spec *= grid.resolution();
    CHECK(e_spec == doctest::Approx(pulse.mean_photon_number()).epsilon(1e-9));
}

TEST_CASE("hilbert transform of a constant vanishes") {
    const SpectralGrid grid(20.0, 1 << 12);
    const std::vector<double> d(grid.size(), 1.3);
    const auto phi = hilbert_phase(grid, d);
    for (double p : phi) CHECK(std::abs(p) < 1e-12);
}

TEST_CASE("hilbert phase of a Lorentzian line matches the analytic dispersion") {
    // depth d(x) = d1 g^2/(g^2+x^2)  =>  phase (d1/2) g x/(g^2+x^2).
    // The dispersive tail decays only as 1/x, so the span must dwarf the
    // comparison region for the cyclic transform to approximate the line.
    const SpectralGrid grid(100.0, 1 << 15);
    const double gamma = 0.25, d1 = 1.5;
    std::vector<double> depth(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.frequency(i);
        depth[i] = d1 * gamma * gamma / (gamma * gamma + x * x);
    }
    const auto phi = hilbert_phase(grid, depth);
    const double phi_peak = d1 / 4.0;  // extremum of the analytic form at x = +-g
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.frequency(i);
        if (std::abs(x) > 25.0) continue;  // stay away from grid edges
        const double expected = (d1 / 2.0) * gamma * x / (gamma * gamma + x * x);
        CHECK(std::abs(phi[i] - expected) < 0.01 * phi_peak);
    }
}

TEST_CASE("even depth gives odd phase") {
    const SpectralGrid grid(20.0, 1 << 12);
    std::vector<double> depth(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.frequency(i);
        depth[i] = 2.0 * std::exp(-x * x / 2.0) + 0.5 * std::exp(-x * x / 0.1);
    }
    const auto phi = hilbert_phase(grid, depth);
    const std::size_t mid = grid.size() / 2;
    CHECK(std::abs(phi[mid]) < 1e-10);
    for (std::size_t k = 1; k < grid.size() / 2; ++k)
        CHECK(phi[mid + k] == doctest::Approx(-phi[mid - k]).epsilon(1e-9).scale(1.0));
}

TEST_CASE("hilbert transform is linear") {
    const SpectralGrid grid(10.0, 1 << 11);
    Rng rng(2024);
    for (int rep = 0; rep < 5; ++rep) {
        const auto d1 = random_smooth_profile(grid, rng);
        const auto d2 = random_smooth_profile(grid, rng);
        const double a = 0.3 + rng.uniform(), b = 0.1 + rng.uniform();
        std::vector<double> combo(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) combo[i] = a * d1[i] + b * d2[i];
        const auto h1 = hilbert_transform(grid, d1);
        const auto h2 = hilbert_transform(grid, d2);
        const auto hc = hilbert_transform(grid, combo);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(hc[i] == doctest::Approx(a * h1[i] + b * h2[i]).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("profiles must be non-negative and flat at the grid edges") {
    const SpectralGrid grid(20.0, 1 << 10);
    std::vector<double> ramp(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        ramp[i] = static_cast<double>(i) / static_cast<double>(grid.size());
    CHECK_THROWS_AS(SpectralProfile(grid, ramp), std::invalid_argument);

    std::vector<double> negative(grid.size(), 0.5);
    negative[grid.size() / 2] = -0.1;
    CHECK_THROWS_AS(SpectralProfile(grid, negative), std::invalid_argument);
}

TEST_CASE("envelope windowed energy and centroid") {
    const SpectralGrid grid(20.0, 1 << 14);
    const TemporalEnvelope pulse = gaussian_pulse(grid, 5.0, 2.0, 1.0);
    CHECK(pulse.energy_in(-20.0, 30.0) == doctest::Approx(1.0).epsilon(1e-9));
    // boundary sample at t = 5.0 is counted whole, hence the loose tolerance
    CHECK(pulse.energy_in(5.0, 30.0) == doctest::Approx(0.5).epsilon(0.03));
    CHECK(pulse.intensity_centroid(-20.0, 30.0) == doctest::Approx(5.0).epsilon(1e-9));
}
