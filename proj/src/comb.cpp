#include "afcsim/comb.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace afcsim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2_v<double>;

double sinc(double x) {
    return std::abs(x) < 1e-12 ? 1.0 : std::sin(x) / x;
}

// Fraction of the cell [x0, x1) covered by [a, b].
double overlap_fraction(double x0, double x1, double a, double b) {
    const double lo = std::max(x0, a);
    const double hi = std::min(x1, b);
    return hi > lo ? (hi - lo) / (x1 - x0) : 0.0;
}

}  // namespace

void CombParams::validate() const {
    if (!(period_mhz > 0.0)) throw std::invalid_argument("CombParams: period must be positive");
    if (!(finesse > 1.0)) throw std::invalid_argument("CombParams: finesse must exceed 1");
    if (peak_depth < 0.0) throw std::invalid_argument("CombParams: peak depth must be non-negative");
    if (background_depth < 0.0)
        throw std::invalid_argument("CombParams: background depth must be non-negative");
    if (peak_depth + background_depth > max_total_depth)
        throw std::invalid_argument("CombParams: peak+background depth " +
                                    std::to_string(peak_depth + background_depth) +
                                    " exceeds configured maximum " + std::to_string(max_total_depth));
    if (!(bandwidth_mhz > 0.0)) throw std::invalid_argument("CombParams: bandwidth must be positive");
}

SpectralProfile prepare_comb(const CombParams& params, const SpectralGrid& grid) {
    params.validate();
    const double w = params.tooth_fwhm();
    if (grid.resolution() > w / 5.0)
        throw std::invalid_argument("prepare_comb: grid resolution " +
                                    std::to_string(grid.resolution()) +
                                    " MHz too coarse for tooth FWHM " + std::to_string(w) + " MHz");
    if (params.bandwidth_mhz > grid.span())
        throw std::invalid_argument("prepare_comb: comb bandwidth exceeds grid span");

    const std::size_t n = grid.size();
    std::vector<double> depth(n, params.background_depth);
    const double half_band = params.bandwidth_mhz / 2.0;
    const double res = grid.resolution();

    // Teeth sit at +-(k+1/2)*period so that bandwidth/period counts full teeth.
    // Only teeth that fit entirely inside the band are placed.
    const double c_max = half_band - w / 2.0;
    for (int side = -1; side <= 1; side += 2) {
        for (int k = 0;; ++k) {
            const double c = side * (static_cast<double>(k) + 0.5) * params.period_mhz;
            if (std::abs(c) > c_max) break;
            if (params.tooth_shape == ToothShape::square) {
                const double a = c - w / 2.0, b = c + w / 2.0;
                // Fractional coverage at the edge cells keeps the discrete
                // tooth area exact, which the echo efficiency depends on.
                const auto i0 = static_cast<std::size_t>(
                    std::max(0.0, std::floor((a + grid.span() / 2.0) / res) - 1.0));
                for (std::size_t i = i0; i < n; ++i) {
                    const double x0 = grid.frequency(i) - res / 2.0;
                    if (x0 > b) break;
                    depth[i] += params.peak_depth * overlap_fraction(x0, x0 + res, a, b);
                }
            } else {
                const double coeff = 4.0 * kLn2 / (w * w);
                const double reach = 5.0 * w;
                const auto i0 = static_cast<std::size_t>(
                    std::max(0.0, std::floor((c - reach + grid.span() / 2.0) / res)));
                for (std::size_t i = i0; i < n; ++i) {
                    const double x = grid.frequency(i) - c;
                    if (x > reach) break;
                    depth[i] += params.peak_depth * std::exp(-coeff * x * x);
                }
            }
        }
    }
    return SpectralProfile(grid, std::move(depth));
}

SpectralProfile blur_profile(const SpectralProfile& profile, double sigma_mhz) {
    if (sigma_mhz < 0.0) throw std::invalid_argument("blur_profile: sigma must be non-negative");
    if (sigma_mhz == 0.0) return profile;
    const auto& grid = profile.grid();
    const std::size_t n = grid.size();

    // Gaussian convolution as a multiplier exp(-2 pi^2 sigma^2 tau^2) on the
    // conjugate-delay components; preserves the DC (total area) exactly.
    cvec work(n);
    for (std::size_t i = 0; i < n; ++i) work[i] = profile.depth()[i];
    fftshift(work);
    fft_inverse(work);
    const double dt = grid.time_step();
    for (std::size_t m = 0; m < n; ++m) {
        const double tau =
            (m < n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n)) * dt;
        work[m] *= std::exp(-2.0 * kPi * kPi * sigma_mhz * sigma_mhz * tau * tau);
    }
    fft_forward(work);
    fftshift(work);
    std::vector<double> depth(n);
    for (std::size_t i = 0; i < n; ++i) depth[i] = std::max(0.0, work[i].real());
    return SpectralProfile(grid, std::move(depth));
}

double analytic_afc_efficiency(const CombParams& params) {
    params.validate();
    const double f = params.finesse;
    const double d1 = params.peak_depth;
    const double d0 = params.background_depth;
    double eta = 0.0;
    if (params.tooth_shape == ToothShape::square) {
        const double s = sinc(kPi / f);
        eta = (d1 / f) * (d1 / f) * s * s * std::exp(-d1 / f) * std::exp(-d0);
    } else {
        const double dt = (d1 / f) * std::sqrt(kPi / (4.0 * kLn2));
        const double dephase = std::exp(-kPi * kPi / (2.0 * kLn2 * f * f));
        eta = dt * dt * std::exp(-dt) * dephase * std::exp(-d0);
    }
    return eta;
}

double blur_intensity_factor(double sigma_mhz, double period_mhz) {
    const double x = 2.0 * kPi * kPi * sigma_mhz * sigma_mhz / (period_mhz * period_mhz);
    return std::exp(-2.0 * x);
}

void write_profile_csv(std::ostream& os, const SpectralProfile& profile) {
    os << "detuning_mhz,optical_depth\n";
    char line[64];
    for (std::size_t i = 0; i < profile.grid().size(); ++i) {
        std::snprintf(line, sizeof(line), "%.9g,%.9g\n", profile.grid().frequency(i),
                      profile.depth()[i]);
        os << line;
    }
}

}  // namespace afcsim
