#include <doctest.h>

#include "afcsim/comb.hpp"
#include "afcsim/fft.hpp"

#include <cmath>
#include <sstream>

using namespace afcsim;

namespace {

CombParams paper_comb() {
    CombParams p;
    p.period_mhz = 1.0 / 6.0;
    p.finesse = 3.0;
    p.peak_depth = 2.4;
    p.background_depth = 0.0;
    p.tooth_shape = ToothShape::square;
    p.bandwidth_mhz = 8.0;
    return p;
}

// maximal runs of points at the tooth plateau
int count_teeth(const SpectralProfile& profile, double level) {
    int teeth = 0;
    bool in_tooth = false;
    for (double d : profile.depth()) {
        const bool high = d >= level;
        if (high && !in_tooth) ++teeth;
        in_tooth = high;
    }
    return teeth;
}

}  // namespace

TEST_CASE("square comb shape: plateaus, troughs, tooth width, area") {
    const SpectralGrid grid(20.0, 1 << 14);
    CombParams params = paper_comb();
    params.background_depth = 0.3;
    params.max_total_depth = 2.7;
    const SpectralProfile comb = prepare_comb(params, grid);

    double peak = 0.0;
    for (double d : comb.depth()) peak = std::max(peak, d);
    CHECK(peak == doctest::Approx(2.7).epsilon(1e-12));

    // trough midway between the two central teeth (teeth at +-period/2)
    CHECK(comb.depth()[grid.size() / 2] == doctest::Approx(0.3).epsilon(1e-12));
    // outside the comb bandwidth only the background remains
    CHECK(comb.depth()[0] == doctest::Approx(0.3).epsilon(1e-12));

    // discrete tooth area is exact thanks to the anti-aliased edges
    const double tooth_w = params.tooth_fwhm();
    CHECK(tooth_w == doctest::Approx(1.0 / 18.0));  // ~55.6 kHz
    double area = 0.0;
    for (double d : comb.depth()) area += (d - params.background_depth) * grid.resolution();
    const int n_teeth = count_teeth(comb, params.background_depth + params.peak_depth / 2.0);
    CHECK(n_teeth == 48);  // 8 MHz / (1/6 MHz)
    CHECK(area == doctest::Approx(n_teeth * params.peak_depth * tooth_w).epsilon(1e-6));
}

TEST_CASE("zero tooth depth leaves a flat background profile") {
    const SpectralGrid grid(20.0, 1 << 13);
    CombParams params = paper_comb();
    params.peak_depth = 0.0;
    params.background_depth = 0.7;
    const SpectralProfile comb = prepare_comb(params, grid);
    for (double d : comb.depth()) CHECK(d == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("an 8 MHz band at 1/period = 8 us holds 64 full teeth") {
    const SpectralGrid grid(20.0, 1 << 14);
    CombParams params = paper_comb();
    params.period_mhz = 0.125;
    const SpectralProfile comb = prepare_comb(params, grid);
    CHECK(count_teeth(comb, params.peak_depth / 2.0) == 64);
}

TEST_CASE("comb autocorrelation peaks at multiples of the period") {
    // commensurate grid: period = 128 grid cells exactly
    const SpectralGrid grid(16.0, 1 << 14);
    CombParams params = paper_comb();
    params.period_mhz = 0.125;
    const SpectralProfile comb = prepare_comb(params, grid);

    const std::size_t n = grid.size();
    cvec work(n);
    double mean = 0.0;
    for (double d : comb.depth()) mean += d;
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) work[i] = comb.depth()[i] - mean;
    fft_forward(work);
    for (auto& z : work) z = std::norm(z);
    fft_inverse(work);  // autocorrelation vs lag

    const std::size_t period_cells = 128;
    for (int k = 1; k <= 3; ++k) {
        std::size_t best = period_cells * k - period_cells / 2;
        for (std::size_t lag = best; lag <= period_cells * k + period_cells / 2; ++lag)
            if (work[lag].real() > work[best].real()) best = lag;
        CHECK(best == period_cells * static_cast<std::size_t>(k));
    }
}

TEST_CASE("analytic efficiency: frozen values") {
    CombParams params = paper_comb();
    // (d1/F)^2 sinc^2(pi/F) exp(-d1/F) evaluated independently: 0.1966755
    CHECK(analytic_afc_efficiency(params) == doctest::Approx(0.1966755).epsilon(1e-4));

    params.peak_depth = 0.0;
    CHECK(analytic_afc_efficiency(params) == 0.0);

    params = paper_comb();
    params.background_depth = 0.5;
    params.max_total_depth = 3.0;
    CHECK(analytic_afc_efficiency(params) == doctest::Approx(0.1966755 * std::exp(-0.5)).epsilon(1e-4));
    CHECK(analytic_afc_efficiency(params) == doctest::Approx(0.1193).epsilon(1e-3));
}

TEST_CASE("analytic efficiency: monotone in background, vanishes at finesse limits") {
    CombParams params = paper_comb();
    params.max_total_depth = 10.0;
    double prev = analytic_afc_efficiency(params);
    for (double d0 : {0.2, 0.5, 1.0, 2.0, 4.0}) {
        params.background_depth = d0;
        const double eta = analytic_afc_efficiency(params);
        CHECK(eta < prev);
        prev = eta;
    }

    params = paper_comb();
    params.max_total_depth = 10.0;
    const double at_opt = analytic_afc_efficiency(params);
    for (double f : {1.0001, 1.01, 1.1}) {
        params.finesse = f;
        CHECK(analytic_afc_efficiency(params) < at_opt);
    }
    CHECK(analytic_afc_efficiency(CombParams{1.0 / 6.0, 1.0001, 2.4, 0.0, ToothShape::square, 8.0,
                                             10.0}) < 1e-6);
    params.finesse = 1e4;
    CHECK(analytic_afc_efficiency(params) < 1e-6);

    // gaussian teeth carry the exp(-pi^2/(2 ln2 F^2)) dephasing penalty
    CombParams gauss = paper_comb();
    gauss.tooth_shape = ToothShape::gaussian;
    const double f = gauss.finesse;
    const double dt = (gauss.peak_depth / f) * std::sqrt(M_PI / (4.0 * std::log(2.0)));
    const double expected =
        dt * dt * std::exp(-dt) * std::exp(-M_PI * M_PI / (2.0 * std::log(2.0) * f * f));
    CHECK(analytic_afc_efficiency(gauss) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("tooth blur preserves area and damps the first harmonic") {
    const SpectralGrid grid(20.0, 1 << 14);
    const CombParams params = paper_comb();
    const SpectralProfile ideal = prepare_comb(params, grid);
    const SpectralProfile blurred = blur_profile(ideal, 0.030);

    double area_ideal = 0.0, area_blur = 0.0, peak_blur = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        area_ideal += ideal.depth()[i];
        area_blur += blurred.depth()[i];
        peak_blur = std::max(peak_blur, blurred.depth()[i]);
    }
    CHECK(area_blur == doctest::Approx(area_ideal).epsilon(1e-6));
    CHECK(peak_blur < params.peak_depth);

    // 30 kHz blur on the 1/6 MHz comb: first-echo intensity factor e^-1.279
    CHECK(blur_intensity_factor(0.030, 1.0 / 6.0) == doctest::Approx(0.27830).epsilon(1e-4));
    CHECK(blur_intensity_factor(0.0, 1.0 / 6.0) == 1.0);
}

TEST_CASE("comb preparation rejects bad inputs") {
    const SpectralGrid coarse(20.0, 1 << 8);
    CHECK_THROWS_AS(prepare_comb(paper_comb(), coarse), std::invalid_argument);

    CombParams params = paper_comb();
    params.peak_depth = 2.4;
    params.background_depth = 0.5;  // 2.9 > max_total_depth 2.4
    const SpectralGrid grid(20.0, 1 << 14);
    CHECK_THROWS_AS(prepare_comb(params, grid), std::invalid_argument);

    params = paper_comb();
    params.finesse = 1.0;
    CHECK_THROWS_AS(prepare_comb(params, grid), std::invalid_argument);
}

TEST_CASE("profile csv export") {
    const SpectralGrid grid(20.0, 1 << 14);
    const SpectralProfile comb = prepare_comb(paper_comb(), grid);
    std::ostringstream os;
    write_profile_csv(os, comb);
    const std::string text = os.str();
    CHECK(text.rfind("detuning_mhz,optical_depth\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == grid.size() + 1);
}
