#pragma once

#include "afcsim/spectral.hpp"

#include <iosfwd>

namespace afcsim {

enum class ToothShape { square, gaussian };

/// Atomic-frequency-comb parameters. period is the tooth spacing (MHz);
/// finesse = period / tooth FWHM; peak_depth sits on top of background_depth.
struct CombParams {
    double period_mhz = 1.0 / 6.0;
    double finesse = 3.0;
    double peak_depth = 2.4;
    double background_depth = 0.0;
    ToothShape tooth_shape = ToothShape::square;
    double bandwidth_mhz = 8.0;
    double max_total_depth = 2.4;

    double tooth_fwhm() const { return period_mhz / finesse; }
    void validate() const;  // throws std::invalid_argument on the first violation
};

/// Build the comb depth profile on the grid: teeth of FWHM period/finesse at
/// half-integer multiples of the period inside the comb bandwidth, peaks at
/// background+peak depth, troughs at background, background everywhere else.
SpectralProfile prepare_comb(const CombParams& params, const SpectralGrid& grid);

/// Convolve a depth profile with a normalized Gaussian of the given sigma
/// (models laser-linewidth blur of the teeth). Returns a new profile.
SpectralProfile blur_profile(const SpectralProfile& profile, double sigma_mhz);

/// Closed-form first-echo efficiency of an ideal comb.
/// Square teeth: (d1/F)^2 sinc^2(pi/F) exp(-d1/F) exp(-d0).
/// Gaussian teeth: dt^2 exp(-dt) exp(-d0) exp(-pi^2/(2 ln2 F^2)),
/// dt = (d1/F) sqrt(pi / (4 ln2)).
double analytic_afc_efficiency(const CombParams& params);

/// First-echo intensity scaling produced by a Gaussian tooth blur of the
/// given sigma: exp(-4 pi^2 sigma^2 / period^2).
double blur_intensity_factor(double sigma_mhz, double period_mhz);

/// Two-column text export: detuning_mhz,optical_depth per line.
void write_profile_csv(std::ostream& os, const SpectralProfile& profile);

}  // namespace afcsim
