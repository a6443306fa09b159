#pragma once

#include "afcsim/spectral.hpp"

#include <iosfwd>

namespace afcsim {

/// Linear amplitude response of the medium, ascending-frequency order:
/// H = exp(-D/2 + i*phi(D/2)) with D = pass_count * depth.
struct TransferFunction {
    SpectralGrid grid;
    cvec h;
    int pass_count = 1;
};

struct EchoReport {
    double echo_time_us = 0.0;
    double echo_efficiency = 0.0;
    double transmitted_fraction = 0.0;
    double window_start_us = 0.0;
    double window_end_us = 0.0;
};

TransferFunction build_transfer(const SpectralProfile& profile, int pass_count = 1);

/// Variant with the dispersion phase zeroed; only for the guard test that the
/// Kramers-Kronig phase is load-bearing.
TransferFunction build_transfer_without_dispersion(const SpectralProfile& profile,
                                                   int pass_count = 1);

/// Output spectrum = H * input spectrum. Throws on grid mismatch.
TemporalEnvelope propagate(const TemporalEnvelope& input, const TransferFunction& transfer);

/// Windowed centroid and energy of the echo. The echo window
/// expected_time +- halfwidth must not overlap the transmitted-pulse window
/// (input centroid +- halfwidth).
EchoReport extract_echo(const TemporalEnvelope& input, const TemporalEnvelope& output,
                        double expected_time_us, double window_halfwidth_us);

/// Default echo window halfwidth: max(1.5 * input FWHM, 3 time steps).
double default_echo_halfwidth(double input_fwhm_us, double time_step_us);

/// Two-column text export: time_us,intensity per line.
void write_envelope_csv(std::ostream& os, const TemporalEnvelope& envelope);

}  // namespace afcsim
