#include "afcsim/echo.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace afcsim {

namespace {

TransferFunction make_transfer(const SpectralProfile& profile, int pass_count, bool with_phase) {
    if (pass_count != 1 && pass_count != 2)
        throw std::invalid_argument("build_transfer: pass_count must be 1 or 2");
    const std::size_t n = profile.grid().size();
    cvec h(n);
    const double passes = static_cast<double>(pass_count);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = passes * profile.depth()[i] / 2.0;
        const double phi = with_phase ? passes * profile.phase()[i] : 0.0;
        h[i] = std::polar(std::exp(-a), phi);
    }
    return TransferFunction{profile.grid(), std::move(h), pass_count};
}

}  // namespace

TransferFunction build_transfer(const SpectralProfile& profile, int pass_count) {
    return make_transfer(profile, pass_count, true);
}

TransferFunction build_transfer_without_dispersion(const SpectralProfile& profile, int pass_count) {
    return make_transfer(profile, pass_count, false);
}

TemporalEnvelope propagate(const TemporalEnvelope& input, const TransferFunction& transfer) {
    if (!(input.grid() == transfer.grid))
        throw std::invalid_argument("propagate: envelope and transfer function grids differ");
    cvec spec = input.samples();
    fft_forward(spec);
    // The transfer function is stored in ascending-frequency order; the
    // spectrum is in FFT bin order, so rotate H once rather than the data twice.
    cvec h = transfer.h;
    fftshift(h);
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= h[i];
    fft_inverse(spec);
    return TemporalEnvelope(input.grid(), std::move(spec), input.carrier_detuning(),
                            input.t_start());
}

EchoReport extract_echo(const TemporalEnvelope& input, const TemporalEnvelope& output,
                        double expected_time_us, double window_halfwidth_us) {
    if (!(window_halfwidth_us > 0.0))
        throw std::invalid_argument("extract_echo: window halfwidth must be positive");
    const double w0 = expected_time_us - window_halfwidth_us;
    const double w1 = expected_time_us + window_halfwidth_us;
    const double t_lo = output.t_start();
    const double t_hi = output.t_start() + output.grid().duration();
    if (w0 < t_lo || w1 > t_hi)
        throw std::invalid_argument("extract_echo: echo window outside the time grid");

    const double input_energy = input.mean_photon_number();
    if (input_energy <= 0.0) throw std::invalid_argument("extract_echo: input carries no energy");
    const double t_in = input.intensity_centroid(t_lo, t_hi);
    if (std::abs(expected_time_us - t_in) < 2.0 * window_halfwidth_us)
        throw std::invalid_argument("extract_echo: echo window overlaps the transmitted pulse");

    EchoReport report;
    report.window_start_us = w0;
    report.window_end_us = w1;
    const double echo_energy = output.energy_in(w0, w1);
    report.echo_efficiency = echo_energy / input_energy;
    report.transmitted_fraction =
        output.energy_in(t_in - window_halfwidth_us, t_in + window_halfwidth_us) / input_energy;
    report.echo_time_us = echo_energy > 0.0 ? output.intensity_centroid(w0, w1) : expected_time_us;
    return report;
}

double default_echo_halfwidth(double input_fwhm_us, double time_step_us) {
    return std::max(1.5 * input_fwhm_us, 3.0 * time_step_us);
}

void write_envelope_csv(std::ostream& os, const TemporalEnvelope& envelope) {
    os << "time_us,intensity\n";
    char line[64];
    for (std::size_t i = 0; i < envelope.samples().size(); ++i) {
        std::snprintf(line, sizeof(line), "%.9g,%.9g\n", envelope.time(i),
                      std::norm(envelope.samples()[i]));
        os << line;
    }
}

}  // namespace afcsim
