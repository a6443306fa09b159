#include "afcsim/spinwave.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace afcsim {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2_v<double>;
}  // namespace

void SpinParams::validate() const {
    if (!(gamma_spin_khz > 0.0))
        throw std::invalid_argument("SpinParams: spin linewidth must be positive");
    if (transfer_efficiency < 0.0 || transfer_efficiency > 1.0)
        throw std::invalid_argument("SpinParams: transfer efficiency outside [0,1]");
    if (!(t2_spin_ms > 0.0)) throw std::invalid_argument("SpinParams: T2 must be positive");
}

ProtocolTimeline schedule(double afc_delay_us, double t_s_us, double t_c1_offset_us,
                          double t_input_us) {
    if (!(afc_delay_us > 0.0)) throw std::invalid_argument("schedule: afc delay must be positive");
    if (!(t_s_us > 0.0)) throw std::invalid_argument("schedule: storage time must be positive");
    if (!(t_c1_offset_us > 0.0))
        throw std::invalid_argument("schedule: C1 offset must be positive");
    if (t_c1_offset_us >= afc_delay_us)
        throw std::invalid_argument(
            "schedule: C1 scheduled after the bare echo would have emerged");

    ProtocolTimeline tl;
    tl.t_input_us = t_input_us;
    tl.afc_delay_us = afc_delay_us;
    tl.storage_us = t_s_us;
    tl.t_c1_us = t_input_us + t_c1_offset_us;
    tl.t_c2_us = tl.t_c1_us + t_s_us;
    tl.t_echo_us = t_input_us + afc_delay_us + t_s_us;
    tl.t_oreo_us = tl.t_c2_us + afc_delay_us;
    return tl;
}

double spin_dephasing(double gamma_spin_khz, double t_s_us) {
    if (t_s_us < 0.0) throw std::invalid_argument("spin_dephasing: storage time must be >= 0");
    const double x = kPi * gamma_spin_khz * 1e-3 * t_s_us;  // kHz * us
    return std::exp(-x * x / (2.0 * kLn2));
}

double memory_time_1e(double gamma_spin_khz) {
    return std::sqrt(2.0 * kLn2) / (kPi * gamma_spin_khz * 1e-3);
}

double end_to_end_efficiency(double eta_afc, double eta_t, double gamma_spin_khz, double t_s_us,
                             double t2_spin_ms) {
    if (eta_afc < 0.0 || eta_afc > 1.0 || eta_t < 0.0 || eta_t > 1.0)
        throw std::invalid_argument("end_to_end_efficiency: efficiencies must lie in [0,1]");
    double eta = eta_afc * eta_t * eta_t * spin_dephasing(gamma_spin_khz, t_s_us);
    if (std::isfinite(t2_spin_ms)) eta *= std::exp(-2.0 * t_s_us / (t2_spin_ms * 1e3));
    return eta;
}

TemporalEnvelope apply_write_read(const TemporalEnvelope& optical, const ProtocolTimeline& timeline,
                                  const SpinParams& spin) {
    spin.validate();
    const auto& grid = optical.grid();
    const std::size_t n = grid.size();
    const double eta_t = spin.transfer_efficiency;
    const double dephase = spin_dephasing(spin.gamma_spin_khz, timeline.storage_us);
    const double t2_us = spin.t2_spin_ms * 1e3;
    // Field factors: leftover optical coherence keeps sqrt(1-eta_t); the
    // stored-and-retrieved part carries eta_t and half the intensity decays.
    const double bare_scale = std::sqrt(1.0 - eta_t);
    const double spin_scale =
        eta_t * std::sqrt(dephase) * std::exp(-timeline.storage_us / t2_us);

    cvec head(n, 0.0), tail(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (optical.time(i) < timeline.t_c1_us)
            head[i] = optical.samples()[i];
        else
            tail[i] = optical.samples()[i];
    }

    // Delay the stored part by T_S with an exact spectral phase ramp.
    cvec delayed = tail;
    fft_forward(delayed);
    const double dfreq = grid.resolution();
    for (std::size_t m = 0; m < n; ++m) {
        const double f =
            (m < n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n)) *
            dfreq;
        delayed[m] *= std::polar(1.0, -2.0 * kPi * f * timeline.storage_us);
    }
    fft_inverse(delayed);

    cvec out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = head[i] + bare_scale * tail[i] + spin_scale * delayed[i];
    return TemporalEnvelope(grid, std::move(out), optical.carrier_detuning(), optical.t_start());
}

}  // namespace afcsim
