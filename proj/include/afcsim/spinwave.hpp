#pragma once

#include "afcsim/spectral.hpp"

#include <limits>

namespace afcsim {

struct SpinParams {
    double gamma_spin_khz = 8.0;       // inhomogeneous spin linewidth FWHM
    double transfer_efficiency = 0.49; // population transfer per control pulse
    double t2_spin_ms = 15.0;          // spin coherence time

    void validate() const;
};

/// Event schedule of one memory cycle. All times in microseconds.
/// t_echo = t_input + afc_delay + storage; t_oreo = t_c2 + afc_delay.
struct ProtocolTimeline {
    double t_input_us = 0.0;
    double t_c1_us = 0.0;
    double t_c2_us = 0.0;
    double t_echo_us = 0.0;
    double t_oreo_us = 0.0;
    double afc_delay_us = 0.0;  // 1/Delta
    double storage_us = 0.0;    // T_S = t_c2 - t_c1
};

/// Build a timeline with C1 at t_input + t_c1_offset. Throws unless
/// 0 < t_c1_offset < afc_delay (C1 must precede the bare echo) and T_S > 0.
ProtocolTimeline schedule(double afc_delay_us, double t_s_us, double t_c1_offset_us,
                          double t_input_us = 0.0);

/// Intensity decay factor of the spin-wave echo after storage time T_S for a
/// Gaussian inhomogeneous spin line: exp(-(pi gamma T_S)^2 / (2 ln2)).
double spin_dephasing(double gamma_spin_khz, double t_s_us);

/// Storage time at which spin_dephasing reaches exp(-1).
double memory_time_1e(double gamma_spin_khz);

/// eta_afc * eta_t^2 * spin_dephasing, with an optional exp(-2 T_S / T2) tail.
double end_to_end_efficiency(double eta_afc, double eta_t, double gamma_spin_khz, double t_s_us,
                             double t2_spin_ms = std::numeric_limits<double>::infinity());

/// Write/read control operation on a propagated envelope: everything after C1
/// is (a) kept in place scaled by sqrt(1 - eta_t) (bare-echo leftover) and
/// (b) re-emitted delayed by T_S scaled by eta_t * sqrt(dephasing) in field.
TemporalEnvelope apply_write_read(const TemporalEnvelope& optical, const ProtocolTimeline& timeline,
                                  const SpinParams& spin);

}  // namespace afcsim
