#pragma once

#include "vsg/model.hpp"

#include <numbers>

namespace vsg {

/// Raw entries of the reference parameter set, as a user would write them.
struct ReferenceDefaults {
    double vg_rms = 220.0;      ///< grid voltage (V rms)
    double f0 = 50.0;           ///< fundamental frequency (Hz)
    double vn = 311.0;          ///< nominal voltage amplitude (V)
    double damping_d = 509.3;   ///< damping coefficient
    double inertia_h = 7.85;    ///< inertia constant
    double droop_kq = 0.0003;   ///< reactive droop coefficient (V/var)
    double p_ref = 100e3;       ///< active power reference (W)
    double q_ref = 0.0;         ///< reactive power reference (var)
    double lg = 3e-3;           ///< grid-side inductance (H)
    double rg = 0.2;            ///< grid-side resistance (ohm)
};

inline double rms_to_amplitude(double vrms) { return vrms * std::numbers::sqrt2; }

inline VsgParams reference_vsg(const ReferenceDefaults& d = {}) {
    return {2.0 * d.inertia_h, d.damping_d, d.droop_kq, d.p_ref,
            d.q_ref,           d.vn,        2.0 * std::numbers::pi * d.f0};
}

inline GridParams reference_grid(const ReferenceDefaults& d = {}) {
    const double omega0 = 2.0 * std::numbers::pi * d.f0;
    return {rms_to_amplitude(d.vg_rms), d.rg, omega0 * d.lg};
}

}  // namespace vsg
