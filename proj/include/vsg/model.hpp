#pragma once

#include "vsg/errors.hpp"

namespace vsg {

/// Controller constants of the virtual synchronous generator.
///
/// All quantities are SI; voltages are peak phase amplitudes. inertia_2h is
/// the coefficient multiplying the angular acceleration in the swing
/// equation, damping_d the coefficient on the frequency deviation.
struct VsgParams {
    double inertia_2h;  ///< swing coefficient on d(domega)/dt, > 0
    double damping_d;   ///< damping coefficient, >= 0
    double droop_kq;    ///< Q-V droop gain (V/var), >= 0
    double p_ref;       ///< active power reference (W)
    double q_ref;       ///< reactive power reference (var)
    double v0;          ///< nominal voltage amplitude (V), > 0
    double omega0;      ///< rated angular speed (rad/s), > 0
};

/// Grid-side state: voltage amplitude and coupling impedance.
/// Changes discontinuously at fault and clearing events.
struct GridParams {
    double vg;  ///< grid voltage amplitude (V), >= 0
    double rg;  ///< grid resistance (ohm), >= 0
    double xg;  ///< grid reactance (ohm), > 0
};

/// A point (delta, domega) in the power-angle phase plane.
struct PhaseState {
    double delta;   ///< power angle (rad)
    double domega;  ///< angular frequency deviation (rad/s)
};

/// Time derivative of a PhaseState.
struct PhaseDeriv {
    double d_delta;   ///< rad/s
    double d_domega;  ///< rad/s^2
};

/// Returns a copy of `g` with the grid voltage scaled by `sag` (per unit).
inline GridParams sagged(const GridParams& g, double sag) {
    return {g.vg * sag, g.rg, g.xg};
}

/// PCC voltage amplitude consistent with the Q-V droop at angle `delta`.
///
/// Solves the droop fixed point as a quadratic in V_PCC using the
/// numerically stable formula (no cancellation for small droop gains) and
/// returns the larger root, which joins continuously to v0 as droop_kq -> 0.
/// With droop_kq == 0 the droop is disabled and v0 is returned exactly.
///
/// Throws NoRealRoot if the quadratic has no real solution and
/// NonPositiveRoot if neither root is positive.
double vpcc_of_delta(const VsgParams& p, const GridParams& g, double delta);

/// Direct radical form of the same root, transcribed without the stable
/// rearrangement. Ill-conditioned as droop_kq -> 0; kept as an independent
/// algebraic route for cross-checking the stable solver.
double vpcc_of_delta_direct(const VsgParams& p, const GridParams& g, double delta);

/// Active power delivered through the coupling impedance (W).
double active_power(const VsgParams& p, const GridParams& g, double delta, double vpcc);

/// Reactive power delivered through the coupling impedance (var).
double reactive_power(const VsgParams& p, const GridParams& g, double delta, double vpcc);

/// Active power with the PCC voltage resolved from the droop at each angle.
double electrical_power(const VsgParams& p, const GridParams& g, double delta);

/// Swing-equation right-hand side with droop-coupled PCC voltage.
PhaseDeriv forward_rhs(const VsgParams& p, const GridParams& g, const PhaseState& s);

/// Time-reversed field: the exact component-wise negation of forward_rhs.
PhaseDeriv reversed_rhs(const VsgParams& p, const GridParams& g, const PhaseState& s);

/// Swing-equation right-hand side with the PCC voltage frozen at `vpcc`.
PhaseDeriv forward_rhs_frozen(const VsgParams& p, const GridParams& g, const PhaseState& s,
                              double vpcc);

}  // namespace vsg
