#pragma once

#include "vsg/model.hpp"

#include <complex>
#include <vector>

namespace vsg {

enum class EquilibriumKind { Sep, Uep, Degenerate };

/// How the PCC voltage enters the root function P_ref - P_e(delta) = 0.
///
/// ConstantVpcc treats V_PCC as a constant, re-evaluated self-consistently
/// at the root by fixed-point iteration; DroopCoupled resolves the droop
/// quadratic at every angle of the scan.
enum class VpccMode { ConstantVpcc, DroopCoupled };

struct Equilibrium {
    double delta0 = 0.0;                ///< equilibrium angle (rad)
    EquilibriumKind kind = EquilibriumKind::Degenerate;
    std::complex<double> lambda1;       ///< eigenvalues of the linearization (1/s)
    std::complex<double> lambda2;
    double vpcc_at = 0.0;               ///< PCC voltage at the equilibrium (V)
    bool real_eigenvalues = false;      ///< discriminant condition for a real pair
};

/// 2x2 linearization of the shifted dynamics about an equilibrium angle.
/// Companion form: [[0, 1], [a21, a22]].
struct Jacobian2x2 {
    double a11, a12, a21, a22;
};

struct ClassifyResult {
    EquilibriumKind kind;
    std::complex<double> lambda1;
    std::complex<double> lambda2;
    bool real_eigenvalues;  ///< true when the eigenvalue pair is real
};

struct AngleWindow {
    double min;
    double max;
};

/// All equilibria of the power-angle dynamics in `window`, sorted by angle.
///
/// Brackets sign changes on a uniform 1e-3 rad scan and refines each by
/// bisection to 1e-10 rad. An empty list is a valid answer (no equilibrium
/// exists for the given grid state). Each root satisfies
/// |P_ref - P_e| < 1e-6 * |P_ref| (absolute 1e-3 W when P_ref = 0).
std::vector<Equilibrium> find_equilibria(const VsgParams& p, const GridParams& g,
                                         AngleWindow window = {-3.14159265358979323846,
                                                               3.14159265358979323846},
                                         VpccMode mode = VpccMode::ConstantVpcc);

/// Linearization about `delta0` with V_PCC frozen at its value there.
Jacobian2x2 jacobian_at(const VsgParams& p, const GridParams& g, double delta0);

/// Linearization of the droop-coupled field: the stiffness entry is the
/// slope of the droop-resolved power curve (centered difference), which
/// differs from the frozen-voltage form when the droop is strong enough to
/// move the curve's peak away from pi/2.
Jacobian2x2 jacobian_droop_at(const VsgParams& p, const GridParams& g, double delta0);

/// Eigenvalues of the companion Jacobian in closed form, plus the
/// saddle/focus classification. cos(delta0) is recovered from the sign of
/// the stiffness entry; |a21| below 1e-9 of its scale marks a degenerate
/// (saddle-node) equilibrium, which is reported rather than treated as an
/// error.
ClassifyResult classify(const VsgParams& p, const Jacobian2x2& j);

/// First stable equilibrium in the window, if any.
const Equilibrium* find_sep(const std::vector<Equilibrium>& eqs);

/// First unstable equilibrium above the given angle, if any.
const Equilibrium* find_uep_after(const std::vector<Equilibrium>& eqs, double delta);

}  // namespace vsg
