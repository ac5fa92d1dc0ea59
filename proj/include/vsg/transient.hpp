#pragma once

#include "vsg/doa.hpp"
#include "vsg/equilibrium.hpp"
#include "vsg/integrator.hpp"
#include "vsg/model.hpp"

#include <optional>

namespace vsg {

/// Disturbance taxonomy. TypeI: the fault-on trajectory stays inside the
/// fault-on domain of attraction. TypeII: equilibria exist under the fault
/// but the trajectory leaves their domain. TypeIII: the fault leaves no
/// equilibrium at all.
enum class FaultType { TypeI, TypeII, TypeIII };

enum class ClearingKind { Never, AtAngle, AtTime };

/// Clearing condition: at a power angle (rad), at a time since the fault
/// (s), or never.
struct Clearing {
    ClearingKind kind = ClearingKind::Never;
    double value = 0.0;

    static Clearing never() { return {ClearingKind::Never, 0.0}; }
    static Clearing at_angle(double delta) { return {ClearingKind::AtAngle, delta}; }
    static Clearing at_time(double t) { return {ClearingKind::AtTime, t}; }
};

/// Pre-fault / fault-on / post-clearing grid triple with the clearing rule.
struct FaultScenario {
    VsgParams vsg;
    GridParams pre;
    GridParams fault;
    GridParams post;
    double fault_time = 0.0;
    Clearing clearing = Clearing::never();
};

struct StabilityVerdict {
    FaultType fault_type = FaultType::TypeI;
    bool stable = false;
    Trajectory trajectory;
    std::optional<Equilibrium> final_sep;
};

struct EacAreas {
    double s_acc;  ///< integral of max(P_ref - P_e, 0) (W*rad)
    double s_dec;  ///< integral of max(P_e - P_ref, 0) (W*rad)
};

/// Classifies the disturbance by fault-grid equilibria and by membership of
/// the fault-on trajectory in the fault-on domain of attraction.
/// Throws NoPreFaultSep when the pre-fault grid has no stable equilibrium.
FaultType classify_fault(const VsgParams& p, const GridParams& pre, const GridParams& fault);

/// Piecewise simulation of a fault scenario: pre-fault SEP as the initial
/// state, grid switched to `fault` at fault_time and to `post` at the
/// clearing condition. Grid switches are parameter-discontinuous but
/// state-continuous, and the switch instants appear as exact samples.
/// `known_type` skips the fault classification when the caller has it.
StabilityVerdict simulate_scenario(const FaultScenario& sc, const IntegratorConfig& cfg,
                                   std::optional<FaultType> known_type = std::nullopt);

/// Critical clearing angle from the domain of attraction: the angle at
/// which the fault-on trajectory first crosses the post-clearing DOA
/// boundary, refined along the trajectory to 1e-6 rad.
/// Throws NoIntersection when the trajectory never meets the boundary.
double cca_doa(const VsgParams& p, const GridParams& pre, const GridParams& fault,
               const GridParams& post);

/// Critical clearing angle from the equal-area balance on the static
/// power-angle curves (damping ignored). The accelerating area between the
/// initial angle and the clearing angle, counted once against each of the
/// post-clearing margins above the fault and reference curves, must not
/// exceed the deceleration available up to the post-clearing saddle.
/// Throws NoSolution when no clearing angle balances the areas.
double cca_eac(const VsgParams& p, const GridParams& pre, const GridParams& fault,
               const GridParams& post);

/// Critical clearing angle by direct bisection on simulated scenarios,
/// to 1e-4 rad. The stable/unstable split is checked for monotonicity on a
/// coarse scan first. Throws AllStable / AllUnstable when every candidate
/// clearing angle gives the same verdict.
double cca_bruteforce(const VsgParams& p, const GridParams& pre, const GridParams& fault,
                      const GridParams& post, const IntegratorConfig& cfg);

/// Acceleration and deceleration areas of the power-angle curve of `g`
/// against the power reference over [delta_start, delta_end].
EacAreas eac_areas(const VsgParams& p, const GridParams& g, double delta_start,
                   double delta_end);

}  // namespace vsg
