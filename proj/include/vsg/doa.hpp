#pragma once

#include "vsg/equilibrium.hpp"
#include "vsg/geometry.hpp"
#include "vsg/integrator.hpp"
#include "vsg/model.hpp"

#include <vector>

namespace vsg {

enum class SeedMode {
    Ring,            ///< points uniformly on a scaled-norm circle around the saddles
    SeparatrixPair,  ///< two points per saddle along the stable eigenvector
};

struct SeedConfig {
    int count = 200;        ///< total ring points (Ring mode), >= 4
    double radius = 1e-3;   ///< seed offset in the scaled norm, > 0
    SeedMode mode = SeedMode::SeparatrixPair;
};

/// Estimated domain of attraction of a stable equilibrium.
///
/// branches hold the reverse-time trajectories that trace the boundary
/// (the stable manifold of the bounding saddles); polygon is the assembled
/// membership region, clipped to the window and closed along its edges.
struct DoaBoundary {
    std::vector<Polyline> branches;  ///< (delta, domega) polylines
    Equilibrium uep;                 ///< right-hand saddle anchor
    Equilibrium sep;                 ///< attractor the domain belongs to
    PhaseWindow window;
    Polyline polygon;
};

/// Estimates the DOA boundary by reverse-time integration from seeds next
/// to the unstable equilibria bounding the basin (the trajectory reversing
/// method). The basin of the SEP is bounded by the stable manifolds of the
/// adjacent saddle and of its 2*pi-shifted copy; both are seeded.
///
/// Throws NoEquilibrium when the grid state has no equilibria and
/// DegenerateUep when the saddle classification is degenerate.
DoaBoundary estimate_doa(const VsgParams& p, const GridParams& g, const SeedConfig& seeds,
                         const PhaseWindow& window, const IntegratorConfig& cfg);

/// Same, with the window and integration settings derived from the
/// equilibria (delta within +-2*pi of the SEP, domega within +-150 rad/s).
DoaBoundary estimate_doa(const VsgParams& p, const GridParams& g,
                         const SeedConfig& seeds = {});

/// Membership test against the assembled polygon. Points within 1e-9
/// (scaled norm) of the polygon count as inside.
bool contains(const DoaBoundary& b, const PhaseState& s);

/// Shoelace area of the membership polygon in rad * rad/s.
double doa_area(const DoaBoundary& b);

}  // namespace vsg
