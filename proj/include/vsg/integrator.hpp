#pragma once

#include "vsg/model.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vsg {

/// Rectangle in the phase plane beyond which integration halts.
struct PhaseWindow {
    double delta_min, delta_max;
    double domega_min, domega_max;

    bool contains(const PhaseState& s) const {
        return s.delta >= delta_min && s.delta <= delta_max && s.domega >= domega_min &&
               s.domega <= domega_max;
    }
};

/// Scaled phase-plane norm: the angle axis is measured in rad, the
/// frequency axis in units of 100 rad/s, matching their dynamic ranges.
inline double scaled_norm(const PhaseState& s) {
    const double a = std::abs(s.delta);
    const double b = std::abs(s.domega) / 100.0;
    return a > b ? a : b;
}

inline double scaled_distance(const PhaseState& a, const PhaseState& b) {
    return scaled_norm({a.delta - b.delta, a.domega - b.domega});
}

/// Rising angle crossing that stops the integration when hit.
struct AngleEvent {
    int id = 0;
    double target_delta = 0.0;
};

/// Convergence target: terminate once the state has stayed within
/// `tolerance` (scaled norm) of `state` for `hold_time` seconds.
struct ConvergenceTarget {
    PhaseState state;
    double tolerance = 1e-6;
    double hold_time = 0.1;
};

struct IntegratorConfig {
    double step = 1e-4;   ///< s, > 0
    double max_time = 10.0;
    PhaseWindow window{-10.0, 10.0, -150.0, 150.0};
    std::vector<AngleEvent> events;
    std::optional<ConvergenceTarget> convergence;
};

enum class Termination { Converged, LeftWindow, TimeOut, EventFired };
enum class Direction { Forward, Reversed };

struct TrajectorySample {
    double t;
    PhaseState state;
};

/// Time-ordered integration record. Samples are spaced exactly `step`
/// apart except for the final one, which may close a shorter interval at
/// an event or at max_time.
struct Trajectory {
    std::vector<TrajectorySample> samples;
    Termination termination = Termination::TimeOut;
    int event_id = -1;  ///< valid when termination == EventFired
    Direction direction = Direction::Forward;

    const PhaseState& back_state() const { return samples.back().state; }
};

using VectorField = std::function<PhaseDeriv(const PhaseState&)>;

/// Classic fixed-step 4th-order Runge-Kutta with event detection.
///
/// Terminates on the first of: a rising crossing of an event angle
/// (located to 1e-9 rad, recorded as the final sample), exit from the
/// window, convergence to the optional target, or max_time. Identical
/// inputs produce bit-identical trajectories.
///
/// Throws NonFiniteState if the field returns a non-finite derivative.
Trajectory integrate(const VectorField& rhs, const PhaseState& init, const IntegratorConfig& cfg,
                     Direction direction = Direction::Forward);

/// First rising crossing of `target_delta` in an existing trajectory,
/// linearly interpolated between the bracketing samples.
std::optional<TrajectorySample> event_crossing(const Trajectory& traj, double target_delta);

/// One RK4 step of width h.
PhaseState rk4_step(const VectorField& rhs, const PhaseState& s, double h);

/// Serializes samples as CSV with header t,delta,domega at full precision.
std::string to_csv(const Trajectory& traj);

}  // namespace vsg
