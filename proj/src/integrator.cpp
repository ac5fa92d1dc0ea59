#include "vsg/integrator.hpp"

#include <cmath>
#include <cstdio>

namespace vsg {

namespace {

bool finite(const PhaseDeriv& d) {
    return std::isfinite(d.d_delta) && std::isfinite(d.d_domega);
}

// Locate a rising crossing of `target` inside one step from `s0` by
// bisecting the partial-step width. Each probe is a single RK4 step, so
// the located state is consistent with the integration scheme itself.
TrajectorySample locate_crossing(const VectorField& rhs, const PhaseState& s0, double t0, double h,
                                 double target) {
    double lo = 0.0, hi = h;
    PhaseState s_hi = rk4_step(rhs, s0, hi);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const PhaseState s_mid = rk4_step(rhs, s0, mid);
        if (s_mid.delta >= target) {
            hi = mid;
            s_hi = s_mid;
        } else {
            lo = mid;
        }
        if (std::abs(s_hi.delta - target) < 1e-9 && hi - lo < 0.25 * h) break;
    }
    return {t0 + hi, s_hi};
}

}  // namespace

PhaseState rk4_step(const VectorField& rhs, const PhaseState& s, double h) {
    const PhaseDeriv k1 = rhs(s);
    const PhaseDeriv k2 = rhs({s.delta + 0.5 * h * k1.d_delta, s.domega + 0.5 * h * k1.d_domega});
    const PhaseDeriv k3 = rhs({s.delta + 0.5 * h * k2.d_delta, s.domega + 0.5 * h * k2.d_domega});
    const PhaseDeriv k4 = rhs({s.delta + h * k3.d_delta, s.domega + h * k3.d_domega});
    if (!finite(k1) || !finite(k2) || !finite(k3) || !finite(k4))
        throw NonFiniteState("vector field returned a non-finite derivative");
    return {s.delta + h / 6.0 * (k1.d_delta + 2.0 * (k2.d_delta + k3.d_delta) + k4.d_delta),
            s.domega + h / 6.0 * (k1.d_domega + 2.0 * (k2.d_domega + k3.d_domega) + k4.d_domega)};
}

Trajectory integrate(const VectorField& rhs, const PhaseState& init, const IntegratorConfig& cfg,
                     Direction direction) {
    Trajectory traj;
    traj.direction = direction;
    traj.samples.push_back({0.0, init});

    double held_since = -1.0;  // start of the current in-tolerance span
    if (cfg.convergence && scaled_distance(init, cfg.convergence->state) <
                               cfg.convergence->tolerance) {
        held_since = 0.0;
    }

    const long n_steps = static_cast<long>(std::ceil(cfg.max_time / cfg.step - 1e-12));
    PhaseState s = init;
    double t = 0.0;
    for (long i = 1; i <= n_steps; ++i) {
        const double t_next = i == n_steps ? cfg.max_time : i * cfg.step;
        const double h = t_next - t;
        const PhaseState s_next = rk4_step(rhs, s, h);

        for (const auto& ev : cfg.events) {
            if (s.delta < ev.target_delta && s_next.delta >= ev.target_delta) {
                traj.samples.push_back(locate_crossing(rhs, s, t, h, ev.target_delta));
                traj.termination = Termination::EventFired;
                traj.event_id = ev.id;
                return traj;
            }
        }

        traj.samples.push_back({t_next, s_next});
        s = s_next;
        t = t_next;

        if (!cfg.window.contains(s)) {
            traj.termination = Termination::LeftWindow;
            return traj;
        }
        if (cfg.convergence) {
            if (scaled_distance(s, cfg.convergence->state) < cfg.convergence->tolerance) {
                if (held_since < 0.0) held_since = t;
                if (t - held_since >= cfg.convergence->hold_time) {
                    traj.termination = Termination::Converged;
                    return traj;
                }
            } else {
                held_since = -1.0;
            }
        }
    }
    traj.termination = Termination::TimeOut;
    return traj;
}

std::optional<TrajectorySample> event_crossing(const Trajectory& traj, double target_delta) {
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        const auto& a = traj.samples[i - 1];
        const auto& b = traj.samples[i];
        if (a.state.delta < target_delta && b.state.delta >= target_delta) {
            const double u = (target_delta - a.state.delta) / (b.state.delta - a.state.delta);
            return TrajectorySample{
                a.t + u * (b.t - a.t),
                {target_delta, a.state.domega + u * (b.state.domega - a.state.domega)}};
        }
    }
    return std::nullopt;
}

std::string to_csv(const Trajectory& traj) {
    std::string out = "t,delta,domega\n";
    char buf[128];
    for (const auto& s : traj.samples) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", s.t, s.state.delta,
                      s.state.domega);
        out += buf;
    }
    return out;
}

}  // namespace vsg
