#include "vsg/transient.hpp"

#include "vsg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace vsg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<Equilibrium> droop_equilibria(const VsgParams& p, const GridParams& g) {
    return find_equilibria(p, g, {-kPi, kPi}, VpccMode::DroopCoupled);
}

const Equilibrium& require_pre_sep(const std::vector<Equilibrium>& eqs) {
    const Equilibrium* sep = find_sep(eqs);
    if (!sep) throw NoPreFaultSep("pre-fault grid has no stable equilibrium");
    return *sep;
}

IntegratorConfig scenario_config(const IntegratorConfig& base, double sep0) {
    IntegratorConfig cfg = base;
    cfg.events.clear();
    cfg.convergence.reset();
    // Widen the window when the caller left the default in place.
    cfg.window.delta_min = std::min(cfg.window.delta_min, sep0 - kTwoPi);
    cfg.window.delta_max = std::max(cfg.window.delta_max, sep0 + kTwoPi);
    return cfg;
}

void append_segment(Trajectory& whole, const Trajectory& seg, double t_offset) {
    const std::size_t skip = whole.samples.empty() ? 0 : 1;  // switch instant already present
    for (std::size_t i = skip; i < seg.samples.size(); ++i) {
        whole.samples.push_back({seg.samples[i].t + t_offset, seg.samples[i].state});
    }
    whole.termination = seg.termination;
    whole.event_id = seg.event_id;
}

// Quadrature tolerance for the area balances: 1e-3 of P_ref over one radian.
double area_tol(const VsgParams& p) {
    return 1e-3 * std::max(std::abs(p.p_ref), 1.0);
}

// Bisection refinement of the boundary crossing along one integration step.
// The crossing is bracketed between sub-steps of width [0, h] from `s0`;
// side-of-segment of the boundary edge (b1, b2) changes across it.
double refine_crossing_delta(const VectorField& rhs, const PhaseState& s0, double h,
                             const Vec2& b1, const Vec2& b2) {
    const auto side = [&](const PhaseState& s) {
        return (b2.x - b1.x) * (s.domega - b1.y) - (b2.y - b1.y) * (s.delta - b1.x);
    };
    const double side0 = side(s0);
    double lo = 0.0, hi = h;
    PhaseState s_hi = rk4_step(rhs, s0, hi);
    for (int it = 0; it < 50 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const PhaseState sm = rk4_step(rhs, s0, mid);
        if ((side(sm) < 0.0) == (side0 < 0.0)) {
            lo = mid;
        } else {
            hi = mid;
            s_hi = sm;
        }
    }
    return s_hi.delta;
}

// delta-bucketed index over boundary segments for the trajectory sweep.
struct SegmentIndex {
    struct Seg {
        Vec2 a, b;
    };
    std::vector<Seg> segs;
    std::vector<std::vector<int>> buckets;
    double lo = 0.0, inv_width = 0.0;
    int n_buckets = 0;

    void build(const std::vector<Polyline>& branches, double dmin, double dmax) {
        for (const auto& br : branches)
            for (std::size_t i = 1; i < br.size(); ++i) segs.push_back({br[i - 1], br[i]});
        n_buckets = 512;
        lo = dmin;
        inv_width = n_buckets / std::max(dmax - dmin, 1e-12);
        buckets.assign(n_buckets, {});
        for (int k = 0; k < static_cast<int>(segs.size()); ++k) {
            const auto [i0, i1] = range(segs[k].a.x, segs[k].b.x);
            for (int i = i0; i <= i1; ++i) buckets[i].push_back(k);
        }
    }

    std::pair<int, int> range(double x0, double x1) const {
        if (x0 > x1) std::swap(x0, x1);
        int i0 = static_cast<int>((x0 - lo) * inv_width);
        int i1 = static_cast<int>((x1 - lo) * inv_width);
        i0 = std::clamp(i0, 0, n_buckets - 1);
        i1 = std::clamp(i1, 0, n_buckets - 1);
        return {i0, i1};
    }
};

}  // namespace

FaultType classify_fault(const VsgParams& p, const GridParams& pre, const GridParams& fault) {
    const auto pre_eqs = droop_equilibria(p, pre);
    const Equilibrium& sep0 = require_pre_sep(pre_eqs);

    const auto fault_eqs = droop_equilibria(p, fault);
    if (fault_eqs.empty()) return FaultType::TypeIII;

    const DoaBoundary fault_doa = estimate_doa(p, fault, SeedConfig{});

    IntegratorConfig cfg;
    cfg.max_time = 10.0;
    cfg.window = fault_doa.window;
    if (const Equilibrium* fsep = find_sep(fault_eqs))
        cfg.convergence = ConvergenceTarget{{fsep->delta0, 0.0}, 1e-6, 0.1};
    const VectorField rhs = [&](const PhaseState& s) { return forward_rhs(p, fault, s); };
    const Trajectory traj = integrate(rhs, {sep0.delta0, 0.0}, cfg);

    for (const auto& s : traj.samples) {
        if (!contains(fault_doa, s.state)) return FaultType::TypeII;
    }
    return FaultType::TypeI;
}

StabilityVerdict simulate_scenario(const FaultScenario& sc, const IntegratorConfig& cfg,
                                   std::optional<FaultType> known_type) {
    const auto pre_eqs = droop_equilibria(sc.vsg, sc.pre);
    const Equilibrium& sep0 = require_pre_sep(pre_eqs);
    if (sc.fault_time < 0.0) throw ConfigError("fault_time must be non-negative");
    if (sc.clearing.kind == ClearingKind::AtAngle && sc.clearing.value <= sep0.delta0)
        throw ConfigError("clearing angle must exceed the pre-fault SEP angle");

    StabilityVerdict v;
    v.fault_type = known_type ? *known_type : classify_fault(sc.vsg, sc.pre, sc.fault);
    v.trajectory.direction = Direction::Forward;

    const IntegratorConfig base = scenario_config(cfg, sep0.delta0);

    // Pre-fault hold at the SEP.
    double t = 0.0;
    if (sc.fault_time > 0.0) {
        IntegratorConfig pre_cfg = base;
        pre_cfg.max_time = sc.fault_time;
        const VectorField rhs = [&](const PhaseState& s) { return forward_rhs(sc.vsg, sc.pre, s); };
        append_segment(v.trajectory, integrate(rhs, {sep0.delta0, 0.0}, pre_cfg), 0.0);
        t = sc.fault_time;
    } else {
        v.trajectory.samples.push_back({0.0, {sep0.delta0, 0.0}});
    }

    // Fault-on segment.
    const auto fault_eqs = droop_equilibria(sc.vsg, sc.fault);
    PhaseState state = v.trajectory.back_state();
    bool cleared = false;
    {
        IntegratorConfig fc = base;
        fc.max_time = cfg.max_time;
        if (sc.clearing.kind == ClearingKind::AtTime) {
            fc.max_time = sc.clearing.value;
        } else {
            // The clearing angle may never be reached when the fault-on
            // flow is captured by its own SEP; converging there settles the
            // verdict.
            if (sc.clearing.kind == ClearingKind::AtAngle)
                fc.events.push_back({0, sc.clearing.value});
            if (const Equilibrium* fsep = find_sep(fault_eqs))
                fc.convergence = ConvergenceTarget{{fsep->delta0, 0.0}, 1e-6, 0.1};
        }
        const VectorField rhs = [&](const PhaseState& s) { return forward_rhs(sc.vsg, sc.fault, s); };
        const Trajectory seg = integrate(rhs, state, fc);
        append_segment(v.trajectory, seg, t);
        t = v.trajectory.samples.back().t;
        state = v.trajectory.back_state();
        cleared = (sc.clearing.kind == ClearingKind::AtAngle &&
                   seg.termination == Termination::EventFired) ||
                  (sc.clearing.kind == ClearingKind::AtTime &&
                   seg.termination == Termination::TimeOut);
    }

    // Post-clearing segment.
    const auto post_eqs = cleared ? droop_equilibria(sc.vsg, sc.post) : std::vector<Equilibrium>{};
    if (cleared) {
        IntegratorConfig pc = base;
        pc.max_time = cfg.max_time;
        if (const Equilibrium* psep = find_sep(post_eqs))
            pc.convergence = ConvergenceTarget{{psep->delta0, 0.0}, 1e-6, 0.1};
        const VectorField rhs = [&](const PhaseState& s) { return forward_rhs(sc.vsg, sc.post, s); };
        append_segment(v.trajectory, integrate(rhs, state, pc), t);
    }

    v.stable = v.trajectory.termination == Termination::Converged;
    if (v.stable) {
        const auto& eqs = cleared ? post_eqs : fault_eqs;
        if (const Equilibrium* sep = find_sep(eqs)) v.final_sep = *sep;
    }
    return v;
}

double cca_doa(const VsgParams& p, const GridParams& pre, const GridParams& fault,
               const GridParams& post) {
    const auto pre_eqs = droop_equilibria(p, pre);
    const Equilibrium& sep0 = require_pre_sep(pre_eqs);
    const DoaBoundary post_doa = estimate_doa(p, post, SeedConfig{});

    SegmentIndex index;
    index.build(post_doa.branches, post_doa.window.delta_min, post_doa.window.delta_max);

    IntegratorConfig cfg;
    cfg.max_time = 10.0;
    cfg.window = post_doa.window;
    const auto fault_eqs = droop_equilibria(p, fault);
    if (const Equilibrium* fsep = find_sep(fault_eqs))
        cfg.convergence = ConvergenceTarget{{fsep->delta0, 0.0}, 1e-6, 0.1};
    const VectorField rhs = [&](const PhaseState& s) { return forward_rhs(p, fault, s); };
    const Trajectory traj = integrate(rhs, {sep0.delta0, 0.0}, cfg);

    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        const PhaseState& a = traj.samples[i - 1].state;
        const PhaseState& b = traj.samples[i].state;
        const Vec2 ta{a.delta, a.domega}, tb{b.delta, b.domega};
        const auto [k0, k1] = index.range(ta.x, tb.x);
        double best_t = 2.0;
        const SegmentIndex::Seg* hit = nullptr;
        for (int k = k0; k <= k1; ++k) {
            for (int si : index.buckets[k]) {
                const auto& sg = index.segs[si];
                if (const auto x = segment_intersection(ta, tb, sg.a, sg.b)) {
                    const double tt = std::abs(tb.x - ta.x) > std::abs(tb.y - ta.y)
                                          ? (x->x - ta.x) / (tb.x - ta.x)
                                          : (x->y - ta.y) / (tb.y - ta.y);
                    if (tt < best_t) {
                        best_t = tt;
                        hit = &sg;
                    }
                }
            }
        }
        if (hit) {
            const double h = traj.samples[i].t - traj.samples[i - 1].t;
            return refine_crossing_delta(rhs, a, h, hit->a, hit->b);
        }
    }
    throw NoIntersection("fault-on trajectory never meets the post-clearing DOA boundary");
}

double cca_eac(const VsgParams& p, const GridParams& pre, const GridParams& fault,
               const GridParams& post) {
    const auto pre_eqs = droop_equilibria(p, pre);
    const double d_init = require_pre_sep(pre_eqs).delta0;

    const auto post_eqs = droop_equilibria(p, post);
    const Equilibrium* post_sep = find_sep(post_eqs);
    const Equilibrium* post_uep = post_sep ? find_uep_after(post_eqs, post_sep->delta0) : nullptr;
    if (!post_uep) throw NoSolution("post-clearing curve has no deceleration region");
    const double d_uep = post_uep->delta0;
    if (d_uep <= d_init) throw NoSolution("post-clearing saddle below the initial angle");

    const double tol = area_tol(p);
    const auto pf = [&](double d) { return electrical_power(p, fault, d); };
    const auto pp = [&](double d) { return electrical_power(p, post, d); };

    // Area balance at clearing angle dc. The accelerating area enters the
    // balance both against the fault curve and against the post curve over
    // the swing interval, which doubles its weight relative to the
    // remaining deceleration up to the post-clearing saddle.
    const auto margin = [&](double dc) {
        const double acc =
            adaptive_simpson([&](double d) { return p.p_ref - pf(d); }, d_init, dc, tol);
        const double dec =
            adaptive_simpson([&](double d) { return pp(d) - p.p_ref; }, dc, d_uep, tol);
        return 2.0 * acc - dec;
    };

    // Last stable-to-unstable transition in [d_init, d_uep].
    const int n = 256;
    double found = std::numeric_limits<double>::quiet_NaN();
    double prev_d = d_init, prev_m = margin(d_init);
    for (int i = 1; i <= n; ++i) {
        const double d = d_init + (d_uep - d_init) * i / n;
        const double m = margin(d);
        if (prev_m <= 0.0 && m > 0.0) {
            double lo = prev_d, hi = d;
            for (int k = 0; k < 60 && hi - lo > 1e-9; ++k) {
                const double mid = 0.5 * (lo + hi);
                (margin(mid) <= 0.0 ? lo : hi) = mid;
            }
            found = 0.5 * (lo + hi);
        }
        prev_d = d;
        prev_m = m;
    }
    if (!std::isnan(found)) return found;
    if (prev_m <= 0.0) return d_uep;  // stable all the way to the saddle
    throw NoSolution("acceleration area exceeds the available deceleration area");
}

double cca_bruteforce(const VsgParams& p, const GridParams& pre, const GridParams& fault,
                      const GridParams& post, const IntegratorConfig& cfg) {
    const auto pre_eqs = droop_equilibria(p, pre);
    const Equilibrium& sep0 = require_pre_sep(pre_eqs);

    FaultScenario sc;
    sc.vsg = p;
    sc.pre = pre;
    sc.fault = fault;
    sc.post = post;
    sc.fault_time = 0.0;

    const std::optional<FaultType> ftype =
        droop_equilibria(p, fault).empty() ? FaultType::TypeIII : FaultType::TypeI;
    // The taxonomy label does not affect the verdicts; skip the DOA build.

    const auto stable_at = [&](double dc) {
        sc.clearing = Clearing::at_angle(dc);
        return simulate_scenario(sc, cfg, ftype).stable;
    };

    const IntegratorConfig base = scenario_config(cfg, sep0.delta0);
    const double lo_edge = sep0.delta0 + 1e-4;
    const double hi_edge = base.window.delta_max - 1e-4;

    // Coarse scan: assert a single stable->unstable transition.
    const int n = 25;
    std::vector<char> verdicts(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double d = lo_edge + (hi_edge - lo_edge) * i / n;
        verdicts[i] = stable_at(d) ? 1 : 0;
    }
    int transitions = 0;
    for (int i = 1; i <= n; ++i)
        if (verdicts[i] != verdicts[i - 1]) ++transitions;
    if (transitions == 0) {
        if (verdicts[0]) throw AllStable("every clearing angle is stable");
        throw AllUnstable("every clearing angle is unstable");
    }
    if (transitions > 1 || verdicts[0] != 1)
        throw AnalysisError("stable/unstable split is not monotone over the clearing angle");

    int last_stable = 0;
    for (int i = 0; i <= n; ++i)
        if (verdicts[i]) last_stable = i;
    double lo = lo_edge + (hi_edge - lo_edge) * last_stable / n;
    double hi = lo_edge + (hi_edge - lo_edge) * (last_stable + 1) / n;
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        (stable_at(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

EacAreas eac_areas(const VsgParams& p, const GridParams& g, double delta_start,
                   double delta_end) {
    if (delta_start > delta_end) throw ConfigError("delta_start must not exceed delta_end");
    if (delta_start == delta_end) return {0.0, 0.0};

    const auto gap = [&](double d) { return p.p_ref - electrical_power(p, g, d); };

    // Split at the sign changes of the gap so each Simpson piece is smooth.
    std::vector<double> cuts{delta_start};
    const int n = 2048;
    double prev_d = delta_start, prev_f = gap(delta_start);
    for (int i = 1; i <= n; ++i) {
        const double d = delta_start + (delta_end - delta_start) * i / n;
        const double f = gap(d);
        if ((prev_f < 0.0) != (f < 0.0)) {
            double lo = prev_d, hi = d, flo = prev_f;
            while (hi - lo > 1e-12) {
                const double mid = 0.5 * (lo + hi);
                const double fm = gap(mid);
                if ((flo < 0.0) == (fm < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            cuts.push_back(0.5 * (lo + hi));
        }
        prev_d = d;
        prev_f = f;
    }
    cuts.push_back(delta_end);

    const double tol = area_tol(p);
    EacAreas out{0.0, 0.0};
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double mid_gap = gap(0.5 * (cuts[i - 1] + cuts[i]));
        const double piece = adaptive_simpson(gap, cuts[i - 1], cuts[i], tol);
        if (mid_gap >= 0.0)
            out.s_acc += piece;
        else
            out.s_dec += -piece;
    }
    return out;
}

}  // namespace vsg
