#include "vsg/doa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vsg {

namespace {

constexpr double kOmegaScale = 100.0;  // rad/s per rad in the scaled norm
constexpr double kBoundaryTol = 1e-9;  // membership tie tolerance, scaled norm

// Unit stable-eigenvector offset (raw coordinates) scaled so that a step of
// `radius` lands at scaled-norm distance `radius` from the saddle.
Vec2 stable_direction(const VsgParams& p, const GridParams& g, const Equilibrium& uep) {
    const auto c = classify(p, jacobian_droop_at(p, g, uep.delta0));
    const double lam_s = std::min(c.lambda1.real(), c.lambda2.real());
    // Companion-form eigenvector (1, lambda).
    const double nx = 1.0;
    const double ny = lam_s / kOmegaScale;
    const double norm = std::sqrt(nx * nx + ny * ny);
    return {nx / norm, lam_s / norm};
}

struct BranchResult {
    Polyline line;
    int connected_saddle = -1;  // index into the saddle list when the branch
                                // landed in another saddle's neighbourhood
};

// Reverse-time trace from a seed. The branch is cut when it enters a small
// neighbourhood of a saddle other than the one it was seeded at: it has
// then joined the manifold skeleton and continuing would retrace other
// branches.
BranchResult branch_from(const VsgParams& p, const GridParams& g, const PhaseState& seed,
                         const IntegratorConfig& cfg, const std::vector<double>& saddles,
                         int own_saddle, double radius) {
    const VectorField rev = [&p, &g](const PhaseState& s) { return reversed_rhs(p, g, s); };
    const Trajectory traj = integrate(rev, seed, cfg, Direction::Reversed);
    BranchResult out;
    out.line.reserve(traj.samples.size());
    const double cut_dist = 2.0 * radius;
    for (const auto& s : traj.samples) {
        for (std::size_t k = 0; k < saddles.size(); ++k) {
            if (static_cast<int>(k) == own_saddle) continue;
            if (scaled_norm({s.state.delta - saddles[k], s.state.domega}) < cut_dist) {
                out.connected_saddle = static_cast<int>(k);
                out.line.push_back({saddles[k], 0.0});
                return out;
            }
        }
        out.line.push_back({s.state.delta, s.state.domega});
    }
    return out;
}

// Clip a branch at its first window exit. Integration stops one sample
// past the boundary; replace that sample with the boundary intersection.
void clip_branch_end(Polyline& line, const PhaseWindow& w) {
    if (line.size() < 2) return;
    const Vec2 last = line.back();
    if (last.x >= w.delta_min && last.x <= w.delta_max && last.y >= w.domega_min &&
        last.y <= w.domega_max)
        return;
    const Vec2 prev = line[line.size() - 2];
    double t_best = 1.0;
    const auto cut = [&](double t) {
        if (t >= 0.0 && t < t_best) t_best = t;
    };
    const double dx = last.x - prev.x, dy = last.y - prev.y;
    if (dx != 0.0) {
        cut((w.delta_min - prev.x) / dx);
        cut((w.delta_max - prev.x) / dx);
    }
    if (dy != 0.0) {
        cut((w.domega_min - prev.y) / dy);
        cut((w.domega_max - prev.y) / dy);
    }
    line.back() = {prev.x + t_best * dx, prev.y + t_best * dy};
}

// Perimeter coordinate of a boundary point, counterclockwise from the
// bottom-left corner.
double perimeter_pos(const PhaseWindow& w, const Vec2& v) {
    const double wx = w.delta_max - w.delta_min;
    const double wy = w.domega_max - w.domega_min;
    const double eps_x = 1e-9 * wx, eps_y = 1e-9 * wy;
    if (std::abs(v.y - w.domega_min) < eps_y) return v.x - w.delta_min;
    if (std::abs(v.x - w.delta_max) < eps_x) return wx + (v.y - w.domega_min);
    if (std::abs(v.y - w.domega_max) < eps_y) return wx + wy + (w.delta_max - v.x);
    return 2.0 * wx + wy + (w.domega_max - v.y);
}

Vec2 perimeter_point(const PhaseWindow& w, double s) {
    const double wx = w.delta_max - w.delta_min;
    const double wy = w.domega_max - w.domega_min;
    const double per = 2.0 * (wx + wy);
    s = std::fmod(s, per);
    if (s < 0.0) s += per;
    if (s < wx) return {w.delta_min + s, w.domega_min};
    s -= wx;
    if (s < wy) return {w.delta_max, w.domega_min + s};
    s -= wy;
    if (s < wx) return {w.delta_max - s, w.domega_max};
    s -= wx;
    return {w.delta_min, w.domega_max - s};
}

// Corner positions strictly between two perimeter coordinates, walking in
// increasing (ccw) or decreasing (cw) direction.
std::vector<Vec2> walk_corners(const PhaseWindow& w, double from, double to, bool ccw) {
    const double wx = w.delta_max - w.delta_min;
    const double wy = w.domega_max - w.domega_min;
    const double per = 2.0 * (wx + wy);
    const double corners[4] = {0.0, wx, wx + wy, 2.0 * wx + wy};
    const double span = ccw ? std::fmod(to - from + per, per) : std::fmod(from - to + per, per);
    std::vector<std::pair<double, Vec2>> hits;
    for (double c : corners) {
        const double d = ccw ? std::fmod(c - from + per, per) : std::fmod(from - c + per, per);
        if (d > 1e-12 && d < span - 1e-12) hits.push_back({d, perimeter_point(w, c)});
    }
    std::sort(hits.begin(), hits.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Vec2> out;
    for (const auto& h : hits) out.push_back(h.second);
    return out;
}

// Walk the window boundary from a to b, avoiding the arc that contains any
// of the `avoid` points.
std::vector<Vec2> boundary_walk(const PhaseWindow& w, const Vec2& a, const Vec2& b,
                                const std::vector<Vec2>& avoid) {
    const double wx = w.delta_max - w.delta_min;
    const double wy = w.domega_max - w.domega_min;
    const double per = 2.0 * (wx + wy);
    const double pa = perimeter_pos(w, a);
    const double pb = perimeter_pos(w, b);
    const double ccw_span = std::fmod(pb - pa + per, per);

    bool ccw_blocked = false, cw_blocked = false;
    for (const auto& v : avoid) {
        const double pv = perimeter_pos(w, v);
        const double d = std::fmod(pv - pa + per, per);
        if (d > 1e-9 && d < ccw_span - 1e-9) ccw_blocked = true;
        if (d > ccw_span + 1e-9 && d < per - 1e-9) cw_blocked = true;
    }
    bool ccw = !ccw_blocked;
    if (avoid.empty() || (ccw_blocked && cw_blocked))
        ccw = ccw_span <= per - ccw_span;  // no constraint: shorter arc
    return walk_corners(w, pa, pb, ccw);
}

double scaled_dist(const Vec2& a, const Vec2& b) {
    const double dx = a.x - b.x;
    const double dy = (a.y - b.y) / kOmegaScale;
    return std::sqrt(dx * dx + dy * dy);
}

Polyline assemble_strip_polygon(const Polyline& left_curve, const Polyline& right_curve,
                                const PhaseWindow& w) {
    // left_curve runs from its upper window exit down through the left
    // saddle; right_curve from its upper exit down through the right
    // saddle. The basin is the strip between them.
    Polyline poly = left_curve;
    const Vec2 e_left_low = left_curve.back();
    const Vec2 e_right_low = right_curve.back();
    const Vec2 e_right_high = right_curve.front();
    const Vec2 e_left_high = left_curve.front();

    for (const auto& c : boundary_walk(w, e_left_low, e_right_low, {e_right_high, e_left_high}))
        poly.push_back(c);
    poly.insert(poly.end(), right_curve.rbegin(), right_curve.rend());
    for (const auto& c : boundary_walk(w, e_right_high, e_left_high, {e_left_low, e_right_low}))
        poly.push_back(c);
    return poly;
}

// Near the saddle-node the basin degenerates to a pocket around the SEP
// whose boundary is the right saddle's manifold alone: the upper branch
// wraps around the attractor and leaves through the lower window edge
// instead of sweeping out to the upper-left. The shifted saddle then plays
// no part in the boundary.
bool wraps_around(const Polyline& upper_branch, const PhaseWindow& w) {
    if (upper_branch.empty()) return false;
    const Vec2 end = upper_branch.back();
    const double eps = 1e-9 * (w.domega_max - w.domega_min);
    if (std::abs(end.y - w.domega_min) < eps) return true;                   // bottom exit
    if (std::abs(end.x - w.delta_max) < 1e-9 * (w.delta_max - w.delta_min))  // right exit
        return true;
    return false;
}

Polyline assemble_pocket_polygon(const Polyline& right_curve, const PhaseWindow& w) {
    // right_curve runs from the wrapped end of the upper branch through the
    // saddle to the end of the lower branch; both ends sit on the window
    // boundary. Close along the boundary arc between them.
    Polyline poly = right_curve;
    for (const auto& c : boundary_walk(w, right_curve.back(), right_curve.front(), {}))
        poly.push_back(c);
    return poly;
}

Polyline envelope_around(const Vec2& center, const std::vector<Polyline>& branches,
                         int bin_count) {
    std::vector<Vec2> best(bin_count, Vec2{});
    std::vector<double> best_r(bin_count, -1.0);
    for (const auto& br : branches) {
        for (const auto& v : br) {
            const double u = v.x - center.x;
            const double s = (v.y - center.y) / kOmegaScale;
            const double r = std::sqrt(u * u + s * s);
            const double ang = std::atan2(s, u);
            int bin = static_cast<int>((ang + std::numbers::pi) / (2.0 * std::numbers::pi) *
                                       bin_count);
            bin = std::clamp(bin, 0, bin_count - 1);
            if (r > best_r[bin]) {
                best_r[bin] = r;
                best[bin] = v;
            }
        }
    }
    Polyline out;
    for (int i = 0; i < bin_count; ++i) {
        if (best_r[i] < 0.0) continue;
        if (!out.empty() && scaled_dist(out.back(), best[i]) < 1e-6) continue;
        out.push_back(best[i]);
    }
    return out;
}

}  // namespace

DoaBoundary estimate_doa(const VsgParams& p, const GridParams& g, const SeedConfig& seeds,
                         const PhaseWindow& window, const IntegratorConfig& cfg) {
    const auto eqs = find_equilibria(p, g, {-std::numbers::pi, std::numbers::pi},
                                     VpccMode::DroopCoupled);
    const Equilibrium* sep = find_sep(eqs);
    if (!sep) throw NoEquilibrium("grid state has no stable equilibrium: no DOA exists");
    const Equilibrium* uep = find_uep_after(eqs, sep->delta0);
    if (!uep) {
        // The bounding saddle may sit past pi for large power references.
        throw NoEquilibrium("no unstable equilibrium adjacent to the SEP");
    }
    if (sep->kind == EquilibriumKind::Degenerate || uep->kind == EquilibriumKind::Degenerate)
        throw DegenerateUep("saddle-node coalescence: boundary anchor is degenerate");
    if (!(p.damping_d > 0.0))
        throw AnalysisError("undamped system has no attractor: domain of attraction undefined");
    const double two_pi_chk = 2.0 * std::numbers::pi;
    if (uep->delta0 > window.delta_max || uep->delta0 - two_pi_chk < window.delta_min)
        throw AnalysisError("window does not contain the bounding saddles");

    DoaBoundary b;
    b.sep = *sep;
    b.uep = *uep;
    b.window = window;

    // The manifold is traced in a region taller and slightly wider than the
    // membership window: captured branches arc above the window and re-enter,
    // and cutting them at the window edge would misplace the boundary there.
    PhaseWindow region = window;
    region.delta_min -= 1.0;
    region.delta_max += 1.0;
    region.domega_min *= 4.0;
    region.domega_max *= 4.0;

    IntegratorConfig rc = cfg;
    rc.window = region;
    rc.events.clear();
    rc.convergence.reset();

    const Vec2 dir = stable_direction(p, g, *uep);
    const double two_pi = 2.0 * std::numbers::pi;
    const std::vector<double> saddles{uep->delta0, uep->delta0 - two_pi};

    // Separatrix pairs are always traced: they carry the boundary topology.
    std::vector<BranchResult> pair;
    for (int si = 0; si < 2; ++si) {
        for (double sgn : {-1.0, 1.0}) {
            const PhaseState s0{saddles[si] + sgn * seeds.radius * dir.x,
                                sgn * seeds.radius * dir.y};
            BranchResult br = branch_from(p, g, s0, rc, saddles, si, seeds.radius);
            clip_branch_end(br.line, region);
            br.line = thin_polyline(br.line, 2e-3, 1.0, kOmegaScale);
            pair.push_back(std::move(br));
        }
    }
    const bool pocket = pair[0].connected_saddle < 0 && wraps_around(pair[0].line, region);

    // Branch order per saddle: [0] along -v (sweeps up-left), [1] along
    // +v (sweeps down-right). Join each pair through its saddle.
    const auto join = [&](const Polyline& up, const Polyline& down, double d0) {
        Polyline curve(up.rbegin(), up.rend());
        curve.push_back({d0, 0.0});
        curve.insert(curve.end(), down.begin(), down.end());
        return curve;
    };

    const auto finish = [&](Polyline poly) {
        b.polygon = clip_polygon_to_rect(poly, window.delta_min, window.delta_max,
                                         window.domega_min, window.domega_max);
    };

    if (seeds.mode == SeedMode::SeparatrixPair) {
        if (pocket) {
            b.branches = {pair[0].line, pair[1].line};
            finish(assemble_pocket_polygon(join(pair[0].line, pair[1].line, saddles[0]),
                                           region));
        } else if (pair[0].connected_saddle == 1) {
            // The upper branch runs saddle to saddle: the boundary loop is
            // closed through the shifted saddle and its lower branch, and
            // the shifted saddle's upper branch bounds a neighbouring basin
            // instead.
            b.branches = {pair[0].line, pair[1].line, pair[3].line};
            Polyline loop(pair[0].line.rbegin(), pair[0].line.rend());
            loop.push_back({saddles[0], 0.0});
            loop.insert(loop.end(), pair[1].line.begin(), pair[1].line.end());
            for (const auto& c :
                 boundary_walk(region, pair[1].line.back(), pair[3].line.back(), {}))
                loop.push_back(c);
            loop.insert(loop.end(), pair[3].line.rbegin(), pair[3].line.rend());
            loop.push_back({saddles[1], 0.0});
            finish(std::move(loop));
        } else {
            b.branches = {pair[0].line, pair[1].line, pair[2].line, pair[3].line};
            const Polyline right_curve = join(pair[0].line, pair[1].line, saddles[0]);
            const Polyline left_curve = join(pair[2].line, pair[3].line, saddles[1]);
            finish(assemble_strip_polygon(left_curve, right_curve, region));
        }
    } else {
        const int n_saddles = pocket ? 1 : 2;
        const int per_saddle = std::max(seeds.count / n_saddles, 4);
        for (int si = 0; si < n_saddles; ++si) {
            for (int k = 0; k < per_saddle; ++k) {
                const double ang = two_pi * k / per_saddle;
                const PhaseState s0{saddles[si] + seeds.radius * std::cos(ang),
                                    seeds.radius * kOmegaScale * std::sin(ang)};
                BranchResult br = branch_from(p, g, s0, rc, saddles, si, seeds.radius);
                clip_branch_end(br.line, region);
                b.branches.push_back(thin_polyline(br.line, 2e-3, 1.0, kOmegaScale));
            }
        }
        // Envelope over in-window samples only; arcs outside the window
        // must not pull the radial maxima outward.
        std::vector<Polyline> clipped;
        clipped.reserve(b.branches.size());
        for (const auto& br : b.branches) {
            Polyline cur;
            for (const auto& v : br) {
                if (v.x >= window.delta_min && v.x <= window.delta_max &&
                    v.y >= window.domega_min && v.y <= window.domega_max) {
                    cur.push_back(v);
                } else if (!cur.empty()) {
                    clipped.push_back(std::move(cur));
                    cur.clear();
                }
            }
            if (!cur.empty()) clipped.push_back(std::move(cur));
        }
        const int bins = std::max(720, seeds.count * 4);
        finish(envelope_around({sep->delta0, 0.0}, clipped, bins));
    }
    return b;
}

DoaBoundary estimate_doa(const VsgParams& p, const GridParams& g, const SeedConfig& seeds) {
    const auto eqs = find_equilibria(p, g, {-std::numbers::pi, std::numbers::pi},
                                     VpccMode::DroopCoupled);
    const Equilibrium* sep = find_sep(eqs);
    if (!sep) throw NoEquilibrium("grid state has no stable equilibrium: no DOA exists");
    const double two_pi = 2.0 * std::numbers::pi;
    PhaseWindow w{sep->delta0 - two_pi, sep->delta0 + two_pi, -150.0, 150.0};
    IntegratorConfig cfg;
    cfg.step = 1e-4;
    cfg.max_time = 5.0;
    return estimate_doa(p, g, seeds, w, cfg);
}

bool contains(const DoaBoundary& b, const PhaseState& s) {
    const Vec2 pt{s.delta, s.domega};
    if (point_in_polygon(b.polygon, pt)) return true;
    return distance_to_polyline(b.polygon, pt, 1.0, kOmegaScale, true) < kBoundaryTol;
}

double doa_area(const DoaBoundary& b) { return polygon_area(b.polygon); }

}  // namespace vsg
