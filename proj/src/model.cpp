#include "vsg/model.hpp"

#include <cmath>

namespace vsg {

namespace {

// Coefficients of the droop fixed point written as a*V^2 + b*V + c = 0.
struct DroopQuadratic {
    double a, b, c;
};

DroopQuadratic droop_quadratic(const VsgParams& p, const GridParams& g, double delta) {
    const double z2 = g.rg * g.rg + g.xg * g.xg;
    const double a = 1.5 * p.droop_kq * g.xg;
    const double b =
        z2 - 1.5 * p.droop_kq * g.vg * (g.xg * std::cos(delta) + g.rg * std::sin(delta));
    const double c = -(p.v0 + p.droop_kq * p.q_ref) * z2;
    return {a, b, c};
}

}  // namespace

double vpcc_of_delta(const VsgParams& p, const GridParams& g, double delta) {
    if (p.droop_kq == 0.0) return p.v0;

    const auto [a, b, c] = droop_quadratic(p, g, delta);
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) throw NoRealRoot("droop quadratic has no real root");
    const double sq = std::sqrt(disc);

    // Larger root, evaluated without subtractive cancellation.
    const double root = (b <= 0.0) ? (-b + sq) / (2.0 * a) : -2.0 * c / (b + sq);
    if (!(root > 0.0)) throw NonPositiveRoot("droop quadratic has no positive root");
    return root;
}

double vpcc_of_delta_direct(const VsgParams& p, const GridParams& g, double delta) {
    const double z2 = g.rg * g.rg + g.xg * g.xg;
    const double kq = p.droop_kq;
    const double t = 1.5 * kq * g.vg * (g.xg * std::cos(delta) + g.rg * std::sin(delta)) - z2;
    const double rad = t * t + 6.0 * kq * g.xg * (p.v0 + kq * p.q_ref) * z2;
    if (rad < 0.0) throw NoRealRoot("droop quadratic has no real root");
    return (t + std::sqrt(rad)) / (3.0 * kq * g.xg);
}

double active_power(const VsgParams&, const GridParams& g, double delta, double vpcc) {
    const double z2 = g.rg * g.rg + g.xg * g.xg;
    return 1.5 * vpcc / z2 *
           (g.rg * (vpcc - g.vg * std::cos(delta)) + g.xg * g.vg * std::sin(delta));
}

double reactive_power(const VsgParams&, const GridParams& g, double delta, double vpcc) {
    const double z2 = g.rg * g.rg + g.xg * g.xg;
    return 1.5 * vpcc / z2 *
           (g.xg * (vpcc - g.vg * std::cos(delta)) - g.rg * g.vg * std::sin(delta));
}

double electrical_power(const VsgParams& p, const GridParams& g, double delta) {
    return active_power(p, g, delta, vpcc_of_delta(p, g, delta));
}

PhaseDeriv forward_rhs(const VsgParams& p, const GridParams& g, const PhaseState& s) {
    const double pe = electrical_power(p, g, s.delta);
    return {s.domega, (p.p_ref - pe - p.damping_d * s.domega) / p.inertia_2h};
}

PhaseDeriv reversed_rhs(const VsgParams& p, const GridParams& g, const PhaseState& s) {
    const PhaseDeriv f = forward_rhs(p, g, s);
    return {-f.d_delta, -f.d_domega};
}

PhaseDeriv forward_rhs_frozen(const VsgParams& p, const GridParams& g, const PhaseState& s,
                              double vpcc) {
    const double pe = active_power(p, g, s.delta, vpcc);
    return {s.domega, (p.p_ref - pe - p.damping_d * s.domega) / p.inertia_2h};
}

}  // namespace vsg
