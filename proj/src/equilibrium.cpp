#include "vsg/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace vsg {

namespace {

constexpr double kScanStep = 1e-3;       // rad
constexpr double kBisectTol = 1e-10;     // rad
constexpr double kDegenerateCos = 1e-9;

double residual_droop(const VsgParams& p, const GridParams& g, double delta) {
    return p.p_ref - electrical_power(p, g, delta);
}

double residual_frozen(const VsgParams& p, const GridParams& g, double delta, double vpcc) {
    return p.p_ref - active_power(p, g, delta, vpcc);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double flo) {
    while (hi - lo > kBisectTol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Self-consistent (angle, voltage) pair for ConstantVpcc mode: alternate
// between solving the frozen-voltage root in the bracket and re-evaluating
// the droop voltage at the root.
bool refine_constant_vpcc(const VsgParams& p, const GridParams& g, double lo, double hi,
                          double& delta, double& vpcc) {
    double v = vpcc_of_delta(p, g, delta);
    for (int it = 0; it < 50; ++it) {
        const auto f = [&](double d) { return residual_frozen(p, g, d, v); };
        double flo = f(lo), fhi = f(hi);
        if ((flo < 0.0) == (fhi < 0.0)) {
            // Root left the bracket under the frozen voltage; widen slightly.
            const double w = hi - lo;
            lo -= w;
            hi += w;
            flo = f(lo);
            fhi = f(hi);
            if ((flo < 0.0) == (fhi < 0.0)) return false;
        }
        delta = bisect(f, lo, hi, flo);
        const double v_next = vpcc_of_delta(p, g, delta);
        if (std::abs(v_next - v) < 1e-9) {
            vpcc = v_next;
            return true;
        }
        v = v_next;
    }
    return false;
}

}  // namespace

Jacobian2x2 jacobian_at(const VsgParams& p, const GridParams& g, double delta0) {
    // Full slope of the frozen-voltage power curve. The resistive sin term
    // is a 17% effect at the reference impedance and is required for the
    // finite-difference cross-check to close.
    const double vpcc = vpcc_of_delta(p, g, delta0);
    const double z2 = g.rg * g.rg + g.xg * g.xg;
    const double slope =
        1.5 * vpcc * g.vg * (g.xg * std::cos(delta0) + g.rg * std::sin(delta0)) / z2;
    return {0.0, 1.0, -slope / p.inertia_2h, -p.damping_d / p.inertia_2h};
}

Jacobian2x2 jacobian_droop_at(const VsgParams& p, const GridParams& g, double delta0) {
    const double h = 1e-6;
    const double slope =
        (electrical_power(p, g, delta0 + h) - electrical_power(p, g, delta0 - h)) / (2.0 * h);
    return {0.0, 1.0, -slope / p.inertia_2h, -p.damping_d / p.inertia_2h};
}

ClassifyResult classify(const VsgParams& p, const Jacobian2x2& j) {
    // a21 = -k/inertia_2h; the sign of the restoring stiffness k carries
    // the saddle/focus distinction.
    const double k = -j.a21 * p.inertia_2h;

    ClassifyResult r{};
    const double disc = p.damping_d * p.damping_d - 4.0 * p.inertia_2h * k;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        r.lambda1 = {(-p.damping_d + sq) / (2.0 * p.inertia_2h), 0.0};
        r.lambda2 = {(-p.damping_d - sq) / (2.0 * p.inertia_2h), 0.0};
        r.real_eigenvalues = true;
    } else {
        const double re = -p.damping_d / (2.0 * p.inertia_2h);
        const double im = std::sqrt(-disc) / (2.0 * p.inertia_2h);
        r.lambda1 = {re, im};
        r.lambda2 = {re, -im};
        r.real_eigenvalues = false;
    }

    if (k > 0.0) {
        r.kind = EquilibriumKind::Sep;
    } else if (k < 0.0) {
        r.kind = EquilibriumKind::Uep;
    } else {
        r.kind = EquilibriumKind::Degenerate;
    }
    return r;
}

std::vector<Equilibrium> find_equilibria(const VsgParams& p, const GridParams& g,
                                         AngleWindow window, VpccMode mode) {
    std::vector<Equilibrium> out;
    const auto res = [&](double d) { return residual_droop(p, g, d); };

    const double tol_p = p.p_ref != 0.0 ? 1e-6 * std::abs(p.p_ref) : 1e-3;

    const auto push_root = [&](double delta, double vpcc) {
        Equilibrium eq;
        eq.delta0 = delta;
        eq.vpcc_at = vpcc;
        const Jacobian2x2 j = mode == VpccMode::ConstantVpcc ? jacobian_at(p, g, delta)
                                                             : jacobian_droop_at(p, g, delta);
        const auto c = classify(p, j);
        const bool degenerate = mode == VpccMode::ConstantVpcc
                                    ? std::abs(std::cos(delta)) < kDegenerateCos
                                    : c.kind == EquilibriumKind::Degenerate;
        eq.kind = degenerate ? EquilibriumKind::Degenerate : c.kind;
        eq.lambda1 = c.lambda1;
        eq.lambda2 = c.lambda2;
        eq.real_eigenvalues = c.real_eigenvalues;
        for (const auto& prev : out)
            if (std::abs(prev.delta0 - eq.delta0) <= 1e-6) return;
        out.push_back(eq);
    };

    // Roots sitting exactly on the window endpoints produce no interior
    // sign change; accept them directly when the residual is in tolerance.
    for (double d : {window.min, window.max}) {
        if (std::abs(res(d)) <= tol_p) push_root(d, vpcc_of_delta(p, g, d));
    }

    double prev_d = window.min;
    double prev_f = res(prev_d);
    const int n = static_cast<int>(std::ceil((window.max - window.min) / kScanStep));
    for (int i = 1; i <= n; ++i) {
        const double d = std::min(window.min + i * kScanStep, window.max);
        const double f = res(d);
        const bool crossing = (prev_f == 0.0) || ((prev_f < 0.0) != (f < 0.0));
        if (crossing) {
            double delta = prev_f == 0.0 ? prev_d : bisect(res, prev_d, d, prev_f);
            double vpcc = vpcc_of_delta(p, g, delta);
            if (mode == VpccMode::ConstantVpcc) {
                refine_constant_vpcc(p, g, prev_d, d, delta, vpcc);
            }
            const double check = mode == VpccMode::ConstantVpcc
                                     ? residual_frozen(p, g, delta, vpcc)
                                     : residual_droop(p, g, delta);
            if (std::abs(check) <= tol_p) push_root(delta, vpcc);
        }
        prev_d = d;
        prev_f = f;
    }
    std::sort(out.begin(), out.end(),
              [](const Equilibrium& a, const Equilibrium& b) { return a.delta0 < b.delta0; });
    return out;
}

const Equilibrium* find_sep(const std::vector<Equilibrium>& eqs) {
    for (const auto& e : eqs)
        if (e.kind == EquilibriumKind::Sep) return &e;
    return nullptr;
}

const Equilibrium* find_uep_after(const std::vector<Equilibrium>& eqs, double delta) {
    for (const auto& e : eqs)
        if (e.kind == EquilibriumKind::Uep && e.delta0 > delta) return &e;
    return nullptr;
}

}  // namespace vsg
