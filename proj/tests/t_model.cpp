#include "vsg/model.hpp"

#include "vsg/defaults.hpp"
#include "vsg/equilibrium.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

using namespace vsg;

namespace {

constexpr double kPi = std::numbers::pi;

// Residual of the droop fixed point V = V0 + Kq*(Qref - Qe(V, delta)),
// relative to its terms. Independent check of the quadratic solve.
double droop_residual(const VsgParams& p, const GridParams& g, double delta, double v) {
    const double rhs = p.v0 + p.droop_kq * (p.q_ref - reactive_power(p, g, delta, v));
    return std::abs(v - rhs) / std::max({std::abs(v), std::abs(rhs), 1.0});
}

}  // namespace

TEST_CASE("vpcc with droop disabled returns the nominal amplitude") {
    VsgParams p = reference_vsg();
    p.droop_kq = 0.0;
    const GridParams g = reference_grid();
    for (double d : {-kPi, -1.0, 0.0, 0.3, 2.0, kPi}) {
        CHECK(vpcc_of_delta(p, g, d) == p.v0);
    }
}

TEST_CASE("vpcc satisfies the droop fixed point to 1e-10") {
    const VsgParams p = reference_vsg();
    const GridParams g = reference_grid();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    for (int i = 0; i < 500; ++i) {
        const double d = ang(rng);
        const double v = vpcc_of_delta(p, g, d);
        CHECK(v > 0.0);
        CHECK(droop_residual(p, g, d, v) < 1e-10);
    }
    CHECK(vpcc_of_delta(p, g, 0.0) == doctest::Approx(311.0).epsilon(0.01));
}

TEST_CASE("vpcc stays near nominal around the operating range, sags at large angles") {
    const VsgParams p = reference_vsg();
    const GridParams g = reference_grid();
    double max_dev = 0.0;
    for (double d = 0.0; d <= 0.55; d += 0.01) {
        max_dev = std::max(max_dev, std::abs(vpcc_of_delta(p, g, d) - p.v0));
    }
    CHECK(max_dev < 0.01 * p.v0);
    // Large reactive flows near anti-phase pull the PCC voltage down hard.
    CHECK(vpcc_of_delta(p, g, kPi) < 0.85 * p.v0);
}

TEST_CASE("vpcc direct radical form agrees with the stable solve") {
    const VsgParams p = reference_vsg();
    const GridParams g = reference_grid();
    for (double d = -kPi; d <= kPi; d += 1e-3) {
        const double a = vpcc_of_delta(p, g, d);
        const double b = vpcc_of_delta_direct(p, g, d);
        CHECK(std::abs(a - b) <= 1e-8 * std::abs(b));
    }
}

TEST_CASE("vpcc error conditions") {
    GridParams g{2.0 / 3.0, 0.0, 1.0};
    VsgParams p = reference_vsg();
    p.droop_kq = 1.0;
    p.v0 = 0.5;
    p.q_ref = -1.5;
    CHECK_THROWS_AS(vpcc_of_delta(p, g, 0.0), NoRealRoot);

    // Both roots non-positive: moderately negative reactive reference keeps
    // the discriminant positive while flipping the constant term's sign.
    VsgParams q = reference_vsg();
    q.q_ref = -1.37e6;
    CHECK_THROWS_AS(vpcc_of_delta(q, reference_grid(), 0.0), NonPositiveRoot);
}

TEST_CASE("active power closed forms") {
    const VsgParams p = reference_vsg();
    GridParams g{311.0, 0.0, 0.9425};

    CHECK(active_power(p, g, 0.0, 311.0) == doctest::Approx(0.0).epsilon(1e-12));
    const double pmax = 1.5 * 311.0 * 311.0 / g.xg;
    CHECK(active_power(p, g, kPi / 2.0, 311.0) == doctest::Approx(pmax).epsilon(1e-12));
}

TEST_CASE("reactive power closed forms") {
    const VsgParams p = reference_vsg();
    const GridParams matched{311.0, 0.2, 0.9425};
    CHECK(reactive_power(p, matched, 0.0, 311.0) == doctest::Approx(0.0).epsilon(1e-12));

    const GridParams islanded{0.0, 0.0, 0.9425};
    const double qmax = 1.5 * 280.0 * 280.0 / islanded.xg;
    CHECK(reactive_power(p, islanded, 0.7, 280.0) == doctest::Approx(qmax).epsilon(1e-12));
}

TEST_CASE("power balance holds at the stable equilibrium") {
    const VsgParams p = reference_vsg();
    const GridParams g = reference_grid();
    const auto eqs = find_equilibria(p, g);
    const Equilibrium* sep = find_sep(eqs);
    REQUIRE(sep != nullptr);
    CHECK(sep->delta0 == doctest::Approx(0.65).epsilon(0.15));
    const double pe = active_power(p, g, sep->delta0, sep->vpcc_at);
    CHECK(std::abs(pe - p.p_ref) < 1e-6 * p.p_ref);
}

TEST_CASE("reactive droop closes on itself at delta = 0") {
    const VsgParams p = reference_vsg();
    const GridParams g = reference_grid();
    const double v = vpcc_of_delta(p, g, 0.0);
    const double vmref = p.v0 + p.droop_kq * (p.q_ref - reactive_power(p, g, 0.0, v));
    CHECK(v == doctest::Approx(vmref).epsilon(1e-10));
}

TEST_CASE("forward field accelerates from zero angle and damps linearly") {
    const VsgParams p = reference_vsg();
    const GridParams g = reference_grid();

    const PhaseDeriv at_zero = forward_rhs(p, g, {0.0, 0.0});
    CHECK(at_zero.d_delta == 0.0);
    CHECK(at_zero.d_domega > 0.0);

    // Doubling D strictly lowers the acceleration at positive frequency deviation.
    VsgParams p2 = p;
    p2.damping_d *= 2.0;
    const PhaseState s{0.4, 5.0};
    CHECK(forward_rhs(p2, g, s).d_domega < forward_rhs(p, g, s).d_domega);
}

TEST_CASE("field vanishes at equilibria") {
    const VsgParams p = reference_vsg();
    const GridParams g = reference_grid();
    for (const auto& eq : find_equilibria(p, g, {-kPi, kPi}, VpccMode::DroopCoupled)) {
        const PhaseDeriv d = forward_rhs(p, g, {eq.delta0, 0.0});
        CHECK(d.d_delta == 0.0);
        CHECK(std::abs(d.d_domega) < 1e-4);
    }
}

TEST_CASE("reversed field is the exact negation of the forward field") {
    const VsgParams p = reference_vsg();
    const GridParams g = reference_grid();
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    std::uniform_real_distribution<double> freq(-120.0, 120.0);
    for (int i = 0; i < 1000; ++i) {
        const PhaseState s{ang(rng), freq(rng)};
        const PhaseDeriv f = forward_rhs(p, g, s);
        const PhaseDeriv r = reversed_rhs(p, g, s);
        CHECK(r.d_delta == -f.d_delta);
        CHECK(r.d_domega == -f.d_domega);
    }
    CHECK(reversed_rhs(p, g, {0.0, 1.0}).d_delta == -1.0);
}

TEST_CASE("droop-coupled electrical power is 2*pi periodic") {
    const VsgParams p = reference_vsg();
    const GridParams g = reference_grid();
    for (double d = -kPi; d < kPi; d += 0.05) {
        const double a = electrical_power(p, g, d);
        const double b = electrical_power(p, g, d + 2.0 * kPi);
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
    }
}

TEST_CASE("frozen-voltage field matches the droop field when droop is off") {
    VsgParams p = reference_vsg();
    p.droop_kq = 0.0;
    const GridParams g = reference_grid();
    for (double d = -2.0; d <= 2.0; d += 0.1) {
        const PhaseState s{d, 3.0};
        const PhaseDeriv a = forward_rhs(p, g, s);
        const PhaseDeriv b = forward_rhs_frozen(p, g, s, p.v0);
        CHECK(a.d_domega == b.d_domega);
    }
}
