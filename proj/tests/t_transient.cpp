#include "vsg/transient.hpp"

#include "vsg/defaults.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace vsg;

namespace {

constexpr double kPi = std::numbers::pi;

IntegratorConfig sim_config() {
    IntegratorConfig cfg;
    cfg.step = 1e-4;
    cfg.max_time = 10.0;
    return cfg;
}

FaultScenario scenario(const VsgParams& p, const GridParams& pre, double sag, Clearing c,
                       double fault_time = 0.0) {
    return {p, pre, sagged(pre, sag), pre, fault_time, c};
}

}  // namespace

TEST_CASE("fault taxonomy over sag depth") {
    const VsgParams p = reference_vsg();
    const GridParams pre = reference_grid();
    CHECK(classify_fault(p, pre, sagged(pre, 0.7)) == FaultType::TypeI);
    CHECK(classify_fault(p, pre, sagged(pre, 0.57)) == FaultType::TypeII);
    CHECK(classify_fault(p, pre, sagged(pre, 0.5)) == FaultType::TypeIII);
}

TEST_CASE("classification agrees with uncleared simulation") {
    const VsgParams p = reference_vsg();
    const GridParams pre = reference_grid();
    for (double sag : {0.7, 0.6, 0.57, 0.5}) {
        const FaultType t = classify_fault(p, pre, sagged(pre, sag));
        const auto v = simulate_scenario(scenario(p, pre, sag, Clearing::never()), sim_config(), t);
        CHECK(v.stable == (t == FaultType::TypeI));
        if (v.stable) {
            REQUIRE(v.final_sep.has_value());
            CHECK(v.trajectory.termination == Termination::Converged);
        }
    }
}

TEST_CASE("scenario verdicts around the critical angle") {
    const VsgParams p = reference_vsg();
    const GridParams pre = reference_grid();

    CHECK(simulate_scenario(scenario(p, pre, 0.57, Clearing::at_angle(2.3), 1.5), sim_config())
              .stable);
    CHECK_FALSE(
        simulate_scenario(scenario(p, pre, 0.57, Clearing::at_angle(2.6), 1.5), sim_config())
            .stable);
    CHECK(simulate_scenario(scenario(p, pre, 0.5, Clearing::at_angle(2.2)), sim_config()).stable);
    CHECK_FALSE(
        simulate_scenario(scenario(p, pre, 0.5, Clearing::at_angle(2.5)), sim_config()).stable);
}

TEST_CASE("switch instants appear as exact samples") {
    const VsgParams p = reference_vsg();
    const GridParams pre = reference_grid();
    const auto v =
        simulate_scenario(scenario(p, pre, 0.57, Clearing::at_angle(2.3), 0.05), sim_config());
    bool fault_instant = false, clear_instant = false;
    for (const auto& s : v.trajectory.samples) {
        if (s.t == 0.05) fault_instant = true;
        if (std::abs(s.state.delta - 2.3) < 1e-9) clear_instant = true;
    }
    CHECK(fault_instant);
    CHECK(clear_instant);
    // Time strictly increases across the stitched segments.
    for (std::size_t i = 1; i < v.trajectory.samples.size(); ++i) {
        CHECK(v.trajectory.samples[i].t > v.trajectory.samples[i - 1].t);
    }
}

TEST_CASE("timed clearing switches at the requested instant") {
    const VsgParams p = reference_vsg();
    const GridParams pre = reference_grid();
    const auto v =
        simulate_scenario(scenario(p, pre, 0.5, Clearing::at_time(0.04), 0.1), sim_config());
    CHECK(v.stable);  // cleared early, well inside the restored domain
    bool has_switch = false;
    for (const auto& s : v.trajectory.samples) {
        if (std::abs(s.t - 0.14) < 1e-12) has_switch = true;
    }
    CHECK(has_switch);
}

TEST_CASE("doa crossing angles match the reference values") {
    const VsgParams p = reference_vsg();
    const GridParams pre = reference_grid();
    const double c57 = cca_doa(p, pre, sagged(pre, 0.57), pre);
    const double c50 = cca_doa(p, pre, sagged(pre, 0.5), pre);
    CHECK(c57 == doctest::Approx(2.461).epsilon(0.10));
    CHECK(c50 == doctest::Approx(2.366).epsilon(0.10));
    CHECK(c57 > c50);
}

TEST_CASE("mild sag never meets the boundary") {
    const VsgParams p = reference_vsg();
    const GridParams pre = reference_grid();
    CHECK_THROWS_AS(cca_doa(p, pre, sagged(pre, 0.7), pre), NoIntersection);
}

TEST_CASE("area-balance clearing angles match the reference values") {
    const VsgParams p = reference_vsg();
    const GridParams pre = reference_grid();
    const double e57 = cca_eac(p, pre, sagged(pre, 0.57), pre);
    const double e50 = cca_eac(p, pre, sagged(pre, 0.5), pre);
    CHECK(e57 == doctest::Approx(1.784).epsilon(0.10));
    CHECK(e50 == doctest::Approx(1.69).epsilon(0.10));
}

TEST_CASE("equal-area method is more conservative than the boundary crossing") {
    const VsgParams p = reference_vsg();
    const GridParams pre = reference_grid();
    for (double sag : {0.57, 0.5}) {
        const GridParams f = sagged(pre, sag);
        CHECK(cca_eac(p, pre, f, pre) < cca_doa(p, pre, f, pre));
    }
}

TEST_CASE("without recovery margin the balance lands on the saddle") {
    const VsgParams p = reference_vsg();
    const GridParams pre = reference_grid();
    // post == fault == pre: zero acceleration area, clearing is moot up to
    // the saddle angle.
    const double cca = cca_eac(p, pre, pre, pre);
    const auto eqs = find_equilibria(p, pre, {-kPi, kPi}, VpccMode::DroopCoupled);
    const Equilibrium* uep = find_uep_after(eqs, find_sep(eqs)->delta0);
    REQUIRE(uep != nullptr);
    CHECK(cca == doctest::Approx(uep->delta0).epsilon(1e-9));
}

TEST_CASE("bisection agrees with the boundary crossing") {
    const VsgParams p = reference_vsg();
    const GridParams pre = reference_grid();
    for (double sag : {0.57, 0.5}) {
        const GridParams f = sagged(pre, sag);
        const double bf = cca_bruteforce(p, pre, f, pre, sim_config());
        const double doa = cca_doa(p, pre, f, pre);
        CHECK(std::abs(bf - doa) < 0.05);

        // Clearing just below is stable, just above is unstable.
        CHECK(simulate_scenario({p, pre, f, pre, 0.0, Clearing::at_angle(bf - 0.01)},
                                sim_config())
                  .stable);
        CHECK_FALSE(simulate_scenario({p, pre, f, pre, 0.0, Clearing::at_angle(bf + 0.01)},
                                      sim_config())
                        .stable);
    }
}

TEST_CASE("degenerate bisection brackets are reported") {
    const VsgParams p = reference_vsg();
    const GridParams pre = reference_grid();
    CHECK_THROWS_AS(cca_bruteforce(p, pre, sagged(pre, 0.7), pre, sim_config()), AllStable);

    GridParams dead = pre;
    dead.vg = 0.0;
    CHECK_THROWS_AS(cca_bruteforce(p, pre, sagged(pre, 0.5), dead, sim_config()), AllUnstable);
}

TEST_CASE("area bookkeeping") {
    const VsgParams p = reference_vsg();
    const GridParams pre = reference_grid();

    const auto zero = eac_areas(p, pre, 1.0, 1.0);
    CHECK(zero.s_acc == 0.0);
    CHECK(zero.s_dec == 0.0);

    // Deep sag: the reference exceeds the curve everywhere, so nothing decelerates.
    const auto deep = eac_areas(p, sagged(pre, 0.5), 0.6946, 2.0);
    CHECK(deep.s_acc > 0.0);
    CHECK(deep.s_dec == 0.0);
}

TEST_CASE("area comparison calls the marginal sag unstable while simulation holds") {
    const VsgParams p = reference_vsg();
    const GridParams pre = reference_grid();
    const GridParams f = sagged(pre, 0.6);

    const auto pre_eqs = find_equilibria(p, pre, {-kPi, kPi}, VpccMode::DroopCoupled);
    const auto f_eqs = find_equilibria(p, f, {-kPi, kPi}, VpccMode::DroopCoupled);
    const double d0 = find_sep(pre_eqs)->delta0;
    const double uep_f = find_uep_after(f_eqs, find_sep(f_eqs)->delta0)->delta0;

    const auto areas = eac_areas(p, f, d0, uep_f);
    CHECK(areas.s_acc > areas.s_dec);  // the static balance predicts loss of synchronism

    const auto v = simulate_scenario(scenario(p, pre, 0.6, Clearing::never()), sim_config());
    CHECK(v.stable);  // damping keeps the real trajectory on the attractor
}
