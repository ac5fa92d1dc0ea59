#include "vsg/integrator.hpp"

#include "vsg/defaults.hpp"
#include "vsg/equilibrium.hpp"

#include "doctest.h"

#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

using namespace vsg;

namespace {

constexpr double kPi = std::numbers::pi;

VectorField fault_field(const VsgParams& p, const GridParams& g) {
    return [p, g](const PhaseState& s) { return forward_rhs(p, g, s); };
}

}  // namespace

TEST_CASE("starting at an equilibrium converges immediately") {
    const VsgParams p = reference_vsg();
    const GridParams g = reference_grid();
    const auto eqs = find_equilibria(p, g, {-kPi, kPi}, VpccMode::DroopCoupled);
    const Equilibrium* sep = find_sep(eqs);
    REQUIRE(sep != nullptr);

    IntegratorConfig cfg;
    cfg.max_time = 1.0;
    cfg.convergence = ConvergenceTarget{{sep->delta0, 0.0}, 1e-6, 0.1};
    const Trajectory tr = integrate(fault_field(p, g), {sep->delta0, 0.0}, cfg);
    CHECK(tr.termination == Termination::Converged);
    for (const auto& s : tr.samples) {
        CHECK(scaled_distance(s.state, {sep->delta0, 0.0}) < 1e-6);
    }
}

TEST_CASE("harmonic oscillator returns to its start after one period") {
    const VectorField rhs = [](const PhaseState& s) { return PhaseDeriv{s.domega, -s.delta}; };
    IntegratorConfig cfg;
    cfg.step = 1e-4;
    cfg.max_time = 2.0 * kPi;
    cfg.window = {-2.0, 2.0, -2.0, 2.0};
    const Trajectory tr = integrate(rhs, {1.0, 0.0}, cfg);
    CHECK(tr.termination == Termination::TimeOut);
    CHECK(tr.samples.back().t == doctest::Approx(2.0 * kPi).epsilon(1e-15));
    CHECK(std::abs(tr.samples.back().state.delta - 1.0) < 1e-8);
    CHECK(std::abs(tr.samples.back().state.domega) < 1e-8);
}

TEST_CASE("moderate sag converges to the fault-on equilibrium") {
    const VsgParams p = reference_vsg();
    const GridParams pre = reference_grid();
    const GridParams fault = sagged(pre, 0.7);
    const auto pre_eqs = find_equilibria(p, pre, {-kPi, kPi}, VpccMode::DroopCoupled);
    const Equilibrium* pre_sep = find_sep(pre_eqs);
    const auto f_eqs = find_equilibria(p, fault, {-kPi, kPi}, VpccMode::DroopCoupled);
    const Equilibrium* fsep = find_sep(f_eqs);
    REQUIRE(pre_sep != nullptr);
    REQUIRE(fsep != nullptr);

    IntegratorConfig cfg;
    cfg.max_time = 10.0;
    cfg.convergence = ConvergenceTarget{{fsep->delta0, 0.0}, 1e-6, 0.1};
    const Trajectory tr = integrate(fault_field(p, fault), {pre_sep->delta0, 0.0}, cfg);
    CHECK(tr.termination == Termination::Converged);
    CHECK(tr.back_state().delta == doctest::Approx(fsep->delta0).epsilon(1e-4));
}

TEST_CASE("event crossing interpolates between samples") {
    Trajectory tr;
    tr.samples = {{0.0, {1.0, 10.0}}, {1e-4, {1.2, 30.0}}};
    const auto hit = event_crossing(tr, 1.1);
    REQUIRE(hit.has_value());
    CHECK(hit->t == doctest::Approx(0.5e-4).epsilon(1e-12));
    CHECK(hit->state.delta == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(hit->state.domega == doctest::Approx(20.0).epsilon(1e-12));

    Trajectory flat;
    flat.samples = {{0.0, {0.5, 0.0}}, {1e-4, {0.5, 0.0}}};
    CHECK_FALSE(event_crossing(flat, 1.0).has_value());
}

TEST_CASE("deep sag trajectory crosses a target angle and stops there") {
    const VsgParams p = reference_vsg();
    const GridParams pre = reference_grid();
    const GridParams fault = sagged(pre, 0.5);
    const auto pre_eqs = find_equilibria(p, pre, {-kPi, kPi}, VpccMode::DroopCoupled);
    const Equilibrium* pre_sep = find_sep(pre_eqs);
    REQUIRE(pre_sep != nullptr);

    IntegratorConfig cfg;
    cfg.max_time = 10.0;
    cfg.window = {pre_sep->delta0 - 2.0 * kPi, pre_sep->delta0 + 2.0 * kPi, -150.0, 150.0};
    cfg.events.push_back({3, 2.366});
    const Trajectory tr = integrate(fault_field(p, fault), {pre_sep->delta0, 0.0}, cfg);
    CHECK(tr.termination == Termination::EventFired);
    CHECK(tr.event_id == 3);
    CHECK(std::abs(tr.back_state().delta - 2.366) < 1e-9);
}

TEST_CASE("halving the step changes a two-second trajectory by less than 1e-6") {
    const VsgParams p = reference_vsg();
    const GridParams fault = sagged(reference_grid(), 0.6);
    const auto pre_eqs =
        find_equilibria(p, reference_grid(), {-kPi, kPi}, VpccMode::DroopCoupled);
    const Equilibrium* pre_sep = find_sep(pre_eqs);
    REQUIRE(pre_sep != nullptr);

    IntegratorConfig coarse;
    coarse.step = 1e-4;
    coarse.max_time = 2.0;
    IntegratorConfig fine = coarse;
    fine.step = 5e-5;

    const Trajectory a = integrate(fault_field(p, fault), {pre_sep->delta0, 0.0}, coarse);
    const Trajectory b = integrate(fault_field(p, fault), {pre_sep->delta0, 0.0}, fine);
    REQUIRE(a.samples.size() * 2 - 1 == b.samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        worst = std::max(worst, scaled_distance(a.samples[i].state, b.samples[2 * i].state));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("reverse integration retraces the forward path") {
    const VsgParams p = reference_vsg();
    const GridParams g = reference_grid();
    const PhaseState start{1.2, 30.0};

    IntegratorConfig cfg;
    cfg.step = 1e-4;
    cfg.max_time = 0.5;
    const Trajectory fwd = integrate(fault_field(p, g), start, cfg);
    REQUIRE(fwd.termination == Termination::TimeOut);

    const VectorField rev = [p, g](const PhaseState& s) { return reversed_rhs(p, g, s); };
    const Trajectory back = integrate(rev, fwd.back_state(), cfg, Direction::Reversed);
    CHECK(scaled_distance(back.back_state(), start) < 1e-5);
}

TEST_CASE("identical inputs give bit-identical trajectories") {
    const VsgParams p = reference_vsg();
    const GridParams fault = sagged(reference_grid(), 0.57);
    IntegratorConfig cfg;
    cfg.max_time = 1.0;
    const Trajectory a = integrate(fault_field(p, fault), {0.6946, 0.0}, cfg);
    const Trajectory b = integrate(fault_field(p, fault), {0.6946, 0.0}, cfg);
    REQUIRE(a.samples.size() == b.samples.size());
    CHECK(std::memcmp(a.samples.data(), b.samples.data(),
                      a.samples.size() * sizeof(TrajectorySample)) == 0);
}

TEST_CASE("non-finite field values are reported") {
    const VectorField bad = [](const PhaseState&) {
        return PhaseDeriv{std::numeric_limits<double>::quiet_NaN(), 0.0};
    };
    IntegratorConfig cfg;
    cfg.max_time = 1.0;
    CHECK_THROWS_AS(integrate(bad, {0.0, 0.0}, cfg), NonFiniteState);
}

TEST_CASE("csv serialization carries full precision") {
    Trajectory tr;
    tr.samples = {{0.0, {0.1234567890123456, -3.0}}, {1e-4, {0.2, 4.0}}};
    const std::string csv = to_csv(tr);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,delta,domega");
    double t, d, w;
    char comma;
    in >> t >> comma >> d >> comma >> w;
    CHECK(t == 0.0);
    CHECK(d == 0.1234567890123456);
    CHECK(w == -3.0);
}
