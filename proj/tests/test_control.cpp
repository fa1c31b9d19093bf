#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "singletrack/control.hpp"

using namespace singletrack;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SteeringParams case1_steering() {
    return SteeringParams{0.175, -1.91, -0.2, 1.0, 3.0, 10.0, 11.0};
}

ForceParams case1_force() {
    return ForceParams{441.0, 900.0, 5.443, 10.0};
}

}  // namespace

TEST_CASE("window is 1 on [a, b) and 0 elsewhere", "[control]") {
    REQUIRE(window(0.99, 1.0, 3.0) == 0.0);
    REQUIRE(window(1.0, 1.0, 3.0) == 1.0);
    REQUIRE(window(3.0, 1.0, 3.0) == 0.0);
    for (double t = -1.0; t < 5.0; t += 0.01) {
        const double w = window(t, 1.0, 3.0);
        REQUIRE((w == 0.0 || w == 1.0));
        REQUIRE(w == ((1.0 <= t && t < 3.0) ? 1.0 : 0.0));
    }
}

TEST_CASE("steering midpoint and edge values", "[control]") {
    const SteeringParams p = case1_steering();
    REQUIRE_THAT(steering(2.0, p), WithinAbs(-0.035, 1e-12));
    REQUIRE(steering(0.5, p) == 0.0);
    REQUIRE(steering(1.0, p) == 0.0);  // sin(0) at the window edge
    REQUIRE_THAT(steering(3.0 - 1e-9, p), WithinAbs(0.0, 1e-8));
    REQUIRE(steering(3.0, p) == 0.0);
}

TEST_CASE("tractive force midpoint and support", "[control]") {
    const ForceParams p = case1_force();
    REQUIRE_THAT(tractive_force(7.7215, p), WithinAbs(1341.0, 1e-9));
    REQUIRE(tractive_force(5.0, p) == p.f_initial);
    REQUIRE(tractive_force(5.443, p) == p.f_initial);  // sin(0) at the edge
    REQUIRE(tractive_force(10.0, p) == p.f_initial);
}

TEST_CASE("cruise force balances drag", "[control]") {
    VehicleParams vp;
    for (const Model m : {Model::generalized, Model::reference}) {
        REQUIRE_THAT(cruise_force(30.0, vp, m), WithinAbs(441.0, 1e-9));
        REQUIRE_THAT(cruise_force(0.5, vp, m), WithinAbs(0.1225, 1e-15));
    }
    VehicleParams no_drag = vp;
    no_drag.drag_lumped = 0.0;
    REQUIRE(cruise_force(30.0, no_drag, Model::generalized) == 0.0);
    REQUIRE_THROWS_AS(cruise_force(0.4, vp, Model::generalized), VxFloorError);
}

TEST_CASE("control laws have compact support", "[control]") {
    const SteeringParams sp = case1_steering();
    const ForceParams fp = case1_force();
    for (double t = -2.0; t <= 25.0; t += 0.003) {
        const bool in_steer = (sp.tau0 <= t && t < sp.tau1) || (sp.tau2 <= t && t < sp.tau3);
        if (!in_steer) REQUIRE(steering(t, sp) == 0.0);
        const bool in_force = fp.tau_c1 <= t && t < fp.tau_c2;
        if (!in_force) REQUIRE(tractive_force(t, fp) == fp.f_initial);
    }
}

TEST_CASE("control laws are continuous at window edges", "[control]") {
    const SteeringParams sp = case1_steering();
    const ForceParams fp = case1_force();
    for (const double edge : {sp.tau0, sp.tau1, sp.tau2, sp.tau3}) {
        double prev_gap = std::numeric_limits<double>::infinity();
        for (const double eps : {1e-3, 1e-6, 1e-9}) {
            const double gap = std::max(std::abs(steering(edge - eps, sp) - steering(edge, sp)),
                                        std::abs(steering(edge + eps, sp) - steering(edge, sp)));
            REQUIRE(gap < prev_gap + 1e-15);
            prev_gap = gap;
        }
        REQUIRE(prev_gap < 1e-8);
    }
    for (const double edge : {fp.tau_c1, fp.tau_c2}) {
        const double gap = std::max(std::abs(tractive_force(edge - 1e-9, fp) -
                                             tractive_force(edge, fp)),
                                    std::abs(tractive_force(edge + 1e-9, fp) -
                                             tractive_force(edge, fp)));
        REQUIRE(gap < 1e-5);
    }
}

TEST_CASE("steering amplitude is bounded and peaks at the midpoint", "[control]") {
    const SteeringParams p = case1_steering();
    const double bound = std::abs(p.k_dir) * (std::abs(p.a1) + std::abs(p.a2));
    double max_first_window = 0.0;
    for (double t = 0.0; t <= 20.0; t += 0.0005) {
        const double v = std::abs(steering(t, p));
        REQUIRE(v <= bound + 1e-15);
        if (p.tau0 <= t && t < p.tau1) max_first_window = std::max(max_first_window, v);
    }
    const double mid = (p.tau0 + p.tau1) / 2.0;
    REQUIRE_THAT(std::abs(steering(mid, p)), WithinRel(std::abs(p.k_dir) * p.a1, 1e-12));
    REQUIRE_THAT(max_first_window, WithinRel(std::abs(p.k_dir) * p.a1, 1e-12));
}

TEST_CASE("steering is linear in k_dir", "[control]") {
    SteeringParams p = case1_steering();
    SteeringParams doubled = p;
    doubled.k_dir = 2.0 * p.k_dir;
    for (double t = 0.0; t <= 12.0; t += 0.017)
        REQUIRE(steering(t, doubled) == 2.0 * steering(t, p));
}

TEST_CASE("half-sine closed form equals the phase-delay form", "[control]") {
    // A sin(2 pi t / T - 2 pi tau0 / T) with T = 2 (tau1 - tau0), inside the window
    const SteeringParams p = case1_steering();
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> inside1(p.tau0, p.tau1), inside2(p.tau2, p.tau3);
    const double pi = std::numbers::pi;
    for (int i = 0; i < 5; ++i) {
        const double t = inside1(rng);
        const double t_period = 2.0 * (p.tau1 - p.tau0);
        const double phase_form =
            p.a1 * std::sin(2.0 * pi * t / t_period - 2.0 * pi * p.tau0 / t_period);
        REQUIRE_THAT(steering(t, p), WithinRel(p.k_dir * phase_form, 1e-12));
    }
    for (int i = 0; i < 5; ++i) {
        const double t = inside2(rng);
        const double t_period = 2.0 * (p.tau3 - p.tau2);
        const double phase_form =
            p.a2 * std::sin(2.0 * pi * t / t_period - 2.0 * pi * p.tau2 / t_period);
        REQUIRE_THAT(steering(t, p), WithinRel(p.k_dir * phase_form, 1e-12));
    }
    const ForceParams fp = case1_force();
    std::uniform_real_distribution<double> insidec(fp.tau_c1, fp.tau_c2);
    for (int i = 0; i < 5; ++i) {
        const double t = insidec(rng);
        const double t_period = 2.0 * (fp.tau_c2 - fp.tau_c1);
        const double phase_form =
            fp.a_c * std::sin(2.0 * pi * t / t_period - 2.0 * pi * fp.tau_c1 / t_period);
        REQUIRE_THAT(tractive_force(t, fp), WithinRel(fp.f_initial + phase_form, 1e-12));
    }
}

TEST_CASE("control parameter validation", "[control]") {
    SteeringParams p = case1_steering();
    p.tau1 = 0.5;  // tau1 < tau0
    REQUIRE_THROWS_WITH(p.validate(), Catch::Matchers::ContainsSubstring("ordering"));
    p = case1_steering();
    p.a1 = -0.1;
    REQUIRE_THROWS_WITH(p.validate(), Catch::Matchers::ContainsSubstring("a1"));
    p = case1_steering();
    p.a2 = -8.0;  // |k_dir| * |a2| past pi/2
    REQUIRE_THROWS_WITH(p.validate(), Catch::Matchers::ContainsSubstring("amplitude"));
    REQUIRE_NOTHROW(case1_steering().validate());

    ForceParams f = case1_force();
    f.tau_c2 = f.tau_c1;
    REQUIRE_THROWS_WITH(f.validate(), Catch::Matchers::ContainsSubstring("ordering"));
    REQUIRE_NOTHROW(case1_force().validate());
}
