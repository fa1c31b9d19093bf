#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "singletrack/control.hpp"
#include "singletrack/dynamics.hpp"

using namespace singletrack;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Independent term-by-term evaluation of the generalized model, written with
// each term as its own expression (different grouping than the implementation).
StateDerivative oracle_generalized(const VehicleState& s, const ControlInput& u,
                                   const VehicleParams& p) {
    const double d = u.steer;
    const double F = u.tractive_force;
    const double sd = std::sin(d), cd = std::cos(d);
    const double roll = (p.mu0 + p.mu1 * s.vx * s.vx) * p.gravity;

    StateDerivative out;
    {
        const double t1 = F * (cd + 1.0) / p.mass;
        const double t2 = -(2.0 * p.cornering_front * d * sd) / p.mass;
        const double t3 = (2.0 * p.cornering_front * s.vy * sd) / (p.mass * s.vx);
        const double t4 =
            (2.0 * p.cornering_front * p.dist_front * s.wz * sd) / (p.mass * s.vx);
        const double t5 = -roll * (cd - 1.0);
        const double t6 = -(p.drag_lumped * s.vx * s.vx) / p.mass;
        const double t7 = s.wz * s.vy;
        out.vx_dot = t1 + t2 + t3 + t4 + t5 + t6 + t7;
    }
    {
        const double t1 = F * sd / p.mass;
        const double t2 = (2.0 * p.cornering_front * d * cd) / p.mass;
        const double t3 = -(2.0 * p.cornering_front * cd * s.vy) / (p.mass * s.vx);
        const double t4 = -(2.0 * p.cornering_rear * s.vy) / (p.mass * s.vx);
        const double t5 =
            -(2.0 * p.cornering_front * p.dist_front * cd * s.wz) / (p.mass * s.vx);
        const double t6 =
            (2.0 * p.cornering_rear * p.dist_rear * s.wz) / (p.mass * s.vx);
        const double t7 = -roll * sd;
        const double t8 = -s.wz * s.vx;
        out.vy_dot = t1 + t2 + t3 + t4 + t5 + t6 + t7 + t8;
    }
    {
        const double t1 = (p.dist_front / p.yaw_inertia) * 2.0 * p.cornering_front * d * cd;
        const double t2 = -((2.0 * p.cornering_front * p.dist_front * cd -
                             2.0 * p.cornering_rear * p.dist_rear) *
                            s.vy) / (p.yaw_inertia * s.vx);
        const double t3 = -((2.0 * p.cornering_front * p.dist_front * p.dist_front * cd +
                             2.0 * p.cornering_rear * p.dist_rear * p.dist_rear) *
                            s.wz) / (p.yaw_inertia * s.vx);
        const double t4 = (p.dist_front / p.yaw_inertia) * F * sd;
        const double t5 = -roll * p.mass * p.dist_front * sd / p.yaw_inertia;
        out.wz_dot = t1 + t2 + t3 + t4 + t5;
    }
    out.x_dot = s.vx * std::cos(s.psi) - s.vy * std::sin(s.psi);
    out.y_dot = s.vx * std::sin(s.psi) + s.vy * std::cos(s.psi);
    out.psi_dot = s.wz;
    return out;
}

void check_close(double actual, double expected, double rel = 1e-12) {
    REQUIRE_THAT(actual, WithinRel(expected, rel) || WithinAbs(expected, 1e-12));
}

VehicleState random_state(std::mt19937& rng) {
    std::uniform_real_distribution<double> vx(2.0, 50.0), vy(-25.0, 25.0), wz(-3.0, 3.0),
        pos(-100.0, 100.0), angle(-3.0, 3.0);
    return VehicleState{vx(rng), vy(rng), wz(rng), pos(rng), pos(rng), angle(rng)};
}

ControlInput random_input(std::mt19937& rng) {
    std::uniform_real_distribution<double> steer(-1.2, 1.2), force(-3000.0, 3000.0);
    return ControlInput{steer(rng), force(rng)};
}

}  // namespace

TEST_CASE("generalized model matches the term-by-term oracle", "[dynamics]") {
    VehicleParams p;
    std::mt19937 rng(42);
    for (int i = 0; i < 200; ++i) {
        const VehicleState s = random_state(rng);
        const ControlInput u = random_input(rng);
        const StateDerivative got = rhs_generalized(s, u, p);
        const StateDerivative want = oracle_generalized(s, u, p);
        check_close(got.vx_dot, want.vx_dot);
        check_close(got.vy_dot, want.vy_dot);
        check_close(got.wz_dot, want.wz_dot);
        check_close(got.x_dot, want.x_dot);
        check_close(got.y_dot, want.y_dot);
        check_close(got.psi_dot, want.psi_dot);
    }
}

TEST_CASE("straight-line equilibrium has zero body derivatives", "[dynamics]") {
    VehicleParams p;
    const double force = cruise_force(30.0, p, Model::generalized);
    const VehicleState s{30.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    const StateDerivative d = rhs_generalized(s, {0.0, force}, p);
    REQUIRE_THAT(d.vx_dot, WithinAbs(0.0, 1e-12));
    REQUIRE(d.vy_dot == 0.0);
    REQUIRE(d.wz_dot == 0.0);
    REQUIRE(d.x_dot == 30.0);
    REQUIRE(d.y_dot == 0.0);
    REQUIRE(d.psi_dot == 0.0);

    const double force_ref = cruise_force(30.0, p, Model::reference);
    const StateDerivative dr = rhs_reference(s, {0.0, force_ref}, p);
    REQUIRE_THAT(dr.vx_dot, WithinAbs(0.0, 1e-9));
    REQUIRE(dr.vy_dot == 0.0);
    REQUIRE(dr.wz_dot == 0.0);
    REQUIRE(dr.x_dot == 30.0);
}

TEST_CASE("lateral kick example: signs and magnitudes", "[dynamics]") {
    VehicleParams p;
    const VehicleState s{30.0, 20.0, 0.0, 0.0, 0.0, 0.0};
    const StateDerivative d = rhs_generalized(s, {0.0, 441.0}, p);

    // vx_dot = wz*vy = 0 at wz = 0; the cruise force cancels drag
    REQUIRE_THAT(d.vx_dot, WithinAbs(0.0, 1e-12));
    const double expected_vy_dot =
        -(2.0 * p.cornering_front + 2.0 * p.cornering_rear) / p.mass * (20.0 / 30.0);
    check_close(d.vy_dot, expected_vy_dot, 1e-12);
    REQUIRE(d.vy_dot < 0.0);
    const double expected_wz_dot =
        -(2.0 * p.cornering_front * p.dist_front - 2.0 * p.cornering_rear * p.dist_rear) /
        p.yaw_inertia * (20.0 / 30.0);
    check_close(d.wz_dot, expected_wz_dot, 1e-12);
}

TEST_CASE("parity: mirrored state negates the lateral channel", "[dynamics]") {
    VehicleParams p;
    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        const VehicleState s = random_state(rng);
        const ControlInput u = random_input(rng);
        const VehicleState sm{s.vx, -s.vy, -s.wz, s.x, -s.y, -s.psi};
        const ControlInput um{-u.steer, u.tractive_force};
        for (const Model model : {Model::generalized, Model::reference}) {
            const StateDerivative d = rhs(model, s, u, p);
            const StateDerivative dm = rhs(model, sm, um, p);
            check_close(dm.vx_dot, d.vx_dot);
            check_close(dm.vy_dot, -d.vy_dot);
            check_close(dm.wz_dot, -d.wz_dot);
            check_close(dm.x_dot, d.x_dot);
            check_close(dm.y_dot, -d.y_dot);
            check_close(dm.psi_dot, -d.psi_dot);
        }
    }
}

TEST_CASE("models agree on the lateral channel at zero steer", "[dynamics]") {
    VehicleParams p;
    std::mt19937 rng(19);
    for (int i = 0; i < 100; ++i) {
        const VehicleState s = random_state(rng);
        const ControlInput u{0.0, random_input(rng).tractive_force};
        const StateDerivative g = rhs_generalized(s, u, p);
        const StateDerivative r = rhs_reference(s, u, p);
        REQUIRE_THAT(g.vy_dot, WithinRel(r.vy_dot, 1e-9) || WithinAbs(r.vy_dot, 1e-9));
        REQUIRE_THAT(g.wz_dot, WithinRel(r.wz_dot, 1e-9) || WithinAbs(r.wz_dot, 1e-9));
    }
}

TEST_CASE("reference model is linear in (vy, wz) at zero steer", "[dynamics]") {
    VehicleParams p;
    const double vx = 27.0;
    const Mat2 a = lateral_subsystem_matrix(vx, p);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> vy(-20.0, 20.0), wz(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const VehicleState s{vx, vy(rng), wz(rng), 0.0, 0.0, 0.0};
        const StateDerivative d = rhs_reference(s, {0.0, 500.0}, p);
        check_close(d.vy_dot, a.a00 * s.vy + a.a01 * s.wz, 1e-9);
        check_close(d.wz_dot, a.a10 * s.vy + a.a11 * s.wz, 1e-9);
    }
}

TEST_CASE("lateral subsystem matrix coefficients", "[dynamics]") {
    VehicleParams p;
    const double vx = 30.0;
    const Mat2 a = lateral_subsystem_matrix(vx, p);
    check_close(a.a00, -(2.0 * p.cornering_front + 2.0 * p.cornering_rear) / (p.mass * vx));
    check_close(a.a01,
                -(2.0 * p.cornering_front * p.dist_front -
                  2.0 * p.cornering_rear * p.dist_rear) / (p.mass * vx) - vx);

    VehicleParams sym = p;
    sym.dist_front = sym.dist_rear = 1.4;
    sym.cornering_front = sym.cornering_rear = 1e5;
    REQUIRE(lateral_subsystem_matrix(vx, sym).a10 == 0.0);
}

TEST_CASE("uncontrolled lateral-yaw subsystem is stable", "[dynamics]") {
    VehicleParams p;
    const Mat2 a = lateral_subsystem_matrix(30.0, p);
    const double trace = a.a00 + a.a11;
    const double det = a.a00 * a.a11 - a.a01 * a.a10;
    const double disc = trace * trace - 4.0 * det;
    double max_real = disc >= 0.0
                          ? std::max((trace + std::sqrt(disc)) / 2.0,
                                     (trace - std::sqrt(disc)) / 2.0)
                          : trace / 2.0;
    REQUIRE(max_real < 0.0);
}

TEST_CASE("drag makes vx_dot strictly decreasing in vx at zero steer", "[dynamics]") {
    VehicleParams p;
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> vy(-20.0, 20.0), wz(-2.0, 2.0),
        force(-2000.0, 2000.0);
    for (int i = 0; i < 50; ++i) {
        const double vyv = vy(rng), wzv = wz(rng), f = force(rng);
        double prev = std::numeric_limits<double>::infinity();
        for (double vx = 1.0; vx <= 61.0; vx += 5.0) {
            const VehicleState s{vx, vyv, wzv, 0.0, 0.0, 0.0};
            const double cur = rhs_generalized(s, {0.0, f}, p).vx_dot;
            REQUIRE(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("vx floor and steer range are enforced", "[dynamics]") {
    VehicleParams p;
    const ControlInput u{0.0, 100.0};
    REQUIRE_THROWS_AS(rhs_generalized({0.49, 0, 0, 0, 0, 0}, u, p), VxFloorError);
    REQUIRE_THROWS_AS(rhs_reference({0.49, 0, 0, 0, 0, 0}, u, p), VxFloorError);
    REQUIRE_NOTHROW(rhs_generalized({0.5, 0, 0, 0, 0, 0}, u, p));
    REQUIRE_THROWS_AS(rhs_generalized({30, 0, 0, 0, 0, 0}, {1.6, 0.0}, p),
                      std::domain_error);
    REQUIRE_THROWS_AS(lateral_subsystem_matrix(0.2, p), VxFloorError);

    try {
        rhs_generalized({0.3, 0, 0, 0, 0, 0}, u, p);
        FAIL("expected VxFloorError");
    } catch (const VxFloorError& e) {
        REQUIRE(e.vx() == 0.3);
        REQUIRE_FALSE(e.has_time());
    }
}

TEST_CASE("parameter validation names the offending field", "[dynamics]") {
    VehicleParams p;
    p.mass = -1.0;
    REQUIRE_THROWS_WITH(p.validate(), Catch::Matchers::ContainsSubstring("mass"));
    p = VehicleParams{};
    p.drag_lumped = -0.1;
    REQUIRE_THROWS_WITH(p.validate(), Catch::Matchers::ContainsSubstring("drag_lumped"));
    REQUIRE_NOTHROW(VehicleParams{}.validate());
}
