#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"

#include "symchord/systems.hpp"

#include <Eigen/Dense>

#include <random>

using namespace symchord;

namespace {

PhasePoint random_point(std::mt19937_64& rng, bool avoid_origin)
{
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    PhasePoint x;
    do {
        for (int k = 0; k < 4; ++k) x[k] = coord(rng);
    } while (avoid_origin && position(x).norm() < 0.2);
    return x;
}

}  // namespace

TEST_CASE("make_system populates the three built-ins")
{
    const auto kepler = make_system("rotating-kepler");
    CHECK(kepler.involutions.size() == 2);
    CHECK(kepler.critical_value == -1.5);
    CHECK(hamiltonian(kepler, PhasePoint(1, 0, 0, -1)) == doctest::Approx(-1.5).epsilon(1e-14));

    const auto hill = make_system("hill-lunar");
    CHECK(hill.involutions[0].id == "rho1");
    CHECK(hill.involutions[1].id == "rho2");

    const auto test = make_system("rotating-oscillator-test");
    CHECK(test.involutions.size() == 1);

    CHECK_THROWS_AS(make_system("no-such-system"), config_error);
    CHECK_THROWS_WITH_AS(make_system("no-such-system"),
                         "unknown system id: no-such-system", config_error);
}

TEST_CASE("rho0 is an involution and hill involutions commute")
{
    const auto kepler = make_system("rotating-kepler");
    const Involution& rho0 = kepler.involutions[0];
    const PhasePoint x(0.3, -0.7, 1.1, 0.2);
    CHECK(rho0.map(PhasePoint(1, 2, 3, 4)) == PhasePoint(1, -2, -3, 4));
    CHECK((rho0.map(rho0.map(x)) - x).norm() == 0.0);

    const auto hill = make_system("hill-lunar");
    const Involution& r1 = hill.involutions[0];
    const Involution& r2 = hill.involutions[1];
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const PhasePoint p = random_point(rng, false);
        CHECK((r1.map(r2.map(p)) - r2.map(r1.map(p))).norm() < 1e-12);
    }
}

TEST_CASE("rho_theta commutation holds exactly for the quarter-turn pair only")
{
    const auto kepler = make_system("rotating-kepler");
    const Mat4 a = kepler.involutions[0].jacobian;
    const Mat4 b = kepler.involutions[1].jacobian;
    CHECK((a * b - b * a).norm() < 1e-14);

    const Involution rho45 = make_reflection_involution("rho45", M_PI / 4);
    CHECK((a * rho45.jacobian - rho45.jacobian * a).norm() > 0.5);
}

TEST_CASE("hamiltonian_vector_field convention and examples")
{
    const auto kepler = make_system("rotating-kepler");
    CHECK(hamiltonian_vector_field(kepler, PhasePoint(1, 0, 0, -1)).norm() < 1e-13);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        const PhasePoint x = random_point(rng, true);
        const Vec4 g = gradient(kepler, x);
        CHECK(std::abs(g.dot(hamiltonian_vector_field(kepler, x))) < 1e-10);
    }

    const auto test = make_system("rotating-oscillator-test");
    const Vec4 v = hamiltonian_vector_field(test, PhasePoint(1, 0, 0, 0));
    CHECK((v - Vec4(0, 1, -2, 0)).norm() < 1e-14);

    CHECK_THROWS_AS(hamiltonian_vector_field(kepler, PhasePoint(1e-10, 0, 0, 0)),
                    numerical_error);
}

TEST_CASE("gradient and hessian match finite differences")
{
    std::mt19937_64 rng(23);
    for (const std::string id : {"rotating-kepler", "hill-lunar", "rotating-oscillator-test"}) {
        const auto sys = make_system(id);
        for (int i = 0; i < 20; ++i) {
            const PhasePoint x = random_point(rng, sys.has_collision_guard());
            const Vec4 g = gradient(sys, x);
            const Mat4 h = hessian(sys, x);
            const double step = 1e-6;
            for (int k = 0; k < 4; ++k) {
                PhasePoint xp = x, xm = x;
                xp[k] += step;
                xm[k] -= step;
                const double fd = (hamiltonian(sys, xp) - hamiltonian(sys, xm)) / (2 * step);
                CHECK(std::abs(fd - g[k]) <= 1e-6 * std::max(1.0, std::abs(g[k])));
                const Vec4 gd = (gradient(sys, xp) - gradient(sys, xm)) / (2 * step);
                for (int j = 0; j < 4; ++j)
                    CHECK(std::abs(gd[j] - h(j, k)) <= 1e-5 * std::max(1.0, std::abs(h(j, k))));
            }
        }
    }
}

TEST_CASE("fix_chart lands on the fixed set and the energy level")
{
    const auto kepler = make_system("rotating-kepler");
    const Involution& rho0 = kepler.involutions[0];
    const double tau = -1.8;

    const PhasePoint x = fix_chart(kepler, rho0, oracle::r_m18, tau, -1);
    CHECK(x[0] == doctest::Approx(oracle::r_m18).epsilon(1e-15));
    CHECK(x[1] == 0.0);
    CHECK(x[2] == 0.0);
    CHECK(x[3] == doctest::Approx(-1.0 / std::sqrt(oracle::r_m18)).epsilon(1e-13));
    CHECK(rho0.fix_defining(x).norm() == 0.0);
    CHECK((rho0.map(x) - x).norm() == 0.0);
    CHECK(std::abs(hamiltonian(kepler, x) - tau) < 1e-12);

    CHECK_THROWS_AS(fix_chart(kepler, rho0, 0.9, tau, -1), numerical_error);

    // chart derivative against finite differences
    const double step = 1e-7;
    const Vec4 fd =
        (fix_chart(kepler, rho0, oracle::r_m18 + step, tau, -1) -
         fix_chart(kepler, rho0, oracle::r_m18 - step, tau, -1)) /
        (2 * step);
    CHECK((fd - fix_chart_derivative(kepler, rho0, oracle::r_m18, tau, -1)).norm() < 1e-6);

    CHECK(chart_branch_of(kepler, rho0, x) == -1);
    const PhasePoint y = fix_chart(kepler, rho0, 0.3, tau, +1);
    CHECK(chart_branch_of(kepler, rho0, y) == +1);
}

TEST_CASE("verify_reversibility residuals")
{
    for (const std::string id : {"rotating-kepler", "hill-lunar"}) {
        const auto rep = verify_reversibility(make_system(id), 1000);
        CAPTURE(id);
        CHECK(rep.worst() < 1e-10);
    }

    // negative control: dropping the momentum sign flip leaves a symplectic
    // map, so the anti-symplecticity residual must be O(1)
    auto broken = make_system("rotating-kepler");
    broken.involutions[0].jacobian.bottomRightCorner<2, 2>() *= -1.0;
    const auto rep = verify_reversibility(broken, 100);
    CHECK(rep.max_antisymplectic > 1.0);
}

TEST_CASE("F is rho-invariant and the flow reverses, pointwise")
{
    std::mt19937_64 rng(31);
    for (const std::string id : {"rotating-kepler", "hill-lunar"}) {
        const auto sys = make_system(id);
        for (int i = 0; i < 100; ++i) {
            const PhasePoint x = random_point(rng, true);
            for (const auto& inv : sys.involutions) {
                CHECK(std::abs(hamiltonian(sys, inv.map(x)) - hamiltonian(sys, x)) < 1e-12);
                const Vec4 lhs = inv.jacobian * hamiltonian_vector_field(sys, x);
                const Vec4 rhs = -hamiltonian_vector_field(sys, inv.map(x));
                CHECK((lhs - rhs).norm() < 1e-10);
            }
        }
    }
}

TEST_CASE("hill critical value from a root solve of grad F")
{
    const auto hill = make_system("hill-lunar");
    PhasePoint x(0.7, 0.05, 0.03, -0.7);
    for (int it = 0; it < 60; ++it) {
        const Vec4 g = gradient(hill, x);
        if (g.norm() < 1e-14) break;
        x -= hessian(hill, x).partialPivLu().solve(g);
    }
    CHECK(gradient(hill, x).norm() < 1e-12);
    CHECK(std::abs(x[0]) == doctest::Approx(oracle::hill_critical_q1).epsilon(1e-10));
    CHECK(hamiltonian(hill, x) == doctest::Approx(oracle::hill_critical_value).epsilon(1e-12));
    CHECK(*hill.critical_value == doctest::Approx(oracle::hill_critical_value).epsilon(1e-14));
}

TEST_CASE("custom template system registers both axis reflections")
{
    const auto sys = make_custom_system("custom", 1.0, 0.5, -0.25, 0.3, 1.0);
    CHECK(sys.involutions.size() == 2);
    const auto rep = verify_reversibility(sys, 300);
    CHECK(rep.worst() < 1e-10);
}
