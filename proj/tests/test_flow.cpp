#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"

#include "symchord/flow.hpp"
#include "symchord/kepler_oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <complex>

using namespace symchord;

TEST_CASE("circular orbit returns after one relative period")
{
    const auto kepler = make_system("rotating-kepler");
    const CircularData circ = circular_data(-1.8);
    const double T = 2.0 * circ.half_period;
    const auto seg = integrate(kepler, circ.x0, T);
    CHECK((seg.end_state() - circ.x0).norm() < 1e-8);
    CHECK(seg.max_energy_drift < 1e-9);
}

TEST_CASE("zero-duration segment is the identity")
{
    const auto kepler = make_system("rotating-kepler");
    const PhasePoint x0(0.5, 0.1, -0.2, 1.0);
    const auto seg = integrate_variational(kepler, x0, 0.0);
    CHECK((seg.end_state() - x0).norm() == 0.0);
    CHECK((seg.end_monodromy() - Mat4::Identity()).norm() == 0.0);
    CHECK(seg.action(0.0) == 0.0);
}

TEST_CASE("linear test system matches the matrix exponential")
{
    const auto test = make_system("rotating-oscillator-test");
    const PhasePoint x0(1, 0, 0, 0);
    const double T = 2.3;
    const Mat4 gen = vector_field_jacobian(test, x0);  // constant for the linear flow
    const Mat4 expGT = (T * gen).exp();
    const auto seg = integrate_variational(test, x0, T);
    CHECK((seg.end_state() - expGT * x0).norm() < 1e-10);
    CHECK((seg.end_monodromy() - expGT).norm() < 1e-9);
}

TEST_CASE("monodromy is symplectic and Floquet eigenvalues pair up")
{
    const auto kepler = make_system("rotating-kepler");
    const CircularData circ = circular_data(-1.8);
    const double T = 2.0 * circ.half_period;
    const auto seg = integrate_variational(kepler, circ.x0, T);
    const Mat4 M = seg.end_monodromy();
    const Mat4& Om = symplectic_form();
    CHECK((M.transpose() * Om * M - Om).norm() < 1e-6);
    CHECK(std::abs(M.determinant() - 1.0) < 1e-6);

    // reciprocity: every eigenvalue has a partner 1/mu
    const Eigen::Vector4cd ev = M.eigenvalues();
    for (int i = 0; i < 4; ++i) {
        double best = 1e9;
        for (int j = 0; j < 4; ++j)
            best = std::min(best, std::abs(ev[i] * ev[j] - std::complex<double>(1.0)));
        CHECK(best < 1e-5);
    }

    // the flow direction is Floquet-invariant
    const Vec4 X0 = hamiltonian_vector_field(kepler, circ.x0);
    const Vec4 XT = hamiltonian_vector_field(kepler, seg.end_state());
    CHECK((M * X0 - XT).norm() < 1e-6);
}

TEST_CASE("trajectory reversibility through a fixed-set start point")
{
    const auto kepler = make_system("rotating-kepler");
    const Involution& rho0 = kepler.involutions[0];
    const PhasePoint x0 = fix_chart(kepler, rho0, 0.4, -1.8, -1);
    const auto fwd = integrate(kepler, x0, 0.9);
    const auto bwd = integrate(kepler, x0, -0.9);
    for (double t : {0.2, 0.5, 0.9}) {
        CHECK((rho0.map(fwd.state(t)) - bwd.state(-t)).norm() < 1e-8);
    }
}

TEST_CASE("detect_fix_crossings on the circular orbit")
{
    const auto kepler = make_system("rotating-kepler");
    const CircularData circ = circular_data(-1.8);
    const double T = 2.0 * circ.half_period;
    const auto seg = integrate(kepler, circ.x0, T);

    const auto hits0 = detect_fix_crossings(kepler, seg, kepler.involutions[0], 0.0, T);
    REQUIRE(hits0.size() == 2);
    CHECK(hits0[0].t == doctest::Approx(circ.half_period).epsilon(1e-10));
    CHECK(hits0[1].t == doctest::Approx(T).epsilon(1e-10));

    // a quarter-turn involution sees the crossings shifted by a quarter period
    const auto hits90 = detect_fix_crossings(kepler, seg, kepler.involutions[1], 0.0, T);
    REQUIRE(hits90.size() == 2);
    CHECK(hits90[0].t == doctest::Approx(0.5 * circ.half_period).epsilon(1e-9));
    CHECK(hits90[1].t == doctest::Approx(1.5 * circ.half_period).epsilon(1e-9));

    CHECK(detect_fix_crossings(kepler, seg, kepler.involutions[0], 0.3, 0.3).empty());
}

TEST_CASE("reeb length quadrature on circular chords")
{
    const auto kepler = make_system("rotating-kepler");
    const CircularData circ = circular_data(-1.8);
    const double lam = 1.0 / circ.r - std::sqrt(circ.r);

    const auto half = integrate(kepler, circ.x0, circ.half_period);
    CHECK(reeb_length(kepler, half) ==
          doctest::Approx(circ.half_period * lam).epsilon(1e-9));
    CHECK(reeb_length(kepler, half) == doctest::Approx(oracle::eta_m18).epsilon(1e-9));

    const auto zero = integrate(kepler, circ.x0, 0.0);
    CHECK(reeb_length(kepler, zero) == 0.0);

    const auto full = integrate(kepler, circ.x0, 2.0 * circ.half_period);
    CHECK(reeb_length(kepler, full) ==
          doctest::Approx(2.0 * reeb_length(kepler, half)).epsilon(1e-9));
}

TEST_CASE("reeb length rejects non-contact segments")
{
    const auto test = make_system("rotating-oscillator-test");
    // p = 0 start gives lambda(X_F) = 0 at the initial point
    const auto seg = integrate(test, PhasePoint(1, 0, 0, 0), 0.5);
    CHECK_THROWS_AS(reeb_length(test, seg), numerical_error);
}

TEST_CASE("integration is reproducible bit for bit")
{
    const auto kepler = make_system("rotating-kepler");
    const CircularData circ = circular_data(-2.1);
    const auto a = integrate_variational(kepler, circ.x0, 3.1);
    const auto b = integrate_variational(kepler, circ.x0, 3.1);
    REQUIRE(a.end_raw.size() == b.end_raw.size());
    for (int i = 0; i < a.end_raw.size(); ++i) CHECK(a.end_raw[i] == b.end_raw[i]);
    CHECK(a.steps.size() == b.steps.size());
}

TEST_CASE("radial infall hits the collision guard and reports the last time")
{
    auto kepler = make_system("rotating-kepler");
    kepler.collision_radius = 1e-6;
    FlowOptions opts;
    opts.collision_radius = 1e-6;
    try {
        integrate(kepler, PhasePoint(0.05, 0, 0, 0), 1.0, opts);
        FAIL("expected integration_error");
    } catch (const integration_error& e) {
        CHECK(e.last_good_time > 0.0);
        CHECK(e.last_good_time < 1.0);
    }
}

TEST_CASE("dense output is consistent with re-integration from interior states")
{
    const auto kepler = make_system("rotating-kepler");
    const CircularData circ = circular_data(-1.9);
    const double T = 1.7;
    const auto seg = integrate(kepler, circ.x0, T);
    for (double t : {0.3, 0.8, 1.44}) {
        const auto direct = integrate(kepler, circ.x0, t);
        CHECK((seg.state(t) - direct.end_state()).norm() < 1e-9);
    }
}
