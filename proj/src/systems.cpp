#include "symchord/systems.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace symchord {

Involution make_reflection_involution(const std::string& id, double theta)
{
    Involution inv;
    inv.id = id;
    inv.theta = theta;
    const double c = std::cos(2.0 * theta), s = std::sin(2.0 * theta);
    Mat2 S;
    S << c, s, s, -c;
    inv.jacobian = Mat4::Zero();
    inv.jacobian.topLeftCorner<2, 2>() = S;
    inv.jacobian.bottomRightCorner<2, 2>() = -S;
    return inv;
}

ReversibleSystem make_rotating_kepler(const std::vector<double>& thetas)
{
    ReversibleSystem sys;
    sys.id = "rotating-kepler";
    sys.gm = 1.0;
    sys.critical_value = -1.5;
    int i = 0;
    for (double th : thetas) {
        std::string name = i == 0 ? "rho0" : (i == 1 ? "rho90" : "rho" + std::to_string(i));
        // keep canonical names for the standard pair
        if (std::abs(th) < 1e-15) name = "rho0";
        if (std::abs(th - M_PI / 2) < 1e-15) name = "rho90";
        sys.involutions.push_back(make_reflection_involution(name, th));
        ++i;
    }
    return sys;
}

ReversibleSystem make_custom_system(const std::string& id, double gm, double kr, double c1,
                                    double c2, double omega)
{
    ReversibleSystem sys;
    sys.id = id;
    sys.gm = gm;
    sys.kr = kr;
    sys.c1 = c1;
    sys.c2 = c2;
    sys.omega = omega;
    sys.involutions.push_back(make_reflection_involution("rho0", 0.0));
    sys.involutions.push_back(make_reflection_involution("rho90", M_PI / 2));
    return sys;
}

ReversibleSystem make_system(const std::string& id)
{
    if (id == "rotating-kepler") {
        return make_rotating_kepler({0.0, M_PI / 2});
    }
    if (id == "hill-lunar") {
        ReversibleSystem sys = make_custom_system(id, 1.0, 0.0, -1.0, 0.5, 1.0);
        sys.involutions[0].id = "rho1";
        sys.involutions[1].id = "rho2";
        sys.critical_value = -std::pow(3.0, 4.0 / 3.0) / 2.0;
        return sys;
    }
    if (id == "rotating-oscillator-test") {
        ReversibleSystem sys = make_custom_system(id, 0.0, 2.0, 0.0, 0.0, 1.0);
        sys.involutions.pop_back();  // registers rho0 only
        sys.critical_value = 0.0;
        return sys;
    }
    throw config_error("unknown system id: " + id);
}

const Involution& involution_by_id(const ReversibleSystem& sys, const std::string& id)
{
    for (const auto& inv : sys.involutions)
        if (inv.id == id) return inv;
    throw config_error("system " + sys.id + " has no involution " + id);
}

double potential(const ReversibleSystem& sys, const Vec2& q)
{
    double v = 0.5 * sys.kr * q.squaredNorm() + sys.c1 * q[0] * q[0] + sys.c2 * q[1] * q[1];
    if (sys.gm != 0.0) v -= sys.gm / q.norm();
    return v;
}

Vec2 potential_gradient(const ReversibleSystem& sys, const Vec2& q)
{
    Vec2 g = sys.kr * q + Vec2(2.0 * sys.c1 * q[0], 2.0 * sys.c2 * q[1]);
    if (sys.gm != 0.0) g += sys.gm * q / std::pow(q.norm(), 3);
    return g;
}

Mat2 potential_hessian(const ReversibleSystem& sys, const Vec2& q)
{
    Mat2 h = sys.kr * Mat2::Identity();
    h(0, 0) += 2.0 * sys.c1;
    h(1, 1) += 2.0 * sys.c2;
    if (sys.gm != 0.0) {
        const double r = q.norm();
        h += sys.gm * (Mat2::Identity() / std::pow(r, 3) -
                       3.0 * q * q.transpose() / std::pow(r, 5));
    }
    return h;
}

void check_collision(const ReversibleSystem& sys, const PhasePoint& x)
{
    if (sys.has_collision_guard() && position(x).norm() < sys.collision_radius)
        throw numerical_error("collision guard: |q| < " +
                              std::to_string(sys.collision_radius));
}

double hamiltonian(const ReversibleSystem& sys, const PhasePoint& x)
{
    const Vec2 q = position(x), p = momentum(x);
    return 0.5 * p.squaredNorm() + potential(sys, q) +
           sys.omega * (q[0] * p[1] - q[1] * p[0]);
}

Vec4 gradient(const ReversibleSystem& sys, const PhasePoint& x)
{
    const Vec2 q = position(x), p = momentum(x);
    const Vec2 gv = potential_gradient(sys, q);
    Vec4 g;
    g[0] = gv[0] + sys.omega * p[1];
    g[1] = gv[1] - sys.omega * p[0];
    g[2] = p[0] - sys.omega * q[1];
    g[3] = p[1] + sys.omega * q[0];
    return g;
}

Mat4 hessian(const ReversibleSystem& sys, const PhasePoint& x)
{
    const Mat2 hv = potential_hessian(sys, position(x));
    const double om = sys.omega;
    Mat4 h;
    h << hv(0, 0), hv(0, 1), 0.0, om,   //
        hv(0, 1), hv(1, 1), -om, 0.0,   //
        0.0, -om, 1.0, 0.0,             //
        om, 0.0, 0.0, 1.0;
    return h;
}

Vec4 hamiltonian_vector_field(const ReversibleSystem& sys, const PhasePoint& x)
{
    check_collision(sys, x);
    const Vec4 g = gradient(sys, x);
    return {g[2], g[3], -g[0], -g[1]};
}

Mat4 vector_field_jacobian(const ReversibleSystem& sys, const PhasePoint& x)
{
    const Mat2 hv = potential_hessian(sys, position(x));
    const double om = sys.omega;
    Mat4 j;
    j << 0.0, -om, 1.0, 0.0,                 //
        om, 0.0, 0.0, 1.0,                   //
        -hv(0, 0), -hv(0, 1), 0.0, -om,      //
        -hv(0, 1), -hv(1, 1), om, 0.0;
    return j;
}

double liouville(const ReversibleSystem&, const PhasePoint& x, const Vec4& v)
{
    return x[2] * v[0] + x[3] * v[1];
}

double contact_rate(const ReversibleSystem& sys, const PhasePoint& x)
{
    const Vec2 q = position(x), p = momentum(x);
    return p.squaredNorm() + sys.omega * (q[0] * p[1] - q[1] * p[0]);
}

PhasePoint fix_chart(const ReversibleSystem& sys, const Involution& inv, double s,
                     double tau, int branch)
{
    const Vec2 e = inv.axis(), n = inv.normal();
    const Vec2 q = s * e;
    check_collision(sys, PhasePoint(q[0], q[1], 0, 0));
    const double v = potential(sys, q);
    const double disc = sys.omega * sys.omega * s * s - 2.0 * (v - tau);
    if (disc < 0.0)
        throw numerical_error("fix_chart: no real momentum at s = " + std::to_string(s) +
                              " (outside the Hill region)");
    const double rho = -sys.omega * s + double(branch) * std::sqrt(disc);
    PhasePoint x;
    x.head<2>() = q;
    x.tail<2>() = rho * n;
    return x;
}

Vec4 fix_chart_derivative(const ReversibleSystem& sys, const Involution& inv, double s,
                          double tau, int branch)
{
    const Vec2 e = inv.axis(), n = inv.normal();
    const PhasePoint x = fix_chart(sys, inv, s, tau, branch);
    const double rho = n.dot(momentum(x));
    const double dVds = potential_gradient(sys, position(x)).dot(e);
    const double denom = rho + sys.omega * s;
    if (denom == 0.0) throw numerical_error("fix_chart_derivative: chart fold at s");
    const double drho = -(sys.omega * rho + dVds) / denom;
    Vec4 d;
    d.head<2>() = e;
    d.tail<2>() = drho * n;
    return d;
}

int chart_branch_of(const ReversibleSystem& sys, const Involution& inv, const PhasePoint& x)
{
    const double s = inv.axis().dot(position(x));
    const double rho = inv.normal().dot(momentum(x));
    return (rho + sys.omega * s) >= 0.0 ? +1 : -1;
}

double ReversibilityReport::worst() const
{
    return std::max({max_f_invariance, max_involution, max_antisymplectic,
                     max_liouville_pullback, max_flow_reversal, max_chart_residual});
}

ReversibilityReport verify_reversibility(const ReversibleSystem& sys, int n_samples)
{
    ReversibilityReport rep;
    rep.samples = n_samples;
    std::mt19937_64 rng(0x5eedc0de);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    const Mat4& Om = symplectic_form();

    for (int i = 0; i < n_samples; ++i) {
        PhasePoint x;
        do {
            for (int k = 0; k < 4; ++k) x[k] = coord(rng);
        } while (sys.has_collision_guard() && position(x).norm() < 0.15);
        Vec4 v;
        for (int k = 0; k < 4; ++k) v[k] = coord(rng);

        const Vec4 X = hamiltonian_vector_field(sys, x);
        for (const auto& inv : sys.involutions) {
            const PhasePoint y = inv.map(x);
            rep.max_f_invariance =
                std::max(rep.max_f_invariance, std::abs(hamiltonian(sys, y) - hamiltonian(sys, x)));
            rep.max_involution = std::max(rep.max_involution, (inv.map(y) - x).norm());
            rep.max_antisymplectic = std::max(
                rep.max_antisymplectic,
                (inv.jacobian.transpose() * Om * inv.jacobian + Om).norm());
            rep.max_liouville_pullback = std::max(
                rep.max_liouville_pullback,
                std::abs(liouville(sys, y, inv.jacobian * v) + liouville(sys, x, v)));
            rep.max_flow_reversal = std::max(
                rep.max_flow_reversal,
                (inv.jacobian * X + hamiltonian_vector_field(sys, y)).norm());
        }
    }
    // chart consistency at sampled parameters of each involution
    std::uniform_real_distribution<double> spar(0.2, 0.9);
    const double tau = sys.critical_value ? *sys.critical_value - 0.5 : -0.5;
    for (const auto& inv : sys.involutions) {
        for (int i = 0; i < std::min(n_samples, 64); ++i) {
            const double s = spar(rng);
            for (int branch : {-1, +1}) {
                try {
                    const PhasePoint x = fix_chart(sys, inv, s, tau, branch);
                    rep.max_chart_residual = std::max(
                        {rep.max_chart_residual, inv.fix_defining(x).norm(),
                         std::abs(hamiltonian(sys, x) - tau), (inv.map(x) - x).norm()});
                } catch (const numerical_error&) {
                    // s outside the Hill region for this tau; skip
                }
            }
        }
    }
    return rep;
}

}  // namespace symchord
