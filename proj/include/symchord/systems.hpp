#pragma once

#include "symchord/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace symchord {

/// Linear anti-symplectic involution rho_theta(q, p) = (S q, -S p) with S the
/// reflection of the plane about the line at angle theta. Its fixed set
/// {q parallel to the axis, p perpendicular} is a Lagrangian plane.
struct Involution {
    std::string id;
    double theta = 0.0;
    Mat4 jacobian = Mat4::Identity();

    PhasePoint map(const PhasePoint& x) const { return jacobian * x; }

    Vec2 axis() const { return {std::cos(theta), std::sin(theta)}; }
    Vec2 normal() const { return {-std::sin(theta), std::cos(theta)}; }

    /// Two residuals (g1, g2) = (n.q, e.p) vanishing exactly on Fix(rho).
    Vec2 fix_defining(const PhasePoint& x) const
    {
        return {normal().dot(position(x)), axis().dot(momentum(x))};
    }
};

Involution make_reflection_involution(const std::string& id, double theta);

/// Planar Hamiltonian F = |p|^2/2 + V(q) + omega (q1 p2 - q2 p1) with
/// V(q) = -gm/|q| + kr/2 |q|^2 + c1 q1^2 + c2 q2^2, together with the
/// registered anti-symplectic involutions. Values are immutable once built.
struct ReversibleSystem {
    std::string id;
    double gm = 0.0;
    double kr = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double omega = 1.0;
    double collision_radius = 1e-8;
    std::optional<double> critical_value;
    std::vector<Involution> involutions;

    bool has_collision_guard() const { return gm != 0.0; }
};

/// id in {rotating-kepler, hill-lunar, rotating-oscillator-test}.
ReversibleSystem make_system(const std::string& id);

/// rotating-kepler with a configurable list of reflection angles.
ReversibleSystem make_rotating_kepler(const std::vector<double>& thetas);

/// Custom system from the potential/Coriolis template; involutions rho_0 and
/// rho_{pi/2} are registered (V is invariant under both for any parameters).
ReversibleSystem make_custom_system(const std::string& id, double gm, double kr,
                                    double c1, double c2, double omega);

const Involution& involution_by_id(const ReversibleSystem& sys, const std::string& id);

double potential(const ReversibleSystem& sys, const Vec2& q);
Vec2 potential_gradient(const ReversibleSystem& sys, const Vec2& q);
Mat2 potential_hessian(const ReversibleSystem& sys, const Vec2& q);

double hamiltonian(const ReversibleSystem& sys, const PhasePoint& x);
Vec4 gradient(const ReversibleSystem& sys, const PhasePoint& x);
Mat4 hessian(const ReversibleSystem& sys, const PhasePoint& x);

/// X_F = Omega grad F with qdot = dF/dp, pdot = -dF/dq. Rejects collision points.
Vec4 hamiltonian_vector_field(const ReversibleSystem& sys, const PhasePoint& x);
Mat4 vector_field_jacobian(const ReversibleSystem& sys, const PhasePoint& x);

/// lambda = p.dq evaluated on a tangent vector.
double liouville(const ReversibleSystem& sys, const PhasePoint& x, const Vec4& v);

/// lambda(X_F) = |p|^2 + omega (q1 p2 - q2 p1); positive along contact-type chords.
double contact_rate(const ReversibleSystem& sys, const PhasePoint& x);

void check_collision(const ReversibleSystem& sys, const PhasePoint& x);

/// Chart of Fix(rho) on {F = tau}: s -> (s e_theta, rho_p(s) n_theta) with the
/// momentum coordinate the closed-form root of F = tau on the fiber, selected
/// by the branch sign. The returned point satisfies fix_defining = 0 exactly.
PhasePoint fix_chart(const ReversibleSystem& sys, const Involution& inv, double s,
                     double tau, int branch = -1);

/// d/ds of fix_chart (tangent of the Legendrian Fix(rho) cap {F = tau}).
Vec4 fix_chart_derivative(const ReversibleSystem& sys, const Involution& inv, double s,
                          double tau, int branch = -1);

/// Branch sign recovering a given on-chart point: sign(n.p + omega * e.q).
int chart_branch_of(const ReversibleSystem& sys, const Involution& inv,
                    const PhasePoint& x);

struct ReversibilityReport {
    int samples = 0;
    double max_f_invariance = 0.0;      // |F(rho x) - F(x)|
    double max_involution = 0.0;         // |rho(rho x) - x|
    double max_antisymplectic = 0.0;     // ||J^T Omega J + Omega||
    double max_liouville_pullback = 0.0; // |lambda(d rho v) + lambda(v)|
    double max_flow_reversal = 0.0;      // |d rho X_F(x) + X_F(rho x)|
    double max_chart_residual = 0.0;     // |fix_defining(fix_chart(s, tau))|

    double worst() const;
    bool ok(double tol = 1e-10) const { return worst() < tol; }
};

/// Samples deterministic pseudo-random points and reports the worst residual
/// of each reversibility identity over all registered involutions.
ReversibilityReport verify_reversibility(const ReversibleSystem& sys, int n_samples);

}  // namespace symchord
