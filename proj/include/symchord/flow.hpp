#pragma once

#include "symchord/systems.hpp"
#include "symchord/types.hpp"

#include <Eigen/Dense>

#include <vector>

namespace symchord {

struct FlowOptions {
    double abs_tol = 1e-11;
    double rel_tol = 1e-11;
    double max_step = 0.25;
    double collision_radius = 1e-8;
};

/// One accepted step of the embedded pair with its dense-output coefficients
/// (the classical 4th-order continuous extension, 5 vectors per step).
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    Eigen::MatrixXd cont;  // dim x 5

    Eigen::VectorXd eval(double t) const;
};

/// Trajectory of the Hamiltonian flow with dense output. The raw state is
/// [x(4); running integral of lambda(X_F)] and, for variational segments,
/// the 4x4 linearized-flow matrix M(t) appended column-major.
struct TrajectorySegment {
    std::string system_id;
    PhasePoint x0 = PhasePoint::Zero();
    double duration = 0.0;
    bool has_monodromy = false;

    std::vector<DenseStep> steps;
    Eigen::VectorXd end_raw;

    // per-node summaries over the accepted steps
    double max_energy_drift = 0.0;
    double min_contact_rate = 0.0;
    double min_radius = 0.0;

    Eigen::VectorXd raw(double t) const;
    PhasePoint state(double t) const;
    double action(double t) const;
    Mat4 monodromy(double t) const;

    PhasePoint end_state() const { return end_raw.head<4>(); }
    Mat4 end_monodromy() const;
};

/// Adaptive Dormand-Prince 5(4) integration of xdot = X_F(x); deterministic
/// controller, dense output retained for every accepted step. T may be
/// negative (backward integration) or zero (identity segment).
TrajectorySegment integrate(const ReversibleSystem& sys, const PhasePoint& x0, double T,
                            const FlowOptions& opts = {});

/// Same, with the variational equations Mdot = DX_F(x(t)) M, M(0) = Id.
TrajectorySegment integrate_variational(const ReversibleSystem& sys, const PhasePoint& x0,
                                        double T, const FlowOptions& opts = {});

struct FixCrossing {
    double t = 0.0;
    PhasePoint x = PhasePoint::Zero();
};

/// All times in (t_lo, t_hi] where both fixed-set residuals of `inv` vanish:
/// sign-change bracketing on g1 = n.q refined by 1-d root polish, filtered by
/// |g2| < 1e-8, then a joint polish on g1^2 + g2^2. Sorted ascending.
std::vector<FixCrossing> detect_fix_crossings(const ReversibleSystem& sys,
                                              const TrajectorySegment& seg,
                                              const Involution& inv, double t_lo,
                                              double t_hi);

/// Integral of lambda(X_F) along the segment (the chord length in Reeb time).
/// Rejects segments along which the contact rate is not positive.
double reeb_length(const ReversibleSystem& sys, const TrajectorySegment& seg);

}  // namespace symchord
