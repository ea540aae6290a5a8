#pragma once

#include "symchord/flow.hpp"
#include "symchord/systems.hpp"

#include <string>
#include <vector>

namespace symchord {

/// A solved boundary-value trajectory from Fix(rho_start) to Fix(rho_end) on
/// {F = tau}, keyed by the chart parameter s of its start point and its
/// Hamiltonian duration T; eta is the Reeb length (derived by quadrature).
struct Chord {
    std::string system;
    std::string involution;      // start
    std::string involution_end;  // equal to `involution` for single-symmetry chords
    double tau = 0.0;
    double s = 0.0;
    int branch = -1;
    double T = 0.0;
    double eta = 0.0;
    int m = 1;  // covering number
    bool nondegenerate = true;
    double residual = 0.0;
    double jac_det = 0.0;  // shooting-Jacobian determinant at the solution
    int iterations = 0;
};

struct ShootOptions {
    double tol = 1e-10;
    int max_iter = 50;
    double diverge_norm = 1e3;
    FlowOptions flow;
};

/// Newton shooting on G(s,T) = fix_defining_end(x(T; chart(s))), Jacobian
/// assembled from the variational flow and the chart derivative, with
/// backtracking line search. Converges when |G| < tol.
Chord shoot(const ReversibleSystem& sys, const Involution& inv, double tau, double s_seed,
            double T_seed, int branch = -1, const ShootOptions& opts = {});

/// Doubly-symmetric variant: start on Fix(inv_start), end on Fix(inv_end).
Chord shoot(const ReversibleSystem& sys, const Involution& inv_start,
            const Involution& inv_end, double tau, double s_seed, double T_seed,
            int branch = -1, const ShootOptions& opts = {});

/// The closed loop obtained from a chord by the reflection gluing; evaluable
/// at any loop time via the stored dense segment and the piece formulas.
struct SymmetricOrbit {
    enum class Kind { Single, Double };

    Chord chord;
    Kind kind = Kind::Single;
    double period = 0.0;
    std::vector<double> times;
    std::vector<PhasePoint> points;

    PhasePoint state(double t) const;

    // internal: dense chord trajectory + the involved involutions
    TrajectorySegment segment;
    Involution inv_start;
    Involution inv_end;
};

/// Glue c with rho(c(T - t)): the period-2T symmetric periodic orbit.
SymmetricOrbit close_chord(const ReversibleSystem& sys, const Chord& ch,
                           int n_samples = 256);

/// Four-piece closure of a quarter chord between two commuting involutions:
/// the period-4T doubly symmetric periodic orbit.
SymmetricOrbit close_double_chord(const ReversibleSystem& sys, const Chord& ch,
                                  int n_samples = 256);

struct CoveringResult {
    int m = 1;
    Chord base;
};

/// Detects interior fixed-set crossings subdividing the chord into m congruent
/// pieces (within 1e-7); returns the covering number and the base chord, or
/// m = 1 when the chord is simple.
CoveringResult covering_analysis(const ReversibleSystem& sys, const Chord& ch);

struct ScanWindow {
    double s_lo = 0.0, s_hi = 0.0;
    double T_lo = 0.0, T_hi = 0.0;
};

/// Seeds a deterministic grid over the window, shoots from every seed, keeps
/// converged chords whose (s, T) lie inside the window, and deduplicates by
/// (s, T) distance < dedup_tol. An empirical isolation check.
std::vector<Chord> neighborhood_scan(const ReversibleSystem& sys, const Involution& inv,
                                     double tau, const ScanWindow& window,
                                     int branch = -1, int grid_s = 64, int grid_T = 64,
                                     const ShootOptions& opts = {},
                                     double dedup_tol = 1e-6);

/// Rabinowitz action of the chord with the fixed-set primitive taken to be 0:
/// just the Liouville integral, recomputed by plain quadrature. Contract:
/// equals the chord's Reeb length within 1e-8.
double action_value(const ReversibleSystem& sys, const Chord& ch);

/// The reflected, time-reversed partner: starts at the end point of `ch`.
Chord partner_chord(const ReversibleSystem& sys, const Chord& ch,
                    const ShootOptions& opts = {});

/// 2x2 Jacobian of the shooting residuals at the chord's (s, T); its kernel
/// direction seeds branch switching, its determinant tracks degeneracy.
Mat2 shooting_jacobian(const ReversibleSystem& sys, const Chord& ch,
                       const FlowOptions& flow = {});

}  // namespace symchord
