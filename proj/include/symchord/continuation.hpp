#pragma once

#include "symchord/chords.hpp"
#include "symchord/index.hpp"

#include <optional>
#include <string>
#include <vector>

namespace symchord {

struct FamilyPoint {
    double tau = 0.0;
    Chord chord;
    int mu_x2 = 0;
    double measure = 0.0;
};

enum class EventKind { IndexJump, Fold, Termination };

struct BifurcationEvent {
    double tau_star = 0.0;
    EventKind kind = EventKind::IndexJump;
    int jump_x2 = 0;  // mu(right plateau) - mu(left plateau), doubled
    Chord chord;      // family member at (or nearest to) the event
    int side_sign = +1;
};

/// Energy-parametrized chord family; points sorted ascending in tau. All
/// nondegenerate members of one plateau carry equal mu.
struct Family {
    std::string involution;
    int cover = 1;
    std::vector<FamilyPoint> points;
    std::optional<BifurcationEvent> end_event_low;
    std::optional<BifurcationEvent> end_event_high;

    /// Maximal runs of consecutive points with equal mu (degenerate-flagged
    /// points break runs). Pairs of (first index, last index).
    std::vector<std::pair<int, int>> plateaus() const;
};

struct ContinuationOptions {
    double dtau = 2.5e-3;
    double min_dtau = 1e-10;
    double bracket_tol = 1e-8;     // tau bracket width for located events
    double switch_dtau = 1e-3;     // side offset for branch switching
    double dedup_tol = 1e-6;
    double post_switch_range = 0.02;
    ShootOptions shoot;
    IndexOptions index;
};

/// Natural-parameter continuation in tau with a secant predictor and shoot
/// corrector; adaptive tau-step halving on corrector failure. Records mu and
/// the degeneracy measure at every accepted point.
Family continue_family(const ReversibleSystem& sys, const Involution& inv,
                       const Chord& seed, double tau_lo, double tau_hi,
                       const ContinuationOptions& opts = {});

/// Bisects every plateau boundary of the family on the sign of the degeneracy
/// measure; each event located to |bracket| < bracket_tol.
std::vector<BifurcationEvent> locate_index_jump(const ReversibleSystem& sys,
                                                const Family& fam,
                                                const ContinuationOptions& opts = {});

/// Seeds Newton along the near-kernel direction of the shooting Jacobian at
/// the event (plus a deterministic ring of fallback seeds) on the side
/// tau* + side * switch_dtau; returns all distinct converged chords other than
/// the continued family member, sorted by s.
std::vector<Chord> branch_switch(const ReversibleSystem& sys, const BifurcationEvent& ev,
                                 int side, const ContinuationOptions& opts = {});

struct InvolutionVerdict {
    std::string involution;
    bool symmetric = false;
    double distance = 0.0;  // aligned pointwise residual if symmetric, else set distance
};

struct SymmetryReport {
    std::vector<InvolutionVerdict> verdicts;
    bool symmetric_under(const std::string& inv_id) const;
};

/// For each involution, tests whether rho maps the loop onto itself
/// time-reversed (via a fixed-set crossing of the loop and pointwise matching).
SymmetryReport classify_symmetry(const ReversibleSystem& sys, const SymmetricOrbit& orbit,
                                 const std::vector<Involution>& involutions);

/// Max-min distance between two sampled loops after optimal cyclic time-shift
/// alignment (both orientations); the "geometrically distinct" metric.
double aligned_loop_distance(const std::vector<PhasePoint>& a,
                             const std::vector<PhasePoint>& b);

struct BranchRecord {
    BifurcationEvent event;
    std::vector<Family> branches;           // short post-switch continuations
    std::vector<SymmetryReport> symmetry;   // one per branch
};

struct DiagramForest {
    Family root;
    std::vector<BranchRecord> records;
};

/// Continues the N-fold cover of the seed chord across the range, locates all
/// index jumps, branch-switches at each, continues each new branch for a short
/// range and classifies its symmetry. Deterministic ordering (events by tau*,
/// branches by chart parameter).
DiagramForest scan_bifurcation_diagram(const ReversibleSystem& sys, const Involution& inv,
                                       const Chord& simple_seed, int cover_n,
                                       double tau_lo, double tau_hi,
                                       const ContinuationOptions& opts = {});

}  // namespace symchord
