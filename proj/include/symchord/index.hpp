#pragma once

#include "symchord/chords.hpp"
#include "symchord/flow.hpp"
#include "symchord/systems.hpp"

#include <vector>

namespace symchord {

/// Symplectic basis (e1, e2) of the contact plane xi = ker(lambda) cap ker(dF)
/// at x, with dlambda(e1, e2) = 1. e2 spans the vertical line xi cap V
/// (the fiber direction), so the induced trivialization is vertical-preserving.
struct ContactFrame {
    Vec4 e1 = Vec4::Zero();
    Vec4 e2 = Vec4::Zero();
};

/// Builds the frame; rejects points where the contact condition lambda(X_F) > 0
/// fails. Smooth along contact-type chords.
ContactFrame contact_reduction(const ReversibleSystem& sys, const PhasePoint& x);

/// Coordinates of a tangent vector in the frame after projecting to T Sigma
/// (along grad F) and to xi (along X_F).
Vec2 xi_coordinates(const ReversibleSystem& sys, const PhasePoint& x, const Vec4& v,
                    const ContactFrame& frame);

struct Crossing {
    double t = 0.0;
    int sign = 0;
    bool endpoint = false;  // endpoint crossings carry weight 1/2
};

/// Continuously lifted angle of the transported Lagrangian line along a chord,
/// against the reference angle of the end fixed-set tangent.
struct LagrangianPath {
    std::vector<double> times;
    std::vector<double> angle;  // lifted: consecutive samples differ by < pi/4
    double reference_angle = 0.0;
};

struct IndexOptions {
    double endpoint_tol = 1e-7;      // angle distance treated as an endpoint crossing
    double crossing_time_tol = 1e-8; // refinement of crossing times
    double degeneracy_threshold = 1e-6;
    FlowOptions flow;
};

/// Robbin-Salamon index data of a chord. Half-integers are stored doubled.
struct IndexResult {
    int mu_rs_x2 = 0;
    int mu_x2 = 0;  // mu = mu_RS - 1/2 (planar shift)
    std::vector<Crossing> crossings;
    double degeneracy_measure = 0.0;  // signed line-angle distance at the endpoint
    bool degenerate_interior = false;
    LagrangianPath path;
};

/// Transports the start fixed-set tangent line through the linearized flow in
/// the contact plane and counts signed crossings against the end tangent line
/// (interior +-1, endpoints +-1/2 by the crossing-form sign, i.e. the sign of
/// the angle velocity in the symplectic frame).
IndexResult rs_index(const ReversibleSystem& sys, const Chord& ch,
                     const IndexOptions& opts = {});

struct NondegeneracyResult {
    bool nondegenerate = true;
    double measure = 0.0;
};

/// Signed angular distance between the transported start line and the end
/// fixed-set tangent line; degenerate when |measure| < threshold. Cheaper than
/// rs_index (endpoint-only transport).
NondegeneracyResult is_nondegenerate(const ReversibleSystem& sys, const Chord& ch,
                                     const IndexOptions& opts = {});

/// Same, reusing an already-integrated variational segment of the chord.
NondegeneracyResult is_nondegenerate(const ReversibleSystem& sys, const Chord& ch,
                                     const TrajectorySegment& seg,
                                     const IndexOptions& opts = {});

}  // namespace symchord
