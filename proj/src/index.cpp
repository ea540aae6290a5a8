#include "symchord/index.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace symchord {

ContactFrame contact_reduction(const ReversibleSystem& sys, const PhasePoint& x)
{
    const double lam_x = contact_rate(sys, x);
    if (!(lam_x > 0.0))
        throw numerical_error("contact_reduction: lambda(X_F) <= 0 at the sample point");

    const Vec4 g = gradient(sys, x);
    const Vec2 w(g[2], g[3]);  // velocity = dF/dp, nonzero where contact holds
    ContactFrame frame;
    frame.e2 = Vec4(0.0, 0.0, -w[1], w[0]) / w.norm();

    const Mat4& Om = symplectic_form();
    Mat4 A;
    const Vec2 p = momentum(x);
    A.row(0) << p[0], p[1], 0.0, 0.0;          // lambda(v) = 0
    A.row(1) = g.transpose();                  // dF(v) = 0
    A.row(2) = frame.e2.transpose();           // v . e2 = 0
    A.row(3) = (Om * frame.e2).transpose();    // w(v, e2) = 1
    Vec4 rhs(0.0, 0.0, 0.0, 1.0);
    for (int r = 0; r < 2; ++r) {  // scale the inhomogeneous rows for conditioning
        const double n = A.row(r).norm();
        A.row(r) /= n;
    }
    frame.e1 = A.fullPivLu().solve(rhs);
    return frame;
}

Vec2 xi_coordinates(const ReversibleSystem& sys, const PhasePoint& x, const Vec4& v,
                    const ContactFrame& frame)
{
    const Vec4 g = gradient(sys, x);
    Vec4 u = v - (g.dot(v) / g.squaredNorm()) * g;          // to T Sigma
    const Vec4 X(g[2], g[3], -g[0], -g[1]);
    const double lam_u = liouville(sys, x, u);
    u -= (lam_u / contact_rate(sys, x)) * X;                // to xi along X_F
    const Mat4& Om = symplectic_form();
    return {u.dot(Om * frame.e2), -u.dot(Om * frame.e1)};
}

namespace {

struct TransportContext {
    const ReversibleSystem& sys;
    const TrajectorySegment& seg;
    Vec4 v0;

    double raw_angle(double t) const
    {
        const PhasePoint x = seg.state(t);
        const Vec4 v = seg.monodromy(t) * v0;
        const ContactFrame frame = contact_reduction(sys, x);
        const Vec2 c = xi_coordinates(sys, x, v, frame);
        return std::atan2(c[1], c[0]);
    }
};

/// Reference data at the chord end: the fixed-set tangent line angle in the
/// end frame, plus the transported line's raw angle there.
struct EndData {
    double theta_ref = 0.0;
    double theta_end_raw = 0.0;
};

EndData end_line_data(const ReversibleSystem& sys, const Chord& ch,
                      const TrajectorySegment& seg, const Vec4& v0)
{
    const Involution& inv_end = involution_by_id(sys, ch.involution_end);
    const PhasePoint xe = seg.end_state();
    const double s_end = inv_end.axis().dot(position(xe));
    const int b_end = chart_branch_of(sys, inv_end, xe);
    const Vec4 vref = fix_chart_derivative(sys, inv_end, s_end, ch.tau, b_end);
    const ContactFrame frame = contact_reduction(sys, xe);
    const Vec2 cr = xi_coordinates(sys, xe, vref, frame);
    const Vec2 cv = xi_coordinates(sys, xe, seg.end_monodromy() * v0, frame);
    return {std::atan2(cr[1], cr[0]), std::atan2(cv[1], cv[0])};
}

void append_refined(const TransportContext& ctx, double t_a, double lift_a, double t_b,
                    int depth, std::vector<double>& times, std::vector<double>& lift)
{
    const double raw_b = ctx.raw_angle(t_b);
    const double d = std::remainder(raw_b - lift_a, M_PI);
    if (std::abs(d) >= M_PI / 8.0 && depth < 42 && t_b - t_a > 1e-13) {
        const double tm = 0.5 * (t_a + t_b);
        append_refined(ctx, t_a, lift_a, tm, depth + 1, times, lift);
        append_refined(ctx, times.back(), lift.back(), t_b, depth + 1, times, lift);
        return;
    }
    times.push_back(t_b);
    lift.push_back(lift_a + d);
}

double refine_crossing(const TransportContext& ctx, double t_a, double lift_a, double t_b,
                       double lift_b, double target, double time_tol)
{
    while (t_b - t_a > time_tol) {
        const double tm = 0.5 * (t_a + t_b);
        const double lift_m = lift_a + std::remainder(ctx.raw_angle(tm) - lift_a, M_PI);
        if ((lift_m - target < 0) == (lift_a - target < 0)) {
            t_a = tm;
            lift_a = lift_m;
        } else {
            t_b = tm;
            lift_b = lift_m;
        }
    }
    return 0.5 * (t_a + t_b);
}

int direction_sign(const std::vector<double>& e, std::size_t from, bool forward, double tol)
{
    const double base = e[from];
    if (forward) {
        for (std::size_t j = from + 1; j < e.size(); ++j)
            if (std::abs(e[j] - base) > tol) return e[j] > base ? +1 : -1;
    } else {
        for (std::size_t j = from; j-- > 0;)
            if (std::abs(e[j] - base) > tol) return base > e[j] ? +1 : -1;
    }
    return 0;
}

}  // namespace

IndexResult rs_index(const ReversibleSystem& sys, const Chord& ch, const IndexOptions& opts)
{
    const Involution& inv = involution_by_id(sys, ch.involution);
    const PhasePoint x0 = fix_chart(sys, inv, ch.s, ch.tau, ch.branch);
    const Vec4 v0 = fix_chart_derivative(sys, inv, ch.s, ch.tau, ch.branch);
    const TrajectorySegment seg = integrate_variational(sys, x0, ch.T, opts.flow);
    const TransportContext ctx{sys, seg, v0};
    const EndData end = end_line_data(sys, ch, seg, v0);

    // sample times: step boundaries, refined until the lift moves < pi/8
    std::vector<double> times{0.0};
    std::vector<double> lift;
    {
        const double raw0 = ctx.raw_angle(0.0);
        lift.push_back(raw0 - M_PI * std::floor(raw0 / M_PI));
    }
    for (const auto& st : seg.steps) {
        const double t_next = std::min(st.t0 + st.h, ch.T);
        if (t_next <= times.back()) continue;
        append_refined(ctx, times.back(), lift.back(), t_next, 0, times, lift);
    }
    if (times.back() < ch.T)
        append_refined(ctx, times.back(), lift.back(), ch.T, 0, times, lift);

    IndexResult res;
    res.path.times = times;
    res.path.angle = lift;
    res.path.reference_angle = end.theta_ref;

    // lattice coordinates: crossings are integer values of e(t)
    const std::size_t n = times.size();
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = (lift[i] - end.theta_ref) / M_PI;
    const double tol_e = opts.endpoint_tol / M_PI;

    res.degeneracy_measure = wrap_line_angle(lift.back() - end.theta_ref);

    int mu2 = 0;
    const double k0 = std::round(e.front());
    const bool start_on = std::abs(e.front() - k0) < tol_e;
    const double kT = std::round(e.back());
    const bool end_on = std::abs(e.back() - kT) < tol_e;
    if (start_on) {
        e.front() = k0;
        const int sgn = direction_sign(e, 0, true, 4.0 * tol_e);
        if (sgn == 0)
            res.degenerate_interior = true;
        else {
            mu2 += sgn;
            res.crossings.push_back({0.0, sgn, true});
        }
    }
    if (end_on) {
        e.back() = kT;
        const int sgn = direction_sign(e, n - 1, false, 4.0 * tol_e);
        if (sgn == 0)
            res.degenerate_interior = true;
        else {
            mu2 += sgn;
            res.crossings.push_back({ch.T, sgn, true});
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double lo = std::min(e[i], e[i + 1]);
        const double hi = std::max(e[i], e[i + 1]);
        for (int m = int(std::ceil(lo)); m <= int(std::floor(hi)); ++m) {
            if (!(lo < double(m) && double(m) < hi)) continue;
            const int sgn = e[i + 1] > e[i] ? +1 : -1;
            mu2 += 2 * sgn;
            const double target = end.theta_ref + m * M_PI;
            const double tc = refine_crossing(ctx, times[i], lift[i], times[i + 1],
                                              lift[i + 1], target, opts.crossing_time_tol);
            res.crossings.push_back({tc, sgn, false});
        }
    }
    std::sort(res.crossings.begin(), res.crossings.end(),
              [](const Crossing& a, const Crossing& b) { return a.t < b.t; });

    res.mu_rs_x2 = mu2;
    res.mu_x2 = mu2 - 1;  // mu = mu_RS - (n-1)/2 with n = 2
    return res;
}

NondegeneracyResult is_nondegenerate(const ReversibleSystem& sys, const Chord& ch,
                                     const TrajectorySegment& seg, const IndexOptions& opts)
{
    const Involution& inv = involution_by_id(sys, ch.involution);
    const Vec4 v0 = fix_chart_derivative(sys, inv, ch.s, ch.tau, ch.branch);
    const EndData end = end_line_data(sys, ch, seg, v0);
    NondegeneracyResult res;
    res.measure = wrap_line_angle(end.theta_end_raw - end.theta_ref);
    res.nondegenerate = std::abs(res.measure) >= opts.degeneracy_threshold;
    return res;
}

NondegeneracyResult is_nondegenerate(const ReversibleSystem& sys, const Chord& ch,
                                     const IndexOptions& opts)
{
    const Involution& inv = involution_by_id(sys, ch.involution);
    const PhasePoint x0 = fix_chart(sys, inv, ch.s, ch.tau, ch.branch);
    const TrajectorySegment seg = integrate_variational(sys, x0, ch.T, opts.flow);
    return is_nondegenerate(sys, ch, seg, opts);
}

}  // namespace symchord
