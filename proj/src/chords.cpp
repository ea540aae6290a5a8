#include "symchord/chords.hpp"

#include "symchord/index.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace symchord {

namespace {

Eigen::Matrix<double, 2, 4> residual_jacobian(const Involution& inv)
{
    Eigen::Matrix<double, 2, 4> dg = Eigen::Matrix<double, 2, 4>::Zero();
    dg.block<1, 2>(0, 0) = inv.normal().transpose();
    dg.block<1, 2>(1, 2) = inv.axis().transpose();
    return dg;
}

}  // namespace

Chord shoot(const ReversibleSystem& sys, const Involution& inv, double tau, double s_seed,
            double T_seed, int branch, const ShootOptions& opts)
{
    return shoot(sys, inv, inv, tau, s_seed, T_seed, branch, opts);
}

Chord shoot(const ReversibleSystem& sys, const Involution& inv_start,
            const Involution& inv_end, double tau, double s_seed, double T_seed,
            int branch, const ShootOptions& opts)
{
    if (!(T_seed > 0.0)) throw config_error("shoot: T_seed must be positive");

    const Eigen::Matrix<double, 2, 4> dg = residual_jacobian(inv_end);
    double s = s_seed, T = T_seed;
    double gn = 0.0;

    for (int it = 0; it <= opts.max_iter; ++it) {
        const PhasePoint x0 = fix_chart(sys, inv_start, s, tau, branch);
        const TrajectorySegment seg = integrate_variational(sys, x0, T, opts.flow);
        const PhasePoint xe = seg.end_state();
        const Vec2 g = inv_end.fix_defining(xe);
        gn = g.norm();

        const Vec4 dxds = seg.end_monodromy() * fix_chart_derivative(sys, inv_start, s, tau, branch);
        const Vec4 dxdT = hamiltonian_vector_field(sys, xe);
        Mat2 jac;
        jac.col(0) = dg * dxds;
        jac.col(1) = dg * dxdT;

        if (gn < opts.tol) {
            Chord ch;
            ch.system = sys.id;
            ch.involution = inv_start.id;
            ch.involution_end = inv_end.id;
            ch.tau = tau;
            ch.s = s;
            ch.branch = branch;
            ch.T = T;
            ch.eta = reeb_length(sys, seg);
            ch.residual = gn;
            ch.jac_det = jac.determinant();
            ch.iterations = it;
            const NondegeneracyResult nd = is_nondegenerate(sys, ch, seg);
            ch.nondegenerate = nd.nondegenerate;
            return ch;
        }
        if (gn > opts.diverge_norm)
            throw numerical_error("shoot: residual diverged, |G| = " + std::to_string(gn));
        if (it == opts.max_iter) break;

        const double scale = jac.cwiseAbs().maxCoeff();
        if (!(std::abs(jac.determinant()) > 1e-13 * std::max(1.0, scale * scale)))
            throw numerical_error("shoot: near-degenerate (singular shooting Jacobian)");
        const Vec2 delta = jac.partialPivLu().solve(-g);

        // backtracking line search, skipped inside the quadratic basin
        double lam = 1.0;
        if (gn > 1e-7) {
            bool ok = false;
            while (lam > 1e-4) {
                const double s_try = s + lam * delta[0];
                const double T_try = T + lam * delta[1];
                if (T_try > 0.0) {
                    try {
                        const PhasePoint x_try = fix_chart(sys, inv_start, s_try, tau, branch);
                        const TrajectorySegment probe = integrate(sys, x_try, T_try, opts.flow);
                        if (inv_end.fix_defining(probe.end_state()).norm() < gn) {
                            ok = true;
                            break;
                        }
                    } catch (const numerical_error&) {
                        // chart undefined or integration failed at this step length
                    }
                }
                lam *= 0.5;
            }
            if (!ok)
                throw numerical_error("shoot: no descent step, residual = " +
                                      std::to_string(gn));
        }
        s += lam * delta[0];
        T += lam * delta[1];
        if (!(T > 0.0)) throw numerical_error("shoot: duration left (0, inf)");
    }
    throw numerical_error("shoot: no convergence after " + std::to_string(opts.max_iter) +
                          " iterations, residual = " + std::to_string(gn));
}

PhasePoint SymmetricOrbit::state(double t) const
{
    const double T = chord.T;
    double u = std::fmod(t, period);
    if (u < 0) u += period;
    if (kind == Kind::Single) {
        if (u <= T) return segment.state(u);
        return inv_start.map(segment.state(2.0 * T - u));
    }
    if (u <= T) return segment.state(u);
    if (u <= 2.0 * T) return inv_end.map(segment.state(2.0 * T - u));
    if (u <= 3.0 * T) return inv_start.map(inv_end.map(segment.state(u - 2.0 * T)));
    return inv_start.map(segment.state(4.0 * T - u));
}

namespace {

SymmetricOrbit make_orbit(const ReversibleSystem& sys, const Chord& ch,
                          SymmetricOrbit::Kind kind, int n_samples)
{
    if (ch.residual > 1e-7)
        throw numerical_error("close: endpoint residual too large for closure");
    SymmetricOrbit orbit;
    orbit.chord = ch;
    orbit.kind = kind;
    orbit.period = (kind == SymmetricOrbit::Kind::Single ? 2.0 : 4.0) * ch.T;
    orbit.inv_start = involution_by_id(sys, ch.involution);
    orbit.inv_end = involution_by_id(sys, ch.involution_end);
    const PhasePoint x0 = fix_chart(sys, orbit.inv_start, ch.s, ch.tau, ch.branch);
    orbit.segment = integrate(sys, x0, ch.T);
    orbit.times.reserve(n_samples);
    orbit.points.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double t = orbit.period * double(i) / double(n_samples);
        orbit.times.push_back(t);
        orbit.points.push_back(orbit.state(t));
    }
    return orbit;
}

}  // namespace

SymmetricOrbit close_chord(const ReversibleSystem& sys, const Chord& ch, int n_samples)
{
    if (ch.involution != ch.involution_end)
        throw config_error("close_chord: chord endpoints lie on different fixed sets");
    return make_orbit(sys, ch, SymmetricOrbit::Kind::Single, n_samples);
}

SymmetricOrbit close_double_chord(const ReversibleSystem& sys, const Chord& ch,
                                  int n_samples)
{
    if (ch.involution == ch.involution_end)
        throw config_error("close_double_chord: needs two distinct involutions");
    const Involution& i1 = involution_by_id(sys, ch.involution);
    const Involution& i2 = involution_by_id(sys, ch.involution_end);
    if ((i1.jacobian * i2.jacobian - i2.jacobian * i1.jacobian).norm() > 1e-12)
        throw config_error("close_double_chord: involutions do not commute");
    return make_orbit(sys, ch, SymmetricOrbit::Kind::Double, n_samples);
}

CoveringResult covering_analysis(const ReversibleSystem& sys, const Chord& ch)
{
    CoveringResult res;
    res.base = ch;
    if (ch.involution != ch.involution_end) return res;

    const Involution& inv = involution_by_id(sys, ch.involution);
    const PhasePoint x0 = fix_chart(sys, inv, ch.s, ch.tau, ch.branch);
    const TrajectorySegment seg = integrate(sys, x0, ch.T);
    const auto crossings = detect_fix_crossings(sys, seg, inv, 0.0, ch.T);

    constexpr double tol = 1e-7;
    std::vector<double> interior;
    for (const auto& c : crossings)
        if (c.t < ch.T - tol) interior.push_back(c.t);
    if (interior.empty()) return res;

    const double t1 = interior.front();
    const int m = int(std::lround(ch.T / t1));
    if (m < 2 || std::abs(ch.T - m * t1) > tol) return res;
    if (int(interior.size()) != m - 1) return res;
    for (int j = 0; j < int(interior.size()); ++j)
        if (std::abs(interior[j] - (j + 1) * t1) > tol) return res;

    try {
        Chord base = shoot(sys, inv, ch.tau, ch.s, t1, ch.branch);
        base.m = 1;
        res.m = m;
        res.base = base;
    } catch (const numerical_error&) {
        // interior point failed to polish into a chord; treat as simple
        res.m = 1;
        res.base = ch;
    }
    return res;
}

std::vector<Chord> neighborhood_scan(const ReversibleSystem& sys, const Involution& inv,
                                     double tau, const ScanWindow& window, int branch,
                                     int grid_s, int grid_T, const ShootOptions& opts,
                                     double dedup_tol)
{
    std::vector<Chord> found;
    if (!(window.s_hi > window.s_lo) || !(window.T_hi > window.T_lo)) return found;
    for (int i = 0; i < grid_s; ++i) {
        const double s = grid_s == 1 ? 0.5 * (window.s_lo + window.s_hi)
                                     : window.s_lo + (window.s_hi - window.s_lo) * i /
                                                         double(grid_s - 1);
        for (int j = 0; j < grid_T; ++j) {
            const double T = grid_T == 1 ? 0.5 * (window.T_lo + window.T_hi)
                                         : window.T_lo + (window.T_hi - window.T_lo) * j /
                                                             double(grid_T - 1);
            try {
                Chord ch = shoot(sys, inv, tau, s, T, branch, opts);
                if (ch.s < window.s_lo || ch.s > window.s_hi) continue;
                if (ch.T < window.T_lo || ch.T > window.T_hi) continue;
                bool dup = false;
                for (const auto& other : found) {
                    if (std::hypot(other.s - ch.s, other.T - ch.T) < dedup_tol) {
                        dup = true;
                        break;
                    }
                }
                if (!dup) found.push_back(std::move(ch));
            } catch (const numerical_error&) {
                // seed did not converge inside the window
            }
        }
    }
    std::sort(found.begin(), found.end(), [](const Chord& a, const Chord& b) {
        return a.s != b.s ? a.s < b.s : a.T < b.T;
    });
    return found;
}

double action_value(const ReversibleSystem& sys, const Chord& ch)
{
    const Involution& inv = involution_by_id(sys, ch.involution);
    const PhasePoint x0 = fix_chart(sys, inv, ch.s, ch.tau, ch.branch);
    const TrajectorySegment seg = integrate(sys, x0, ch.T);
    return reeb_length(sys, seg);
}

Mat2 shooting_jacobian(const ReversibleSystem& sys, const Chord& ch, const FlowOptions& flow)
{
    const Involution& inv0 = involution_by_id(sys, ch.involution);
    const Involution& inv1 = involution_by_id(sys, ch.involution_end);
    const PhasePoint x0 = fix_chart(sys, inv0, ch.s, ch.tau, ch.branch);
    const TrajectorySegment seg = integrate_variational(sys, x0, ch.T, flow);
    const Vec4 dxds =
        seg.end_monodromy() * fix_chart_derivative(sys, inv0, ch.s, ch.tau, ch.branch);
    const Vec4 dxdT = hamiltonian_vector_field(sys, seg.end_state());
    const Eigen::Matrix<double, 2, 4> dg = residual_jacobian(inv1);
    Mat2 jac;
    jac.col(0) = dg * dxds;
    jac.col(1) = dg * dxdT;
    return jac;
}

Chord partner_chord(const ReversibleSystem& sys, const Chord& ch, const ShootOptions& opts)
{
    const Involution& inv0 = involution_by_id(sys, ch.involution);
    const Involution& inv1 = involution_by_id(sys, ch.involution_end);
    const PhasePoint x0 = fix_chart(sys, inv0, ch.s, ch.tau, ch.branch);
    const TrajectorySegment seg = integrate(sys, x0, ch.T);
    const PhasePoint xe = seg.end_state();
    const double s_end = inv1.axis().dot(position(xe));
    const int b_end = chart_branch_of(sys, inv1, xe);
    return shoot(sys, inv1, inv0, ch.tau, s_end, ch.T, b_end, opts);
}

}  // namespace symchord
