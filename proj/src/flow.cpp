#include "symchord/flow.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace symchord {

namespace {

// Dormand-Prince 5(4) tableau with the classical 4th-order continuous
// extension (Hairer-Norsett-Wanner coefficients).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

template <int N>
using VecN = Eigen::Matrix<double, N, 1>;

template <int N, class Rhs>
double initial_step(Rhs&& f, const VecN<N>& y0, double dir, const FlowOptions& opts)
{
    const VecN<N> f0 = f(y0);
    double dnf = 0.0, dny = 0.0;
    for (int i = 0; i < N; ++i) {
        const double sc = opts.abs_tol + opts.rel_tol * std::abs(y0[i]);
        dnf += (f0[i] / sc) * (f0[i] / sc);
        dny += (y0[i] / sc) * (y0[i] / sc);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, opts.max_step);
    const VecN<N> y1 = y0 + dir * h * f0;
    const VecN<N> f1 = f(y1);
    double der2 = 0.0;
    for (int i = 0; i < N; ++i) {
        const double sc = opts.abs_tol + opts.rel_tol * std::abs(y0[i]);
        der2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 = (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3)
                                       : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, opts.max_step});
}

template <int N, class Rhs>
void dopri5(Rhs&& f, const ReversibleSystem& sys, const VecN<N>& y0, double T,
            const FlowOptions& opts, TrajectorySegment& out)
{
    out.end_raw = y0;
    const double f_start = hamiltonian(sys, y0.template head<4>());
    out.min_contact_rate = contact_rate(sys, y0.template head<4>());
    out.min_radius = y0.template head<2>().norm();
    if (T == 0.0) return;

    const double dir = T > 0 ? 1.0 : -1.0;
    double t = 0.0;
    VecN<N> y = y0;
    VecN<N> k1 = f(y), k2, k3, k4, k5, k6, k7;
    double h = initial_step<N>(f, y0, dir, opts);
    double facold = 1e-4;
    constexpr double beta = 0.04, safe = 0.9, expo1 = 0.2 - beta * 0.75;
    constexpr double facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;

    int rejected_in_row = 0;
    while (dir * (T - t) > 0.0) {
        h = std::min(h, opts.max_step);
        if (dir * (t + dir * h) > dir * T) h = dir * (T - t);
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw integration_error("step-size underflow", t);

        const double hs = dir * h;
        k2 = f(y + hs * (a21 * k1));
        k3 = f(y + hs * (a31 * k1 + a32 * k2));
        k4 = f(y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        k5 = f(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = f(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const VecN<N> y1 =
            y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        k7 = f(y1);
        const VecN<N> errv =
            hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err = 0.0;
        for (int i = 0; i < N; ++i) {
            const double sc =
                opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
            err += (errv[i] / sc) * (errv[i] / sc);
        }
        err = std::sqrt(err / N);

        const double fac11 = std::pow(std::max(err, 1e-30), expo1);
        if (err <= 1.0) {
            // accept: store the continuous extension of this step
            DenseStep step;
            step.t0 = t;
            step.h = hs;
            step.cont.resize(N, 5);
            const VecN<N> ydiff = y1 - y;
            const VecN<N> bspl = hs * k1 - ydiff;
            step.cont.col(0) = y;
            step.cont.col(1) = ydiff;
            step.cont.col(2) = bspl;
            step.cont.col(3) = ydiff - hs * k7 - bspl;
            step.cont.col(4) =
                hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            out.steps.push_back(std::move(step));

            t += hs;
            y = y1;
            k1 = k7;  // FSAL

            const PhasePoint x = y.template head<4>();
            const double r = position(x).norm();
            out.min_radius = std::min(out.min_radius, r);
            if (sys.has_collision_guard() && r < opts.collision_radius)
                throw integration_error("collision guard reached", t);
            out.max_energy_drift =
                std::max(out.max_energy_drift, std::abs(hamiltonian(sys, x) - f_start));
            out.min_contact_rate = std::min(out.min_contact_rate, contact_rate(sys, x));

            double fac = fac11 / std::pow(facold, beta);
            fac = std::max(facc2, std::min(facc1, fac / safe));
            facold = std::max(err, 1e-4);
            h = (rejected_in_row > 0) ? std::min(h, h / fac) : h / fac;
            rejected_in_row = 0;
        } else {
            h = h / std::min(facc1, fac11 / safe);
            ++rejected_in_row;
            if (rejected_in_row > 60)
                throw integration_error("step control failed to make progress", t);
        }
    }
    out.end_raw = y;
    out.duration = T;
}

}  // namespace

Eigen::VectorXd DenseStep::eval(double t) const
{
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return cont.col(0) +
           th * (cont.col(1) + th1 * (cont.col(2) + th * (cont.col(3) + th1 * cont.col(4))));
}

Eigen::VectorXd TrajectorySegment::raw(double t) const
{
    if (steps.empty()) return end_raw;
    const double dir = duration >= 0 ? 1.0 : -1.0;
    const double u = dir * t;
    // binary search on step start progress
    int lo = 0, hi = int(steps.size()) - 1;
    while (lo < hi) {
        const int mid = (lo + hi + 1) / 2;
        if (dir * steps[mid].t0 <= u + 1e-15)
            lo = mid;
        else
            hi = mid - 1;
    }
    return steps[lo].eval(t);
}

PhasePoint TrajectorySegment::state(double t) const { return raw(t).head<4>(); }

double TrajectorySegment::action(double t) const { return raw(t)[4]; }

Mat4 TrajectorySegment::monodromy(double t) const
{
    if (!has_monodromy) throw numerical_error("segment carries no monodromy data");
    const Eigen::VectorXd v = raw(t);
    return Eigen::Map<const Mat4>(v.data() + 5);
}

Mat4 TrajectorySegment::end_monodromy() const
{
    if (!has_monodromy) throw numerical_error("segment carries no monodromy data");
    return Eigen::Map<const Mat4>(end_raw.data() + 5);
}

TrajectorySegment integrate(const ReversibleSystem& sys, const PhasePoint& x0, double T,
                            const FlowOptions& opts)
{
    check_collision(sys, x0);
    TrajectorySegment seg;
    seg.system_id = sys.id;
    seg.x0 = x0;
    seg.duration = T;
    Eigen::Matrix<double, 5, 1> y0;
    y0.head<4>() = x0;
    y0[4] = 0.0;
    auto rhs = [&sys](const Eigen::Matrix<double, 5, 1>& y) {
        Eigen::Matrix<double, 5, 1> dy;
        const PhasePoint x = y.head<4>();
        const Vec4 g = gradient(sys, x);
        dy[0] = g[2];
        dy[1] = g[3];
        dy[2] = -g[0];
        dy[3] = -g[1];
        dy[4] = contact_rate(sys, x);
        return dy;
    };
    dopri5<5>(rhs, sys, y0, T, opts, seg);
    seg.duration = T;
    return seg;
}

TrajectorySegment integrate_variational(const ReversibleSystem& sys, const PhasePoint& x0,
                                        double T, const FlowOptions& opts)
{
    check_collision(sys, x0);
    TrajectorySegment seg;
    seg.system_id = sys.id;
    seg.x0 = x0;
    seg.duration = T;
    seg.has_monodromy = true;
    Eigen::Matrix<double, 21, 1> y0;
    y0.head<4>() = x0;
    y0[4] = 0.0;
    Eigen::Map<Mat4>(y0.data() + 5) = Mat4::Identity();
    auto rhs = [&sys](const Eigen::Matrix<double, 21, 1>& y) {
        Eigen::Matrix<double, 21, 1> dy;
        const PhasePoint x = y.head<4>();
        const Vec4 g = gradient(sys, x);
        dy[0] = g[2];
        dy[1] = g[3];
        dy[2] = -g[0];
        dy[3] = -g[1];
        dy[4] = contact_rate(sys, x);
        const Mat4 J = vector_field_jacobian(sys, x);
        Eigen::Map<Mat4>(dy.data() + 5) = J * Eigen::Map<const Mat4>(y.data() + 5);
        return dy;
    };
    dopri5<21>(rhs, sys, y0, T, opts, seg);
    seg.duration = T;
    return seg;
}

namespace {

double polish_crossing(const ReversibleSystem&, const TrajectorySegment& seg,
                       const Involution& inv, double ta, double tb)
{
    // bisection + secant hybrid on g1
    auto g1 = [&](double t) { return inv.normal().dot(position(seg.state(t))); };
    double fa = g1(ta), fb = g1(tb);
    double t = tb;
    for (int it = 0; it < 80; ++it) {
        double tm;
        if (fb != fa) {
            tm = tb - fb * (tb - ta) / (fb - fa);  // secant
            const double lo = std::min(ta, tb), hi = std::max(ta, tb);
            if (!(tm > lo && tm < hi)) tm = 0.5 * (ta + tb);
        } else {
            tm = 0.5 * (ta + tb);
        }
        const double fm = g1(tm);
        if ((fm < 0) == (fa < 0)) {
            ta = tm;
            fa = fm;
        } else {
            tb = tm;
            fb = fm;
        }
        t = tm;
        if (std::abs(tb - ta) < 1e-14 * std::max(1.0, std::abs(tb))) break;
    }
    return t;
}

double joint_polish(const ReversibleSystem& sys, const TrajectorySegment& seg,
                    const Involution& inv, double t)
{
    // Gauss-Newton on |g|^2 in the single unknown t
    for (int it = 0; it < 3; ++it) {
        const PhasePoint x = seg.state(t);
        const Vec2 g = inv.fix_defining(x);
        const Vec4 xdot = hamiltonian_vector_field(sys, x);
        Vec2 gdot;
        gdot[0] = inv.normal().dot(Vec2(xdot[0], xdot[1]));
        gdot[1] = inv.axis().dot(Vec2(xdot[2], xdot[3]));
        const double denom = gdot.squaredNorm();
        if (denom == 0.0) break;
        t -= g.dot(gdot) / denom;
    }
    return t;
}

}  // namespace

std::vector<FixCrossing> detect_fix_crossings(const ReversibleSystem& sys,
                                              const TrajectorySegment& seg,
                                              const Involution& inv, double t_lo,
                                              double t_hi)
{
    std::vector<FixCrossing> out;
    if (!(t_hi > t_lo)) return out;
    const double span = t_hi - t_lo;
    const double t_excl = t_lo + std::max(1e-12, 1e-9 * std::max(1.0, span));

    // sample nodes: step boundaries and midpoints clipped to the window
    std::vector<double> ts;
    ts.push_back(t_lo);
    for (const auto& st : seg.steps) {
        for (double c : {st.t0 + 0.5 * st.h, st.t0 + st.h}) {
            if (c > t_lo && c < t_hi) ts.push_back(c);
        }
    }
    ts.push_back(t_hi);
    std::sort(ts.begin(), ts.end());

    auto g1_at = [&](double t) { return inv.normal().dot(position(seg.state(t))); };
    std::vector<double> roots;
    double prev_t = ts[0], prev_g = g1_at(ts[0]);
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double cur_t = ts[i], cur_g = g1_at(cur_t);
        if (prev_g == 0.0) {
            roots.push_back(prev_t);
        } else if ((prev_g < 0) != (cur_g < 0)) {
            roots.push_back(polish_crossing(sys, seg, inv, prev_t, cur_t));
        } else if (std::abs(cur_g) < 1e-6) {
            // near-zero node without a sign change: tangential touch or an
            // endpoint root displaced by roundoff
            const double t = joint_polish(sys, seg, inv, cur_t);
            if (t > t_lo && t < t_hi + 1e-12 * std::max(1.0, span) &&
                inv.fix_defining(seg.state(t)).norm() < 1e-9)
                roots.push_back(std::min(t, t_hi));
        }
        prev_t = cur_t;
        prev_g = cur_g;
    }
    if (std::abs(prev_g) == 0.0) roots.push_back(prev_t);

    std::sort(roots.begin(), roots.end());
    for (double t : roots) {
        if (t <= t_excl) continue;
        const PhasePoint x = seg.state(t);
        if (std::abs(inv.axis().dot(momentum(x))) > 1e-8) continue;  // g2 filter
        double tp = joint_polish(sys, seg, inv, t);
        if (!(tp > t_excl && tp <= t_hi + 1e-12)) tp = t;
        const PhasePoint xp = seg.state(tp);
        if (inv.fix_defining(xp).norm() > 1e-8) continue;
        if (!out.empty() && std::abs(out.back().t - tp) < 1e-9 * std::max(1.0, span))
            continue;
        out.push_back({std::min(tp, t_hi), xp});
    }
    return out;
}

double reeb_length(const ReversibleSystem& sys, const TrajectorySegment& seg)
{
    if (seg.duration != 0.0 && seg.min_contact_rate <= 0.0)
        throw numerical_error("segment is not of contact type: lambda(X_F) <= 0 reached");
    (void)sys;
    return seg.end_raw.size() > 4 ? seg.end_raw[4] : 0.0;
}

}  // namespace symchord
