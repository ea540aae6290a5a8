#include "symchord/continuation.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace symchord {

std::vector<std::pair<int, int>> Family::plateaus() const
{
    std::vector<std::pair<int, int>> out;
    int i = 0;
    const int n = int(points.size());
    while (i < n) {
        if (!points[i].chord.nondegenerate) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < n && points[j + 1].chord.nondegenerate &&
               points[j + 1].mu_x2 == points[i].mu_x2)
            ++j;
        out.emplace_back(i, j);
        i = j + 1;
    }
    return out;
}

namespace {

FamilyPoint evaluate_point(const ReversibleSystem& sys, const Chord& ch,
                           const ContinuationOptions& opts)
{
    FamilyPoint pt;
    pt.tau = ch.tau;
    pt.chord = ch;
    const IndexResult idx = rs_index(sys, ch, opts.index);
    pt.mu_x2 = idx.mu_x2;
    pt.measure = idx.degeneracy_measure;
    pt.chord.nondegenerate = std::abs(idx.degeneracy_measure) >= opts.index.degeneracy_threshold;
    return pt;
}

BifurcationEvent classify_family_end(const FamilyPoint& last, int dir,
                                     const std::vector<FamilyPoint>& run,
                                     const ContinuationOptions& opts)
{
    BifurcationEvent ev;
    ev.tau_star = last.tau;
    ev.chord = last.chord;
    ev.side_sign = dir;
    const double det_scale = 1.0 + std::abs(last.chord.jac_det);
    bool det_flip = false;
    if (run.size() >= 2) {
        const double d0 = run[run.size() - 2].chord.jac_det;
        det_flip = (d0 < 0) != (last.chord.jac_det < 0);
    }
    if (std::abs(last.measure) < 10.0 * opts.index.degeneracy_threshold)
        ev.kind = EventKind::Termination;
    else if (det_flip || std::abs(last.chord.jac_det) < 1e-6 * det_scale)
        ev.kind = EventKind::Fold;
    else
        ev.kind = EventKind::Termination;
    return ev;
}

}  // namespace

Family continue_family(const ReversibleSystem& sys, const Involution& inv, const Chord& seed,
                       double tau_lo, double tau_hi, const ContinuationOptions& opts)
{
    if (!(tau_hi >= tau_lo)) throw config_error("continue_family: empty tau range");
    if (seed.tau < tau_lo - 1e-12 || seed.tau > tau_hi + 1e-12)
        throw config_error("continue_family: seed tau outside the range");
    const Involution& inv0 = involution_by_id(sys, seed.involution);
    const Involution& inv1 = involution_by_id(sys, seed.involution_end);
    if (inv.id != inv0.id)
        throw config_error("continue_family: involution does not match the seed chord");

    Chord polished =
        shoot(sys, inv0, inv1, seed.tau, seed.s, seed.T, seed.branch, opts.shoot);
    FamilyPoint origin = evaluate_point(sys, polished, opts);
    if (!origin.chord.nondegenerate)
        throw numerical_error("continue_family: seed chord is degenerate");

    Family fam;
    fam.involution = inv.id;
    fam.cover = seed.m;

    auto run_direction = [&](int dir) {
        std::vector<FamilyPoint> acc;
        FamilyPoint cur = origin;
        double step = opts.dtau;
        const double target = dir > 0 ? tau_hi : tau_lo;
        std::optional<BifurcationEvent> end_event;
        while (dir * (target - cur.tau) > 1e-15) {
            double tau_next = cur.tau + dir * step;
            if (dir * (tau_next - target) > 0) tau_next = target;
            // secant predictor
            double s_pred = cur.chord.s, T_pred = cur.chord.T;
            const FamilyPoint* prev = acc.size() >= 1
                                          ? (acc.size() >= 2 ? &acc[acc.size() - 2] : &origin)
                                          : nullptr;
            if (prev && std::abs(cur.tau - prev->tau) > 1e-14) {
                const double w = (tau_next - cur.tau) / (cur.tau - prev->tau);
                s_pred += w * (cur.chord.s - prev->chord.s);
                T_pred += w * (cur.chord.T - prev->chord.T);
            }
            bool ok = false;
            try {
                Chord ch = shoot(sys, inv0, inv1, tau_next, s_pred, T_pred, seed.branch,
                                 opts.shoot);
                const double hop =
                    std::hypot(ch.s - cur.chord.s, ch.T - cur.chord.T);
                if (hop < 0.1 + 40.0 * step) {
                    ch.m = seed.m;
                    FamilyPoint pt = evaluate_point(sys, ch, opts);
                    acc.push_back(pt);
                    cur = pt;
                    ok = true;
                }
            } catch (const numerical_error&) {
            }
            if (ok) {
                step = std::min(step * 2.0, opts.dtau);
            } else {
                step *= 0.5;
                if (step < opts.min_dtau) {
                    end_event = classify_family_end(cur, dir, acc, opts);
                    break;
                }
            }
        }
        return std::make_pair(acc, end_event);
    };

    auto [up, ev_up] = run_direction(+1);
    auto [down, ev_down] = run_direction(-1);
    fam.end_event_high = ev_up;
    fam.end_event_low = ev_down;
    fam.points.reserve(down.size() + 1 + up.size());
    for (auto it = down.rbegin(); it != down.rend(); ++it) fam.points.push_back(*it);
    fam.points.push_back(origin);
    for (const auto& pt : up) fam.points.push_back(pt);
    return fam;
}

std::vector<BifurcationEvent> locate_index_jump(const ReversibleSystem& sys,
                                                const Family& fam,
                                                const ContinuationOptions& opts)
{
    std::vector<BifurcationEvent> events;
    const auto plats = fam.plateaus();
    const Involution& inv0 = involution_by_id(sys, fam.involution);

    for (std::size_t k = 0; k + 1 < plats.size(); ++k) {
        const FamilyPoint& a0 = fam.points[plats[k].second];
        const FamilyPoint& b0 = fam.points[plats[k + 1].first];
        if (a0.mu_x2 == b0.mu_x2) continue;

        double ta = a0.tau, tb = b0.tau;
        double ma = a0.measure, mb = b0.measure;
        Chord cha = a0.chord, chb = b0.chord;
        Chord at_event = a0.chord;

        const bool sign_split = (ma < 0) != (mb < 0);
        int guard = 0;
        while (tb - ta > opts.bracket_tol && ++guard < 200) {
            double tm;
            if (sign_split && mb != ma) {
                tm = ta - ma * (tb - ta) / (mb - ma);
                const double w = tb - ta;
                tm = std::min(std::max(tm, ta + 0.05 * w), tb - 0.05 * w);
            } else {
                tm = 0.5 * (ta + tb);
            }
            const double u = (tm - ta) / (tb - ta);
            const double s_pred = cha.s + u * (chb.s - cha.s);
            const double T_pred = cha.T + u * (chb.T - cha.T);
            Chord chm;
            try {
                chm = shoot(sys, inv0, involution_by_id(sys, cha.involution_end), tm,
                            s_pred, T_pred, cha.branch, opts.shoot);
            } catch (const numerical_error&) {
                // retreat to plain bisection from the endpoint that is closest
                tm = 0.5 * (ta + tb);
                chm = shoot(sys, inv0, involution_by_id(sys, cha.involution_end), tm,
                            s_pred, T_pred, cha.branch, opts.shoot);
            }
            at_event = chm;
            if (sign_split) {
                const double mm = is_nondegenerate(sys, chm, opts.index).measure;
                if ((mm < 0) == (ma < 0)) {
                    ta = tm;
                    ma = mm;
                    cha = chm;
                } else {
                    tb = tm;
                    mb = mm;
                    chb = chm;
                }
            } else {
                const int mu_m = rs_index(sys, chm, opts.index).mu_x2;
                if (mu_m == a0.mu_x2) {
                    ta = tm;
                    cha = chm;
                } else {
                    tb = tm;
                    chb = chm;
                }
            }
        }
        BifurcationEvent ev;
        ev.kind = EventKind::IndexJump;
        ev.tau_star = 0.5 * (ta + tb);
        ev.jump_x2 = b0.mu_x2 - a0.mu_x2;
        ev.chord = at_event;
        events.push_back(std::move(ev));
    }
    return events;
}

std::vector<Chord> branch_switch(const ReversibleSystem& sys, const BifurcationEvent& ev,
                                 int side, const ContinuationOptions& opts)
{
    const double tau_eval = ev.tau_star + side * opts.switch_dtau;
    const Involution& inv0 = involution_by_id(sys, ev.chord.involution);
    const Involution& inv1 = involution_by_id(sys, ev.chord.involution_end);

    // continued original member, excluded from the result
    std::optional<Chord> original;
    try {
        original = shoot(sys, inv0, inv1, tau_eval, ev.chord.s, ev.chord.T,
                         ev.chord.branch, opts.shoot);
    } catch (const numerical_error&) {
    }

    // near-kernel direction of the shooting Jacobian at the event
    const Mat2 jac = shooting_jacobian(sys, ev.chord, opts.shoot.flow);
    Eigen::JacobiSVD<Mat2> svd(jac, Eigen::ComputeFullV);
    const Vec2 kernel = svd.matrixV().col(1);

    std::vector<Vec2> seeds;
    const double base = std::sqrt(opts.switch_dtau);
    for (double amp : {0.1 * base, 0.3 * base, base, 3.0 * base}) {
        for (int sgn : {+1, -1}) {
            seeds.emplace_back(ev.chord.s + sgn * amp * kernel[0],
                               ev.chord.T + sgn * amp * kernel[1]);
        }
    }
    for (double radius : {0.3 * base, base}) {
        for (int a = 0; a < 8; ++a) {
            const double psi = 2.0 * M_PI * a / 8.0;
            seeds.emplace_back(ev.chord.s + radius * std::cos(psi),
                               ev.chord.T + radius * std::sin(psi));
        }
    }

    std::vector<Chord> found;
    for (const auto& seed : seeds) {
        if (!(seed[1] > 0)) continue;
        try {
            Chord ch = shoot(sys, inv0, inv1, tau_eval, seed[0], seed[1],
                             ev.chord.branch, opts.shoot);
            if (original &&
                std::hypot(ch.s - original->s, ch.T - original->T) < opts.dedup_tol)
                continue;
            if (std::hypot(ch.s - ev.chord.s, ch.T - ev.chord.T) > 20.0 * base)
                continue;  // escaped the local window entirely
            bool dup = false;
            for (const auto& other : found)
                if (std::hypot(other.s - ch.s, other.T - ch.T) < opts.dedup_tol) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            const CoveringResult cov = covering_analysis(sys, ch);
            ch.m = cov.m;
            ch.nondegenerate = is_nondegenerate(sys, ch, opts.index).nondegenerate;
            found.push_back(std::move(ch));
        } catch (const numerical_error&) {
        }
    }
    std::sort(found.begin(), found.end(), [](const Chord& a, const Chord& b) {
        return a.s != b.s ? a.s < b.s : a.T < b.T;
    });
    return found;
}

bool SymmetryReport::symmetric_under(const std::string& inv_id) const
{
    for (const auto& v : verdicts)
        if (v.involution == inv_id) return v.symmetric;
    return false;
}

SymmetryReport classify_symmetry(const ReversibleSystem& sys, const SymmetricOrbit& orbit,
                                 const std::vector<Involution>& involutions)
{
    SymmetryReport rep;
    const int n_scan = 1024;
    const double period = orbit.period;

    for (const auto& inv : involutions) {
        InvolutionVerdict verdict;
        verdict.involution = inv.id;

        // locate a fixed-set crossing of the loop: the flow reflects through
        // any such point, so one crossing decides the symmetry
        std::optional<double> t_star;
        double g_prev = inv.normal().dot(position(orbit.state(0.0)));
        for (int i = 1; i <= n_scan && !t_star; ++i) {
            const double t = period * i / n_scan;
            const double g = inv.normal().dot(position(orbit.state(t)));
            if ((g_prev < 0) != (g < 0) || g == 0.0) {
                double ta = period * (i - 1) / n_scan, tb = t;
                double fa = g_prev;
                for (int it = 0; it < 70; ++it) {
                    const double tm = 0.5 * (ta + tb);
                    const double fm = inv.normal().dot(position(orbit.state(tm)));
                    if ((fm < 0) == (fa < 0)) {
                        ta = tm;
                        fa = fm;
                    } else {
                        tb = tm;
                    }
                    if (tb - ta < 1e-13 * std::max(1.0, period)) break;
                }
                const double tc = 0.5 * (ta + tb);
                if (inv.fix_defining(orbit.state(tc)).norm() < 1e-7) t_star = tc;
            }
            g_prev = g;
        }

        if (t_star) {
            double resid = 0.0;
            const int k_check = 64;
            for (int j = 0; j < k_check; ++j) {
                const double u = period * j / k_check;
                resid = std::max(resid, (inv.map(orbit.state(*t_star + u)) -
                                         orbit.state(*t_star - u))
                                            .norm());
            }
            verdict.symmetric = resid < 1e-6;
            verdict.distance = resid;
        } else {
            verdict.symmetric = false;
            std::vector<PhasePoint> mapped(orbit.points.size());
            for (std::size_t i = 0; i < orbit.points.size(); ++i)
                mapped[i] = inv.map(orbit.points[i]);
            verdict.distance = aligned_loop_distance(mapped, orbit.points);
        }
        rep.verdicts.push_back(std::move(verdict));
    }
    return rep;
}

double aligned_loop_distance(const std::vector<PhasePoint>& a,
                             const std::vector<PhasePoint>& b)
{
    if (a.size() != b.size() || a.empty())
        throw config_error("aligned_loop_distance: sample counts must match");
    const int n = int(a.size());
    double best = std::numeric_limits<double>::infinity();
    for (int flip = 0; flip < 2; ++flip) {
        for (int shift = 0; shift < n; ++shift) {
            double worst = 0.0;
            for (int i = 0; i < n && worst < best; ++i) {
                const int j = flip ? (shift - i % n + 2 * n) % n : (i + shift) % n;
                worst = std::max(worst, (a[i] - b[j]).norm());
            }
            best = std::min(best, worst);
        }
    }
    return best;
}

DiagramForest scan_bifurcation_diagram(const ReversibleSystem& sys, const Involution& inv,
                                       const Chord& simple_seed, int cover_n, double tau_lo,
                                       double tau_hi, const ContinuationOptions& opts)
{
    if (!(tau_hi > tau_lo)) {
        DiagramForest empty;
        empty.root.involution = inv.id;
        empty.root.cover = cover_n;
        return empty;
    }
    Chord cover = shoot(sys, inv, simple_seed.tau, simple_seed.s,
                        cover_n * simple_seed.T, simple_seed.branch, opts.shoot);
    cover.m = cover_n;

    DiagramForest forest;
    forest.root = continue_family(sys, inv, cover, tau_lo, tau_hi, opts);
    const auto events = locate_index_jump(sys, forest.root, opts);

    for (const auto& ev : events) {
        BranchRecord rec;
        rec.event = ev;
        const auto switched = branch_switch(sys, ev, +1, opts);
        for (const auto& ch : switched) {
            const double lo = ev.tau_star + opts.switch_dtau;
            const double hi = std::min(tau_hi, lo + opts.post_switch_range);
            Family bf;
            try {
                Chord seed = ch;
                seed.m = ch.m;
                bf = continue_family(sys, inv, seed, lo, hi, opts);
            } catch (const numerical_error&) {
                FamilyPoint pt;
                pt.tau = ch.tau;
                pt.chord = ch;
                bf.involution = inv.id;
                bf.cover = ch.m;
                bf.points.push_back(pt);
            }
            bf.cover = ch.m;
            rec.branches.push_back(std::move(bf));
            const SymmetricOrbit orbit = close_chord(sys, ch);
            rec.symmetry.push_back(classify_symmetry(sys, orbit, sys.involutions));
        }
        forest.records.push_back(std::move(rec));
    }
    return forest;
}

}  // namespace symchord
