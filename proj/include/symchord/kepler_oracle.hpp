#pragma once

#include "symchord/types.hpp"

#include <cmath>
#include <numeric>

namespace symchord {

/// k:l resonance label, gcd(k,l) = 1, k > l >= 1; the associated cover is k-l.
struct ResonanceLabel {
    int k = 0;
    int l = 0;

    ResonanceLabel(int k_, int l_) : k(k_), l(l_)
    {
        if (l < 1 || k <= l || std::gcd(k, l) != 1)
            throw config_error("resonance label requires coprime k > l >= 1");
    }
    int cover() const { return k - l; }
};

/// Energy at which the (k-l)-fold covered direct circular chord degenerates:
/// -(k/l)^(2/3)/2 - (l/k)^(1/3). Strictly below -3/2, increasing in k at
/// fixed k-l. Templated so tests can evaluate in extended precision.
template <class Scalar>
Scalar tau_kl_value(int k, int l)
{
    const Scalar kk = Scalar(k), ll = Scalar(l);
    const Scalar ratio = kk / ll;
    return -std::cbrt(ratio * ratio) / Scalar(2) - std::cbrt(ll / kk);
}

double tau_kl(const ResonanceLabel& lbl);

/// Exact integer check of 2(k-l) | k(2(k-l)-1): whether the quarter-chord
/// index also jumps at tau_{k,l} (birth of doubly symmetric orbits).
bool doubly_symmetric_condition(const ResonanceLabel& lbl);

/// Solve -1/(2r) - sqrt(r) = tau on (0,1); monotone, unique for tau < -3/2.
template <class Scalar>
Scalar circular_radius(Scalar tau)
{
    if (!(tau < Scalar(-1.5)))
        throw config_error("circular orbits require tau < -3/2");
    Scalar lo = Scalar(1e-12), hi = Scalar(1);
    for (int i = 0; i < 200; ++i) {
        const Scalar mid = (lo + hi) / Scalar(2);
        const Scalar f = -Scalar(1) / (Scalar(2) * mid) - std::sqrt(mid) - tau;
        (f < Scalar(0) ? lo : hi) = mid;
        if (hi - lo < Scalar(1e-18) * hi) break;
    }
    Scalar r = (lo + hi) / Scalar(2);
    for (int i = 0; i < 4; ++i) {  // Newton polish
        const Scalar f = -Scalar(1) / (Scalar(2) * r) - std::sqrt(r) - tau;
        const Scalar df = Scalar(1) / (Scalar(2) * r * r) - Scalar(1) / (Scalar(2) * std::sqrt(r));
        if (df == Scalar(0)) break;
        r -= f / df;
    }
    return r;
}

/// Closed-form data of the direct circular orbit: radius, the Fix(rho_0) start
/// point (r, 0, 0, -1/sqrt(r)), the half relative period pi/(r^-3/2 - 1), and
/// the Reeb half-length (= half period * (1/r - sqrt(r))).
struct CircularData {
    double r = 0.0;
    PhasePoint x0 = PhasePoint::Zero();
    double half_period = 0.0;
    double half_length = 0.0;
};

CircularData circular_data(double tau);

}  // namespace symchord
