#pragma once

// Shared frozen oracle values and small helpers for the test suites.
// Closed-form constants were evaluated in extended precision independently of
// the library code paths they check.

#include "symchord/kepler_oracle.hpp"
#include "symchord/systems.hpp"

#include <cmath>

namespace oracle {

// tau_{k,l} = -(k/l)^(2/3)/2 - (l/k)^(1/3), 25+ digit evaluation
inline constexpr double tau_2_1 = -1.58740105196819947475170564;
inline constexpr double tau_3_1 = -1.73340318587658676210838069;
inline constexpr double tau_4_1 = -1.88988157484230974715081591;
inline constexpr double tau_5_2 = -1.65781417438817397260092028;
inline constexpr double tau_5_3 = -1.54629321971987361188380121;
inline constexpr double tau_7_5 = -1.51963600966416500718945792;
inline constexpr double tau_9_7 = -1.51083942992299465232650465;
inline constexpr double tau_1002_1000 = -1.50000066548355187495812761;

// radius / half relative period / Reeb half-length of the direct circular
// orbit at fixed energies (root of -1/(2r) - sqrt(r) = tau)
inline constexpr double r_m16 = 0.61099356193200193467759311824;
inline constexpr double Th_m16 = 2.87205724597115880421260981947;
inline constexpr double eta_m16 = 2.45565973780598314757397686913;
inline constexpr double r_m18 = 0.43982981374450816741880512498;
inline constexpr double Th_m18 = 1.29376602838092317874388360619;
inline constexpr double eta_m18 = 2.08349376420067806341062148302;
inline constexpr double r_m25 = 0.25;  // exact: -1/(2r) - sqrt(r) = -2 - 1/2

// Hill's lunar problem: critical point (3^(-1/3), 0, 0, -3^(-1/3)) and value
inline constexpr double hill_critical_value = -2.16337435546111257348245747;
inline constexpr double hill_critical_q1 = 0.69336127435063470484335227;

/// Apsis chord of the k:l resonant torus family at energy tau (exists for
/// tau > tau_{k,l}): semi-major axis a = (l/k)^(2/3), eccentricity from the
/// angular momentum L = tau + 1/(2a), chord duration pi*l, start at an apsis
/// on the chart axis.
struct ResonantChordData {
    double a = 0.0;
    double ecc = 0.0;
    double s_apo = 0.0;   // aphelion start parameter
    double s_peri = 0.0;  // perihelion start parameter
    double T = 0.0;       // chord duration (half the orbit period)
};

inline ResonantChordData resonant_chord(int k, int l, double tau)
{
    ResonantChordData d;
    d.a = std::pow(double(l) / double(k), 2.0 / 3.0);
    const double L = tau + 1.0 / (2.0 * d.a);
    d.ecc = std::sqrt(std::max(0.0, 1.0 - L * L / d.a));
    d.s_apo = d.a * (1.0 + d.ecc);
    d.s_peri = d.a * (1.0 - d.ecc);
    d.T = M_PI * l;
    return d;
}

}  // namespace oracle
