#include "symchord/kepler_oracle.hpp"

#include <cmath>

namespace symchord {

double tau_kl(const ResonanceLabel& lbl) { return tau_kl_value<double>(lbl.k, lbl.l); }

bool doubly_symmetric_condition(const ResonanceLabel& lbl)
{
    const long long n = lbl.k - lbl.l;
    const long long num = static_cast<long long>(lbl.k) * (2 * n - 1);
    return num % (2 * n) == 0;
}

CircularData circular_data(double tau)
{
    CircularData data;
    data.r = circular_radius<double>(tau);  // throws for tau >= -3/2
    data.x0 = PhasePoint(data.r, 0.0, 0.0, -1.0 / std::sqrt(data.r));
    data.half_period = M_PI / (std::pow(data.r, -1.5) - 1.0);
    data.half_length = data.half_period * (1.0 / data.r - std::sqrt(data.r));
    return data;
}

}  // namespace symchord
