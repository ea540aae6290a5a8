#pragma once

#include "symchord/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace symchord {

struct Generator {
    std::string label;
    int degree = 0;
};

/// Finitely many generators with integer degrees and a Z2 boundary matrix;
/// entry (i, j) = 1 is legal only when degree(i) = degree(j) - 1.
struct GradedZ2Complex {
    std::vector<Generator> generators;
    std::vector<std::pair<int, int>> boundary;  // (i, j): generator i appears in d(gen j)

    void validate() const;  // degree constraint and d*d = 0 over Z2
};

/// Map degree -> Z2 Betti number; finitely supported.
struct HomologyProfile {
    std::map<int, int> dims;

    int dim(int degree) const;
    bool operator==(const HomologyProfile&) const = default;
};

/// Exact Z2 homology per degree via Gaussian elimination. Rejects complexes
/// violating the degree constraint or d*d = 0.
HomologyProfile z2_homology(const GradedZ2Complex& cx);

/// Whether some legal differential on generators with these degrees has the
/// target homology: nonnegative ranks r_d with n_d = h_d + r_d + r_{d+1} exist
/// (the recursion is forced from the bottom degree up, so a single pass decides).
bool realizable(const std::vector<int>& degrees, const HomologyProfile& target);

/// Independent oracle for realizable: enumerates every legal Z2 boundary on
/// <= 8 generators, filters d*d = 0, compares homology.
bool brute_force_realizable(const std::vector<int>& degrees, const HomologyProfile& target);

/// All minimum-cardinality multisets C of degrees inside [window_lo, window_hi]
/// with realizable(fixed + C, target); with pairing, every degree multiplicity
/// in C must be even. Results sorted; throws if the window admits none up to
/// the cardinality cap.
std::vector<std::vector<int>> minimal_completion(const std::vector<int>& fixed,
                                                 const HomologyProfile& target,
                                                 bool pairing, int window_lo,
                                                 int window_hi, int max_added = 12);

}  // namespace symchord
