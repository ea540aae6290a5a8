#include "symchord/homology.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <map>
#include <numeric>

namespace symchord {

namespace {

/// Rank over Z2 of a matrix given as column bitmasks (rows indexed by bit).
int gf2_rank(std::vector<std::uint64_t> cols)
{
    int rank = 0;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        std::uint64_t col = cols[j];
        if (col == 0) continue;
        const int pivot = std::countr_zero(col);
        ++rank;
        for (std::size_t k = j + 1; k < cols.size(); ++k)
            if (cols[k] >> pivot & 1u) cols[k] ^= col;
    }
    return rank;
}

std::map<int, int> degree_counts(const std::vector<int>& degrees)
{
    std::map<int, int> n;
    for (int d : degrees) ++n[d];
    return n;
}

}  // namespace

void GradedZ2Complex::validate() const
{
    const int n = int(generators.size());
    std::vector<std::uint64_t> cols(n, 0);
    for (const auto& [i, j] : boundary) {
        if (i < 0 || i >= n || j < 0 || j >= n)
            throw config_error("complex: boundary entry out of range");
        if (generators[i].degree != generators[j].degree - 1)
            throw config_error("complex: boundary entry violates the degree constraint");
        cols[j] |= std::uint64_t(1) << i;
    }
    if (n > 64) throw config_error("complex: at most 64 generators supported");
    // d∘d = 0 over Z2
    for (int j = 0; j < n; ++j) {
        std::uint64_t acc = 0;
        for (int i = 0; i < n; ++i)
            if (cols[j] >> i & 1u) acc ^= cols[i];
        if (acc != 0) throw config_error("complex: boundary does not square to zero");
    }
}

int HomologyProfile::dim(int degree) const
{
    const auto it = dims.find(degree);
    return it == dims.end() ? 0 : it->second;
}

HomologyProfile z2_homology(const GradedZ2Complex& cx)
{
    cx.validate();
    const int n = int(cx.generators.size());
    std::vector<std::uint64_t> cols(n, 0);
    for (const auto& [i, j] : cx.boundary) cols[j] |= std::uint64_t(1) << i;

    // rank of the degree-d block d_d : FC_d -> FC_{d-1}
    std::map<int, int> n_d, rank_d;
    for (const auto& g : cx.generators) ++n_d[g.degree];
    for (const auto& [d, cnt] : n_d) {
        std::vector<std::uint64_t> block;
        for (int j = 0; j < n; ++j)
            if (cx.generators[j].degree == d && cols[j]) block.push_back(cols[j]);
        rank_d[d] = gf2_rank(std::move(block));
        (void)cnt;
    }

    HomologyProfile profile;
    for (const auto& [d, cnt] : n_d) {
        const int rd = rank_d.count(d) ? rank_d[d] : 0;
        const int rup = rank_d.count(d + 1) ? rank_d[d + 1] : 0;
        const int h = cnt - rd - rup;
        if (h > 0) profile.dims[d] = h;
    }
    return profile;
}

bool realizable(const std::vector<int>& degrees, const HomologyProfile& target)
{
    const auto n = degree_counts(degrees);
    for (const auto& [d, h] : target.dims) {
        if (h < 0) return false;
        if (h > 0 && (!n.count(d) || n.at(d) < h)) return false;
    }
    if (degrees.empty()) {
        for (const auto& [d, h] : target.dims)
            if (h != 0) return false;
        return true;
    }
    const int d_min = n.begin()->first;
    const int d_max = n.rbegin()->first;
    // n_d = h_d + r_d + r_{d+1} with r_{d_min} = 0 forces every rank in turn
    int r = 0;
    for (int d = d_min; d <= d_max; ++d) {
        const int nd = n.count(d) ? n.at(d) : 0;
        const int hd = target.dim(d);
        const int r_next = nd - hd - r;
        if (r_next < 0) return false;
        r = r_next;
    }
    return r == 0;
}

bool brute_force_realizable(const std::vector<int>& degrees, const HomologyProfile& target)
{
    const int n = int(degrees.size());
    if (n > 8) throw config_error("brute_force_realizable: at most 8 generators");
    for (const auto& [d, h] : target.dims)
        if (h < 0) return false;

    std::vector<int> sorted = degrees;
    std::sort(sorted.begin(), sorted.end());
    // candidate entry positions respect the degree constraint
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (sorted[i] == sorted[j] - 1) slots.emplace_back(i, j);
    const int e = int(slots.size());

    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << e); ++mask) {
        std::array<std::uint64_t, 8> cols{};
        for (int b = 0; b < e; ++b)
            if (mask >> b & 1u) cols[slots[b].second] |= std::uint64_t(1) << slots[b].first;
        bool square_zero = true;
        for (int j = 0; j < n && square_zero; ++j) {
            std::uint64_t acc = 0;
            for (int i = 0; i < n; ++i)
                if (cols[j] >> i & 1u) acc ^= cols[i];
            square_zero = acc == 0;
        }
        if (!square_zero) continue;

        // homology of this differential
        std::map<int, int> n_d, rank_d;
        for (int d : sorted) ++n_d[d];
        bool match = true;
        for (const auto& [d, cnt] : n_d) {
            std::vector<std::uint64_t> block;
            for (int j = 0; j < n; ++j)
                if (sorted[j] == d && cols[j]) block.push_back(cols[j]);
            rank_d[d] = gf2_rank(std::move(block));
            (void)cnt;
        }
        for (const auto& [d, cnt] : n_d) {
            const int rd = rank_d[d];
            const int rup = rank_d.count(d + 1) ? rank_d[d + 1] : 0;
            if (cnt - rd - rup != target.dim(d)) {
                match = false;
                break;
            }
        }
        if (match) {
            for (const auto& [d, h] : target.dims)
                if (h != 0 && !n_d.count(d)) match = false;
        }
        if (match) return true;
    }
    return false;
}

namespace {

void enumerate_multisets(int lo, int hi, int size, int min_val, std::vector<int>& cur,
                         const std::function<void(const std::vector<int>&)>& emit)
{
    if (size == 0) {
        emit(cur);
        return;
    }
    for (int d = std::max(lo, min_val); d <= hi; ++d) {
        cur.push_back(d);
        enumerate_multisets(lo, hi, size - 1, d, cur, emit);
        cur.pop_back();
    }
}

}  // namespace

std::vector<std::vector<int>> minimal_completion(const std::vector<int>& fixed,
                                                 const HomologyProfile& target, bool pairing,
                                                 int window_lo, int window_hi, int max_added)
{
    if (window_hi < window_lo) throw config_error("minimal_completion: empty window");
    for (int d : fixed)
        if (d < window_lo - 1 || d > window_hi + 1)
            throw config_error("minimal_completion: fixed degrees must lie near the window");

    const int step = pairing ? 2 : 1;
    for (int size = 0; size <= max_added; size += step) {
        std::vector<std::vector<int>> results;
        std::vector<int> cur;
        const int base_size = pairing ? size / 2 : size;
        enumerate_multisets(window_lo, window_hi, base_size, window_lo, cur,
                            [&](const std::vector<int>& added) {
                                std::vector<int> degrees = fixed;
                                for (int d : added) {
                                    degrees.push_back(d);
                                    if (pairing) degrees.push_back(d);
                                }
                                if (realizable(degrees, target)) {
                                    std::vector<int> completion;
                                    for (int d : added) {
                                        completion.push_back(d);
                                        if (pairing) completion.push_back(d);
                                    }
                                    std::sort(completion.begin(), completion.end());
                                    results.push_back(std::move(completion));
                                }
                            });
        if (!results.empty()) {
            std::sort(results.begin(), results.end());
            results.erase(std::unique(results.begin(), results.end()), results.end());
            return results;
        }
    }
    throw config_error("minimal_completion: no completion inside the window up to size " +
                       std::to_string(max_added));
}

}  // namespace symchord
