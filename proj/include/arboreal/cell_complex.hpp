/**
 * Finite regular cell complexes given by their face posets, with exact
 * homology two ways: cellular chains over F_2 (no orientations needed for
 * a regular complex) and simplicial chains of the order complex over the
 * rationals.
 */
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arboreal/linalg.hpp"

namespace arboreal {

struct Cell {
    std::string id;
    int dim = 0;
    std::vector<int> faces;  // indices of ALL proper faces (transitively closed)
};

class ChainComplexError : public std::runtime_error {
public:
    explicit ChainComplexError(const std::string& msg) : std::runtime_error(msg) {}
};

struct BettiProfile {
    std::map<int, long long> reduced_betti;  // degree -> reduced Betti number
    long long euler = 0;                     // from cell counts

    long long total_rank() const {
        long long s = 0;
        for (auto& [d, b] : reduced_betti) s += b;
        return s;
    }
    /// Degree of the single nonzero reduced Betti number, if concentrated.
    std::optional<int> concentration_degree() const {
        std::optional<int> deg;
        for (auto& [d, b] : reduced_betti) {
            if (b == 0) continue;
            if (deg) return std::nullopt;
            deg = d;
        }
        return deg;
    }
};

enum class Coefficients { F2, Rational };

struct IntersectionWitness {
    int cell_a = -1;
    int cell_b = -1;
    std::string detail;
};

class CellComplex {
public:
    CellComplex() = default;
    explicit CellComplex(std::vector<Cell> cells) : cells_(std::move(cells)) {
        for (const auto& c : cells_)
            for (int f : c.faces)
                if (f < 0 || f >= static_cast<int>(cells_.size()) || cells_[f].dim >= c.dim)
                    throw ChainComplexError("face of '" + c.id + "' must exist and have smaller dimension");
    }

    int size() const { return static_cast<int>(cells_.size()); }
    bool empty() const { return cells_.empty(); }
    const Cell& cell(int i) const { return cells_[i]; }
    const std::vector<Cell>& cells() const { return cells_; }

    int max_dim() const {
        int d = -1;
        for (const auto& c : cells_) d = std::max(d, c.dim);
        return d;
    }

    std::map<int, int> cell_counts() const {
        std::map<int, int> out;
        for (const auto& c : cells_) out[c.dim]++;
        return out;
    }

    long long euler_characteristic() const {
        long long e = 0;
        for (const auto& c : cells_) e += (c.dim % 2 == 0) ? 1 : -1;
        return e;
    }

    /// Codimension-one faces of cell i.
    std::vector<int> facets(int i) const {
        std::vector<int> out;
        for (int f : cells_[i].faces)
            if (cells_[f].dim == cells_[i].dim - 1) out.push_back(f);
        return out;
    }

    /// Closed cell as an index set (faces plus the cell itself), sorted.
    std::vector<int> closure(int i) const {
        std::vector<int> out = cells_[i].faces;
        out.push_back(i);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Cellular boundary matrices over F_2: d -> matrix (cells of dim d-1) x (cells of dim d).
    std::map<int, F2Matrix> cellular_boundaries_f2() const;

    /// Reduced homology (exact arithmetic).  F_2 uses cellular chains,
    /// Rational the order complex.
    BettiProfile homology(Coefficients coeffs = Coefficients::F2) const;

    /// Intersection property: every pair of closed cells meets in a single
    /// closed cell or not at all.  Returns a violating pair otherwise.
    std::optional<IntersectionWitness> check_intersection_property() const;

    /// Longest strict chain below each cell in the face poset; for the
    /// complexes built here this must equal the cell dimension.
    std::vector<int> chain_depths() const {
        std::vector<int> order(size());
        for (int i = 0; i < size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return cells_[a].faces.size() < cells_[b].faces.size(); });
        std::vector<int> depth(size(), 0);
        for (int i : order) {
            int d = -1;
            for (int f : cells_[i].faces) d = std::max(d, depth[f]);
            depth[i] = d + 1;
        }
        return depth;
    }

    /// Simplices of the order complex by dimension: chains of cells.
    std::vector<std::vector<std::vector<int>>> order_complex_chains() const;

    /// Simplicial boundary matrices of the order complex over Q.
    std::map<int, std::vector<std::vector<BigRational>>> order_complex_boundaries() const;

private:
    std::vector<Cell> cells_;
};

inline std::map<int, F2Matrix> CellComplex::cellular_boundaries_f2() const {
    std::map<int, std::vector<int>> by_dim;
    for (int i = 0; i < size(); ++i) by_dim[cells_[i].dim].push_back(i);
    std::map<int, int> pos;  // cell index -> position within its dimension
    for (auto& [d, v] : by_dim)
        for (int k = 0; k < static_cast<int>(v.size()); ++k) pos[v[k]] = k;

    std::map<int, F2Matrix> out;
    for (auto& [d, v] : by_dim) {
        if (d == 0) continue;
        int nprev = by_dim.count(d - 1) ? static_cast<int>(by_dim[d - 1].size()) : 0;
        F2Matrix m(nprev, static_cast<int>(v.size()));
        for (int k = 0; k < static_cast<int>(v.size()); ++k)
            for (int f : facets(v[k])) m.flip(pos[f], k);
        out.emplace(d, std::move(m));
    }
    // regular complexes satisfy dd = 0 over F_2; anything else is corrupt input
    for (auto& [d, m] : out) {
        auto it = out.find(d + 1);
        if (it == out.end()) continue;
        if (!m.multiply(it->second).is_zero())
            throw ChainComplexError("cellular boundary matrices do not square to zero");
    }
    return out;
}

inline std::vector<std::vector<std::vector<int>>> CellComplex::order_complex_chains() const {
    // chains[k] = list of (k+1)-element chains, each ascending in the face poset
    std::vector<std::vector<int>> covers(size());
    for (int i = 0; i < size(); ++i)
        for (int f : cells_[i].faces) covers[f].push_back(i);  // f < i

    std::vector<std::vector<std::vector<int>>> chains;
    std::vector<int> current;
    auto extend = [&](auto&& self, int top) -> void {
        current.push_back(top);
        int k = static_cast<int>(current.size()) - 1;
        if (static_cast<int>(chains.size()) <= k) chains.resize(k + 1);
        chains[k].push_back(current);
        for (int next : covers[top]) self(self, next);
        current.pop_back();
    };
    // 'covers' here lists all strictly-greater cells, so extending from every
    // start yields every totally ordered chain exactly once
    for (int i = 0; i < size(); ++i) extend(extend, i);
    return chains;
}

inline std::map<int, std::vector<std::vector<BigRational>>> CellComplex::order_complex_boundaries() const {
    auto chains = order_complex_chains();
    std::map<std::vector<int>, int> index;
    std::vector<std::map<std::vector<int>, int>> idx(chains.size());
    for (size_t k = 0; k < chains.size(); ++k)
        for (size_t i = 0; i < chains[k].size(); ++i) idx[k][chains[k][i]] = static_cast<int>(i);

    std::map<int, std::vector<std::vector<BigRational>>> out;
    for (size_t k = 1; k < chains.size(); ++k) {
        std::vector<std::vector<BigRational>> m(
            chains[k - 1].size(), std::vector<BigRational>(chains[k].size(), 0));
        for (size_t i = 0; i < chains[k].size(); ++i) {
            const auto& ch = chains[k][i];
            for (size_t drop = 0; drop < ch.size(); ++drop) {
                std::vector<int> sub;
                for (size_t j = 0; j < ch.size(); ++j)
                    if (j != drop) sub.push_back(ch[j]);
                int row = idx[k - 1].at(sub);
                m[row][i] += (drop % 2 == 0) ? 1 : -1;
            }
        }
        out.emplace(static_cast<int>(k), std::move(m));
    }
    return out;
}

inline BettiProfile CellComplex::homology(Coefficients coeffs) const {
    BettiProfile profile;
    profile.euler = euler_characteristic();
    if (empty()) return profile;

    std::map<int, long long> chain_dims;
    std::map<int, long long> ranks;  // rank of boundary out of degree d

    if (coeffs == Coefficients::F2) {
        for (const auto& c : cells_) chain_dims[c.dim]++;
        auto boundaries = cellular_boundaries_f2();
        for (auto& [d, m] : boundaries) ranks[d] = m.rank();
    } else {
        auto boundaries = order_complex_boundaries();
        auto chains = order_complex_chains();
        for (size_t k = 0; k < chains.size(); ++k)
            chain_dims[static_cast<int>(k)] = static_cast<long long>(chains[k].size());
        for (auto& [d, m] : boundaries) ranks[d] = rational_rank(m);
        // dd = 0 sanity: rank(d_k) + rank(d_{k+1}) <= dim C_k
        for (auto& [d, r] : ranks) {
            long long rn = ranks.count(d + 1) ? ranks[d + 1] : 0;
            if (r + rn > chain_dims[d])
                throw ChainComplexError("order-complex boundaries do not form a chain complex");
        }
    }

    int top = 0;
    for (auto& [d, n] : chain_dims) top = std::max(top, d);
    for (int d = 0; d <= top; ++d) {
        long long dim_d = chain_dims.count(d) ? chain_dims[d] : 0;
        long long rank_d = ranks.count(d) ? ranks[d] : 0;          // boundary from degree d
        long long rank_d1 = ranks.count(d + 1) ? ranks[d + 1] : 0;  // boundary into degree d
        long long b = dim_d - rank_d - rank_d1;
        if (d == 0) b -= 1;  // reduced homology of a nonempty complex
        if (b != 0) profile.reduced_betti[d] = b;
    }
    return profile;
}

inline std::optional<IntersectionWitness> CellComplex::check_intersection_property() const {
    const int n = size();
    const int words = (n + 63) / 64;
    std::vector<uint64_t> closed(static_cast<size_t>(n) * words, 0);
    auto set_bit = [&](std::vector<uint64_t>& bits, size_t base, int j) {
        bits[base + j / 64] |= (1ull << (j % 64));
    };
    for (int i = 0; i < n; ++i) {
        size_t base = static_cast<size_t>(i) * words;
        set_bit(closed, base, i);
        for (int f : cells_[i].faces) set_bit(closed, base, f);
    }

    std::vector<uint64_t> meet(words);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            bool any = false;
            for (int w = 0; w < words; ++w) {
                meet[w] = closed[static_cast<size_t>(a) * words + w] &
                          closed[static_cast<size_t>(b) * words + w];
                any |= (meet[w] != 0);
            }
            if (!any) continue;
            // the meet must be the closure of a unique maximal element
            int best = -1;
            for (int w = 0; w < words; ++w) {
                uint64_t bits = meet[w];
                while (bits) {
                    int j = w * 64 + __builtin_ctzll(bits);
                    bits &= bits - 1;
                    if (best < 0 || cells_[j].dim > cells_[best].dim) best = j;
                }
            }
            bool ok = true;
            for (int w = 0; w < words && ok; ++w) {
                uint64_t extra = meet[w] & ~closed[static_cast<size_t>(best) * words + w];
                if (extra) ok = false;
            }
            // also every element of closure(best) inside both closures:
            // closure(best) subset of meet holds automatically when best is
            // in both closed sets, since closures are transitively closed.
            if (!ok)
                return IntersectionWitness{a, b,
                    "closed cells '" + cells_[a].id + "' and '" + cells_[b].id +
                    "' meet in more than one maximal cell"};
        }
    }
    return std::nullopt;
}

}  // namespace arboreal
