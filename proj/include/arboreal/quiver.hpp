/**
 * Tree quivers (edges directed away from the root), perfect objects as
 * complexes of projectives, and the K_0-level restriction transforms of
 * correspondences.
 *
 * Morphism convention, fixed once: a map P_alpha -> P_beta exists iff
 * beta <= alpha in the root order (the unique quiver path runs from the
 * beta side into the support of P_alpha).  Morphism spaces of tree
 * quivers are then 0- or 1-dimensional, so a differential entry is a
 * scalar times the unique path between its endpoint labels.
 */
#pragma once

#include <map>
#include <vector>

#include "arboreal/correspondence.hpp"
#include "arboreal/linalg.hpp"
#include "arboreal/tree.hpp"

namespace arboreal {

class QuiverError : public std::runtime_error {
public:
    explicit QuiverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Quiver of a rooted tree: one arrow (parent -> child) per non-root vertex.
class TreeQuiver {
public:
    explicit TreeQuiver(RootedTree tree) : tree_(std::move(tree)) {}

    const RootedTree& tree() const { return tree_; }
    int vertex_count() const { return tree_.size(); }

    std::vector<std::pair<int, int>> arrows() const {
        std::vector<std::pair<int, int>> out;
        for (int v = 1; v < tree_.size(); ++v) out.emplace_back(tree_.parent(v), v);
        return out;
    }

    /// dim Hom(P_a, P_b): 1 iff b <= a.
    int hom_dim(int a, int b) const { return tree_.leq(b, a) ? 1 : 0; }

    /// Dimension vector of P_a as a representation: 1 at each v >= a.
    std::vector<int> projective_dimension_vector(int a) const {
        std::vector<int> out(tree_.size(), 0);
        for (int v = 0; v < tree_.size(); ++v)
            if (tree_.leq(a, v)) out[v] = 1;
        return out;
    }

    /// Euler pairing matrix E[a][b] = dim Hom(P_a, P_b); unitriangular in
    /// any linear extension of the root order.
    std::vector<std::vector<BigInt>> euler_matrix() const {
        const int n = tree_.size();
        std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n, 0));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) m[a][b] = hom_dim(a, b);
        return m;
    }

private:
    RootedTree tree_;
};

/// A complex of projective generators.  Generators in each degree are a
/// list of vertex labels; a differential entry (degree k, col, row,
/// scalar) is the map P_{label(k,col)} -> P_{label(k+1,row)} given by
/// scalar times the unique quiver path.
struct PerfObject {
    struct Entry {
        int row = 0;  // generator index in degree k+1
        int col = 0;  // generator index in degree k
        BigRational scalar;
    };

    std::map<int, std::vector<int>> degrees;          // degree -> generator labels
    std::map<int, std::vector<Entry>> differentials;  // degree k -> entries of d: X^k -> X^{k+1}

    static PerfObject projective(int vertex, int degree = 0) {
        PerfObject x;
        x.degrees[degree] = {vertex};
        return x;
    }

    PerfObject shifted(int by) const {
        PerfObject out;
        for (auto& [k, gens] : degrees) out.degrees[k + by] = gens;
        for (auto& [k, es] : differentials) out.differentials[k + by] = es;
        return out;
    }

    /// Mapping cone of the path map P_src -> P_dst (dst <= src), placed in
    /// degrees -1 and 0.
    static PerfObject cone_of_generator_map(const TreeQuiver& q, int src, int dst,
                                            const BigRational& scalar = 1) {
        if (!q.hom_dim(src, dst)) throw QuiverError("no quiver path for the requested generator map");
        PerfObject x;
        x.degrees[-1] = {src};
        x.degrees[0] = {dst};
        x.differentials[-1] = {{0, 0, scalar}};
        return x;
    }

    /// Validate label/path consistency and d o d = 0 over the quiver.
    void validate(const TreeQuiver& q) const {
        for (auto& [k, entries] : differentials) {
            auto src = degrees.find(k);
            auto dst = degrees.find(k + 1);
            for (const Entry& e : entries) {
                if (src == degrees.end() || e.col >= static_cast<int>(src->second.size()) ||
                    dst == degrees.end() || e.row >= static_cast<int>(dst->second.size()))
                    throw QuiverError("differential entry out of range in degree " + std::to_string(k));
                if (e.scalar == 0) continue;
                int a = src->second[e.col], b = dst->second[e.row];
                if (!q.hom_dim(a, b))
                    throw QuiverError("differential entry " + q.tree().name(a) + " -> " +
                                      q.tree().name(b) + " has no quiver path");
            }
        }
        // composite of consecutive differentials: morphism spaces are at
        // most one-dimensional, so composite scalars just multiply
        for (auto& [k, entries] : differentials) {
            auto next = differentials.find(k + 1);
            if (next == differentials.end()) continue;
            std::map<std::pair<int, int>, BigRational> composite;
            for (const Entry& e1 : entries)
                for (const Entry& e2 : next->second)
                    if (e2.col == e1.row) composite[{e2.row, e1.col}] += e2.scalar * e1.scalar;
            for (auto& [rc, s] : composite)
                if (s != 0)
                    throw QuiverError("d o d != 0 out of degree " + std::to_string(k));
        }
    }

    /// K_0 class on the basis [P_v]: alternating sum of generator counts.
    std::vector<BigInt> k0_class(int vertex_count) const {
        std::vector<BigInt> out(vertex_count, 0);
        for (auto& [k, gens] : degrees) {
            int sign = (k % 2 == 0) ? 1 : -1;
            for (int g : gens) out[g] += sign;
        }
        return out;
    }
};

/// Integer K_0 matrix of a restriction functor between tree quivers.
struct K0Transform {
    std::string source_canon;  // canonical encoding of the source tree (T)
    std::string target_canon;  // canonical encoding of the target tree (R)
    std::vector<std::vector<BigInt>> matrix;  // |R| x |T|

    /// Every column carries at most one 1: a projective generator goes to
    /// one projective generator or dies.
    bool columns_are_elementary() const {
        if (matrix.empty()) return true;
        for (size_t c = 0; c < matrix[0].size(); ++c) {
            int nonzero = 0;
            for (size_t r = 0; r < matrix.size(); ++r) {
                if (matrix[r][c] == 0) continue;
                if (matrix[r][c] != 1) return false;
                ++nonzero;
            }
            if (nonzero > 1) return false;
        }
        return true;
    }
};

/// K_0 matrix of the transform q_! i^* of a correspondence: i^* kills
/// P_alpha for alpha outside S, q_! identifies fiber-mates.
inline K0Transform restriction_transform(const Correspondence& p) {
    Correspondence::Derived d = p.derived_with_map();
    K0Transform out;
    out.source_canon = p.tree->canonical_encoding();
    out.target_canon = d.tree.canonical_encoding();
    out.matrix.assign(d.tree.size(), std::vector<BigInt>(p.tree->size(), 0));
    for (int v = 0; v < p.tree->size(); ++v)
        if (p.fiber[v] >= 0) out.matrix[d.fiber_to_index[p.fiber[v]]][v] = 1;
    return out;
}

inline std::vector<std::vector<BigInt>> matrix_product(const std::vector<std::vector<BigInt>>& a,
                                                       const std::vector<std::vector<BigInt>>& b) {
    std::vector<std::vector<BigInt>> out(a.size(), std::vector<BigInt>(b.empty() ? 0 : b[0].size(), 0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t k = 0; k < b.size(); ++k) {
            if (a[i][k] == 0) continue;
            for (size_t j = 0; j < b[k].size(); ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

/// Apply the restriction transform of p to a perfect object over p's
/// target tree: delete generators outside S, relabel the rest by their
/// fiber image, carry differential entries along.  An entry between two
/// surviving generators never leaves S (full connected subtrees contain
/// the geodesic between any two of their vertices); this is asserted.
inline PerfObject apply_transform(const Correspondence& p, const PerfObject& x) {
    Correspondence::Derived d = p.derived_with_map();
    const RootedTree& t = *p.tree;

    PerfObject out;
    std::map<int, std::vector<int>> survivor;  // degree -> old index -> new index (-1 dead)
    for (auto& [k, gens] : x.degrees) {
        std::vector<int> map_k(gens.size(), -1);
        std::vector<int> kept;
        for (size_t i = 0; i < gens.size(); ++i) {
            if (!p.contains(gens[i])) continue;
            map_k[i] = static_cast<int>(kept.size());
            kept.push_back(d.fiber_to_index[p.fiber[gens[i]]]);
        }
        if (!kept.empty()) out.degrees[k] = std::move(kept);
        survivor[k] = std::move(map_k);
    }
    for (auto& [k, entries] : x.differentials) {
        std::vector<PerfObject::Entry> kept;
        for (const PerfObject::Entry& e : entries) {
            int a = x.degrees.at(k)[e.col];      // source label in T
            int b = x.degrees.at(k + 1)[e.row];  // target label in T
            if (!p.contains(a) || !p.contains(b)) continue;
            if (e.scalar != 0) {
                // the geodesic from b up to a must stay inside S
                for (int v : t.path_down(b, a))
                    if (!p.contains(v))
                        throw std::logic_error("path between surviving generators leaves S");
            }
            kept.push_back({survivor.at(k + 1)[e.row], survivor.at(k)[e.col], e.scalar});
        }
        if (!kept.empty()) out.differentials[k] = std::move(kept);
    }
    return out;
}

}  // namespace arboreal
