/**
 * Correspondences of trees p = (R <<-q- S c-i-> T) and the poset they
 * form.  S is a full connected subtree of T, stored as a vertex mask; q is
 * an edge-collapse quotient, stored as a normalized fiber-id per vertex.
 * The derived tree R is recomputed from (S, q) on demand, so composition
 * is pure index arithmetic and equality is plain field equality.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arboreal/tree.hpp"

namespace arboreal {

class CompositionError : public std::runtime_error {
public:
    explicit CompositionError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Correspondence {
    const RootedTree* tree = nullptr;  // target T (borrowed, outlives this)
    uint32_t sub = 0;                  // vertex mask of S
    std::vector<int8_t> fiber;         // per vertex of T: fiber id, -1 outside S

    bool operator==(const Correspondence& o) const {
        return sub == o.sub && fiber == o.fiber;
    }
    bool operator<(const Correspondence& o) const {
        if (sub != o.sub) return sub < o.sub;
        return fiber < o.fiber;
    }

    int sub_size() const { return __builtin_popcount(sub); }

    int fiber_count() const {
        int mx = -1;
        for (int8_t f : fiber) mx = std::max(mx, static_cast<int>(f));
        return mx + 1;
    }

    bool is_identity() const {
        if (sub_size() != tree->size()) return false;
        return fiber_count() == tree->size();
    }

    bool contains(int v) const { return (sub >> v) & 1u; }

    /// Human-readable id like "{a|b c}": fibers separated by '|'.
    std::string label() const {
        int k = fiber_count();
        std::vector<std::string> blocks(k);
        for (int v = 0; v < tree->size(); ++v) {
            if (fiber[v] < 0) continue;
            if (!blocks[fiber[v]].empty()) blocks[fiber[v]] += " ";
            blocks[fiber[v]] += tree->name(v);
        }
        std::string s = "{";
        for (int i = 0; i < k; ++i) {
            if (i) s += "|";
            s += blocks[i];
        }
        return s + "}";
    }

    struct Derived {
        RootedTree tree;
        std::vector<int> fiber_to_index;  // fiber id -> vertex index in tree
    };

    /// The derived tree R: one vertex per fiber, rooted at the fiber of
    /// the minimal vertex of S.  A vertex is named by joining its fiber's
    /// member names with '+', so the identity's derived tree is T itself.
    Derived derived_with_map() const {
        const RootedTree& t = *tree;
        int k = fiber_count();
        if (k == 0) throw std::logic_error("empty correspondence has no derived tree");
        // parent of fiber f: fiber of parent(min vertex of f) within S;
        // the min vertex is the first in index order since parents precede
        // children in index order
        std::vector<int> min_vertex(k, -1);
        std::vector<std::string> fname(k);
        for (int v = 0; v < t.size(); ++v) {
            if (fiber[v] < 0) continue;
            if (min_vertex[fiber[v]] == -1) min_vertex[fiber[v]] = v;
            if (!fname[fiber[v]].empty()) fname[fiber[v]] += "+";
            fname[fiber[v]] += t.name(v);
        }
        std::vector<int> fparent(k, -1);
        for (int f = 0; f < k; ++f) {
            int p = t.parent(min_vertex[f]);
            if (p != -1 && contains(p)) fparent[f] = fiber[p];
        }
        // reindex so that parents precede children
        std::vector<int> order;
        std::vector<char> placed(k, 0);
        for (int f = 0; f < k; ++f)
            if (fparent[f] == -1) { order.push_back(f); placed[f] = 1; }
        if (order.size() != 1) throw std::logic_error("correspondence subtree not connected");
        while (static_cast<int>(order.size()) < k)
            for (int f = 0; f < k; ++f)
                if (!placed[f] && placed[fparent[f]]) { order.push_back(f); placed[f] = 1; }
        std::vector<int> pos(k);
        for (int i = 0; i < k; ++i) pos[order[i]] = i;
        std::vector<std::string> names(k);
        std::vector<int> parents(k);
        for (int i = 0; i < k; ++i) {
            int f = order[i];
            names[i] = fname[f];
            parents[i] = fparent[f] == -1 ? -1 : pos[fparent[f]];
        }
        return Derived{RootedTree::from_parents(std::move(names), std::move(parents)), std::move(pos)};
    }

    RootedTree derived() const { return derived_with_map().tree; }

    std::vector<int> fiber_to_derived_index() const { return derived_with_map().fiber_to_index; }
};

inline Correspondence identity_correspondence(const RootedTree& t) {
    Correspondence c;
    c.tree = &t;
    c.sub = t.size() == 32 ? 0xffffffffu : ((1u << t.size()) - 1u);
    c.fiber.resize(t.size());
    for (int v = 0; v < t.size(); ++v) c.fiber[v] = static_cast<int8_t>(v);
    return c;
}

/// All correspondences over t: subtree masks x edge-subset quotients.
inline std::vector<Correspondence> enumerate_correspondences(const RootedTree& t) {
    std::vector<Correspondence> out;
    for (uint32_t mask : enumerate_subtrees(t)) {
        for (auto& fib : enumerate_quotients_of_mask(t, mask)) {
            Correspondence c;
            c.tree = &t;
            c.sub = mask;
            c.fiber = std::move(fib);
            out.push_back(std::move(c));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// q o p: q is a correspondence over the derived tree of p (vertices of
/// q.tree are the fibers of p, in derived-index order), p over T.  The
/// result is a correspondence over T.
inline Correspondence compose(const Correspondence& q, const Correspondence& p) {
    Correspondence::Derived d = p.derived_with_map();
    if (q.tree->size() != d.tree.size() || !(*q.tree == d.tree))
        throw CompositionError("compose: target of q is not the derived tree of p");
    const std::vector<int>& f2d = d.fiber_to_index;

    Correspondence out;
    out.tree = p.tree;
    out.sub = 0;
    out.fiber.assign(p.tree->size(), -1);
    std::map<int, int8_t> renorm;  // q-fiber id -> normalized output id
    for (int v = 0; v < p.tree->size(); ++v) {
        if (p.fiber[v] < 0) continue;
        int dv = f2d[p.fiber[v]];
        if (!q.contains(dv)) continue;
        out.sub |= (1u << v);
        int qf = q.fiber[dv];
        auto it = renorm.find(qf);
        if (it == renorm.end())
            it = renorm.emplace(qf, static_cast<int8_t>(renorm.size())).first;
        out.fiber[v] = it->second;
    }
    if (out.sub == 0) throw CompositionError("compose: empty preimage");
    return out;
}

/// The correspondence poset P_T.  Relation: p >= p' iff there exists q
/// over derived(p') with p = q o p'.  Built by enumerating, for every p',
/// all such compositions (its up-set), which also produces witnesses.
class CorrespondencePoset {
public:
    explicit CorrespondencePoset(const RootedTree& t) : tree_(&t) {
        elements_ = enumerate_correspondences(t);
        const int n = static_cast<int>(elements_.size());
        std::map<std::pair<uint32_t, std::vector<int8_t>>, int> index;
        for (int i = 0; i < n; ++i)
            index[{elements_[i].sub, elements_[i].fiber}] = i;

        const int words = (n + 63) / 64;
        geq_.assign(static_cast<size_t>(n) * words, 0);
        words_ = words;

        for (int ip = 0; ip < n; ++ip) {
            const Correspondence& p_prime = elements_[ip];
            RootedTree r = p_prime.derived();
            for (const Correspondence& q : enumerate_correspondences(r)) {
                Correspondence comp = compose(q, p_prime);
                auto it = index.find({comp.sub, comp.fiber});
                if (it == index.end()) throw std::logic_error("composition left the poset");
                set_geq(it->second, ip);
            }
            if (p_prime.is_identity()) minimum_ = ip;
        }
        if (minimum_ < 0) throw std::logic_error("poset has no identity element");
    }

    const RootedTree& tree() const { return *tree_; }
    int size() const { return static_cast<int>(elements_.size()); }
    const Correspondence& element(int i) const { return elements_[i]; }
    const std::vector<Correspondence>& elements() const { return elements_; }
    int minimum() const { return minimum_; }

    /// elements_[a] >= elements_[b]?
    bool geq(int a, int b) const {
        return (geq_[static_cast<size_t>(a) * words_ + b / 64] >> (b % 64)) & 1ull;
    }
    bool leq(int a, int b) const { return geq(b, a); }

    /// Strict down-set of element i (excluding i itself).
    std::vector<int> strictly_below(int i) const {
        std::vector<int> out;
        for (int j = 0; j < size(); ++j)
            if (j != i && geq(i, j)) out.push_back(j);
        return out;
    }

private:
    const RootedTree* tree_;
    std::vector<Correspondence> elements_;
    std::vector<uint64_t> geq_;
    int words_ = 0;
    int minimum_ = -1;

    void set_geq(int a, int b) {
        geq_[static_cast<size_t>(a) * words_ + b / 64] |= (1ull << (b % 64));
    }
};

/// |P_T| by the independent brute-force route: all vertex subsets checked
/// for connectivity, times 2^{internal edges}.  Used by tests and the
/// acceptance suite as the oracle against the poset builder.
inline long long brute_force_poset_count(const RootedTree& t) {
    const int n = t.size();
    long long total = 0;
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        // connectivity of the induced subgraph, via BFS over tree edges
        int start = __builtin_ctz(mask);
        uint32_t seen = 1u << start;
        std::vector<int> stack = {start};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            std::vector<int> nbrs;
            if (t.parent(v) != -1) nbrs.push_back(t.parent(v));
            for (int c : t.children(v)) nbrs.push_back(c);
            for (int w : nbrs) {
                if ((mask & (1u << w)) && !(seen & (1u << w))) {
                    seen |= 1u << w;
                    stack.push_back(w);
                }
            }
        }
        if (seen != mask) continue;
        int edges = 0;
        for (int v = 0; v < n; ++v)
            if ((mask & (1u << v)) && t.parent(v) != -1 && (mask & (1u << t.parent(v)))) ++edges;
        total += 1ll << edges;
    }
    return total;
}

}  // namespace arboreal
