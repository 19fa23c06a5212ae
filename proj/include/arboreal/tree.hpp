/**
 * Rooted trees and leafy rooted forests: the combinatorial indexing
 * objects for every construction in this library.
 *
 * A rooted tree induces a partial order on its vertices with the root as
 * unique minimum; alpha <= beta means beta sits above alpha on the path
 * away from the root.  Vertex ids are opaque strings; isomorphism is
 * decided by canonical encodings (children sorted by their own encoding).
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace arboreal {

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Finite rooted tree.  Vertices are indexed 0..size()-1; the root is
/// always index 0 and parent(v) < v for every non-root v.
class RootedTree {
public:
    RootedTree() = default;

    static RootedTree from_parents(std::vector<std::string> names, std::vector<int> parent) {
        RootedTree t;
        t.names_ = std::move(names);
        t.parent_ = std::move(parent);
        t.validate_and_index();
        return t;
    }

    /// Parse "(root (child (grandchild)) (child2))".
    static RootedTree parse(std::string_view text);

    std::string to_text() const {
        std::ostringstream out;
        write_subtree(out, 0);
        return out.str();
    }

    int size() const { return static_cast<int>(names_.size()); }
    int root() const { return 0; }
    int parent(int v) const { return parent_[v]; }
    const std::string& name(int v) const { return names_[v]; }
    const std::vector<std::string>& names() const { return names_; }

    int index_of(std::string_view nm) const {
        for (int v = 0; v < size(); ++v)
            if (names_[v] == nm) return v;
        return -1;
    }

    const std::vector<int>& children(int v) const { return children_[v]; }
    bool is_leaf(int v) const { return children_[v].empty(); }

    std::vector<int> leaves() const {
        std::vector<int> out;
        for (int v = 0; v < size(); ++v)
            if (is_leaf(v)) out.push_back(v);
        return out;
    }

    /// a <= b in the root order (a on the path from root to b).
    bool leq(int a, int b) const {
        while (b != -1) {
            if (b == a) return true;
            b = parent_[b];
        }
        return false;
    }

    int depth(int v) const {
        int d = 0;
        while (parent_[v] != -1) { v = parent_[v]; ++d; }
        return d;
    }

    /// Vertices of the path from a down to b, inclusive; requires a <= b.
    std::vector<int> path_down(int a, int b) const {
        std::vector<int> up;
        int v = b;
        while (true) {
            up.push_back(v);
            if (v == a) break;
            v = parent_[v];
            if (v == -1) throw std::logic_error("path_down: a is not an ancestor of b");
        }
        std::reverse(up.begin(), up.end());
        return up;
    }

    /// Iso-invariant encoding: "(" + sorted child encodings + ")".
    std::string canonical_encoding() const { return encode(0); }

    bool isomorphic_to(const RootedTree& other) const {
        return canonical_encoding() == other.canonical_encoding();
    }

    bool operator==(const RootedTree& other) const {
        return names_ == other.names_ && parent_ == other.parent_;
    }

private:
    std::vector<std::string> names_;
    std::vector<int> parent_;               // -1 for the root
    std::vector<std::vector<int>> children_;

    void validate_and_index() {
        const int n = size();
        if (n == 0) throw ValidationError("tree must be nonempty");
        if (static_cast<int>(parent_.size()) != n)
            throw ValidationError("parent vector size mismatch");
        if (parent_[0] != -1) throw ValidationError("vertex 0 must be the root");
        children_.assign(n, {});
        std::set<std::string> seen;
        for (int v = 0; v < n; ++v) {
            if (!seen.insert(names_[v]).second)
                throw ValidationError("duplicate vertex name: " + names_[v]);
            if (v > 0) {
                if (parent_[v] < 0 || parent_[v] >= v)
                    throw ValidationError("parent of vertex " + names_[v] +
                                          " must precede it (acyclic, rooted at index 0)");
                children_[parent_[v]].push_back(v);
            }
        }
    }

    void write_subtree(std::ostringstream& out, int v) const {
        out << '(' << names_[v];
        for (int c : children_[v]) {
            out << ' ';
            write_subtree(out, c);
        }
        out << ')';
    }

    std::string encode(int v) const {
        std::vector<std::string> kids;
        for (int c : children_[v]) kids.push_back(encode(c));
        std::sort(kids.begin(), kids.end());
        std::string s = "(";
        for (const auto& k : kids) s += k;
        s += ")";
        return s;
    }
};

inline RootedTree RootedTree::parse(std::string_view text) {
    size_t pos = 0;
    auto skip_ws = [&] { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; };
    std::vector<std::string> names;
    std::vector<int> parents;

    // recursive descent over "(name child...)"
    auto parse_node = [&](auto&& self, int parent_idx) -> void {
        skip_ws();
        if (pos >= text.size() || text[pos] != '(')
            throw ParseError("expected '(' at position " + std::to_string(pos));
        ++pos;
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && text[pos] != '(' && text[pos] != ')' &&
               !std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (pos == start) throw ParseError("missing vertex name at position " + std::to_string(pos));
        std::string nm(text.substr(start, pos - start));
        int me = static_cast<int>(names.size());
        names.push_back(nm);
        parents.push_back(parent_idx);
        skip_ws();
        while (pos < text.size() && text[pos] == '(') {
            self(self, me);
            skip_ws();
        }
        if (pos >= text.size() || text[pos] != ')')
            throw ParseError("unbalanced parentheses near token '" + nm + "'");
        ++pos;
    };

    parse_node(parse_node, -1);
    skip_ws();
    if (pos != text.size())
        throw ParseError("trailing input after tree at position " + std::to_string(pos));
    return from_parents(std::move(names), std::move(parents));
}

/// Rooted forest: disjoint trees with globally unique vertex names.
/// Vertices are addressed by (tree index, vertex index) flattened to a
/// single global index in component order.
class RootedForest {
public:
    RootedForest() = default;
    explicit RootedForest(std::vector<RootedTree> trees) : trees_(std::move(trees)) {
        if (trees_.empty()) throw ValidationError("forest must contain at least one tree");
        std::set<std::string> seen;
        offsets_.clear();
        int off = 0;
        for (const auto& t : trees_) {
            offsets_.push_back(off);
            off += t.size();
            for (int v = 0; v < t.size(); ++v)
                if (!seen.insert(t.name(v)).second)
                    throw ValidationError("duplicate vertex name across forest: " + t.name(v));
        }
        total_ = off;
    }

    static RootedForest single(RootedTree t) {
        std::vector<RootedTree> ts;
        ts.push_back(std::move(t));
        return RootedForest(std::move(ts));
    }

    int size() const { return total_; }
    int tree_count() const { return static_cast<int>(trees_.size()); }
    const RootedTree& tree(int i) const { return trees_[i]; }
    const std::vector<RootedTree>& trees() const { return trees_; }

    int component_of(int g) const {
        int i = static_cast<int>(std::upper_bound(offsets_.begin(), offsets_.end(), g) - offsets_.begin()) - 1;
        return i;
    }
    int local_index(int g) const { return g - offsets_[component_of(g)]; }
    int global_index(int comp, int local) const { return offsets_[comp] + local; }

    const std::string& name(int g) const {
        int c = component_of(g);
        return trees_[c].name(g - offsets_[c]);
    }

    int index_of(std::string_view nm) const {
        for (int c = 0; c < tree_count(); ++c) {
            int v = trees_[c].index_of(nm);
            if (v >= 0) return offsets_[c] + v;
        }
        return -1;
    }

    /// -1 for roots, global index otherwise.
    int parent(int g) const {
        int c = component_of(g);
        int p = trees_[c].parent(g - offsets_[c]);
        return p == -1 ? -1 : offsets_[c] + p;
    }

    bool leq(int a, int b) const {
        if (component_of(a) != component_of(b)) return false;
        int c = component_of(a);
        return trees_[c].leq(a - offsets_[c], b - offsets_[c]);
    }

    bool is_leaf(int g) const {
        int c = component_of(g);
        return trees_[c].is_leaf(g - offsets_[c]);
    }

    std::vector<int> vertices_topological() const {
        // component order is already topological (parents precede children)
        std::vector<int> out(total_);
        for (int g = 0; g < total_; ++g) out[g] = g;
        return out;
    }

private:
    std::vector<RootedTree> trees_;
    std::vector<int> offsets_;
    int total_ = 0;
};

/// Rooted forest with marked leaf vertices.
class LeafyRootedForest {
public:
    LeafyRootedForest(RootedForest forest, std::set<std::string> marked)
        : forest_(std::move(forest)), marked_(std::move(marked)) {
        for (const auto& nm : marked_) {
            int g = forest_.index_of(nm);
            if (g < 0) throw ValidationError("marked vertex not in forest: " + nm);
            if (!forest_.is_leaf(g))
                throw ValidationError("marked vertex is not a leaf: " + nm);
        }
    }

    static LeafyRootedForest of_tree(RootedTree t, std::set<std::string> marked = {}) {
        return LeafyRootedForest(RootedForest::single(std::move(t)), std::move(marked));
    }

    const RootedForest& forest() const { return forest_; }
    const std::set<std::string>& marked() const { return marked_; }
    bool is_marked(int g) const { return marked_.count(forest_.name(g)) > 0; }

    /// F+ : add a new maximum above each marked leaf.  Returns the
    /// augmented forest plus the names of the original marked vertices
    /// (ell) and the added ones (ell_plus).
    struct Plus {
        RootedForest forest;
        std::set<std::string> ell;
        std::set<std::string> ell_plus;
    };

    Plus plus() const {
        std::vector<RootedTree> out;
        std::set<std::string> ell, ell_plus;
        for (int c = 0; c < forest_.tree_count(); ++c) {
            const RootedTree& t = forest_.tree(c);
            std::vector<std::string> names = t.names();
            std::vector<int> parents;
            parents.push_back(-1);
            for (int v = 1; v < t.size(); ++v) parents.push_back(t.parent(v));
            for (int v = 0; v < t.size(); ++v) {
                if (marked_.count(t.name(v)) == 0) continue;
                ell.insert(t.name(v));
                std::string plus_name = t.name(v) + "+";
                if (t.index_of(plus_name) >= 0)
                    throw ValidationError("name collision for added vertex: " + plus_name);
                names.push_back(plus_name);
                parents.push_back(v);
                ell_plus.insert(plus_name);
            }
            out.push_back(RootedTree::from_parents(std::move(names), std::move(parents)));
        }
        return Plus{RootedForest(std::move(out)), std::move(ell), std::move(ell_plus)};
    }

private:
    RootedForest forest_;
    std::set<std::string> marked_;
};

// ---------------------------------------------------------------------------
// Enumeration

/// All vertex subsets of T inducing connected full subgraphs (subtrees),
/// as bitmasks over vertex indices.  Requires size() <= 32.
inline std::vector<uint32_t> enumerate_subtrees(const RootedTree& t) {
    const int n = t.size();
    if (n > 32) throw std::invalid_argument("enumerate_subtrees: tree too large");
    // masks(v) = subtrees of the cone below v that contain v
    std::vector<std::vector<uint32_t>> below(n);
    for (int v = n - 1; v >= 0; --v) {
        std::vector<uint32_t> acc = {static_cast<uint32_t>(1u << v)};
        for (int c : t.children(v)) {
            std::vector<uint32_t> next;
            for (uint32_t m : acc) {
                next.push_back(m);                       // skip child c
                for (uint32_t cm : below[c]) next.push_back(m | cm);
            }
            acc = std::move(next);
        }
        below[v] = std::move(acc);
    }
    std::vector<uint32_t> out;
    for (int v = 0; v < n; ++v)
        for (uint32_t m : below[v]) out.push_back(m);
    std::sort(out.begin(), out.end());
    return out;
}

/// Quotients of a subtree of t given by its vertex mask: one per subset of
/// internal edges to collapse.  Each quotient is returned as a fiber-id
/// assignment per vertex (-1 outside the subtree), fiber ids normalized by
/// first occurrence in vertex-index order.
inline std::vector<std::vector<int8_t>> enumerate_quotients_of_mask(const RootedTree& t, uint32_t mask) {
    const int n = t.size();
    std::vector<int> verts;
    for (int v = 0; v < n; ++v)
        if (mask & (1u << v)) verts.push_back(v);
    // internal edges: (parent(v), v) with both endpoints in the mask
    std::vector<int> edge_child;
    for (int v : verts)
        if (t.parent(v) != -1 && (mask & (1u << t.parent(v)))) edge_child.push_back(v);
    const int e = static_cast<int>(edge_child.size());
    if (e > 30) throw std::invalid_argument("enumerate_quotients: too many edges");

    std::vector<std::vector<int8_t>> out;
    for (uint32_t sel = 0; sel < (1u << e); ++sel) {
        // union-find over the selected (collapsed) edges
        std::vector<int> uf(n, -1);
        for (int v : verts) uf[v] = v;
        auto find = [&](int x) {
            while (uf[x] != x) { uf[x] = uf[uf[x]]; x = uf[x]; }
            return x;
        };
        for (int i = 0; i < e; ++i) {
            if (!(sel & (1u << i))) continue;
            int a = find(edge_child[i]);
            int b = find(t.parent(edge_child[i]));
            if (a != b) uf[std::max(a, b)] = std::min(a, b);
        }
        std::vector<int8_t> fiber(n, -1);
        std::map<int, int8_t> id_of_root;
        for (int v : verts) {
            int r = find(v);
            auto it = id_of_root.find(r);
            if (it == id_of_root.end())
                it = id_of_root.emplace(r, static_cast<int8_t>(id_of_root.size())).first;
            fiber[v] = it->second;
        }
        out.push_back(std::move(fiber));
    }
    return out;
}

/// Generate all rooted trees with n vertices, one per isomorphism class.
/// Names are "v0".."v{n-1}" with "v0" the root.
std::vector<RootedTree> enumerate_rooted_trees(int n);

namespace detail {
// trees as canonical parent vectors; children built as multisets of
// smaller trees
inline void enumerate_parent_vectors(int n, std::vector<std::vector<std::vector<int>>>& memo);
}

inline std::vector<RootedTree> enumerate_rooted_trees(int n) {
    // memo[k] = parent vectors (size k, root at 0) of all rooted trees with
    // k vertices, canonically ordered
    static thread_local std::vector<std::vector<std::vector<int>>> memo;
    if (static_cast<int>(memo.size()) <= n) detail::enumerate_parent_vectors(n, memo);
    std::vector<RootedTree> out;
    for (const auto& pv : memo[n]) {
        std::vector<std::string> names;
        for (int v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
        out.push_back(RootedTree::from_parents(std::move(names), pv));
    }
    return out;
}

namespace detail {

inline std::string encode_parent_vector(const std::vector<int>& pv) {
    const int n = static_cast<int>(pv.size());
    std::vector<std::vector<int>> kids(n);
    for (int v = 1; v < n; ++v) kids[pv[v]].push_back(v);
    auto enc = [&](auto&& self, int v) -> std::string {
        std::vector<std::string> parts;
        for (int c : kids[v]) parts.push_back(self(self, c));
        std::sort(parts.begin(), parts.end());
        std::string s = "(";
        for (auto& p : parts) s += p;
        return s + ")";
    };
    return enc(enc, 0);
}

inline void enumerate_parent_vectors(int n, std::vector<std::vector<std::vector<int>>>& memo) {
    memo.assign(n + 1, {});
    if (n >= 0) memo[0] = {};
    for (int k = 1; k <= n; ++k) {
        std::set<std::string> seen;
        std::vector<std::vector<int>> result;
        // root + an unordered multiset of child subtrees totalling k-1
        // vertices; generate ordered compositions and dedupe canonically
        auto rec = [&](auto&& self, std::vector<int>& pv, int remaining) -> void {
            if (remaining == 0) {
                std::string code = encode_parent_vector(pv);
                if (seen.insert(code).second) result.push_back(pv);
                return;
            }
            for (int sz = 1; sz <= remaining; ++sz) {
                for (const auto& sub : memo[sz]) {
                    int base = static_cast<int>(pv.size());
                    pv.push_back(0);  // subtree root attaches to the global root
                    for (int v = 1; v < sz; ++v) pv.push_back(base + sub[v]);
                    self(self, pv, remaining - sz);
                    pv.resize(base);
                }
            }
        };
        std::vector<int> pv = {-1};
        rec(rec, pv, k - 1);
        memo[k] = std::move(result);
    }
}

}  // namespace detail

/// Seeded random rooted tree on n vertices (uniform parent choice).
template <class Rng>
RootedTree random_rooted_tree(int n, Rng& rng) {
    std::vector<std::string> names;
    std::vector<int> parents;
    for (int v = 0; v < n; ++v) {
        names.push_back("v" + std::to_string(v));
        parents.push_back(v == 0 ? -1 : static_cast<int>(rng() % static_cast<uint64_t>(v)));
    }
    return RootedTree::from_parents(std::move(names), std::move(parents));
}

}  // namespace arboreal
