/**
 * Arboreal links as regular cell complexes: the cells of the link of the
 * arboreal singularity of T are the correspondences P_T \ {p_0}, a cell
 * p = (R <- S -> T) having dimension |T| - |R| - 1 and faces the
 * correspondences strictly below it.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arboreal/cell_complex.hpp"
#include "arboreal/correspondence.hpp"
#include "arboreal/tree.hpp"

namespace arboreal {

struct LinkComplex {
    CellComplex complex;
    // per cell, the (sub, fiber) signature of its correspondence and the
    // component index for forest links
    struct CellTag {
        uint32_t sub = 0;
        std::vector<int8_t> fiber;
        int component = 0;
        int euclidean_factor = 0;  // dim of the R^{F \ T_i} product factor
    };
    std::vector<CellTag> tags;

    std::optional<int> find_cell(uint32_t sub, const std::vector<int8_t>& fiber, int component = 0) const {
        for (size_t i = 0; i < tags.size(); ++i)
            if (tags[i].component == component && tags[i].sub == sub && tags[i].fiber == fiber)
                return static_cast<int>(i);
        return std::nullopt;
    }
};

/// Cell complex of the arboreal link of a rooted tree: face poset
/// P_T \ {p_0}, dimension |T| - |R| - 1.
inline LinkComplex build_link_complex(const RootedTree& t) {
    CorrespondencePoset poset(t);
    const int n = poset.size();
    const int skip = poset.minimum();

    std::vector<int> cell_of(n, -1);
    std::vector<Cell> cells;
    LinkComplex out;
    for (int i = 0; i < n; ++i) {
        if (i == skip) continue;
        const Correspondence& p = poset.element(i);
        Cell c;
        c.id = p.label();
        c.dim = t.size() - p.fiber_count() - 1;
        cell_of[i] = static_cast<int>(cells.size());
        cells.push_back(std::move(c));
        out.tags.push_back({p.sub, p.fiber, 0, 0});
    }
    for (int i = 0; i < n; ++i) {
        if (i == skip) continue;
        for (int j : poset.strictly_below(i)) {
            if (j == skip) continue;
            cells[cell_of[i]].faces.push_back(cell_of[j]);
        }
    }
    out.complex = CellComplex(std::move(cells));
    return out;
}

/// Forest link: per-component links, the product Euclidean factor recorded
/// on each cell (it shifts embedded dimension but not the homotopy type of
/// the component).  Cell dims here stay intrinsic to the component link.
inline LinkComplex build_link_complex(const RootedForest& f) {
    if (f.tree_count() == 1) return build_link_complex(f.tree(0));
    LinkComplex out;
    std::vector<Cell> cells;
    for (int comp = 0; comp < f.tree_count(); ++comp) {
        LinkComplex part = build_link_complex(f.tree(comp));
        int base = static_cast<int>(cells.size());
        int euclid = f.size() - f.tree(comp).size();
        for (int i = 0; i < part.complex.size(); ++i) {
            Cell c = part.complex.cell(i);
            c.id = "c" + std::to_string(comp) + ":" + c.id +
                   (euclid ? "*R^" + std::to_string(euclid) : "");
            for (int& fidx : c.faces) fidx += base;
            cells.push_back(std::move(c));
            LinkComplex::CellTag tag = part.tags[i];
            tag.component = comp;
            tag.euclidean_factor = euclid;
            out.tags.push_back(std::move(tag));
        }
    }
    out.complex = CellComplex(std::move(cells));
    return out;
}

/// Generalized (leafy) link: the link of F+ with the open cells indexed by
/// p_alpha = (pt <- {alpha} -> F+) and p_{alpha+,alpha} = (pt <- {alpha,
/// alpha+} -> F+) deleted for every marked leaf alpha.  Both are maximal
/// cells, so the result is a closed subcomplex.
inline LinkComplex generalized_link(const LeafyRootedForest& lf) {
    auto plus = lf.plus();
    LinkComplex full = build_link_complex(plus.forest);

    // collect (component, sub, fiber) signatures to delete
    struct Key { int comp; uint32_t sub; std::vector<int8_t> fiber; };
    std::vector<Key> doomed;
    for (const std::string& alpha : plus.ell) {
        int g = plus.forest.index_of(alpha);
        int gp = plus.forest.index_of(alpha + "+");
        int comp = plus.forest.component_of(g);
        const RootedTree& tc = plus.forest.tree(comp);
        int v = plus.forest.local_index(g);
        int vp = plus.forest.local_index(gp);
        {
            Key k{comp, 1u << v, std::vector<int8_t>(tc.size(), -1)};
            k.fiber[v] = 0;
            doomed.push_back(std::move(k));
        }
        {
            Key k{comp, (1u << v) | (1u << vp), std::vector<int8_t>(tc.size(), -1)};
            k.fiber[v] = 0;
            k.fiber[vp] = 0;  // both collapse to the point
            doomed.push_back(std::move(k));
        }
    }

    std::vector<char> keep(full.complex.size(), 1);
    for (const Key& k : doomed) {
        auto idx = full.find_cell(k.sub, k.fiber, k.comp);
        if (!idx) throw std::logic_error("generalized_link: cell to delete not found");
        keep[*idx] = 0;
    }
    // deleted cells must be maximal: no remaining cell may list them as a face
    std::vector<int> remap(full.complex.size(), -1);
    std::vector<Cell> cells;
    LinkComplex out;
    for (int i = 0; i < full.complex.size(); ++i) {
        if (!keep[i]) continue;
        remap[i] = static_cast<int>(cells.size());
        cells.push_back(full.complex.cell(i));
        out.tags.push_back(full.tags[i]);
    }
    for (auto& c : cells)
        for (int& fidx : c.faces) {
            if (remap[fidx] < 0)
                throw std::logic_error("generalized_link: deleted cell is a face of a kept cell");
            fidx = remap[fidx];
        }
    out.complex = CellComplex(std::move(cells));
    return out;
}

}  // namespace arboreal
