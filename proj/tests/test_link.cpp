#include <catch2/catch_amalgamated.hpp>

#include "arboreal/link.hpp"

using namespace arboreal;

TEST_CASE("A1 link is empty") {
    LinkComplex link = build_link_complex(RootedTree::parse("(a)"));
    CHECK(link.complex.empty());
}

TEST_CASE("A2 link is three points") {
    LinkComplex link = build_link_complex(RootedTree::parse("(a (b))"));
    REQUIRE(link.complex.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(link.complex.cell(i).dim == 0);
        CHECK(link.complex.cell(i).faces.empty());
    }
}

TEST_CASE("A3 link is a graph with 4 vertices and 6 edges") {
    LinkComplex link = build_link_complex(RootedTree::parse("(a (b (c)))"));
    auto counts = link.complex.cell_counts();
    REQUIRE(counts.size() == 2);
    CHECK(counts[0] == 4);
    CHECK(counts[1] == 6);
    // regular: every edge has exactly two endpoints
    for (int i = 0; i < link.complex.size(); ++i)
        if (link.complex.cell(i).dim == 1)
            CHECK(link.complex.facets(i).size() == 2);
}

TEST_CASE("cell dimension equals longest chain below it") {
    for (int n = 1; n <= 5; ++n)
        for (const RootedTree& t : enumerate_rooted_trees(n)) {
            LinkComplex link = build_link_complex(t);
            auto depths = link.complex.chain_depths();
            for (int i = 0; i < link.complex.size(); ++i)
                REQUIRE(depths[i] == link.complex.cell(i).dim);
        }
}

TEST_CASE("intersection property holds for chains and for all trees with at most 3 vertices") {
    for (int n = 2; n <= 3; ++n)
        for (const RootedTree& t : enumerate_rooted_trees(n)) {
            LinkComplex link = build_link_complex(t);
            REQUIRE_FALSE(link.complex.check_intersection_property().has_value());
        }
    // A_n links are skeleta of simplices, where the property is automatic
    std::string chain = "(v1)";
    for (int n = 2; n <= 6; ++n) {
        chain = "(v" + std::to_string(n) + " " + chain + ")";
        LinkComplex link = build_link_complex(RootedTree::parse(chain));
        REQUIRE_FALSE(link.complex.check_intersection_property().has_value());
    }
}

TEST_CASE("the D4 star violates the intersection property at two antipodal vertices") {
    // The D4 link is a 2-sphere with three disks glued along the coordinate
    // great circles; two closed disks meet the sphere's circles in two
    // antipodal points, so their intersection is two cells, not one.
    RootedTree t = RootedTree::parse("(v0 (v1) (v2) (v3))");
    LinkComplex link = build_link_complex(t);
    auto witness = link.complex.check_intersection_property();
    REQUIRE(witness.has_value());
    // the violating pair consists of two of the glued-disk 2-cells
    CHECK(link.complex.cell(witness->cell_a).dim == 2);
    CHECK(link.complex.cell(witness->cell_b).dim == 2);

    // their meet is exactly two incomparable 0-cells
    auto ca = link.complex.closure(witness->cell_a);
    auto cb = link.complex.closure(witness->cell_b);
    std::vector<int> meet;
    std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(), std::back_inserter(meet));
    REQUIRE(meet.size() == 2);
    CHECK(link.complex.cell(meet[0]).dim == 0);
    CHECK(link.complex.cell(meet[1]).dim == 0);
}

TEST_CASE("two triangles sharing two vertices but no edge violate the intersection property") {
    // vertices p,q,r,s; triangles T1 on {p,q,r}, T2 on {p,q,s}; all edges
    // present except the shared pair is joined by two distinct paths only.
    std::vector<Cell> cells;
    auto add = [&](std::string id, int dim, std::vector<int> faces) {
        cells.push_back({std::move(id), dim, std::move(faces)});
        return static_cast<int>(cells.size()) - 1;
    };
    int p = add("p", 0, {});
    int q = add("q", 0, {});
    int r = add("r", 0, {});
    int s = add("s", 0, {});
    int pr = add("pr", 1, {p, r});
    int qr = add("qr", 1, {q, r});
    int ps = add("ps", 1, {p, s});
    int qs = add("qs", 1, {q, s});
    // the two triangles: closed cells contain p and q but no edge pq exists
    add("T1", 2, {p, q, r, pr, qr});
    add("T2", 2, {p, q, s, ps, qs});
    CellComplex broken{std::move(cells)};
    auto witness = broken.check_intersection_property();
    REQUIRE(witness.has_value());
    CHECK(broken.cell(witness->cell_a).id == "T1");
    CHECK(broken.cell(witness->cell_b).id == "T2");
}

TEST_CASE("generalized link of the marked singleton is one remaining cell") {
    auto lf = LeafyRootedForest::of_tree(RootedTree::parse("(a)"), {"a"});
    LinkComplex g = generalized_link(lf);
    // F+ = A2 chain: link has 3 points; deleting p_a and p_{a+,a} leaves the
    // point indexed by (pt <- {a+}): the closed half-line is its cone.
    REQUIRE(g.complex.size() == 1);
    CHECK(g.complex.cell(0).dim == 0);
    CHECK(g.complex.cell(0).id == "{a+}");
}

TEST_CASE("generalized link with no marks is the plain link") {
    auto lf = LeafyRootedForest::of_tree(RootedTree::parse("(a (b))"));
    LinkComplex g = generalized_link(lf);
    LinkComplex plain = build_link_complex(RootedTree::parse("(a (b))"));
    REQUIRE(g.complex.size() == plain.complex.size());
    for (int i = 0; i < g.complex.size(); ++i) {
        CHECK(g.complex.cell(i).dim == plain.complex.cell(i).dim);
        CHECK(g.complex.cell(i).faces == plain.complex.cell(i).faces);
    }
}

TEST_CASE("generalized link of marked A2 matches explicit deletion from the A3-shaped plus link") {
    auto lf = LeafyRootedForest::of_tree(RootedTree::parse("(a (b))"), {"b"});
    LinkComplex g = generalized_link(lf);

    // oracle: build the full link of F+ = (a (b (b+))) and delete the two
    // cells by hand using their signatures
    auto plus = lf.plus();
    const RootedTree& fplus = plus.forest.tree(0);
    REQUIRE(fplus.size() == 3);
    LinkComplex full = build_link_complex(fplus);
    int vb = fplus.index_of("b"), vbp = fplus.index_of("b+");
    std::vector<int8_t> fib_b(3, -1);
    fib_b[vb] = 0;
    std::vector<int8_t> fib_bbp(3, -1);
    fib_bbp[vb] = 0;
    fib_bbp[vbp] = 0;
    auto i1 = full.find_cell(1u << vb, fib_b);
    auto i2 = full.find_cell((1u << vb) | (1u << vbp), fib_bbp);
    REQUIRE(i1.has_value());
    REQUIRE(i2.has_value());
    CHECK(full.complex.size() - 2 == g.complex.size());

    // the deleted cells are absent from the generalized link
    CHECK_FALSE(g.find_cell(1u << vb, fib_b).has_value());
    CHECK_FALSE(g.find_cell((1u << vb) | (1u << vbp), fib_bbp).has_value());
    // all surviving signatures agree
    for (int i = 0; i < full.complex.size(); ++i) {
        if (i == *i1 || i == *i2) continue;
        CHECK(g.find_cell(full.tags[i].sub, full.tags[i].fiber).has_value());
    }
}

TEST_CASE("forest link is the tagged disjoint union of component links") {
    std::vector<RootedTree> ts;
    ts.push_back(RootedTree::parse("(a (b))"));
    ts.push_back(RootedTree::parse("(c)"));
    RootedForest f(ts);
    LinkComplex link = build_link_complex(f);
    // component 0 contributes the 3 points of the A2 link; component 1 (A1)
    // contributes nothing; every cell is tagged with the R^1 product factor.
    REQUIRE(link.complex.size() == 3);
    for (const auto& tag : link.tags) {
        CHECK(tag.component == 0);
        CHECK(tag.euclidean_factor == 1);
    }
}
