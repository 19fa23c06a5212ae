#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "arboreal/tree.hpp"

using namespace arboreal;

// Brute-force subtree oracle: every vertex subset, connectivity checked by
// repeated edge contraction over the induced subgraph.
static std::vector<uint32_t> subtrees_by_brute_force(const RootedTree& t) {
    const int n = t.size();
    std::vector<uint32_t> out;
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        int start = __builtin_ctz(mask);
        uint32_t seen = 1u << start;
        std::vector<int> stack = {start};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            std::vector<int> nbrs = t.children(v);
            if (t.parent(v) != -1) nbrs.push_back(t.parent(v));
            for (int w : nbrs)
                if ((mask & (1u << w)) && !(seen & (1u << w))) {
                    seen |= 1u << w;
                    stack.push_back(w);
                }
        }
        if (seen == mask) out.push_back(mask);
    }
    return out;
}

TEST_CASE("parse smallest trees") {
    RootedTree a1 = RootedTree::parse("(a)");
    CHECK(a1.size() == 1);
    CHECK(a1.name(a1.root()) == "a");

    RootedTree a2 = RootedTree::parse("(a (b))");
    CHECK(a2.size() == 2);
    CHECK(a2.name(0) == "a");
    CHECK(a2.parent(1) == 0);
    CHECK(a2.name(1) == "b");
}

TEST_CASE("parse round-trips through the serializer") {
    for (const char* text : {"(a)", "(a (b))", "(a (b (c)) (d))", "(r (x) (y (z) (w)))"}) {
        RootedTree t = RootedTree::parse(text);
        CHECK(t.to_text() == text);
        CHECK(RootedTree::parse(t.to_text()) == t);
    }
}

TEST_CASE("parse errors name the problem") {
    CHECK_THROWS_MATCHES(RootedTree::parse("(a (b)"), ParseError,
                         Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("unbalanced")));
    CHECK_THROWS_AS(RootedTree::parse("(a) (b)"), ParseError);
    CHECK_THROWS_AS(RootedTree::parse(""), ParseError);
    CHECK_THROWS_AS(RootedTree::parse("(a ())"), ParseError);
    CHECK_THROWS_MATCHES(RootedTree::parse("(a (a))"), ValidationError,
                         Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("duplicate")));
}

TEST_CASE("root order") {
    RootedTree t = RootedTree::parse("(r (a (b)) (c))");
    int r = 0, a = t.index_of("a"), b = t.index_of("b"), c = t.index_of("c");
    CHECK(t.leq(r, b));
    CHECK(t.leq(a, b));
    CHECK_FALSE(t.leq(b, a));
    CHECK_FALSE(t.leq(a, c));
    CHECK_FALSE(t.leq(c, a));
    CHECK(t.depth(b) == 2);
    CHECK(t.path_down(r, b) == std::vector<int>{r, a, b});
}

TEST_CASE("canonical encoding is isomorphism-invariant") {
    RootedTree t1 = RootedTree::parse("(r (a) (b (c)))");
    RootedTree t2 = RootedTree::parse("(x (y (z)) (w))");
    RootedTree t3 = RootedTree::parse("(x (y (z) (w)))");
    CHECK(t1.isomorphic_to(t2));
    CHECK_FALSE(t1.isomorphic_to(t3));
}

TEST_CASE("subtree enumeration matches brute force") {
    SECTION("A1: one subtree") {
        CHECK(enumerate_subtrees(RootedTree::parse("(a)")).size() == 1);
    }
    SECTION("A2: {a},{b},{ab}") {
        auto subs = enumerate_subtrees(RootedTree::parse("(a (b))"));
        CHECK(subs == std::vector<uint32_t>{0b01, 0b10, 0b11});
    }
    SECTION("A3 path: 6 subtrees, {a,c} excluded") {
        RootedTree t = RootedTree::parse("(a (b (c)))");
        auto subs = enumerate_subtrees(t);
        CHECK(subs.size() == 6);
        CHECK(std::find(subs.begin(), subs.end(), 0b101u) == subs.end());
        CHECK(subs == subtrees_by_brute_force(t));
    }
    SECTION("all trees up to 6 vertices") {
        for (int n = 1; n <= 6; ++n)
            for (const RootedTree& t : enumerate_rooted_trees(n)) {
                auto fast = enumerate_subtrees(t);
                auto slow = subtrees_by_brute_force(t);
                REQUIRE(fast == slow);
            }
    }
}

TEST_CASE("quotient enumeration counts 2^edges") {
    RootedTree a3 = RootedTree::parse("(a (b (c)))");
    CHECK(enumerate_quotients_of_mask(RootedTree::parse("(a)"), 0b1).size() == 1);
    CHECK(enumerate_quotients_of_mask(RootedTree::parse("(a (b))"), 0b11).size() == 2);
    CHECK(enumerate_quotients_of_mask(a3, 0b111).size() == 4);

    // fibers of each quotient are connected
    for (auto& fib : enumerate_quotients_of_mask(a3, 0b111)) {
        for (int8_t f = 0; f < 3; ++f) {
            std::vector<int> verts;
            for (int v = 0; v < 3; ++v)
                if (fib[v] == f) verts.push_back(v);
            if (verts.empty()) continue;
            // in the A3 path, connected = contiguous indices
            CHECK(verts.back() - verts.front() + 1 == static_cast<int>(verts.size()));
        }
    }
}

TEST_CASE("rooted tree enumeration hits the known counts") {
    // OEIS A000081: rooted trees on n nodes
    const int expected[] = {0, 1, 1, 2, 4, 9, 20, 48};
    for (int n = 1; n <= 7; ++n) {
        auto trees = enumerate_rooted_trees(n);
        CHECK(static_cast<int>(trees.size()) == expected[n]);
        std::set<std::string> codes;
        for (const auto& t : trees) codes.insert(t.canonical_encoding());
        CHECK(codes.size() == trees.size());
    }
}

TEST_CASE("leafy forests validate marked leaves") {
    RootedTree t = RootedTree::parse("(a (b))");
    CHECK_NOTHROW(LeafyRootedForest::of_tree(t, {"b"}));
    CHECK_THROWS_AS(LeafyRootedForest::of_tree(t, {"a"}), ValidationError);
    CHECK_THROWS_AS(LeafyRootedForest::of_tree(t, {"zzz"}), ValidationError);
}

TEST_CASE("leafy plus adds one maximum per marked leaf") {
    SECTION("no marks: F+ = F") {
        auto lf = LeafyRootedForest::of_tree(RootedTree::parse("(a (b))"));
        auto plus = lf.plus();
        CHECK(plus.forest.size() == 2);
        CHECK(plus.ell.empty());
        CHECK(plus.ell_plus.empty());
    }
    SECTION("marked singleton becomes A2") {
        auto lf = LeafyRootedForest::of_tree(RootedTree::parse("(a)"), {"a"});
        auto plus = lf.plus();
        REQUIRE(plus.forest.size() == 2);
        const RootedTree& t = plus.forest.tree(0);
        CHECK(t.name(0) == "a");
        CHECK(t.name(1) == "a+");
        CHECK(t.parent(1) == 0);
        CHECK(plus.ell == std::set<std::string>{"a"});
        CHECK(plus.ell_plus == std::set<std::string>{"a+"});
    }
    SECTION("A2 with leaf marked becomes the A3 chain") {
        auto lf = LeafyRootedForest::of_tree(RootedTree::parse("(a (b))"), {"b"});
        auto plus = lf.plus();
        REQUIRE(plus.forest.size() == 3);
        CHECK(plus.forest.tree(0).isomorphic_to(RootedTree::parse("(x (y (z)))")));
    }
}

TEST_CASE("forests demand globally distinct names") {
    std::vector<RootedTree> ts;
    ts.push_back(RootedTree::parse("(a (b))"));
    ts.push_back(RootedTree::parse("(c (b))"));
    CHECK_THROWS_AS(RootedForest(ts), ValidationError);
}

TEST_CASE("random trees are valid and seeded-deterministic") {
    std::mt19937_64 rng(12345);
    RootedTree t1 = random_rooted_tree(7, rng);
    std::mt19937_64 rng2(12345);
    RootedTree t2 = random_rooted_tree(7, rng2);
    CHECK(t1 == t2);
    CHECK(t1.size() == 7);
}
