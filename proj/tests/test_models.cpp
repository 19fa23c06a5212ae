#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "arboreal/models.hpp"

using namespace arboreal;

static RootedForest a2_forest() { return RootedForest::single(RootedTree::parse("(r (c))")); }

TEST_CASE("rectilinear membership on the A2 model") {
    RootedForest f = a2_forest();
    int r = 0, c = 1;

    Coordinates x = Coordinates::zero(f);
    x[r] = 0.0;
    x[c] = 5.0;
    CHECK(member_rectilinear(f, Region::Hypersurface, r, x));  // on H_r
    CHECK(member_rectilinear(f, Region::ForestUnion, 0, x));

    Coordinates y = Coordinates::zero(f);
    y[r] = -1.0;
    y[c] = 0.0;
    // fails x_r >= 0 in P_c and x_r = 0 in H_r, hence misses every piece
    CHECK_FALSE(member_rectilinear(f, Region::Sheet, c, y));
    CHECK_FALSE(member_rectilinear(f, Region::Hypersurface, r, y));
    CHECK_FALSE(member_rectilinear(f, Region::ForestUnion, 0, y));

    Coordinates q = Coordinates::zero(f);
    q[r] = 2.0;
    q[c] = 3.0;
    CHECK(member_rectilinear(f, Region::Quadrant, c, q));
    CHECK_FALSE(member_rectilinear(f, Region::Hypersurface, c, q));
}

TEST_CASE("leafy singleton: H_{F*} is the closed half-line") {
    auto lf = LeafyRootedForest::of_tree(RootedTree::parse("(a)"), {"a"});
    auto plus = lf.plus();
    const RootedForest& fp = plus.forest;
    int a = fp.index_of("a"), ap = fp.index_of("a+");

    Coordinates in = Coordinates::zero(fp);
    in[a] = 1.0;
    in[ap] = 0.0;
    CHECK(member_rectilinear_leafy(fp, plus.ell, in));

    Coordinates out = Coordinates::zero(fp);
    out[a] = -1.0;
    out[ap] = 0.0;
    CHECK_FALSE(member_rectilinear_leafy(fp, plus.ell, out));
}

TEST_CASE("coordinate domain mismatches raise") {
    RootedForest f = a2_forest();
    RootedForest g = RootedForest::single(RootedTree::parse("(x (y (z)))"));
    Coordinates x = Coordinates::zero(g);
    CHECK_THROWS_AS(member_rectilinear(f, Region::Quadrant, 0, x), DomainError);
}

TEST_CASE("presentation agreement") {
    std::mt19937_64 rng(7);
    SECTION("single vertex: all three unions are the hyperplane") {
        RootedForest f = RootedForest::single(RootedTree::parse("(a)"));
        auto rep = check_presentations(f, 10000, rng);
        CHECK_FALSE(rep.disagreement.has_value());
    }
    SECTION("A2 with 10^4 random samples") {
        auto rep = check_presentations(a2_forest(), 10000, rng);
        CHECK_FALSE(rep.disagreement.has_value());
    }
    SECTION("A3 on the full sign grid") {
        RootedForest f = RootedForest::single(RootedTree::parse("(a (b (c)))"));
        auto rep = check_presentations(f, 0, rng);
        CHECK_FALSE(rep.disagreement.has_value());
        CHECK(rep.points_checked >= 27);
    }
    SECTION("branching tree and forest") {
        std::vector<RootedTree> ts;
        ts.push_back(RootedTree::parse("(a (b) (c))"));
        ts.push_back(RootedTree::parse("(d)"));
        RootedForest f(ts);
        auto rep = check_presentations(f, 2000, rng);
        CHECK_FALSE(rep.disagreement.has_value());
    }
}

TEST_CASE("h values: root identity and the flat-region identities") {
    SmoothingProfile pr = SmoothingProfile::standard(0.1);
    RootedForest f = a2_forest();
    int r = 0, c = 1;

    Coordinates x = Coordinates::zero(f);
    x[r] = 0.37;
    x[c] = -0.9;
    CHECK(h_value(f, pr, r, x) == x[r]);  // h_root = x_root

    // f property (3): h_a = x_a when h_parent > 2 delta and |x_a| < delta
    x[r] = 3.0 * pr.delta;
    x[c] = 0.5 * pr.delta;
    CHECK(h_value(f, pr, c, x) == Catch::Approx(x[c]).margin(1e-12));

    // f property (4): h_a = h_parent when |x_parent-h| < delta and x_a > 2 delta
    x[r] = 0.5 * pr.delta;
    x[c] = 3.0 * pr.delta;
    CHECK(h_value(f, pr, c, x) == Catch::Approx(x[r]).margin(1e-12));
}

TEST_CASE("monotone sign propagation: h_a >= 0 forces h_b >= 0 below it") {
    SmoothingProfile pr = SmoothingProfile::standard(0.1);
    std::mt19937_64 rng(11);
    for (const char* text : {"(a (b (c)))", "(a (b) (c))", "(a (b (c) (d)))"}) {
        RootedForest f = RootedForest::single(RootedTree::parse(text));
        for (int i = 0; i < 20000; ++i) {
            Coordinates x = Coordinates::zero(f);
            for (int v = 0; v < f.size(); ++v) x[v] = uniform_double(rng, -3 * pr.delta, 3 * pr.delta);
            for (int a = 0; a < f.size(); ++a) {
                if (h_value(f, pr, a, x) < 0.0) continue;
                for (int b = 0; b < f.size(); ++b)
                    if (f.leq(b, a)) REQUIRE(h_value(f, pr, b, x) >= 0.0);
            }
        }
    }
}

TEST_CASE("coordinate locality: h_a ignores vertices not below it") {
    SmoothingProfile pr = SmoothingProfile::standard(0.1);
    RootedForest f = RootedForest::single(RootedTree::parse("(a (b (c)) (d))"));
    std::mt19937_64 rng(13);
    for (int i = 0; i < 1000; ++i) {
        Coordinates x = Coordinates::zero(f);
        for (int v = 0; v < f.size(); ++v) x[v] = uniform_double(rng, -1.0, 1.0);
        for (int a = 0; a < f.size(); ++a) {
            double base = h_value(f, pr, a, x);
            for (int g = 0; g < f.size(); ++g) {
                if (f.leq(g, a)) continue;
                Coordinates y = x;
                y[g] = uniform_double(rng, -1.0, 1.0);
                REQUIRE(h_value(f, pr, a, y) == base);  // exact
            }
        }
    }
}

TEST_CASE("the shipped profile passes verification at 1e-6") {
    SmoothingProfile pr = SmoothingProfile::standard(0.1);
    ProfileReport rep = verify_profile(pr, 256, 1e-6);
    for (const auto& chk : rep.checks) {
        INFO(chk.name << ": " << chk.detail << " worst " << chk.worst);
        CHECK(chk.pass);
    }
    CHECK(rep.pass());
}

namespace {
struct FlatProfile {  // f == x2: zero set is a full line, not the corner
    double delta = 0.1;
    double b(double) const { return 0.0; }
    double f(double, double x2) const { return x2; }
    double c(double t) const { return SmoothingProfile::standard(delta).c(t); }
};
struct NoDivergenceProfile {  // b == 0 everywhere
    double delta = 0.1;
    double b(double) const { return 0.0; }
    double f(double x1, double x2) const {
        SmoothingProfile base = SmoothingProfile::standard(delta);
        return base.f(x1, x2);
    }
    double c(double t) const { return SmoothingProfile::standard(delta).c(t); }
};
}  // namespace

TEST_CASE("broken profiles are caught") {
    SECTION("f == x2 fails the zero-locus check") {
        ProfileReport rep = verify_profile(FlatProfile{}, 128, 1e-6);
        bool zero_locus_failed = false;
        for (const auto& chk : rep.checks)
            if (chk.name == "f_zero_locus") zero_locus_failed = !chk.pass;
        CHECK(zero_locus_failed);
    }
    SECTION("b == 0 fails the derivative-divergence check") {
        ProfileReport rep = verify_profile(NoDivergenceProfile{}, 128, 1e-6);
        bool divergence_failed = false;
        for (const auto& chk : rep.checks)
            if (chk.name == "b_derivative_divergence") divergence_failed = !chk.pass;
        CHECK(divergence_failed);
    }
}

TEST_CASE("comparison map: identity cases") {
    SmoothingProfile pr = SmoothingProfile::standard(0.1);
    SECTION("root-only forest") {
        RootedForest f = RootedForest::single(RootedTree::parse("(a)"));
        Coordinates x = Coordinates::zero(f);
        x[0] = 0.123;
        CHECK(comparison_map(f, pr, x).values == x.values);
    }
    SECTION("identity outside every strip 0 <= h_parent <= delta/4") {
        RootedForest f = RootedForest::single(RootedTree::parse("(a (b (c)))"));
        Coordinates x = Coordinates::zero(f);
        x[0] = -0.5;  // h_a < 0 and then h_b < 0: b vanishes everywhere
        x[1] = 0.4;
        x[2] = 0.7;
        CHECK(comparison_map(f, pr, x).values == x.values);
        x[0] = 2.0;  // h_a and h_b both far above delta/4
        x[1] = 2.0;
        CHECK(comparison_map(f, pr, x).values == x.values);
    }
}

TEST_CASE("comparison map sends smoothed sheets into rectilinear sheets") {
    SmoothingProfile pr = SmoothingProfile::standard(0.1);
    std::mt19937_64 rng(17);
    for (const char* text : {"(a (b))", "(a (b (c)))", "(a (b) (c))"}) {
        RootedForest f = RootedForest::single(RootedTree::parse(text));
        for (int alpha = 0; alpha < f.size(); ++alpha) {
            int produced = 0;
            for (int i = 0; i < 4000 && produced < 2000; ++i) {
                auto x = sample_smoothed_sheet(f, pr, alpha, rng, 3.0 * pr.delta);
                if (!x) continue;
                ++produced;
                REQUIRE(std::abs(h_value(f, pr, alpha, *x)) <= 1e-12);
                Coordinates y = comparison_map(f, pr, *x);
                // image satisfies x_alpha = 0, x_b >= 0 below, within 1e-6
                REQUIRE(std::abs(y[alpha]) <= 1e-6);
                for (int b = 0; b < f.size(); ++b)
                    if (f.leq(b, alpha) && b != alpha) REQUIRE(y[b] >= -1e-6);
            }
            REQUIRE(produced > 0);
        }
    }
}

TEST_CASE("comparison map sends smoothed quadrants into quadrants and is injective on samples") {
    SmoothingProfile pr = SmoothingProfile::standard(0.1);
    std::mt19937_64 rng(19);
    RootedForest f = RootedForest::single(RootedTree::parse("(a (b (c)))"));
    std::vector<std::vector<double>> images;
    for (int alpha = 0; alpha < f.size(); ++alpha) {
        for (int i = 0; i < 2000; ++i) {
            auto x = sample_smoothed_quadrant(f, pr, alpha, rng, 3.0 * pr.delta);
            REQUIRE(x.has_value());
            Coordinates y = comparison_map(f, pr, *x);
            for (int b = 0; b < f.size(); ++b)
                if (f.leq(b, alpha)) REQUIRE(y[b] >= -1e-6);
            images.push_back(y.values);
        }
    }
    std::sort(images.begin(), images.end());
    for (size_t i = 1; i < images.size(); ++i) {
        double d = 0.0;
        for (size_t k = 0; k < images[i].size(); ++k)
            d = std::max(d, std::abs(images[i][k] - images[i - 1][k]));
        REQUIRE(d >= 1e-8);
    }
}

TEST_CASE("generalized variant: smoothed leafy points land in the rectilinear leafy union") {
    SmoothingProfile pr = SmoothingProfile::standard(0.1);
    std::mt19937_64 rng(23);
    auto lf = LeafyRootedForest::of_tree(RootedTree::parse("(a (b))"), {"b"});
    auto plus = lf.plus();
    const RootedForest& fp = plus.forest;
    for (int v = 0; v < fp.size(); ++v) {
        if (plus.ell.count(fp.name(v))) continue;
        for (int i = 0; i < 2000; ++i) {
            auto x = sample_smoothed_sheet(fp, pr, v, rng, 3.0 * pr.delta);
            if (!x) continue;
            Coordinates y = comparison_map(fp, pr, *x);
            // clamp tiny numerical noise before the exact membership test
            for (double& t : y.values)
                if (std::abs(t) <= 1e-9) t = 0.0;
            REQUIRE(member_rectilinear_leafy(fp, plus.ell, y));
        }
    }
}
