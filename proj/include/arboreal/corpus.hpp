/**
 * The bundled germ corpus: a straight line, the PL model of the plane
 * curve y (y - x^2) (y + x^2) = 0 with the dy coorientation, n-ray
 * single-coray stars, and a two-coray crossing.  The JSON files under
 * data/ are generated from these builders.
 */
#pragma once

#include "arboreal/germ.hpp"

namespace arboreal {

inline Branch make_branch(std::string name, std::vector<std::pair<Rational, Rational>> pts, Side side) {
    Branch b;
    b.name = std::move(name);
    for (auto& [x, y] : pts) b.points.push_back({x, y});
    b.coorient = side;
    return b;
}

/// Two horizontal rays with the dy coorientation: one origin coray.
inline CurveGerm2D line_germ() {
    CurveGerm2D g;
    g.branches.push_back(make_branch("east", {{0, 0}, {1, 0}}, Side::Left));
    g.branches.push_back(make_branch("west", {{0, 0}, {-1, 0}}, Side::Right));
    g.validate();
    return g;
}

/// PL model of y (y - x^2) (y + x^2) = 0: six branches, all with limiting
/// conormal near dy, hence a single origin coray.
inline CurveGerm2D example15_germ() {
    CurveGerm2D g;
    auto para = [](int sx, int sy) {
        std::vector<std::pair<Rational, Rational>> pts = {{0, 0}};
        for (auto [x, y] : {std::pair<Rational, Rational>{Rational(1) / 10, Rational(1) / 100},
                            {Rational(2) / 5, Rational(4) / 25},
                            {Rational(7) / 10, Rational(49) / 100},
                            {1, 1}})
            pts.push_back({Rational(sx) * x, Rational(sy) * y});
        return pts;
    };
    g.branches.push_back(make_branch("axis_e", {{0, 0}, {1, 0}}, Side::Left));
    g.branches.push_back(make_branch("axis_w", {{0, 0}, {-1, 0}}, Side::Right));
    g.branches.push_back(make_branch("upper_e", para(1, 1), Side::Left));
    g.branches.push_back(make_branch("upper_w", para(-1, 1), Side::Right));
    g.branches.push_back(make_branch("lower_e", para(1, -1), Side::Left));
    g.branches.push_back(make_branch("lower_w", para(-1, -1), Side::Right));
    g.validate();
    return g;
}

/// n nearly-horizontal rays fanning through distinct small slopes, all
/// grouped into the single dy coray.
inline CurveGerm2D star_germ(int n) {
    if (n < 1 || n > 8) throw GermError("star germ supports 1..8 rays");
    CurveGerm2D g;
    // slope sequence per side: 0, 1/10, -1/10, 1/5
    const Rational slopes[] = {Rational(0), Rational(1) / 10, Rational(-1) / 10, Rational(1) / 5};
    for (int k = 0; k < n; ++k) {
        bool east = (k % 2 == 0);
        Rational s = slopes[k / 2];
        Rational x = east ? 1 : -1;
        std::vector<std::pair<Rational, Rational>> pts = {
            {0, 0}, {x / 2, s / 2}, {x, s}};
        g.branches.push_back(make_branch(std::string(east ? "e" : "w") + std::to_string(k / 2),
                                         pts, east ? Side::Left : Side::Right));
    }
    g.validate();
    return g;
}

/// Two transverse cooriented lines: two origin corays (dy and dx).
inline CurveGerm2D cross_germ() {
    CurveGerm2D g;
    g.branches.push_back(make_branch("east", {{0, 0}, {1, 0}}, Side::Left));
    g.branches.push_back(make_branch("west", {{0, 0}, {-1, 0}}, Side::Right));
    g.branches.push_back(make_branch("north", {{0, 0}, {0, 1}}, Side::Right));
    g.branches.push_back(make_branch("south", {{0, 0}, {0, -1}}, Side::Left));
    g.validate();
    return g;
}

struct CorpusEntry {
    std::string name;
    CurveGerm2D germ;
};

inline std::vector<CorpusEntry> full_corpus() {
    std::vector<CorpusEntry> out;
    out.push_back({"line", line_germ()});
    out.push_back({"example15", example15_germ()});
    for (int n = 1; n <= 8; ++n) out.push_back({"star" + std::to_string(n), star_germ(n)});
    out.push_back({"cross", cross_germ()});
    return out;
}

}  // namespace arboreal
