/**
 * Plane-curve Legendrian germs: cooriented PL branches from the origin to
 * the unit circle, and their stratification into the origin stratum with
 * its corays and one open-arc stratum per branch.
 */
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "arboreal/geometry.hpp"
#include "arboreal/tree.hpp"

namespace arboreal {

class GermError : public std::runtime_error {
public:
    explicit GermError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Side { Left, Right };  // coorientation relative to travel direction

struct Branch {
    std::string name;
    std::vector<RPoint> points;  // rational vertices, starting at the origin
    Side coorient = Side::Left;

    Polyline as_polyline() const {
        Polyline p;
        for (const RPoint& q : points)
            p.pts.push_back({static_cast<double>(q.x), static_cast<double>(q.y)});
        return p;
    }

    /// Unit conormal of the first segment on the cooriented side.
    Vec2 limiting_conormal() const {
        Vec2 d = normalized(Vec2{static_cast<double>(points[1].x - points[0].x),
                                 static_cast<double>(points[1].y - points[0].y)});
        Vec2 n = perp_left(d);
        return coorient == Side::Left ? n : Vec2{-n.x, -n.y};
    }

    /// Unit coorientation normal of segment `seg`.
    Vec2 segment_normal(int seg) const {
        Polyline p = as_polyline();
        Vec2 n = perp_left(p.direction_at(seg));
        return coorient == Side::Left ? n : Vec2{-n.x, -n.y};
    }
};

struct CurveGerm2D {
    std::vector<Branch> branches;

    /// Exact validation over the rational input: branches start at the
    /// origin, leave radially (every circle of radius <= 1 is crossed once,
    /// transversally up to PL), reach the unit circle, and meet each other
    /// only at the origin.
    void validate() const {
        std::set<std::string> names;
        const RPoint origin{0, 0};
        for (const Branch& b : branches) {
            if (!names.insert(b.name).second) throw GermError("duplicate branch name: " + b.name);
            if (b.points.size() < 2)
                throw GermError("branch " + b.name + " needs at least two points");
            if (!(b.points[0] == origin))
                throw GermError("branch " + b.name + " must start at the origin");
            for (size_t i = 0; i + 1 < b.points.size(); ++i) {
                RPoint v{b.points[i + 1].x - b.points[i].x, b.points[i + 1].y - b.points[i].y};
                if (v.x == 0 && v.y == 0)
                    throw GermError("branch " + b.name + " repeats a vertex");
                // radial monotonicity: <p, v> >= 0 makes |x| strictly
                // increasing past the segment start
                if (dot2({b.points[i].x, b.points[i].y}, v) < 0)
                    throw GermError("branch " + b.name + " is not radially monotone at vertex " +
                                    std::to_string(i));
            }
            const RPoint& last = b.points.back();
            if (last.x * last.x + last.y * last.y < 1)
                throw GermError("branch " + b.name + " does not reach the unit circle");
        }
        for (size_t i = 0; i < branches.size(); ++i)
            for (size_t j = i + 1; j < branches.size(); ++j)
                for (size_t si = 0; si + 1 < branches[i].points.size(); ++si)
                    for (size_t sj = 0; sj + 1 < branches[j].points.size(); ++sj)
                        if (segments_share_point_besides(
                                branches[i].points[si], branches[i].points[si + 1],
                                branches[j].points[sj], branches[j].points[sj + 1], origin))
                            throw GermError("branches " + branches[i].name + " and " +
                                            branches[j].name + " intersect away from the origin");
    }
};

/// Stratification: the origin stratum with one coray per cluster of
/// limiting conormals, and one arc stratum per branch sitting above
/// exactly one origin coray.
struct Stratification {
    struct Coray {
        Vec2 normal;                // representative unit conormal
        std::vector<int> branches;  // member branch indices
    };
    std::vector<Coray> corays;
    std::vector<int> coray_of_branch;  // branch -> origin coray index
};

/// Cluster limiting conormals by angular proximity (transitive closure at
/// `angle_tol` radians).  PL approximations of tangent branches carry
/// slightly different first-segment normals, so exact equality grouping
/// would split the fiber the paper assigns to a single codirection.
inline Stratification stratify(const CurveGerm2D& germ, double angle_tol = 0.175) {
    germ.validate();
    Stratification out;
    const int n = static_cast<int>(germ.branches.size());
    out.coray_of_branch.assign(n, -1);

    std::vector<Vec2> normals;
    for (const Branch& b : germ.branches) normals.push_back(b.limiting_conormal());

    std::vector<int> uf(n);
    for (int i = 0; i < n; ++i) uf[i] = i;
    auto find = [&](int x) {
        while (uf[x] != x) { uf[x] = uf[uf[x]]; x = uf[x]; }
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (angle_between(normals[i], normals[j]) <= angle_tol) {
                int a = find(i), b = find(j);
                if (a != b) uf[std::max(a, b)] = std::min(a, b);
            }

    std::map<int, std::vector<int>> clusters;
    for (int i = 0; i < n; ++i) clusters[find(i)].push_back(i);

    for (auto& [root, members] : clusters) {
        Vec2 sum{0, 0};
        for (int i : members) sum = sum + normals[i];
        if (norm(sum) < 1e-9)
            throw GermError("coray cluster has no well-defined mean conormal");
        Vec2 rep = normalized(sum);
        for (int i : members)
            if (angle_between(rep, normals[i]) > 2.5 * angle_tol)
                throw GermError("coray clustering is ambiguous: branch " +
                                germ.branches[i].name + " sits too far from its cluster mean");
        int idx = static_cast<int>(out.corays.size());
        out.corays.push_back({rep, members});
        for (int i : members) out.coray_of_branch[i] = idx;
    }
    // distinct corays must be well separated
    for (size_t a = 0; a < out.corays.size(); ++a)
        for (size_t b = a + 1; b < out.corays.size(); ++b)
            if (angle_between(out.corays[a].normal, out.corays[b].normal) < 2.0 * angle_tol)
                throw GermError("coray clustering is ambiguous: two clusters sit too close");
    return out;
}

}  // namespace arboreal
