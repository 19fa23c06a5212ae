/**
 * The expansion algorithm for plane-curve germs.  Each origin coray
 * contributes a truncated cylinder (the circle |x| = r_i) cut down to the
 * expanded stratum {<x, n_i> >= s_i - r_i d_i}; each branch contributes
 * its positive-side offset at distance r_j, truncated outside the circle
 * of the unique origin coray below it.  Nodes where pieces meet are
 * classified against the three local models (A2, crossing, end) and the
 * result is returned as a cooriented graph.
 *
 * The output stays piecewise linear: the rectilinear corner models are
 * already arboreal and the comparison homeomorphism of the smoothed
 * models is certified separately, so no smoothing pass runs here.
 */
#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arboreal/germ.hpp"
#include "arboreal/random.hpp"

namespace arboreal {

class ConstantsError : public std::runtime_error {
public:
    explicit ConstantsError(const std::string& msg) : std::runtime_error(msg) {}
};

struct StratumConstants {
    double r = 0.0;  // radius
    double d = 0.0;  // displacement in (0,1)
    double s = 0.0;  // shift, |s| < r d / 2
};

struct ExpansionConstants {
    double epsilon = 0.5;                 // tube radius of the origin stratum
    std::vector<StratumConstants> coray;  // indexed like Stratification::corays
    std::vector<StratumConstants> arc;    // indexed by branch
};

struct ConstantsRanges {
    double origin_r_min = 0.2, origin_r_max = 0.4;
    double origin_rel_sep = 0.10;  // pairwise relative separation of coray radii
    double arc_r_min = 0.01, arc_r_max = 0.03;
    double displacement = 0.5;
    double shift_frac = 0.25;  // s drawn uniformly in +- frac * r * d
    double epsilon = 0.5;
    int max_attempts = 200;
};

struct Margins {
    double radii_rel_sep = 0.02;
    double arc_vs_origin_factor = 0.5;
    double transversality_angle = 1e-3;  // radians
    double node_separation = 1e-6;
    double end_margin_angle = 1e-3;  // radians, crossings vs arc endpoints
    double degeneracy_tol = 1e-9;
};

enum class ExpansionMode { Full, Intro };

// ---------------------------------------------------------------------------
// Output graph

enum class NodeType { A2, XCross, End, Smooth, NotArboreal };

inline const char* node_type_name(NodeType t) {
    switch (t) {
        case NodeType::A2: return "A2";
        case NodeType::XCross: return "X_CROSS";
        case NodeType::End: return "END";
        case NodeType::Smooth: return "SMOOTH";
        case NodeType::NotArboreal: return "NOT_ARBOREAL";
    }
    return "?";
}

struct GraphVertex {
    Vec2 point;
    NodeType type = NodeType::NotArboreal;
};

struct GraphEdge {
    std::vector<Vec2> points;   // polyline; arcs are sampled but keep exact params below
    std::vector<Vec2> normals;  // unit coorientation normal per point
    std::array<int, 2> ends{-1, -1};     // vertex ids; -1 = leaves the disk (open)
    std::array<Vec2, 2> dir_at{};        // unit germ direction away from each end
    bool is_arc = false;
    double arc_radius = 0.0, arc_theta0 = 0.0, arc_theta1 = 0.0;  // ccw angles when is_arc
};

struct ArborealGraph {
    std::vector<GraphVertex> vertices;
    std::vector<GraphEdge> edges;

    std::map<std::string, int> node_census() const {
        std::map<std::string, int> out;
        for (const auto& v : vertices) out[node_type_name(v.type)]++;
        return out;
    }

    /// Compactly-supported Euler characteristic: cells are the vertices
    /// and the (open) edges.
    long long euler_characteristic() const {
        return static_cast<long long>(vertices.size()) - static_cast<long long>(edges.size());
    }

    struct Incidence {
        int edge;
        int end;  // 0 or 1
    };
    std::vector<std::vector<Incidence>> incidences() const {
        std::vector<std::vector<Incidence>> out(vertices.size());
        for (int e = 0; e < static_cast<int>(edges.size()); ++e)
            for (int k = 0; k < 2; ++k)
                if (edges[e].ends[k] >= 0) out[edges[e].ends[k]].push_back({e, k});
        return out;
    }
};

// ---------------------------------------------------------------------------
// Node classification

struct NodeWitness {
    NodeType type = NodeType::NotArboreal;
    // A2 roles, as indices into the node's incidence list:
    int terminating = -1;
    int through_pos = -1;  // through half on the side the terminating coorientation points to
    int through_neg = -1;
    // XCross pairing
    std::array<std::pair<int, int>, 2> pairs{{{-1, -1}, {-1, -1}}};
    std::string diagnostic;
};

namespace detail {

struct HalfEdgeGerm {
    Vec2 dir;     // unit, away from the node
    Vec2 normal;  // unit coorientation normal at the node
};

inline bool consistent_through(const HalfEdgeGerm& a, const HalfEdgeGerm& b) {
    // travelling in through the a side and out the b side keeps the
    // coorientation on one side
    double sa = cross(a.dir, a.normal);
    double sb = cross(b.dir, b.normal);
    return sa * sb < 0.0;
}

inline bool directions_distinct(const std::vector<HalfEdgeGerm>& germs, double tol) {
    for (size_t i = 0; i < germs.size(); ++i)
        for (size_t j = i + 1; j < germs.size(); ++j)
            if (angle_between(germs[i].dir, germs[j].dir) < tol) return false;
    return true;
}

/// First of the candidate rays reached when sweeping from `from` in the
/// rotational direction of `toward` (its side of the `from` axis).
inline int first_ray_toward(const Vec2& from, const Vec2& toward, const Vec2& cand0,
                            const Vec2& cand1) {
    double sweep_sign = cross(from, toward) >= 0.0 ? 1.0 : -1.0;
    double base = angle_of(from);
    auto sweep_to = [&](const Vec2& v) {
        double a = (angle_of(v) - base) * sweep_sign;
        a = std::fmod(a, 2.0 * M_PI);
        if (a < 0) a += 2.0 * M_PI;
        return a;
    };
    return sweep_to(cand0) <= sweep_to(cand1) ? 0 : 1;
}

}  // namespace detail

/// Match a node's incident edge germs and coorientations against the
/// local models.  Purely geometric; works on hand-built graphs too.
inline NodeWitness classify_node(const ArborealGraph& graph, int vertex, double angle_tol = 0.02) {
    std::vector<detail::HalfEdgeGerm> germs;
    auto inc = graph.incidences()[vertex];
    for (auto [e, end] : inc) {
        const GraphEdge& ge = graph.edges[e];
        Vec2 n = end == 0 ? ge.normals.front() : ge.normals.back();
        germs.push_back({ge.dir_at[end], normalized(n)});
    }
    NodeWitness w;
    const int k = static_cast<int>(germs.size());

    if (k == 1) {
        w.type = NodeType::End;
        return w;
    }
    if (k == 2) {
        if (detail::directions_distinct(germs, angle_tol) &&
            detail::consistent_through(germs[0], germs[1])) {
            w.type = NodeType::Smooth;
        } else {
            w.diagnostic = "two edge germs do not form a smooth cooriented point";
        }
        return w;
    }
    if (k == 3) {
        if (!detail::directions_distinct(germs, angle_tol)) {
            w.diagnostic = "tangent edge germs at a trivalent node";
            return w;
        }
        for (int c = 0; c < 3; ++c) {
            int a = (c + 1) % 3, b = (c + 2) % 3;
            if (!detail::consistent_through(germs[a], germs[b])) continue;
            // terminating edge must come in from the positive side of the
            // through coorientation
            if (dot(germs[c].dir, germs[a].normal) <= 0.0) continue;
            if (dot(germs[c].dir, germs[b].normal) <= 0.0) continue;
            w.type = NodeType::A2;
            w.terminating = c;
            int pos = detail::first_ray_toward(germs[c].dir, germs[c].normal, germs[a].dir,
                                               germs[b].dir);
            w.through_pos = pos == 0 ? a : b;
            w.through_neg = pos == 0 ? b : a;
            return w;
        }
        w.diagnostic = "no assignment of a terminating edge matches the trivalent model";
        return w;
    }
    if (k == 4) {
        if (!detail::directions_distinct(germs, angle_tol)) {
            w.diagnostic = "tangent edge germs at a four-valent node";
            return w;
        }
        // cyclic order by angle; through pairs must alternate
        std::array<int, 4> order{0, 1, 2, 3};
        std::sort(order.begin(), order.end(),
                  [&](int i, int j) { return angle_of(germs[i].dir) < angle_of(germs[j].dir); });
        int p0 = order[0], p2 = order[2], p1 = order[1], p3 = order[3];
        if (detail::consistent_through(germs[p0], germs[p2]) &&
            detail::consistent_through(germs[p1], germs[p3])) {
            w.type = NodeType::XCross;
            auto norm_pair = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
            auto pa = norm_pair(p0, p2), pb = norm_pair(p1, p3);
            if (pb < pa) std::swap(pa, pb);
            w.pairs = {pa, pb};
            return w;
        }
        w.diagnostic = "four-valent node is not two transversally crossing cooriented curves";
        return w;
    }
    w.diagnostic = "valence " + std::to_string(k) + " exceeds every local model";
    return w;
}

// ---------------------------------------------------------------------------
// Constants validation and scene assembly

struct Violation {
    std::string code;
    std::string message;
    bool is_flag = false;  // flags report non-genericity without failing
    std::optional<Vec2> where;
};

struct ConstantsReport {
    std::vector<Violation> violations;
    bool pass() const {
        for (const auto& v : violations)
            if (!v.is_flag) return false;
        return true;
    }
    std::string first_error() const {
        for (const auto& v : violations)
            if (!v.is_flag) return v.code + ": " + v.message;
        return "";
    }
};

namespace detail {

struct CircleArc {
    int coray = -1;
    double r = 0.0;
    double theta_n = 0.0;  // angle of the coray normal
    double phi = 0.0;      // half-width; kept arc = [theta_n - phi, theta_n + phi]

    double psi_of(double theta) const { return normalize_angle_from(theta, theta_n - phi) - (theta_n - phi); }
    bool keeps(double theta, double margin = 0.0) const {
        double psi = psi_of(theta);
        return psi >= margin && psi <= 2.0 * phi - margin;
    }
    Vec2 point_at_psi(double psi) const {
        double th = theta_n - phi + psi;
        return {r * std::cos(th), r * std::sin(th)};
    }
};

struct OffsetPiece {
    int branch = -1;
    Polyline poly;               // clipped: starts at the truncation circle
    std::vector<Vec2> normals;   // per segment coorientation normal
    bool starts_on_circle = true;
};

struct Scene {
    Stratification strat;
    std::vector<CircleArc> arcs;
    std::vector<OffsetPiece> pieces;
    ConstantsReport report;
};

inline void basic_constant_checks(const Stratification& strat, const ExpansionConstants& k,
                                  const Margins& m, ConstantsReport& rep) {
    if (k.coray.size() != strat.corays.size() || k.arc.size() != strat.coray_of_branch.size()) {
        rep.violations.push_back({"constants-shape", "constants do not match the stratification", false, {}});
        return;
    }
    for (size_t i = 0; i < k.coray.size(); ++i)
        for (size_t j = i + 1; j < k.coray.size(); ++j) {
            double lo = std::min(k.coray[i].r, k.coray[j].r);
            if (std::abs(k.coray[i].r - k.coray[j].r) < m.radii_rel_sep * lo)
                rep.violations.push_back({"distinct-radii",
                                          "origin corays " + std::to_string(i) + " and " +
                                              std::to_string(j) + " have indistinct radii",
                                          false, {}});
        }
    double min_origin_r = 1e300;
    for (const auto& sc : k.coray) min_origin_r = std::min(min_origin_r, sc.r);
    auto check_stratum = [&](const StratumConstants& sc, const std::string& label, bool is_arc) {
        if (!(sc.d > 0.0 && sc.d < 1.0))
            rep.violations.push_back({"displacement-range", label + ": d outside (0,1)", false, {}});
        if (!(sc.r > 0.0))
            rep.violations.push_back({"radius-range", label + ": nonpositive radius", false, {}});
        if (std::abs(sc.s) >= sc.r * sc.d / 2.0)
            rep.violations.push_back({"shift-too-large", label + ": |s| >= r d / 2", false, {}});
        if (std::abs(sc.r * sc.d - sc.s) <= m.degeneracy_tol)
            rep.violations.push_back({"degenerate-threshold", label + ": s = r d touches the cylinder tangentially", true, {}});
        double tau = sc.s - sc.r * sc.d;
        if (!(std::abs(tau) < sc.r))
            rep.violations.push_back({"threshold-range", label + ": threshold outside (-r, r)", false, {}});
        if (is_arc && sc.r >= m.arc_vs_origin_factor * min_origin_r)
            rep.violations.push_back({"arc-radius-order",
                                      label + ": arc radius not below the origin radii", false, {}});
        if (!is_arc && sc.r >= k.epsilon)
            rep.violations.push_back({"radius-vs-epsilon", label + ": radius exceeds epsilon", false, {}});
    };
    for (size_t i = 0; i < k.coray.size(); ++i)
        check_stratum(k.coray[i], "coray " + std::to_string(i), false);
    for (size_t j = 0; j < k.arc.size(); ++j)
        check_stratum(k.arc[j], "arc " + std::to_string(j), true);
}

/// Build circle arcs, clipped offset pieces, and record violations.
inline Scene assemble_scene(const CurveGerm2D& germ, const ExpansionConstants& k,
                            ExpansionMode mode, const Margins& m, double conormal_tol) {
    Scene scene;
    scene.strat = stratify(germ, conormal_tol);
    basic_constant_checks(scene.strat, k, m, scene.report);
    if (!scene.report.pass()) return scene;

    for (size_t i = 0; i < scene.strat.corays.size(); ++i) {
        const auto& sc = k.coray[i];
        CircleArc arc;
        arc.coray = static_cast<int>(i);
        arc.r = sc.r;
        arc.theta_n = angle_of(scene.strat.corays[i].normal);
        arc.phi = std::acos((sc.s - sc.r * sc.d) / sc.r);
        scene.arcs.push_back(arc);
    }

    for (size_t j = 0; j < germ.branches.size(); ++j) {
        const Branch& br = germ.branches[j];
        double trunc_r = k.coray[scene.strat.coray_of_branch[j]].r;
        Polyline raw;
        std::vector<Vec2> seg_normals;
        if (mode == ExpansionMode::Full) {
            auto off = offset_polyline(br.as_polyline(), br.coorient == Side::Left, k.arc[j].r);
            if (!off) {
                scene.report.violations.push_back({"offset-self-intersection",
                                                   "offset of branch " + br.name +
                                                       " at radius " + std::to_string(k.arc[j].r) +
                                                       " degenerates",
                                                   false, {}});
                continue;
            }
            raw = *off;
        } else {
            raw = br.as_polyline();
        }
        for (size_t s = 0; s + 1 < raw.pts.size(); ++s) {
            Vec2 n = perp_left(raw.direction_at(static_cast<int>(s)));
            seg_normals.push_back(br.coorient == Side::Left ? n : Vec2{-n.x, -n.y});
        }

        // clip against the truncation circle: exactly one crossing expected
        std::vector<std::pair<size_t, double>> hits;
        for (size_t s = 0; s + 1 < raw.pts.size(); ++s)
            for (double t : segment_circle_params(raw.pts[s], raw.pts[s + 1], trunc_r))
                hits.emplace_back(s, t);
        if (hits.size() != 1) {
            scene.report.violations.push_back({"truncation-crossing",
                                               "branch " + br.name + " piece crosses its truncation circle " +
                                                   std::to_string(hits.size()) + " times",
                                               false, {}});
            continue;
        }
        auto [seg0, t0] = hits[0];
        OffsetPiece piece;
        piece.branch = static_cast<int>(j);
        piece.poly.pts.push_back(raw.point_at(static_cast<int>(seg0), t0));
        piece.normals.push_back(seg_normals[seg0]);
        for (size_t s = seg0 + 1; s < raw.pts.size(); ++s) {
            piece.poly.pts.push_back(raw.pts[s]);
            if (s < raw.pts.size() - 1) piece.normals.push_back(seg_normals[s]);
        }
        // clip the tail at the unit circle when it crosses it
        for (size_t s = 0; s + 1 < piece.poly.pts.size(); ++s) {
            auto ts = segment_circle_params(piece.poly.pts[s], piece.poly.pts[s + 1], 1.0);
            if (ts.empty()) continue;
            piece.poly.pts[s + 1] = piece.poly.point_at(static_cast<int>(s), ts.front());
            piece.poly.pts.resize(s + 2);
            piece.normals.resize(s + 1);
            break;
        }
        scene.pieces.push_back(std::move(piece));
    }
    return scene;
}

}  // namespace detail

/// Validation report for a draw of constants: distinct radii, ordering
/// discipline, transversality of everything the scene produces, margins
/// at the arc ends, and absence of triple points.
inline ConstantsReport check_constants(const CurveGerm2D& germ, const ExpansionConstants& k,
                                ExpansionMode mode = ExpansionMode::Full, Margins margins = {},
                                double conormal_tol = 0.175);

/// The total expansion: assembled, subdivided at nodes, classified.
inline ArborealGraph total_expansion(const CurveGerm2D& germ, const ExpansionConstants& k,
                              ExpansionMode mode = ExpansionMode::Full, Margins margins = {},
                              double conormal_tol = 0.175);

/// Seeded draw of sequentially small constants, rejection-resampled until
/// the checker passes.
template <class Rng>
ExpansionConstants generate_constants(const CurveGerm2D& germ, const Stratification& strat,
                                      Rng& rng, ConstantsRanges ranges = {},
                                      ExpansionMode mode = ExpansionMode::Full,
                                      Margins margins = {});

// ---------------------------------------------------------------------------
// implementation

namespace detail {

struct PendingNode {
    Vec2 point;
    NodeType hint;  // End / A2 / XCross before classification
    // location on a circle arc (psi) and/or on a piece (global param)
    struct OnArc { int arc; double psi; };
    struct OnPiece { int piece; double param; };
    std::vector<OnArc> on_arcs;
    std::vector<OnPiece> on_pieces;
};

inline double piece_param(const OffsetPiece& piece, size_t seg, double t) {
    return static_cast<double>(seg) + t;
}

}  // namespace detail

inline ArborealGraph build_graph_from_scene(detail::Scene& scene, const Margins& m,
                                            bool collect_only, ConstantsReport* out_report) {
    using detail::PendingNode;
    std::vector<PendingNode> nodes;
    auto& rep = scene.report;

    // arc endpoints: END nodes
    for (size_t a = 0; a < scene.arcs.size(); ++a) {
        const auto& arc = scene.arcs[a];
        for (double psi : {0.0, 2.0 * arc.phi}) {
            PendingNode nd;
            nd.point = arc.point_at_psi(psi);
            nd.hint = NodeType::End;
            nd.on_arcs.push_back({static_cast<int>(a), psi});
            nodes.push_back(std::move(nd));
        }
    }

    // piece start points terminate on their truncation circle: A2 nodes
    for (size_t p = 0; p < scene.pieces.size(); ++p) {
        const auto& piece = scene.pieces[p];
        int coray = scene.strat.coray_of_branch[piece.branch];
        const auto& arc = scene.arcs[coray];
        Vec2 q = piece.poly.pts.front();
        double theta = angle_of(q);
        if (!arc.keeps(theta, m.end_margin_angle)) {
            rep.violations.push_back({"termination-outside-arc",
                                      "branch piece terminates off the kept arc of its coray",
                                      false, q});
            continue;
        }
        PendingNode nd;
        nd.point = q;
        nd.hint = NodeType::A2;
        nd.on_arcs.push_back({coray, arc.psi_of(theta)});
        nd.on_pieces.push_back({static_cast<int>(p), 0.0});
        nodes.push_back(std::move(nd));
    }

    // piece x other circles: crossings
    for (size_t p = 0; p < scene.pieces.size(); ++p) {
        const auto& piece = scene.pieces[p];
        int own = scene.strat.coray_of_branch[piece.branch];
        for (size_t a = 0; a < scene.arcs.size(); ++a) {
            if (static_cast<int>(a) == own) continue;
            const auto& arc = scene.arcs[a];
            for (size_t s = 0; s + 1 < piece.poly.pts.size(); ++s)
                for (double t : segment_circle_params(piece.poly.pts[s], piece.poly.pts[s + 1], arc.r)) {
                    Vec2 q = piece.poly.point_at(static_cast<int>(s), t);
                    double theta = angle_of(q);
                    double psi = arc.psi_of(theta);
                    if (psi >= m.end_margin_angle && psi <= 2.0 * arc.phi - m.end_margin_angle) {
                        PendingNode nd;
                        nd.point = q;
                        nd.hint = NodeType::XCross;
                        nd.on_arcs.push_back({static_cast<int>(a), psi});
                        nd.on_pieces.push_back({static_cast<int>(p), detail::piece_param(piece, s, t)});
                        nodes.push_back(std::move(nd));
                    } else if (psi >= 2.0 * arc.phi + m.end_margin_angle &&
                               psi <= 2.0 * M_PI - m.end_margin_angle) {
                        // passes through the deleted arc: no node
                    } else {
                        rep.violations.push_back({"end-margin",
                                                  "piece crosses a cylinder too close to an arc endpoint",
                                                  false, q});
                    }
                }
        }
    }

    // piece x piece crossings
    for (size_t p = 0; p < scene.pieces.size(); ++p)
        for (size_t q = p + 1; q < scene.pieces.size(); ++q) {
            const auto& pa = scene.pieces[p];
            const auto& pb = scene.pieces[q];
            for (size_t sa = 0; sa + 1 < pa.poly.pts.size(); ++sa)
                for (size_t sb = 0; sb + 1 < pb.poly.pts.size(); ++sb) {
                    auto hit = segment_segment_params(pa.poly.pts[sa], pa.poly.pts[sa + 1],
                                                      pb.poly.pts[sb], pb.poly.pts[sb + 1]);
                    if (!hit) continue;
                    PendingNode nd;
                    nd.point = pa.poly.point_at(static_cast<int>(sa), hit->first);
                    nd.hint = NodeType::XCross;
                    nd.on_pieces.push_back({static_cast<int>(p), detail::piece_param(pa, sa, hit->first)});
                    nd.on_pieces.push_back({static_cast<int>(q), detail::piece_param(pb, sb, hit->second)});
                    nodes.push_back(std::move(nd));
                }
        }

    // triple points / node separation
    for (size_t i = 0; i < nodes.size(); ++i)
        for (size_t j = i + 1; j < nodes.size(); ++j)
            if (norm(nodes[i].point - nodes[j].point) < m.node_separation)
                rep.violations.push_back({"triple-point",
                                          "two nodes nearly coincide", false, nodes[i].point});

    ArborealGraph graph;
    if (collect_only || !rep.pass()) {
        if (out_report) *out_report = rep;
        return graph;
    }

    // vertices
    for (const auto& nd : nodes) graph.vertices.push_back({nd.point, nd.hint});

    // circle arc edges, subdivided at node angles
    const double arc_sample_step = M_PI / 72.0;  // 2.5 degrees
    for (size_t a = 0; a < scene.arcs.size(); ++a) {
        const auto& arc = scene.arcs[a];
        std::vector<std::pair<double, int>> cuts;  // (psi, node id)
        for (size_t nidx = 0; nidx < nodes.size(); ++nidx)
            for (const auto& on : nodes[nidx].on_arcs)
                if (on.arc == static_cast<int>(a)) cuts.emplace_back(on.psi, static_cast<int>(nidx));
        std::sort(cuts.begin(), cuts.end());
        for (size_t c = 0; c + 1 < cuts.size(); ++c) {
            double psi0 = cuts[c].first, psi1 = cuts[c + 1].first;
            GraphEdge e;
            e.is_arc = true;
            e.arc_radius = arc.r;
            e.arc_theta0 = arc.theta_n - arc.phi + psi0;
            e.arc_theta1 = arc.theta_n - arc.phi + psi1;
            int samples = std::max(2, static_cast<int>(std::ceil((psi1 - psi0) / arc_sample_step)) + 1);
            for (int i = 0; i < samples; ++i) {
                double psi = psi0 + (psi1 - psi0) * i / (samples - 1);
                Vec2 pt = arc.point_at_psi(psi);
                e.points.push_back(pt);
                e.normals.push_back(normalized(pt));  // outward radial coorientation
            }
            e.ends = {cuts[c].second, cuts[c + 1].second};
            double th0 = e.arc_theta0, th1 = e.arc_theta1;
            e.dir_at[0] = Vec2{-std::sin(th0), std::cos(th0)};           // ccw into the arc
            e.dir_at[1] = Vec2{std::sin(th1), -std::cos(th1)};           // cw into the arc
            graph.edges.push_back(std::move(e));
        }
    }

    // offset piece edges, subdivided at crossing params
    for (size_t p = 0; p < scene.pieces.size(); ++p) {
        const auto& piece = scene.pieces[p];
        std::vector<std::pair<double, int>> cuts;
        for (size_t nidx = 0; nidx < nodes.size(); ++nidx)
            for (const auto& on : nodes[nidx].on_pieces)
                if (on.piece == static_cast<int>(p)) cuts.emplace_back(on.param, static_cast<int>(nidx));
        std::sort(cuts.begin(), cuts.end());
        const double total = static_cast<double>(piece.poly.pts.size() - 1);
        cuts.emplace_back(total, -1);  // open tail end
        for (size_t c = 0; c + 1 < cuts.size(); ++c) {
            double u0 = cuts[c].first, u1 = cuts[c + 1].first;
            if (u1 - u0 < 1e-12) continue;
            GraphEdge e;
            auto eval = [&](double u) {
                int seg = std::min(static_cast<int>(u), static_cast<int>(total) - 1);
                return piece.poly.point_at(seg, u - seg);
            };
            e.points.push_back(eval(u0));
            e.normals.push_back(piece.normals[std::min(static_cast<size_t>(u0), piece.normals.size() - 1)]);
            for (int s = static_cast<int>(std::floor(u0)) + 1; s <= static_cast<int>(std::ceil(u1)) - 1; ++s) {
                if (s <= u0 + 1e-12 || s >= u1 - 1e-12) continue;
                e.points.push_back(piece.poly.pts[s]);
                e.normals.push_back(piece.normals[std::min(static_cast<size_t>(s), piece.normals.size() - 1)]);
            }
            e.points.push_back(eval(u1));
            e.normals.push_back(piece.normals[std::min(static_cast<size_t>(
                                    std::min(u1, total - 1e-9)), piece.normals.size() - 1)]);
            e.ends = {cuts[c].second, cuts[c + 1].second};
            e.dir_at[0] = normalized(e.points[1] - e.points[0]);
            e.dir_at[1] = normalized(e.points[e.points.size() - 2] - e.points.back());
            graph.edges.push_back(std::move(e));
        }
    }

    // transversality at every node, then classification
    auto incid = graph.incidences();
    for (size_t v = 0; v < graph.vertices.size(); ++v) {
        for (size_t i = 0; i < incid[v].size(); ++i)
            for (size_t j = i + 1; j < incid[v].size(); ++j) {
                const auto& ei = graph.edges[incid[v][i].edge];
                const auto& ej = graph.edges[incid[v][j].edge];
                Vec2 di = ei.dir_at[incid[v][i].end];
                Vec2 dj = ej.dir_at[incid[v][j].end];
                if (angle_between(di, dj) < m.transversality_angle)
                    rep.violations.push_back({"non-transverse",
                                              "edge germs are tangent at a node", false,
                                              graph.vertices[v].point});
            }
    }
    if (out_report) *out_report = rep;
    return graph;
}

inline ConstantsReport check_constants(const CurveGerm2D& germ, const ExpansionConstants& k,
                                       ExpansionMode mode, Margins margins, double conormal_tol) {
    detail::Scene scene = detail::assemble_scene(germ, k, mode, margins, conormal_tol);
    if (!scene.report.pass()) return scene.report;
    ConstantsReport rep;
    build_graph_from_scene(scene, margins, true, &rep);
    return rep;
}

inline ArborealGraph total_expansion(const CurveGerm2D& germ, const ExpansionConstants& k,
                                     ExpansionMode mode, Margins margins, double conormal_tol) {
    detail::Scene scene = detail::assemble_scene(germ, k, mode, margins, conormal_tol);
    if (!scene.report.pass())
        throw ConstantsError("constants not sequentially small: " + scene.report.first_error());
    ConstantsReport rep;
    ArborealGraph graph = build_graph_from_scene(scene, margins, false, &rep);
    if (!rep.pass())
        throw ConstantsError("constants not sequentially small: " + rep.first_error());
    for (size_t v = 0; v < graph.vertices.size(); ++v) {
        NodeWitness w = classify_node(graph, static_cast<int>(v));
        if (w.type == NodeType::NotArboreal)
            throw ConstantsError("node at (" + std::to_string(graph.vertices[v].point.x) + ", " +
                                 std::to_string(graph.vertices[v].point.y) +
                                 ") failed classification: " + w.diagnostic);
        graph.vertices[v].type = w.type;
    }
    return graph;
}

template <class Rng>
ExpansionConstants generate_constants(const CurveGerm2D& germ, const Stratification& strat,
                                      Rng& rng, ConstantsRanges ranges, ExpansionMode mode,
                                      Margins margins) {
    auto log_uniform = [&](double lo, double hi) {
        return lo * std::exp(uniform_double(rng, 0.0, std::log(hi / lo)));
    };
    for (int attempt = 0; attempt < ranges.max_attempts; ++attempt) {
        ExpansionConstants k;
        k.epsilon = ranges.epsilon;
        // displacements first, then radii following the poset from minima
        // (the origin) to maxima (the arcs), then shifts
        bool separated = true;
        for (size_t i = 0; i < strat.corays.size(); ++i) {
            StratumConstants sc;
            sc.d = ranges.displacement;
            sc.r = log_uniform(ranges.origin_r_min, ranges.origin_r_max);
            k.coray.push_back(sc);
        }
        for (size_t i = 0; i < k.coray.size() && separated; ++i)
            for (size_t j = i + 1; j < k.coray.size(); ++j)
                if (std::abs(k.coray[i].r - k.coray[j].r) <
                    ranges.origin_rel_sep * std::min(k.coray[i].r, k.coray[j].r)) {
                    separated = false;
                    break;
                }
        if (!separated) continue;
        for (size_t j = 0; j < strat.coray_of_branch.size(); ++j) {
            StratumConstants sc;
            sc.d = ranges.displacement;
            sc.r = uniform_double(rng, ranges.arc_r_min, ranges.arc_r_max);
            k.arc.push_back(sc);
        }
        for (auto& sc : k.coray) sc.s = uniform_double(rng, -1.0, 1.0) * ranges.shift_frac * sc.r * sc.d;
        for (auto& sc : k.arc) sc.s = uniform_double(rng, -1.0, 1.0) * ranges.shift_frac * sc.r * sc.d;
        if (check_constants(germ, k, mode, margins).pass()) return k;
    }
    throw ConstantsError("no sequentially small constants found after " +
                         std::to_string(ranges.max_attempts) + " draws");
}

// ---------------------------------------------------------------------------
// The per-stratum pieces as standalone curve sets (report/debug surface)

struct CurveSet {
    std::string description;
    std::vector<Polyline> pieces;
};

/// Truncated cylinder of an origin coray: the full circle |x| = r_i.
inline CurveSet truncated_cylinder_origin(const Stratification& strat, const ExpansionConstants& k,
                                          int coray) {
    CurveSet out;
    out.description = "circle of radius " + std::to_string(k.coray[coray].r);
    Polyline p;
    for (int i = 0; i <= 144; ++i) {
        double th = 2.0 * M_PI * i / 144;
        p.pts.push_back({k.coray[coray].r * std::cos(th), k.coray[coray].r * std::sin(th)});
    }
    out.pieces.push_back(std::move(p));
    return out;
}

/// Truncated cylinder of an arc stratum: both one-sided offsets of the
/// branch, truncated outside the circle of the coray below it.
inline CurveSet truncated_cylinder_arc(const CurveGerm2D& germ, const Stratification& strat,
                                       const ExpansionConstants& k, int branch) {
    CurveSet out;
    const Branch& br = germ.branches[branch];
    double trunc_r = k.coray[strat.coray_of_branch[branch]].r;
    out.description = "offsets of " + br.name + " at distance " + std::to_string(k.arc[branch].r) +
                      " outside radius " + std::to_string(trunc_r);
    for (bool positive : {true, false}) {
        bool left = (br.coorient == Side::Left) == positive;
        auto off = offset_polyline(br.as_polyline(), left, k.arc[branch].r);
        if (!off) throw ConstantsError("offset of branch " + br.name + " degenerates");
        // keep the part outside the truncation circle: start at the last
        // crossing (the piece stays outside from there on)
        std::vector<std::pair<size_t, double>> hits;
        for (size_t s = 0; s + 1 < off->pts.size(); ++s)
            for (double t : segment_circle_params(off->pts[s], off->pts[s + 1], trunc_r))
                hits.emplace_back(s, t);
        Polyline kept;
        if (hits.empty()) {
            kept = *off;
        } else {
            auto [seg0, t0] = hits.back();
            kept.pts.push_back(off->point_at(static_cast<int>(seg0), t0));
            for (size_t s = seg0 + 1; s < off->pts.size(); ++s) kept.pts.push_back(off->pts[s]);
        }
        out.pieces.push_back(std::move(kept));
    }
    return out;
}

/// Expanded stratum of an origin coray: the kept subarc of its circle.
inline CurveSet expanded_stratum_origin(const Stratification& strat, const ExpansionConstants& k,
                                        int coray) {
    const auto& sc = k.coray[coray];
    double tau = sc.s - sc.r * sc.d;
    if (!(std::abs(tau) < sc.r)) throw ConstantsError("threshold outside (-r, r)");
    detail::CircleArc arc;
    arc.r = sc.r;
    arc.theta_n = angle_of(strat.corays[coray].normal);
    arc.phi = std::acos(tau / sc.r);
    CurveSet out;
    out.description = "kept arc, half-width " + std::to_string(arc.phi);
    Polyline p;
    for (int i = 0; i <= 144; ++i) p.pts.push_back(arc.point_at_psi(2.0 * arc.phi * i / 144));
    out.pieces.push_back(std::move(p));
    return out;
}

/// Expanded stratum of an arc stratum: the positive-side offset only.
inline CurveSet expanded_stratum_arc(const CurveGerm2D& germ, const Stratification& strat,
                                     const ExpansionConstants& k, int branch) {
    CurveSet both = truncated_cylinder_arc(germ, strat, k, branch);
    CurveSet out;
    out.description = "positive offset of " + germ.branches[branch].name;
    out.pieces.push_back(both.pieces[0]);
    return out;
}

}  // namespace arboreal
