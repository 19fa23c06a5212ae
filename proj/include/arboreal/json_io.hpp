/**
 * JSON serialization: germs, trees, graphs, and reports.  Uses ordered
 * maps throughout so identical inputs produce byte-identical outputs.
 */
#pragma once

#include <json.hpp>

#include "arboreal/cell_complex.hpp"
#include "arboreal/expand.hpp"
#include "arboreal/germ.hpp"
#include "arboreal/tree.hpp"

namespace arboreal {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// germs

/// Rational from a JSON value: "p/q" strings stay exact; plain numbers are
/// converted exactly from their binary value.
inline Rational rational_from_json(const Json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(s));
        boost::multiprecision::cpp_int num(s.substr(0, slash)), den(s.substr(slash + 1));
        return Rational(num) / Rational(den);
    }
    if (j.is_number_integer()) return Rational(j.get<long long>());
    return Rational(j.get<double>());
}

inline Json rational_to_json(const Rational& r) {
    if (boost::multiprecision::denominator(r) == 1)
        return Json(static_cast<long long>(boost::multiprecision::numerator(r)));
    return Json(boost::multiprecision::numerator(r).str() + "/" +
                boost::multiprecision::denominator(r).str());
}

inline CurveGerm2D germ_from_json(const Json& j) {
    CurveGerm2D germ;
    if (!j.contains("branches") || !j["branches"].is_array())
        throw GermError("germ file needs a 'branches' array");
    for (const Json& bj : j["branches"]) {
        Branch b;
        b.name = bj.at("name").get<std::string>();
        std::string side = bj.at("coorient").get<std::string>();
        if (side == "left") b.coorient = Side::Left;
        else if (side == "right") b.coorient = Side::Right;
        else throw GermError("branch " + b.name + ": coorient must be \"left\" or \"right\"");
        for (const Json& pt : bj.at("points")) {
            if (!pt.is_array() || pt.size() != 2)
                throw GermError("branch " + b.name + ": points must be [x, y] pairs");
            b.points.push_back({rational_from_json(pt[0]), rational_from_json(pt[1])});
        }
        germ.branches.push_back(std::move(b));
    }
    germ.validate();
    return germ;
}

inline Json germ_to_json(const CurveGerm2D& germ) {
    Json out;
    out["branches"] = Json::array();
    for (const Branch& b : germ.branches) {
        Json bj;
        bj["name"] = b.name;
        bj["points"] = Json::array();
        for (const RPoint& p : b.points)
            bj["points"].push_back({rational_to_json(p.x), rational_to_json(p.y)});
        bj["coorient"] = b.coorient == Side::Left ? "left" : "right";
        out["branches"].push_back(std::move(bj));
    }
    return out;
}

// ---------------------------------------------------------------------------
// trees

inline Json tree_to_json(const RootedTree& t) {
    Json out;
    out["vertices"] = Json::array();
    for (int v = 0; v < t.size(); ++v) out["vertices"].push_back(t.name(v));
    out["parent"] = Json::object();
    for (int v = 0; v < t.size(); ++v)
        if (t.parent(v) != -1) out["parent"][t.name(v)] = t.name(t.parent(v));
    out["root"] = t.name(t.root());
    return out;
}

inline Json leafy_to_json(const LeafyRootedForest& lf) {
    Json out;
    out["trees"] = Json::array();
    for (const RootedTree& t : lf.forest().trees()) out["trees"].push_back(tree_to_json(t));
    out["marked"] = Json::array();
    for (const std::string& m : lf.marked()) out["marked"].push_back(m);
    return out;
}

// ---------------------------------------------------------------------------
// complexes and homology

inline Json complex_to_json(const CellComplex& c) {
    Json out;
    out["cells"] = Json::array();
    for (int i = 0; i < c.size(); ++i) {
        Json cj;
        cj["id"] = c.cell(i).id;
        cj["dim"] = c.cell(i).dim;
        cj["faces"] = c.cell(i).faces;
        out["cells"].push_back(std::move(cj));
    }
    out["counts"] = Json::object();
    for (auto& [d, n] : c.cell_counts()) out["counts"][std::to_string(d)] = n;
    return out;
}

inline Json betti_to_json(const BettiProfile& p) {
    Json out;
    out["reduced_betti"] = Json::object();
    for (auto& [d, b] : p.reduced_betti) out["reduced_betti"][std::to_string(d)] = b;
    out["euler"] = p.euler;
    return out;
}

// ---------------------------------------------------------------------------
// graphs

inline Json vec2_to_json(const Vec2& v) { return Json::array({v.x, v.y}); }

inline Json graph_to_json(const ArborealGraph& g) {
    Json out;
    out["vertices"] = Json::array();
    for (size_t i = 0; i < g.vertices.size(); ++i) {
        Json vj;
        vj["id"] = i;
        vj["type"] = node_type_name(g.vertices[i].type);
        vj["point"] = vec2_to_json(g.vertices[i].point);
        out["vertices"].push_back(std::move(vj));
    }
    out["edges"] = Json::array();
    for (size_t e = 0; e < g.edges.size(); ++e) {
        const GraphEdge& ge = g.edges[e];
        Json ej;
        ej["id"] = e;
        ej["ends"] = Json::array();
        for (int k = 0; k < 2; ++k)
            ej["ends"].push_back(ge.ends[k] < 0 ? Json(nullptr) : Json(ge.ends[k]));
        ej["kind"] = ge.is_arc ? "arc" : "polyline";
        if (ge.is_arc) {
            ej["arc"] = Json{{"radius", ge.arc_radius},
                             {"theta0", ge.arc_theta0},
                             {"theta1", ge.arc_theta1}};
        }
        ej["points"] = Json::array();
        for (const Vec2& p : ge.points) ej["points"].push_back(vec2_to_json(p));
        ej["normals"] = Json::array();
        for (const Vec2& n : ge.normals) ej["normals"].push_back(vec2_to_json(n));
        out["edges"].push_back(std::move(ej));
    }
    out["census"] = Json::object();
    for (auto& [k, v] : g.node_census()) out["census"][k] = v;
    out["euler"] = g.euler_characteristic();
    return out;
}

inline NodeType node_type_from_name(const std::string& s) {
    if (s == "A2") return NodeType::A2;
    if (s == "X_CROSS") return NodeType::XCross;
    if (s == "END") return NodeType::End;
    if (s == "SMOOTH") return NodeType::Smooth;
    return NodeType::NotArboreal;
}

inline ArborealGraph graph_from_json(const Json& j) {
    ArborealGraph g;
    for (const Json& vj : j.at("vertices")) {
        GraphVertex v;
        v.point = {vj.at("point")[0].get<double>(), vj.at("point")[1].get<double>()};
        v.type = node_type_from_name(vj.at("type").get<std::string>());
        g.vertices.push_back(v);
    }
    for (const Json& ej : j.at("edges")) {
        GraphEdge e;
        for (int k = 0; k < 2; ++k)
            e.ends[k] = ej.at("ends")[k].is_null() ? -1 : ej.at("ends")[k].get<int>();
        e.is_arc = ej.at("kind").get<std::string>() == "arc";
        if (e.is_arc) {
            e.arc_radius = ej.at("arc").at("radius").get<double>();
            e.arc_theta0 = ej.at("arc").at("theta0").get<double>();
            e.arc_theta1 = ej.at("arc").at("theta1").get<double>();
        }
        for (const Json& p : ej.at("points")) e.points.push_back({p[0].get<double>(), p[1].get<double>()});
        for (const Json& n : ej.at("normals")) e.normals.push_back({n[0].get<double>(), n[1].get<double>()});
        if (e.points.size() < 2) throw GermError("graph edge needs at least two points");
        if (e.is_arc) {
            e.dir_at[0] = {-std::sin(e.arc_theta0), std::cos(e.arc_theta0)};
            e.dir_at[1] = {std::sin(e.arc_theta1), -std::cos(e.arc_theta1)};
        } else {
            e.dir_at[0] = normalized(e.points[1] - e.points[0]);
            e.dir_at[1] = normalized(e.points[e.points.size() - 2] - e.points.back());
        }
        g.edges.push_back(std::move(e));
    }
    return g;
}

// ---------------------------------------------------------------------------
// expansion constants

inline Json constants_to_json(const ExpansionConstants& k) {
    Json out;
    out["epsilon"] = k.epsilon;
    auto dump = [](const std::vector<StratumConstants>& v) {
        Json arr = Json::array();
        for (const auto& sc : v) arr.push_back(Json{{"r", sc.r}, {"d", sc.d}, {"s", sc.s}});
        return arr;
    };
    out["corays"] = dump(k.coray);
    out["arcs"] = dump(k.arc);
    return out;
}

inline ExpansionConstants constants_from_json(const Json& j) {
    ExpansionConstants k;
    k.epsilon = j.value("epsilon", 0.5);
    auto load = [](const Json& arr) {
        std::vector<StratumConstants> out;
        for (const Json& sj : arr)
            out.push_back({sj.at("r").get<double>(), sj.at("d").get<double>(), sj.at("s").get<double>()});
        return out;
    };
    k.coray = load(j.at("corays"));
    k.arc = load(j.at("arcs"));
    return k;
}

}  // namespace arboreal
