#pragma once

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mapscale/experiments.hpp"
#include "mapscale/mapper.hpp"
#include "mapscale/persistence.hpp"
#include "mapscale/pseudometric.hpp"
#include "mapscale/tower_builders.hpp"

namespace mapscale {

using nlohmann::json;

namespace io_detail {
inline std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return in;
}
inline std::vector<std::string> tokens(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}
inline Rational rational_from_json(const json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    return Rational::parse(j.dump());
}
}  // namespace io_detail

/// Complex file: one maximal simplex per line, whitespace-separated vertex
/// ids; lines starting with '#' are comments.
inline SimplicialComplex read_complex(const std::string& path) {
    auto in = io_detail::open_or_throw(path);
    std::vector<Simplex> maximal;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto toks = io_detail::tokens(line);
        if (toks.empty()) continue;
        Simplex s;
        for (const auto& t : toks) {
            try {
                s.push_back(std::stoi(t));
            } catch (...) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": bad vertex id '" + t + "'");
            }
        }
        maximal.push_back(make_simplex(std::move(s)));
    }
    if (maximal.empty()) throw std::runtime_error(path + ": no simplices");
    return SimplicialComplex::from_maximal(maximal);
}

/// Codomain metric CSV: first row point ids, then the distance matrix.
inline FiniteMetricSpace read_metric_csv(const std::string& path) {
    auto in = io_detail::open_or_throw(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty metric file");
    auto split_csv = [](const std::string& l) {
        std::vector<std::string> out;
        std::string cur;
        for (char ch : l) {
            if (ch == ',') { out.push_back(cur); cur.clear(); }
            else if (!std::isspace((unsigned char)ch)) cur.push_back(ch);
        }
        out.push_back(cur);
        return out;
    };
    std::vector<int> ids;
    for (const auto& t : split_csv(line)) ids.push_back(std::stoi(t));
    std::vector<std::vector<double>> d;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto toks = split_csv(line);
        if (toks.size() != ids.size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": row length mismatch");
        std::vector<double> row;
        for (const auto& t : toks) row.push_back(std::stod(t));
        d.push_back(std::move(row));
    }
    // ids must come back sorted for index lookups
    std::vector<int> order(ids.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return ids[a] < ids[b]; });
    std::vector<int> sorted_ids;
    std::vector<std::vector<double>> sorted_d(ids.size(), std::vector<double>(ids.size()));
    for (size_t i = 0; i < order.size(); ++i) {
        sorted_ids.push_back(ids[order[i]]);
        for (size_t j = 0; j < order.size(); ++j) sorted_d[i][j] = d[order[i]][order[j]];
    }
    return FiniteMetricSpace(std::move(sorted_ids), std::move(sorted_d));
}

/// Function file: lines `vertex value` (real mode) or `vertex point_id`
/// (when a codomain metric is supplied).
inline VertexFunction read_function(const std::string& path, bool point_valued) {
    auto in = io_detail::open_or_throw(path);
    std::map<VertexId, Rational> reals;
    std::map<VertexId, int> points;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto toks = io_detail::tokens(line);
        if (toks.size() != 2)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 'vertex value'");
        int v;
        try {
            v = std::stoi(toks[0]);
        } catch (...) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad vertex id");
        }
        if (point_valued)
            points[v] = std::stoi(toks[1]);
        else
            reals[v] = Rational::parse(toks[1]);
    }
    return point_valued ? VertexFunction::from_points(points) : VertexFunction::from_reals(reals);
}

/// Diagram file: `k birth death` per line with `inf` for +infinity, sorted.
inline void write_diagram(std::ostream& os, const PersistenceDiagram& D) {
    PersistenceDiagram copy = D;
    copy.normalize();
    os << std::setprecision(17);
    for (const auto& pt : copy.points) {
        os << pt.dim << " " << pt.birth << " ";
        if (pt.death == kInf) os << "inf";
        else os << pt.death;
        os << "\n";
    }
}

inline PersistenceDiagram read_diagram(const std::string& path) {
    auto in = io_detail::open_or_throw(path);
    PersistenceDiagram D;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto toks = io_detail::tokens(line);
        if (toks.size() != 3)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 'k birth death'");
        DiagramPoint pt;
        pt.dim = std::stoi(toks[0]);
        pt.birth = std::stod(toks[1]);
        pt.death = toks[2] == "inf" ? kInf : std::stod(toks[2]);
        D.points.push_back(pt);
    }
    D.normalize();
    return D;
}

/// DOT view of the 1-skeleton of a mapper nerve; node labels carry the
/// parent element and the component anchor.
inline void write_dot(std::ostream& os, const SimplicialComplex& nerve_complex,
                      const std::vector<PullbackElement>& elements) {
    os << "graph mapper {\n";
    for (VertexId v : nerve_complex.vertices()) {
        std::string label = (size_t)v < elements.size() ? elements[v].label() : std::to_string(v);
        os << "  n" << v << " [label=\"" << label << "\"];\n";
    }
    for (const auto& e : nerve_complex.simplices(1))
        os << "  n" << e[0] << " -- n" << e[1] << ";\n";
    os << "}\n";
}

inline json complex_to_json(const SimplicialComplex& K) {
    json j;
    j["vertices"] = K.vertices();
    std::vector<std::vector<int>> simplices;
    for (const auto& s : K.all_simplices()) simplices.push_back(s);
    j["simplices"] = simplices;
    return j;
}

inline json mapper_to_json(const SimplicialComplex& nerve_complex,
                           const std::vector<PullbackElement>& elements) {
    json j = complex_to_json(nerve_complex);
    json labels = json::array();
    for (const auto& el : elements) {
        json l;
        l["parent"] = el.parent;
        l["label"] = el.label();
        l["vertices"] = el.vertices;
        labels.push_back(l);
    }
    j["elements"] = labels;
    return j;
}

/// Tower output: array of {scale, complex, vertex_map_to_next}.
inline json mapper_tower_to_json(const MapperTower& mt) {
    json arr = json::array();
    for (size_t i = 0; i < mt.tower.size(); ++i) {
        json entry;
        entry["scale"] = mt.tower.scales[i];
        entry["complex"] = mapper_to_json(mt.tower.complexes[i], mt.elements[i]);
        if (i + 1 < mt.tower.size()) {
            json vm = json::object();
            for (const auto& [v, w] : mt.tower.vertex_maps[i]) vm[std::to_string(v)] = w;
            entry["vertex_map_to_next"] = vm;
        }
        arr.push_back(entry);
    }
    return arr;
}

inline json goodness_to_json(const GoodnessReport& rep) {
    json j;
    j["pass"] = rep.pass;
    j["c"] = rep.c.to_double();
    j["s"] = rep.s.to_double();
    j["resolution_and_diameter"] = {{"pass", rep.cond1_pass}, {"vacuous", rep.cond1_vacuous}};
    j["element_diameters"] = {{"pass", rep.cond2_pass}, {"witnesses", rep.cond2_witnesses}};
    j["probe_containment"] = {{"pass", rep.cond3_pass}, {"witnesses", rep.cond3_witnesses}};
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

inline void write_pseudometric_csv(std::ostream& os, const PullbackPseudometric& pm) {
    os << std::setprecision(17);
    for (size_t i = 0; i < pm.vertices.size(); ++i)
        os << (i ? "," : "") << pm.vertices[i];
    os << "\n";
    for (VertexId x : pm.vertices) {
        bool first = true;
        for (VertexId y : pm.vertices) {
            double d = pm.d(x, y);
            if (!first) os << ",";
            if (d == kInf) os << "inf";
            else os << d;
            first = false;
        }
        os << "\n";
    }
}

/// Filtration dump: lines `eps k v0 ... vk`, sorted by (eps, k).
inline void write_filtration(std::ostream& os, const CechFiltration& cf) {
    os << std::setprecision(17);
    std::set<Simplex> seen;
    for (size_t i = 0; i < cf.complexes.size(); ++i) {
        for (const auto& s : cf.complexes[i].all_simplices()) {
            if (seen.count(s)) continue;
            seen.insert(s);
            os << cf.scales[i] << " " << (s.size() - 1);
            for (VertexId v : s) os << " " << v;
            os << "\n";
        }
    }
}

/// Tower spec file: {"type": "balls"|"nets"|"dyadic"|"explicit",
///                   "params": {...}, "scales": [...]}.
inline CoverTower read_tower_spec(const json& spec) {
    const std::string type = spec.at("type").get<std::string>();
    std::vector<Rational> scales;
    if (spec.contains("scales"))
        for (const auto& s : spec.at("scales")) scales.push_back(io_detail::rational_from_json(s));
    const json& params = spec.at("params");

    if (type == "dyadic") {
        Rational thicken(0);
        if (params.contains("thicken")) thicken = io_detail::rational_from_json(params.at("thicken"));
        return build_dyadic_tower(io_detail::rational_from_json(params.at("M")),
                                  io_detail::rational_from_json(params.at("s")), scales, thicken);
    }
    if (type == "balls") {
        Rational nu = io_detail::rational_from_json(params.at("nu"));
        if (params.contains("metric_csv")) {
            auto Z = std::make_shared<Codomain>(Codomain{read_metric_csv(params.at("metric_csv"))});
            std::vector<int> P;
            if (params.contains("sample"))
                for (const auto& p : params.at("sample")) P.push_back(p.get<int>());
            else
                P = Z->metric().point_ids;
            return build_ball_tower_metric(Z, P, nu, scales);
        }
        RealSegment seg(io_detail::rational_from_json(params.at("lo")),
                        io_detail::rational_from_json(params.at("hi")));
        std::vector<Rational> P;
        for (const auto& p : params.at("sample")) P.push_back(io_detail::rational_from_json(p));
        return build_ball_tower_segment(seg, P, nu, scales);
    }
    if (type == "nets") {
        auto Z = std::make_shared<Codomain>(Codomain{read_metric_csv(params.at("metric_csv"))});
        Rational rho = params.contains("rho") ? io_detail::rational_from_json(params.at("rho"))
                                              : Rational(11);
        return build_net_tower(Z, rho).tower;
    }
    if (type == "explicit") {
        CoverTower W;
        if (params.contains("metric_csv"))
            W.codomain = std::make_shared<Codomain>(Codomain{read_metric_csv(params.at("metric_csv"))});
        else
            W.codomain = std::make_shared<Codomain>(
                Codomain{RealSegment(io_detail::rational_from_json(params.at("lo")),
                                     io_detail::rational_from_json(params.at("hi")))});
        for (const auto& cov_json : params.at("covers")) {
            Cover cov;
            Rational sc = io_detail::rational_from_json(cov_json.at("scale"));
            W.exact_scales.push_back(sc);
            W.scales.push_back(sc.to_double());
            for (const auto& el_json : cov_json.at("elements")) {
                CoverElement e;
                e.id = (int)cov.elements.size();
                if (el_json.contains("points")) {
                    ExplicitSet s;
                    for (const auto& p : el_json.at("points")) s.members.push_back(p.get<int>());
                    std::sort(s.members.begin(), s.members.end());
                    e.extent = std::move(s);
                } else {
                    e.extent = Interval(io_detail::rational_from_json(el_json.at("lo")),
                                        io_detail::rational_from_json(el_json.at("hi")),
                                        el_json.value("open_lo", false),
                                        el_json.value("open_hi", false));
                }
                cov.elements.push_back(std::move(e));
            }
            W.covers.push_back(std::move(cov));
        }
        for (const auto& m : params.at("maps")) W.maps.push_back(m.get<std::vector<int>>());
        if (spec.contains("goodness")) {
            W.goodness = GoodnessCertificate{
                io_detail::rational_from_json(spec.at("goodness").at("c")),
                io_detail::rational_from_json(spec.at("goodness").at("s"))};
        }
        W.validate();
        return W;
    }
    throw std::runtime_error("read_tower_spec: unknown tower type '" + type + "'");
}

inline json report_to_json(const ExperimentReport& rep) {
    json j;
    j["name"] = rep.name;
    j["bound"] = rep.bound_formula;
    j["grid_note"] = rep.grid_note;
    j["pass"] = rep.pass;
    j["pass_rate"] = rep.pass_rate();
    j["raw_violations"] = rep.raw_violations;
    j["slack_violations"] = rep.slack_violations;
    json trials = json::array();
    for (const auto& t : rep.trials) {
        json tj;
        tj["trial"] = t.trial;
        tj["measured"] = t.measured;
        tj["bound"] = t.bound == kInf ? json("inf") : json(t.bound);
        tj["slack"] = t.slack;
        tj["delta"] = t.delta;
        tj["eta"] = t.eta;
        tj["pass_raw"] = t.pass_raw;
        tj["pass"] = t.pass_slack;
        if (!t.note.empty()) tj["note"] = t.note;
        trials.push_back(tj);
    }
    j["trials"] = trials;
    return j;
}

inline void print_report_summary(std::ostream& os, const ExperimentReport& rep) {
    os << "experiment " << rep.name << ": " << (rep.pass ? "PASS" : "FAIL") << " ("
       << rep.trials.size() << " trials, " << rep.raw_violations << " raw / "
       << rep.slack_violations << " beyond-slack violations)\n";
    os << "  bound: " << rep.bound_formula << "; " << rep.grid_note << "\n";
    for (const auto& t : rep.trials)
        os << "  trial " << t.trial << ": measured " << t.measured << " vs bound " << t.bound
           << (t.pass_slack ? "" : "  <-- VIOLATION") << "\n";
}

}  // namespace mapscale
