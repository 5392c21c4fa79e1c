#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mapscale/rational.hpp"
#include "mapscale/simplicial_complex.hpp"

namespace mapscale {

/// Finite metric (or pseudo-metric) space given by a distance matrix.
/// Triangle violations are collected as warnings, not errors.
struct FiniteMetricSpace {
    std::vector<int> point_ids;                 // sorted
    std::vector<std::vector<double>> dist;      // indexed by position
    std::vector<std::string> warnings;

    FiniteMetricSpace() = default;
    FiniteMetricSpace(std::vector<int> ids, std::vector<std::vector<double>> d)
        : point_ids(std::move(ids)), dist(std::move(d)) {
        const size_t n = point_ids.size();
        if (dist.size() != n) throw std::invalid_argument("FiniteMetricSpace: matrix size mismatch");
        for (size_t i = 0; i < n; ++i) {
            if (dist[i].size() != n) throw std::invalid_argument("FiniteMetricSpace: matrix not square");
            if (dist[i][i] != 0.0) throw std::invalid_argument("FiniteMetricSpace: nonzero diagonal");
            for (size_t j = 0; j < n; ++j) {
                if (dist[i][j] < 0.0) throw std::invalid_argument("FiniteMetricSpace: negative distance");
                if (dist[i][j] != dist[j][i]) throw std::invalid_argument("FiniteMetricSpace: asymmetric matrix");
            }
        }
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                for (size_t k = 0; k < n; ++k)
                    if (dist[i][j] > dist[i][k] + dist[k][j] + 1e-12) {
                        warnings.push_back("triangle inequality violated on (" +
                                           std::to_string(point_ids[i]) + "," + std::to_string(point_ids[j]) +
                                           "," + std::to_string(point_ids[k]) + ")");
                        k = n; j = n; i = n;  // one witness is enough
                    }
    }

    size_t size() const { return point_ids.size(); }

    int index_of(int id) const {
        auto it = std::lower_bound(point_ids.begin(), point_ids.end(), id);
        if (it == point_ids.end() || *it != id)
            throw std::invalid_argument("FiniteMetricSpace: unknown point id " + std::to_string(id));
        return (int)(it - point_ids.begin());
    }

    double d(int id_a, int id_b) const { return dist[index_of(id_a)][index_of(id_b)]; }

    double diameter() const {
        double m = 0;
        for (const auto& row : dist)
            for (double v : row) m = std::max(m, v);
        return m;
    }

    /// Max over points of the distance to the nearest member of `subset` (ids).
    double covering_radius(const std::vector<int>& subset) const {
        double worst = 0;
        for (int p : point_ids) {
            double best = std::numeric_limits<double>::infinity();
            for (int q : subset) best = std::min(best, d(p, q));
            worst = std::max(worst, best);
        }
        return worst;
    }

    /// Nearest member of `subset` to `id`; ties broken by smallest id.
    int nearest_in(int id, const std::vector<int>& subset) const {
        double best = std::numeric_limits<double>::infinity();
        int who = -1;
        for (int q : subset) {
            double dd = d(id, q);
            if (dd < best || (dd == best && q < who)) { best = dd; who = q; }
        }
        if (who < 0) throw std::invalid_argument("nearest_in: empty subset");
        return who;
    }

    static FiniteMetricSpace from_points_2d(const std::vector<std::pair<double, double>>& pts) {
        std::vector<int> ids(pts.size());
        for (size_t i = 0; i < pts.size(); ++i) ids[i] = (int)i;
        std::vector<std::vector<double>> d(pts.size(), std::vector<double>(pts.size(), 0.0));
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = 0; j < pts.size(); ++j)
                d[i][j] = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
        return FiniteMetricSpace(std::move(ids), std::move(d));
    }
};

/// Closed segment of the real line, with exact endpoints.
struct RealSegment {
    Rational lo, hi;
    RealSegment() : lo(0), hi(1) {}
    RealSegment(Rational l, Rational h) : lo(l), hi(h) {
        if (!(lo <= hi)) throw std::invalid_argument("RealSegment: lo > hi");
    }
    Rational diameter() const { return hi - lo; }
};

/// The codomain Z of the lens function: a real segment or a finite metric space.
struct Codomain {
    std::variant<RealSegment, FiniteMetricSpace> space;

    Codomain() : space(RealSegment()) {}
    explicit Codomain(RealSegment s) : space(std::move(s)) {}
    explicit Codomain(FiniteMetricSpace m) : space(std::move(m)) {}

    bool is_real() const { return std::holds_alternative<RealSegment>(space); }
    const RealSegment& segment() const { return std::get<RealSegment>(space); }
    const FiniteMetricSpace& metric() const { return std::get<FiniteMetricSpace>(space); }

    double diameter() const {
        return is_real() ? segment().diameter().to_double() : metric().diameter();
    }
};

/// Function given on a vertex set: real-valued (exact rationals) or mapping
/// into the points of a finite metric codomain.
struct VertexFunction {
    bool real = true;
    std::map<VertexId, Rational> real_values;
    std::map<VertexId, int> point_values;

    static VertexFunction from_reals(std::map<VertexId, Rational> vals) {
        VertexFunction f;
        f.real = true;
        f.real_values = std::move(vals);
        return f;
    }
    static VertexFunction from_points(std::map<VertexId, int> vals) {
        VertexFunction f;
        f.real = false;
        f.point_values = std::move(vals);
        return f;
    }

    bool defined_on(const std::vector<VertexId>& verts) const {
        for (VertexId v : verts)
            if (real ? !real_values.count(v) : !point_values.count(v)) return false;
        return true;
    }

    const Rational& at(VertexId v) const {
        auto it = real_values.find(v);
        if (it == real_values.end())
            throw std::invalid_argument("VertexFunction: no value at vertex " + std::to_string(v));
        return it->second;
    }
    int point_at(VertexId v) const {
        auto it = point_values.find(v);
        if (it == point_values.end())
            throw std::invalid_argument("VertexFunction: no value at vertex " + std::to_string(v));
        return it->second;
    }

    Rational min_value() const {
        if (!real || real_values.empty()) throw std::logic_error("min_value: not a real function");
        Rational m = real_values.begin()->second;
        for (const auto& [v, x] : real_values) m = rat_min(m, x);
        return m;
    }
    Rational max_value() const {
        if (!real || real_values.empty()) throw std::logic_error("max_value: not a real function");
        Rational m = real_values.begin()->second;
        for (const auto& [v, x] : real_values) m = rat_max(m, x);
        return m;
    }
};

/// Sup distance over the shared vertex set.  For PL extensions of real
/// functions the vertex max realizes the sup over the whole complex.
inline double sup_distance(const VertexFunction& f, const VertexFunction& g, const Codomain& Z) {
    if (f.real != g.real) throw std::invalid_argument("sup_distance: mixed function kinds");
    if (f.real) {
        Rational m(0);
        for (const auto& [v, x] : f.real_values) m = rat_max(m, (x - g.at(v)).abs());
        return m.to_double();
    }
    double m = 0;
    for (const auto& [v, p] : f.point_values) m = std::max(m, Z.metric().d(p, g.point_at(v)));
    return m;
}

inline Rational sup_distance_exact(const VertexFunction& f, const VertexFunction& g) {
    if (!f.real || !g.real) throw std::invalid_argument("sup_distance_exact: real functions only");
    Rational m(0);
    for (const auto& [v, x] : f.real_values) m = rat_max(m, (x - g.at(v)).abs());
    return m;
}

}  // namespace mapscale
