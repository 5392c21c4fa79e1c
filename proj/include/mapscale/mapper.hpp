#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapscale/cover_tower.hpp"
#include "mapscale/pullback.hpp"
#include "mapscale/simplicial_complex.hpp"

namespace mapscale {

/// Tower of simplicial complexes connected by (checked) simplicial maps.
struct ComplexTower {
    std::vector<double> scales;
    std::vector<SimplicialComplex> complexes;
    std::vector<std::map<VertexId, VertexId>> vertex_maps;  // consecutive

    size_t size() const { return complexes.size(); }

    void validate() const {
        if (complexes.size() != scales.size())
            throw std::invalid_argument("ComplexTower: scales/complexes mismatch");
        if (vertex_maps.size() + 1 != complexes.size())
            throw std::invalid_argument("ComplexTower: maps/complexes mismatch");
        for (size_t i = 0; i < vertex_maps.size(); ++i) {
            const auto& vm = vertex_maps[i];
            for (VertexId v : complexes[i].vertices())
                if (!vm.count(v))
                    throw std::invalid_argument("ComplexTower: map " + std::to_string(i) +
                                                " misses vertex " + std::to_string(v));
            for (const auto& s : complexes[i].all_simplices()) {
                Simplex img;
                for (VertexId v : s) img.push_back(vm.at(v));
                img = make_simplex(std::move(img));
                if (!complexes[i + 1].contains(img))
                    throw std::invalid_argument("ComplexTower: map " + std::to_string(i) +
                                                " not simplicial on " + simplex_str(s));
            }
        }
    }

    std::map<VertexId, VertexId> map_between(size_t i, size_t j) const {
        std::map<VertexId, VertexId> m;
        for (VertexId v : complexes[i].vertices()) m[v] = v;
        for (size_t k = i; k < j; ++k)
            for (auto& [v, w] : m) w = vertex_maps[k].at(w);
        return m;
    }
};

namespace detail {

inline void enumerate_subsets(const std::vector<int>& list, size_t from, int max_size,
                              std::vector<int>& stack, std::set<Simplex>& out) {
    if (!stack.empty()) {
        Simplex s(stack.begin(), stack.end());
        std::sort(s.begin(), s.end());
        out.insert(std::move(s));
    }
    if ((int)stack.size() == max_size) return;
    for (size_t i = from; i < list.size(); ++i) {
        stack.push_back(list[i]);
        enumerate_subsets(list, i + 1, max_size, stack, out);
        stack.pop_back();
    }
}

/// Any subset of the elements containing a given vertex spans a simplex.
inline void nerve_from_shared_vertices(const PullbackCover& pc, int max_dim,
                                       std::set<Simplex>& out) {
    std::map<VertexId, std::vector<int>> incident;
    for (size_t i = 0; i < pc.elements.size(); ++i)
        for (VertexId v : pc.elements[i].vertices) incident[v].push_back((int)i);
    for (const auto& [v, list] : incident) {
        std::vector<int> stack;
        enumerate_subsets(list, 0, max_dim + 1, stack, out);
    }
}

inline void dfs_spans(const std::vector<std::pair<int, EdgeSpan>>& spans, size_t from, int max_size,
                      std::vector<int>& stack, std::vector<EdgeSpan>& running,
                      std::set<Simplex>& out) {
    if (!stack.empty()) {
        Simplex s(stack.begin(), stack.end());
        std::sort(s.begin(), s.end());
        out.insert(std::move(s));
    }
    if ((int)stack.size() == max_size) return;
    for (size_t i = from; i < spans.size(); ++i) {
        std::optional<EdgeSpan> next;
        if (running.empty())
            next = spans[i].second;
        else
            next = running.back().intersect(spans[i].second);
        if (!next) continue;
        stack.push_back(spans[i].first);
        running.push_back(*next);
        dfs_spans(spans, i + 1, max_size, stack, running, out);
        running.pop_back();
        stack.pop_back();
    }
}

/// Exact mode: elements can also meet inside an edge; take subsets of the
/// spans on each edge with a nonempty running intersection (1-d convexity
/// makes this complete).
inline void nerve_from_shared_edges(const PullbackCover& pc, int max_dim, std::set<Simplex>& out) {
    std::map<std::pair<VertexId, VertexId>, std::vector<std::pair<int, EdgeSpan>>> on_edge;
    for (size_t i = 0; i < pc.elements.size(); ++i) {
        const auto& el = pc.elements[i];
        for (const auto& e : el.full_edges)
            on_edge[e].push_back({(int)i, EdgeSpan{Rational(0), Rational(1), false, false}});
        for (const auto& p : el.partials)
            on_edge[{p.u, p.v}].push_back({(int)i, p.span});
    }
    for (const auto& [edge, spans] : on_edge) {
        std::vector<int> stack;
        std::vector<EdgeSpan> running;
        dfs_spans(spans, 0, max_dim + 1, stack, running, out);
    }
}

/// Possibly-degenerate interval for running intersections.
struct IntervalAcc {
    Rational lo, hi;
    bool open_lo = false, open_hi = false;

    static IntervalAcc of(const Interval& iv) { return {iv.lo, iv.hi, iv.open_lo, iv.open_hi}; }

    bool valid() const {
        if (lo > hi) return false;
        if (lo == hi && (open_lo || open_hi)) return false;
        return true;
    }

    IntervalAcc meet(const Interval& o) const {
        IntervalAcc r = *this;
        if (o.lo > r.lo) { r.lo = o.lo; r.open_lo = o.open_lo; }
        else if (o.lo == r.lo) { r.open_lo = r.open_lo || o.open_lo; }
        if (o.hi < r.hi) { r.hi = o.hi; r.open_hi = o.open_hi; }
        else if (o.hi == r.hi) { r.open_hi = r.open_hi || o.open_hi; }
        return r;
    }
};

}  // namespace detail

/// Nerve of a pullback cover; vertex ids are element indices.  A set of
/// elements spans a simplex iff their supports share a point: a common
/// vertex, or (exact mode) overlapping spans on a common edge.
inline SimplicialComplex nerve(const PullbackCover& pc, int max_dim = 2) {
    std::set<Simplex> simplices;
    for (size_t i = 0; i < pc.elements.size(); ++i) simplices.insert({(int)i});
    detail::nerve_from_shared_vertices(pc, max_dim, simplices);
    if (pc.mode == PullbackCover::Mode::ExactPL)
        detail::nerve_from_shared_edges(pc, max_dim, simplices);
    std::vector<Simplex> maximal(simplices.begin(), simplices.end());
    return SimplicialComplex::from_maximal(maximal, max_dim);
}

/// Nerve of a codomain cover itself (exact interval intersections, or shared
/// points in a finite metric codomain).
inline SimplicialComplex nerve_of_cover(const Cover& U, int max_dim = 2) {
    std::set<Simplex> simplices;
    for (size_t i = 0; i < U.size(); ++i) simplices.insert({(int)i});
    if (!U.elements.empty() && U.elements.front().is_interval()) {
        std::vector<int> stack;
        std::vector<detail::IntervalAcc> running;
        std::function<void(size_t)> dfs = [&](size_t from) {
            if (!stack.empty()) {
                Simplex s(stack.begin(), stack.end());
                simplices.insert(std::move(s));
            }
            if ((int)stack.size() == max_dim + 1) return;
            for (size_t i = from; i < U.size(); ++i) {
                detail::IntervalAcc next = running.empty()
                                               ? detail::IntervalAcc::of(U[i].interval())
                                               : running.back().meet(U[i].interval());
                if (!next.valid()) continue;
                stack.push_back((int)i);
                running.push_back(next);
                dfs(i + 1);
                running.pop_back();
                stack.pop_back();
            }
        };
        dfs(0);
    } else {
        std::map<int, std::vector<int>> incident;
        for (size_t i = 0; i < U.size(); ++i)
            for (int p : U[i].point_members()) incident[p].push_back((int)i);
        for (const auto& [p, list] : incident) {
            std::vector<int> stack;
            detail::enumerate_subsets(list, 0, max_dim + 1, stack, simplices);
        }
    }
    std::vector<Simplex> maximal(simplices.begin(), simplices.end());
    return SimplicialComplex::from_maximal(maximal, max_dim);
}

struct MapperResult {
    SimplicialComplex complex;
    std::vector<PullbackElement> elements;  // nerve vertex i <-> elements[i]
};

inline MapperResult mapper(const Cover& U, const VertexFunction& f, const SimplicialComplex& K,
                           PullbackCover::Mode mode, const Codomain& Z, int max_dim = 2) {
    Graph G = one_skeleton(K);
    PullbackCover pc = mode == PullbackCover::Mode::ExactPL
                           ? pullback_exact_PL(G, f, U)
                           : pullback_combinatorial(G, f, U, Z);
    MapperResult out;
    out.complex = nerve(pc, max_dim);
    out.elements = pc.elements;
    return out;
}

struct MapperTower {
    ComplexTower tower;
    std::vector<std::vector<PullbackElement>> elements;  // per scale, per nerve vertex
};

/// Multiscale mapper: nerves of the pullback of a tower of covers, with the
/// induced simplicial maps between consecutive scales.
inline MapperTower multiscale_mapper(const CoverTower& W, const VertexFunction& f,
                                     const SimplicialComplex& K, PullbackCover::Mode mode,
                                     int max_dim = 2) {
    if (mode == PullbackCover::Mode::ExactPL && !W.codomain->is_real())
        throw std::invalid_argument("multiscale_mapper: exact-PL mode needs a real codomain");
    Graph G = one_skeleton(K);
    MapperTower out;
    out.tower.scales = W.scales;
    std::vector<PullbackCover> pcs;
    for (size_t i = 0; i < W.n_scales(); ++i) {
        PullbackCover pc = mode == PullbackCover::Mode::ExactPL
                               ? pullback_exact_PL(G, f, W.covers[i])
                               : pullback_combinatorial(G, f, W.covers[i], *W.codomain);
        out.tower.complexes.push_back(nerve(pc, max_dim));
        out.elements.push_back(pc.elements);
        pcs.push_back(std::move(pc));
    }
    for (size_t i = 0; i + 1 < W.n_scales(); ++i) {
        std::vector<int> m = pullback_cover_map(pcs[i], pcs[i + 1], W.maps[i]);
        std::map<VertexId, VertexId> vm;
        for (size_t e = 0; e < m.size(); ++e) vm[(int)e] = m[e];
        out.tower.vertex_maps.push_back(std::move(vm));
    }
    out.tower.validate();
    return out;
}

struct MinDiameterReport {
    bool ok = true;
    Simplex worst;
    double worst_value = 0;
    double kappa = 0;
};

/// Minimum element diameter over the whole tower.
inline double tower_min_diameter(const CoverTower& W) {
    double k = std::numeric_limits<double>::infinity();
    for (const auto& cov : W.covers)
        for (const auto& e : cov.elements) k = std::min(k, e.diameter(*W.codomain));
    return k;
}

inline Rational tower_min_diameter_exact(const CoverTower& W) {
    bool first = true;
    Rational k(0);
    for (const auto& cov : W.covers)
        for (const auto& e : cov.elements) {
            Rational d = e.diameter_exact();
            if (first || d < k) { k = d; first = false; }
        }
    return k;
}

/// diam(f(sigma)) <= kappa(W) for every simplex.  For PL real functions the
/// per-edge check suffices and is exact.
inline MinDiameterReport check_min_diameter(const SimplicialComplex& K, const VertexFunction& f,
                                            const CoverTower& W) {
    MinDiameterReport rep;
    if (f.real && W.codomain->is_real()) {
        Rational kappa = tower_min_diameter_exact(W);
        rep.kappa = kappa.to_double();
        Rational worst(0);
        for (const auto& e : K.simplices(1)) {
            Rational d = (f.at(e[0]) - f.at(e[1])).abs();
            if (d > worst) { worst = d; rep.worst = e; }
            if (d > kappa) rep.ok = false;
        }
        rep.worst_value = worst.to_double();
        return rep;
    }
    rep.kappa = tower_min_diameter(W);
    const auto& Z = W.codomain->metric();
    for (int dim = 1; dim <= K.dimension(); ++dim)
        for (const auto& s : K.simplices(dim)) {
            double d = 0;
            for (size_t i = 0; i < s.size(); ++i)
                for (size_t j = i + 1; j < s.size(); ++j)
                    d = std::max(d, Z.d(f.point_at(s[i]), f.point_at(s[j])));
            if (d > rep.worst_value) { rep.worst_value = d; rep.worst = s; }
            if (d > rep.kappa) rep.ok = false;
        }
    return rep;
}

}  // namespace mapscale
