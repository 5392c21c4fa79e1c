#pragma once

#include <random>
#include <vector>

#include "mapscale/mapper.hpp"
#include "mapscale/metric_space.hpp"
#include "mapscale/simplicial_complex.hpp"
#include "mapscale/tower_builders.hpp"

namespace mapscale {

/// Deterministic instance generation for the experiment harness.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(unsigned long long seed) : gen(seed) {}

    int uniform_int(int lo, int hi) {  // inclusive
        return (int)(gen() % (unsigned long long)(hi - lo + 1)) + lo;
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * ((gen() >> 11) * 0x1.0p-53);
    }
    bool chance(double prob) { return uniform(0, 1) < prob; }

    /// Random rational k/denom in [lo, hi] (endpoints included).
    Rational rational_in(const Rational& lo, const Rational& hi, long long denom = 8) {
        long long klo = (long long)std::ceil((lo * Rational(denom)).to_double() - 1e-9);
        long long khi = (long long)std::floor((hi * Rational(denom)).to_double() + 1e-9);
        long long k = klo + (long long)(gen() % (unsigned long long)(khi - klo + 1));
        return Rational(k, denom);
    }
};

/// Erdos-Renyi graph completed with random triangles on existing edges.
inline SimplicialComplex random_2complex(Rng& rng, int n, double edge_p, double tri_p) {
    Graph g;
    for (int v = 0; v < n; ++v) g.vertices.push_back(v);
    std::vector<Simplex> maximal;
    for (int v = 0; v < n; ++v) maximal.push_back({v});
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.chance(edge_p)) {
                g.edges.emplace_back(u, v);
                maximal.push_back({u, v});
            }
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            for (int w = v + 1; w < n; ++w)
                if (g.has_edge(u, v) && g.has_edge(v, w) && g.has_edge(u, w) && rng.chance(tri_p))
                    maximal.push_back({u, v, w});
    return SimplicialComplex::from_maximal(maximal);
}

/// Random vertex values on a fine rational grid inside [lo, hi].
inline VertexFunction random_pl_function(Rng& rng, const std::vector<VertexId>& vertices,
                                         const Rational& lo, const Rational& hi,
                                         long long denom = 8) {
    std::map<VertexId, Rational> vals;
    for (VertexId v : vertices) vals[v] = rng.rational_in(lo, hi, denom);
    return VertexFunction::from_reals(vals);
}

/// Shrinks f toward its midrange until every edge satisfies
/// |f(u)-f(v)| <= kappa (exact rational rescale; no-op when already true).
inline VertexFunction rescale_for_min_diameter(const VertexFunction& f, const SimplicialComplex& K,
                                               const Rational& kappa) {
    Rational worst(0);
    for (const auto& e : K.simplices(1)) worst = rat_max(worst, (f.at(e[0]) - f.at(e[1])).abs());
    if (worst <= kappa) return f;
    Rational center = (f.min_value() + f.max_value()) / Rational(2);
    Rational factor = kappa / worst;
    std::map<VertexId, Rational> vals;
    for (const auto& [v, x] : f.real_values) vals[v] = center + (x - center) * factor;
    return VertexFunction::from_reals(vals);
}

/// Perturbation with exactly the requested sup norm: random offsets in
/// [-delta, delta], then one vertex pinned to +-delta.
inline VertexFunction perturb_exact_sup(Rng& rng, const VertexFunction& f, const Rational& delta,
                                        long long denom = 8) {
    std::map<VertexId, Rational> vals;
    std::vector<VertexId> verts;
    for (const auto& [v, x] : f.real_values) verts.push_back(v);
    for (VertexId v : verts) vals[v] = f.at(v) + rng.rational_in(-delta, delta, denom);
    VertexId pin = verts[(size_t)rng.uniform_int(0, (int)verts.size() - 1)];
    vals[pin] = f.at(pin) + (rng.chance(0.5) ? delta : -delta);
    return VertexFunction::from_reals(vals);
}

/// Evenly spaced nu-sample of a segment, optionally jittered but kept a
/// nu-sample (jitter < nu/4 on a rational grid).
inline std::vector<Rational> sample_segment(Rng& rng, const RealSegment& seg, const Rational& nu,
                                            bool jitter = false) {
    std::vector<Rational> P;
    Rational step = nu;  // spacing nu keeps gaps <= 2*nu with room for jitter
    Rational x = seg.lo;
    while (true) {
        Rational p = x;
        if (jitter && p > seg.lo && p < seg.hi) {
            Rational j = rng.rational_in(-nu / Rational(4), nu / Rational(4), 16);
            p = p + j;
        }
        P.push_back(rat_min(p, seg.hi));
        if (x >= seg.hi) break;
        x = rat_min(x + step, seg.hi);
    }
    std::sort(P.begin(), P.end());
    P.erase(std::unique(P.begin(), P.end()), P.end());
    return P;
}

/// Uniform points in the unit square scaled by `scale`, as a metric space.
inline FiniteMetricSpace random_square_points(Rng& rng, int n, double scale = 1.0) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(0, scale), rng.uniform(0, scale)});
    return FiniteMetricSpace::from_points_2d(pts);
}

/// Random tower of complexes joined by random simplicial maps: each next
/// complex is the image of a random vertex collapse plus fresh random
/// simplices, so maps are simplicial by construction.
inline ComplexTower random_complex_tower(Rng& rng, int length, int start_vertices,
                                         int max_simplices) {
    ComplexTower T;
    for (int i = 0; i < length; ++i) T.scales.push_back((double)(i + 1));
    SimplicialComplex K = random_2complex(rng, start_vertices, 0.45, 0.5);
    while ((int)K.simplex_count() > max_simplices)
        K = random_2complex(rng, std::max(2, start_vertices - 1), 0.35, 0.4);
    T.complexes.push_back(K);
    for (int step = 1; step < length; ++step) {
        const SimplicialComplex& prev = T.complexes.back();
        const auto& verts = prev.vertices();
        // collapse: map each vertex to a random representative with smaller-or-equal index
        std::map<VertexId, VertexId> vm;
        for (VertexId v : verts) {
            if (rng.chance(0.35)) {
                VertexId target = verts[(size_t)rng.uniform_int(0, (int)verts.size() - 1)];
                vm[v] = target;
            } else {
                vm[v] = v;
            }
        }
        std::vector<Simplex> maximal;
        for (const auto& s : prev.all_simplices()) {
            Simplex img;
            for (VertexId v : s) img.push_back(vm.at(v));
            maximal.push_back(make_simplex(std::move(img)));
        }
        // fresh simplices over the image vertex set
        std::vector<VertexId> image_verts;
        for (const auto& [v, w] : vm) image_verts.push_back(w);
        std::sort(image_verts.begin(), image_verts.end());
        image_verts.erase(std::unique(image_verts.begin(), image_verts.end()), image_verts.end());
        int extras = rng.uniform_int(0, 3);
        for (int e = 0; e < extras && image_verts.size() >= 2; ++e) {
            int a = rng.uniform_int(0, (int)image_verts.size() - 1);
            int b = rng.uniform_int(0, (int)image_verts.size() - 1);
            if (a == b) continue;
            maximal.push_back(make_simplex({image_verts[a], image_verts[b]}));
        }
        T.complexes.push_back(SimplicialComplex::from_maximal(maximal));
        T.vertex_maps.push_back(std::move(vm));
    }
    T.validate();
    return T;
}

/// Clique complex of a random graph, closed up to dimension 3; many tets per
/// edge when dense (the benchmark's full-vs-skeleton regime).
inline SimplicialComplex random_clique_3complex(Rng& rng, int n, double edge_p) {
    Graph g;
    for (int v = 0; v < n; ++v) g.vertices.push_back(v);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.chance(edge_p)) g.edges.emplace_back(u, v);
    std::sort(g.edges.begin(), g.edges.end());
    std::vector<Simplex> maximal;
    for (int v = 0; v < n; ++v) maximal.push_back({v});
    for (auto& [u, v] : g.edges) maximal.push_back({u, v});
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (!g.has_edge(a, b)) continue;
            for (int c = b + 1; c < n; ++c) {
                if (!g.has_edge(a, c) || !g.has_edge(b, c)) continue;
                maximal.push_back({a, b, c});
                for (int d = c + 1; d < n; ++d)
                    if (g.has_edge(a, d) && g.has_edge(b, d) && g.has_edge(c, d))
                        maximal.push_back({a, b, c, d});
            }
        }
    return SimplicialComplex::from_maximal(maximal);
}

}  // namespace mapscale
