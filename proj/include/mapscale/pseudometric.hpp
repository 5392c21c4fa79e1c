#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "mapscale/bottleneck.hpp"
#include "mapscale/mapper.hpp"
#include "mapscale/persistence.hpp"
#include "mapscale/pullback.hpp"

namespace mapscale {

/// Pullback pseudometric on the vertex set: d(x,x') is the smallest grid
/// scale at which some pullback element contains both.  Values are kept as
/// grid indices; -1 encodes "0" (the diagonal) and kNoScale encodes +inf.
struct PullbackPseudometric {
    static constexpr int kNoScale = std::numeric_limits<int>::max();

    std::vector<VertexId> vertices;          // sorted
    std::vector<double> scales;              // the tower's grid
    std::vector<std::vector<int>> index;     // scale indices; diagonal -1

    int pos(VertexId v) const {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
        if (it == vertices.end() || *it != v)
            throw std::invalid_argument("PullbackPseudometric: unknown vertex " + std::to_string(v));
        return (int)(it - vertices.begin());
    }

    int index_between(VertexId x, VertexId y) const { return index[pos(x)][pos(y)]; }

    double d(VertexId x, VertexId y) const {
        int i = index_between(x, y);
        if (i < 0) return 0.0;
        if (i == kNoScale) return kInf;
        return scales[i];
    }
};

/// Builds d from per-scale pullbacks (combinatorial or exact-PL supports;
/// both record which vertices co-occur).
inline PullbackPseudometric pullback_pseudometric(const CoverTower& W, const VertexFunction& f,
                                                  const SimplicialComplex& K,
                                                  PullbackCover::Mode mode =
                                                      PullbackCover::Mode::Combinatorial) {
    Graph G = one_skeleton(K);
    PullbackPseudometric pm;
    pm.vertices = K.vertices();
    pm.scales = W.scales;
    const size_t n = pm.vertices.size();
    pm.index.assign(n, std::vector<int>(n, PullbackPseudometric::kNoScale));
    for (size_t i = 0; i < n; ++i) pm.index[i][i] = -1;
    for (size_t si = 0; si < W.n_scales(); ++si) {
        PullbackCover pc = mode == PullbackCover::Mode::ExactPL
                               ? pullback_exact_PL(G, f, W.covers[si])
                               : pullback_combinatorial(G, f, W.covers[si], *W.codomain);
        for (const auto& el : pc.elements) {
            for (size_t a = 0; a < el.vertices.size(); ++a)
                for (size_t b = a + 1; b < el.vertices.size(); ++b) {
                    int x = pm.pos(el.vertices[a]);
                    int y = pm.pos(el.vertices[b]);
                    if ((int)si < pm.index[x][y]) {
                        pm.index[x][y] = (int)si;
                        pm.index[y][x] = (int)si;
                    }
                }
        }
    }
    return pm;
}

/// {x' : d(x,x') <= eps}.
inline std::vector<VertexId> ball(const PullbackPseudometric& pm, VertexId x, double eps) {
    std::vector<VertexId> out;
    for (VertexId y : pm.vertices)
        if (pm.d(x, y) <= eps) out.push_back(y);
    return out;
}

/// The ball at a grid scale equals the union of pullback elements at that
/// scale containing x; returns an empty string or a mismatch description.
inline std::string ball_identity_mismatch(const PullbackPseudometric& pm, const PullbackCover& pc,
                                          size_t scale_index, VertexId x) {
    std::vector<VertexId> from_union;
    for (const auto& el : pc.elements)
        if (el.has_vertex(x)) from_union.insert(from_union.end(), el.vertices.begin(), el.vertices.end());
    std::sort(from_union.begin(), from_union.end());
    from_union.erase(std::unique(from_union.begin(), from_union.end()), from_union.end());
    std::vector<VertexId> from_ball = ball(pm, x, pm.scales[scale_index]);
    if (from_union == from_ball) return "";
    return "ball(" + std::to_string(x) + ") at scale index " + std::to_string(scale_index) +
           " has " + std::to_string(from_ball.size()) + " vertices but the element union has " +
           std::to_string(from_union.size());
}

struct CechFiltration {
    std::vector<double> scales;
    std::vector<SimplicialComplex> complexes;  // nested

    /// Inclusion tower (identity vertex maps) for the persistence engine.
    ComplexTower to_tower() const {
        ComplexTower T;
        T.scales = scales;
        T.complexes = complexes;
        for (size_t i = 0; i + 1 < complexes.size(); ++i) {
            std::map<VertexId, VertexId> vm;
            for (VertexId v : complexes[i].vertices()) vm[v] = v;
            T.vertex_maps.push_back(std::move(vm));
        }
        return T;
    }
};

/// Cech filtration of the pseudometric: sigma enters at the smallest scale
/// where the balls around its vertices share a witness vertex.  The Rips
/// flag uses pairwise distances instead.
inline CechFiltration cech_filtration(const PullbackPseudometric& pm, int max_dim = 2,
                                      bool rips = false) {
    const size_t n = pm.vertices.size();
    const int S = (int)pm.scales.size();
    // filtration index of every simplex up to max_dim (kNoScale = never)
    std::map<Simplex, int> findex;
    std::vector<int> idx;
    std::function<void(size_t, int)> visit = [&](size_t from, int bound) {
        if (!idx.empty()) {
            int fi;
            if (rips) {
                fi = bound;  // max pairwise index
            } else {
                fi = PullbackPseudometric::kNoScale;
                for (size_t w = 0; w < n; ++w) {
                    int worst = -1;
                    for (int i : idx) worst = std::max(worst, pm.index[w][i]);
                    fi = std::min(fi, worst);
                }
            }
            if (fi < S) {
                Simplex s;
                for (int i : idx) s.push_back(pm.vertices[i]);
                findex[s] = std::max(fi, 0);  // below-resolution entries appear at the first grid scale
            } else {
                return;  // no superset can enter either (monotone)
            }
        }
        if ((int)idx.size() == max_dim + 1) return;
        for (size_t i = from; i < n; ++i) {
            int nb = bound;
            if (rips)
                for (int j : idx) nb = std::max(nb, pm.index[(size_t)j][i]);
            idx.push_back((int)i);
            visit(i + 1, nb);
            idx.pop_back();
        }
    };
    visit(0, -1);

    CechFiltration out;
    out.scales = pm.scales;
    std::vector<std::vector<Simplex>> arriving(S);
    for (const auto& [s, fi] : findex) arriving[fi].push_back(s);
    std::vector<Simplex> acc;
    for (int i = 0; i < S; ++i) {
        acc.insert(acc.end(), arriving[i].begin(), arriving[i].end());
        out.complexes.push_back(SimplicialComplex::from_maximal(acc, max_dim));
    }
    return out;
}

struct TriangleReport {
    bool pass = true;
    std::string witness;
};

/// d(x,x') <= c (d(x,x'') + d(x'',x') + 2s) over all vertex triples.
inline TriangleReport relaxed_triangle_check(const PullbackPseudometric& pm, double c, double s) {
    TriangleReport rep;
    const size_t n = pm.vertices.size();
    for (size_t i = 0; i < n && rep.pass; ++i)
        for (size_t j = 0; j < n && rep.pass; ++j)
            for (size_t k = 0; k < n; ++k) {
                double lhs = pm.d(pm.vertices[i], pm.vertices[j]);
                double a = pm.d(pm.vertices[i], pm.vertices[k]);
                double b = pm.d(pm.vertices[k], pm.vertices[j]);
                if (a == kInf || b == kInf) continue;
                if (lhs > c * (a + b + 2 * s) + 1e-9) {
                    rep.pass = false;
                    rep.witness = "(" + std::to_string(pm.vertices[i]) + "," +
                                  std::to_string(pm.vertices[j]) + "," + std::to_string(pm.vertices[k]) + ")";
                    break;
                }
            }
    return rep;
}

struct MmCechComparison {
    double distance = 0;  // bottleneck between log-reindexed diagrams
    double bound = 0;     // log(c (s+2))
    PersistenceDiagram mm_diagram;    // log scale
    PersistenceDiagram cech_diagram;  // log scale
};

/// Bottleneck distance between the log-reindexed multiscale mapper and Cech
/// diagrams, against the interleaving bound log(c(s+2)).  Requires a
/// certified tower with s >= 1.
inline MmCechComparison mm_vs_cech(const CoverTower& W, const VertexFunction& f,
                                   const SimplicialComplex& K, int k, int p = 2,
                                   PullbackCover::Mode mode = PullbackCover::Mode::Combinatorial) {
    if (!W.goodness) throw std::invalid_argument("mm_vs_cech: tower carries no goodness certificate");
    const double c = W.goodness->c.to_double();
    const double s = W.goodness->s.to_double();
    if (s < 1.0) throw std::invalid_argument("mm_vs_cech: requires s >= 1");
    MmCechComparison out;
    MapperTower mm = multiscale_mapper(W, f, K, mode, k + 1);
    out.mm_diagram = log_diagram(tower_diagram(mm.tower, k, p));
    PullbackPseudometric pm = pullback_pseudometric(W, f, K, mode);
    CechFiltration cf = cech_filtration(pm, k + 1);
    out.cech_diagram = log_diagram(tower_diagram(cf.to_tower(), k, p));
    out.distance = bottleneck(out.mm_diagram, out.cech_diagram, k);
    out.bound = std::log(c * (s + 2.0));
    return out;
}

}  // namespace mapscale
