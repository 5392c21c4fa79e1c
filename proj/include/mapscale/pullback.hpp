#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapscale/cover.hpp"
#include "mapscale/metric_space.hpp"
#include "mapscale/simplicial_complex.hpp"

namespace mapscale {

/// Sub-interval of an edge's parameter range [0,1], with end flags.
struct EdgeSpan {
    Rational t0, t1;
    bool open0 = false, open1 = false;

    bool touches_start() const { return t0 == Rational(0) && !open0; }
    bool touches_end() const { return t1 == Rational(1) && !open1; }
    bool is_full() const { return touches_start() && touches_end() && t0 == Rational(0) && t1 == Rational(1); }

    bool overlaps(const EdgeSpan& o) const {
        Rational l = rat_max(t0, o.t0);
        Rational h = rat_min(t1, o.t1);
        if (l > h) return false;
        if (l < h) return true;
        bool l_in_a = (l > t0) || (l == t0 && !open0);
        bool l_in_a2 = (l < t1) || (l == t1 && !open1);
        bool l_in_b = (l > o.t0) || (l == o.t0 && !o.open0);
        bool l_in_b2 = (l < o.t1) || (l == o.t1 && !o.open1);
        return l_in_a && l_in_a2 && l_in_b && l_in_b2;
    }

    std::optional<EdgeSpan> intersect(const EdgeSpan& o) const {
        EdgeSpan r;
        if (t0 > o.t0) { r.t0 = t0; r.open0 = open0; }
        else if (o.t0 > t0) { r.t0 = o.t0; r.open0 = o.open0; }
        else { r.t0 = t0; r.open0 = open0 || o.open0; }
        if (t1 < o.t1) { r.t1 = t1; r.open1 = open1; }
        else if (o.t1 < t1) { r.t1 = o.t1; r.open1 = o.open1; }
        else { r.t1 = t1; r.open1 = open1 || o.open1; }
        if (r.t0 > r.t1) return std::nullopt;
        if (r.t0 == r.t1 && (r.open0 || r.open1)) return std::nullopt;
        return r;
    }

    bool contains_span(const EdgeSpan& o) const {
        bool lo_ok = t0 < o.t0 || (t0 == o.t0 && (!open0 || o.open0));
        bool hi_ok = o.t1 < t1 || (o.t1 == t1 && (!open1 || o.open1));
        return lo_ok && hi_ok;
    }
};

/// Parameter range on edge (u,v) (values f(u)=a at t=0, f(v)=b at t=1)
/// where the interpolated value lands in U.  Exact rational arithmetic.
inline std::optional<EdgeSpan> edge_preimage(const Rational& a, const Rational& b,
                                             const Interval& U) {
    EdgeSpan s;
    s.t0 = Rational(0);
    s.t1 = Rational(1);
    if (a == b) {
        if (!U.contains(a)) return std::nullopt;
        return s;
    }
    const Rational den = b - a;
    Rational tl = (U.lo - a) / den;
    Rational th = (U.hi - a) / den;
    bool ol = U.open_lo, oh = U.open_hi;
    if (den.sign() < 0) { std::swap(tl, th); std::swap(ol, oh); }
    // clip to [0,1]
    if (tl > s.t0) { s.t0 = tl; s.open0 = ol; }
    else if (tl == s.t0) { s.open0 = ol; }
    if (th < s.t1) { s.t1 = th; s.open1 = oh; }
    else if (th == s.t1) { s.open1 = oh; }
    if (s.t0 > s.t1) return std::nullopt;
    if (s.t0 == s.t1 && (s.open0 || s.open1)) return std::nullopt;
    return s;
}

/// Connected piece of the preimage of one cover element.
/// Exact-PL mode records vertices, full edges and partial edge spans;
/// combinatorial mode records vertices only.
struct PullbackElement {
    int parent = -1;
    VertexId anchor = -1;                                // min vertex; -1 for an edge island
    std::pair<VertexId, VertexId> island_edge{-1, -1};
    std::vector<VertexId> vertices;                      // sorted
    std::vector<std::pair<VertexId, VertexId>> full_edges;
    struct Partial {
        VertexId u, v;
        EdgeSpan span;
    };
    std::vector<Partial> partials;

    /// Span on edge (u,v) if any part of this element lives there.
    std::optional<EdgeSpan> span_on(VertexId u, VertexId v) const {
        if (std::binary_search(full_edges.begin(), full_edges.end(), std::make_pair(u, v)))
            return EdgeSpan{Rational(0), Rational(1), false, false};
        for (const auto& p : partials)
            if (p.u == u && p.v == v) return p.span;
        return std::nullopt;
    }

    bool has_vertex(VertexId v) const {
        return std::binary_search(vertices.begin(), vertices.end(), v);
    }

    std::string label() const {
        if (anchor >= 0) return "p" + std::to_string(parent) + "v" + std::to_string(anchor);
        return "p" + std::to_string(parent) + "e" + std::to_string(island_edge.first) + "-" +
               std::to_string(island_edge.second);
    }

    /// Canonical order: (parent, vertex-anchored first, anchor, island edge).
    friend bool operator<(const PullbackElement& x, const PullbackElement& y) {
        if (x.parent != y.parent) return x.parent < y.parent;
        bool xi = x.anchor < 0, yi = y.anchor < 0;
        if (xi != yi) return yi;
        if (x.anchor != y.anchor) return x.anchor < y.anchor;
        return x.island_edge < y.island_edge;
    }
};

struct PullbackCover {
    enum class Mode { ExactPL, Combinatorial };
    Mode mode = Mode::Combinatorial;
    size_t parent_count = 0;
    std::vector<PullbackElement> elements;  // canonically sorted

    /// Indices of elements whose support contains vertex v.
    std::vector<int> elements_with_vertex(VertexId v) const {
        std::vector<int> out;
        for (size_t i = 0; i < elements.size(); ++i)
            if (elements[i].has_vertex(v)) out.push_back((int)i);
        return out;
    }
};

/// Exact piecewise-linear pullback on the 1-skeleton: per interval element,
/// the connected components of the PL preimage, with exact edge spans.
inline PullbackCover pullback_exact_PL(const Graph& G, const VertexFunction& f, const Cover& U) {
    if (!f.real) throw std::invalid_argument("pullback_exact_PL: real-valued function required");
    if (!f.defined_on(G.vertices))
        throw std::invalid_argument("pullback_exact_PL: function not defined on all vertices");
    PullbackCover pc;
    pc.mode = PullbackCover::Mode::ExactPL;
    pc.parent_count = U.size();

    for (size_t a = 0; a < U.size(); ++a) {
        if (!U[a].is_interval())
            throw std::invalid_argument("pullback_exact_PL: non-interval cover element");
        const Interval& iv = U[a].interval();

        std::vector<VertexId> members;
        for (VertexId v : G.vertices)
            if (iv.contains(f.at(v))) members.push_back(v);

        UnionFind uf;
        for (VertexId v : members) uf.add(v);

        struct EdgePart {
            VertexId u, v;
            EdgeSpan span;
        };
        std::vector<EdgePart> parts;
        for (const auto& [u, v] : G.edges) {
            auto sp = edge_preimage(f.at(u), f.at(v), iv);
            if (!sp) continue;
            if (sp->t0 == sp->t1) continue;  // degenerate point part; the vertex itself carries it
            parts.push_back({u, v, *sp});
            if (sp->touches_start() && sp->touches_end()) uf.unite(u, v);
        }

        // vertex-anchored components
        std::map<VertexId, PullbackElement> comps;
        for (VertexId v : members) {
            VertexId root = uf.find(v);
            auto& el = comps[root];
            el.parent = (int)a;
            el.vertices.push_back(v);
        }
        for (const auto& part : parts) {
            bool at_u = part.span.touches_start();
            bool at_v = part.span.touches_end();
            if (at_u || at_v) {
                VertexId root = uf.find(at_u ? part.u : part.v);
                auto& el = comps[root];
                if (part.span.is_full())
                    el.full_edges.emplace_back(part.u, part.v);
                else
                    el.partials.push_back({part.u, part.v, part.span});
            } else {
                PullbackElement island;  // interior slab of a single edge
                island.parent = (int)a;
                island.island_edge = {part.u, part.v};
                island.partials.push_back({part.u, part.v, part.span});
                pc.elements.push_back(std::move(island));
            }
        }
        for (auto& [root, el] : comps) {
            std::sort(el.vertices.begin(), el.vertices.end());
            el.anchor = el.vertices.front();
            std::sort(el.full_edges.begin(), el.full_edges.end());
            std::sort(el.partials.begin(), el.partials.end(),
                      [](const auto& x, const auto& y) { return std::tie(x.u, x.v) < std::tie(y.u, y.v); });
            pc.elements.push_back(std::move(el));
        }
    }
    std::sort(pc.elements.begin(), pc.elements.end());
    return pc;
}

/// Graph-induced pullback: per cover element, the vertex preimage shattered
/// by graph connectivity.  Elements are vertex sets only.
inline PullbackCover pullback_combinatorial(const Graph& G, const VertexFunction& f, const Cover& U,
                                            const Codomain& Z) {
    if (!f.defined_on(G.vertices))
        throw std::invalid_argument("pullback_combinatorial: function not defined on all vertices");
    PullbackCover pc;
    pc.mode = PullbackCover::Mode::Combinatorial;
    pc.parent_count = U.size();
    for (size_t a = 0; a < U.size(); ++a) {
        std::vector<VertexId> members;
        for (VertexId v : G.vertices) {
            bool in = f.real ? U[a].contains_value(f.at(v)) : U[a].contains_point(f.point_at(v));
            if (in) members.push_back(v);
        }
        for (auto& block : connected_components(members, G)) {
            PullbackElement el;
            el.parent = (int)a;
            el.vertices = std::move(block);
            el.anchor = el.vertices.front();
            pc.elements.push_back(std::move(el));
        }
    }
    std::sort(pc.elements.begin(), pc.elements.end());
    (void)Z;
    return pc;
}

namespace detail {
inline bool element_contains(const PullbackElement& big, const PullbackElement& small) {
    if (!std::includes(big.vertices.begin(), big.vertices.end(), small.vertices.begin(),
                       small.vertices.end()))
        return false;
    for (const auto& e : small.full_edges) {
        auto sp = big.span_on(e.first, e.second);
        if (!sp || !sp->is_full()) return false;
    }
    for (const auto& p : small.partials) {
        auto sp = big.span_on(p.u, p.v);
        if (!sp || !sp->contains_span(p.span)) return false;
    }
    return true;
}
}  // namespace detail

/// Map of pullback covers induced by a cover map xi at codomain level: each
/// element goes to the unique element over xi(parent) that contains it.
inline std::vector<int> pullback_cover_map(const PullbackCover& fine, const PullbackCover& coarse,
                                           const std::vector<int>& xi) {
    if (fine.mode != coarse.mode) throw std::invalid_argument("pullback_cover_map: mode mismatch");
    if (xi.size() != fine.parent_count)
        throw std::invalid_argument("pullback_cover_map: cover map size mismatch");
    std::vector<int> out(fine.elements.size(), -1);
    for (size_t i = 0; i < fine.elements.size(); ++i) {
        const auto& el = fine.elements[i];
        const int target_parent = xi.at(el.parent);
        int hit = -1;
        for (size_t j = 0; j < coarse.elements.size(); ++j) {
            if (coarse.elements[j].parent != target_parent) continue;
            if (detail::element_contains(coarse.elements[j], el)) {
                if (hit >= 0)
                    throw std::runtime_error("pullback_cover_map: element " + el.label() +
                                             " contained in two coarse elements");
                hit = (int)j;
            }
        }
        if (hit < 0)
            throw std::runtime_error("pullback_cover_map: no coarse element contains " + el.label() +
                                     " (containment violated upstream)");
        out[i] = hit;
    }
    return out;
}

}  // namespace mapscale
