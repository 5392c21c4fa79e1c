#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "mapscale/mapper.hpp"

namespace mapscale {

/// Exact pullback over the whole complex (not just the 1-skeleton).  The
/// portion of a simplex inside an interval element is convex, so components
/// are unions of simplex portions glued along faces.  Used to check that the
/// 1-skeleton computation loses nothing, and to benchmark against it.
struct FullPullback {
    struct Element {
        int parent = -1;
        VertexId anchor = -1;          // min vertex inside the element, or -1
        Simplex anchor_simplex;        // lexicographically least member simplex
        std::vector<int> simplex_ids;  // indices into `simplices`
    };
    std::vector<Simplex> simplices;        // all simplices of K, dimension-major order
    std::vector<Element> elements;         // canonically sorted
    std::vector<std::vector<int>> component_of;  // per parent, per simplex id -> element index or -1
    size_t parent_count = 0;
};

namespace detail {
/// Image of a simplex under the PL extension is [min f, max f] over vertices.
inline std::pair<Rational, Rational> simplex_image(const Simplex& s, const VertexFunction& f) {
    Rational lo = f.at(s[0]), hi = lo;
    for (size_t i = 1; i < s.size(); ++i) {
        lo = rat_min(lo, f.at(s[i]));
        hi = rat_max(hi, f.at(s[i]));
    }
    return {lo, hi};
}

/// Does a closed image interval [lo,hi] (possibly a point) meet U?
inline bool image_meets(const std::pair<Rational, Rational>& img, const Interval& U) {
    if (img.first == img.second) return U.contains(img.first);
    Rational l = rat_max(img.first, U.lo);
    Rational h = rat_min(img.second, U.hi);
    if (l > h) return false;
    if (l < h) return true;
    // single candidate point; closed on the image side by construction
    return U.contains(l);
}

/// Common point of the PL image of omega and several intervals?
inline bool image_meets_all(const std::pair<Rational, Rational>& img,
                            const std::vector<const Interval*>& ivs) {
    IntervalAcc acc{img.first, img.second, false, false};
    for (const Interval* U : ivs) {
        acc = acc.meet(*U);
        if (!acc.valid()) return false;
    }
    return true;
}
}  // namespace detail

inline FullPullback pullback_exact_full(const SimplicialComplex& K, const VertexFunction& f,
                                        const Cover& U) {
    if (!f.real) throw std::invalid_argument("pullback_exact_full: real-valued function required");
    FullPullback fp;
    fp.parent_count = U.size();
    fp.simplices = K.all_simplices();
    std::map<Simplex, int> index;
    for (size_t i = 0; i < fp.simplices.size(); ++i) index[fp.simplices[i]] = (int)i;

    std::vector<std::pair<Rational, Rational>> images;
    images.reserve(fp.simplices.size());
    for (const auto& s : fp.simplices) images.push_back(detail::simplex_image(s, f));

    fp.component_of.assign(U.size(), std::vector<int>(fp.simplices.size(), -1));

    for (size_t a = 0; a < U.size(); ++a) {
        const Interval& iv = U[a].interval();
        std::vector<char> active(fp.simplices.size(), 0);
        for (size_t i = 0; i < fp.simplices.size(); ++i)
            if (detail::image_meets(images[i], iv)) active[i] = 1;

        // union simplices with their active facets
        std::vector<int> parent(fp.simplices.size());
        for (size_t i = 0; i < fp.simplices.size(); ++i) parent[i] = (int)i;
        std::function<int(int)> find = [&](int x) {
            while (parent[x] != x) { parent[x] = parent[parent[x]]; x = parent[x]; }
            return x;
        };
        auto unite = [&](int x, int y) {
            x = find(x); y = find(y);
            if (x != y) parent[std::max(x, y)] = std::min(x, y);
        };
        Simplex facet;
        for (size_t i = 0; i < fp.simplices.size(); ++i) {
            if (!active[i] || fp.simplices[i].size() == 1) continue;
            const Simplex& s = fp.simplices[i];
            for (size_t skip = 0; skip < s.size(); ++skip) {
                facet.clear();
                for (size_t j = 0; j < s.size(); ++j)
                    if (j != skip) facet.push_back(s[j]);
                int fi = index.at(facet);
                if (active[fi]) unite((int)i, fi);
            }
        }

        std::map<int, FullPullback::Element> comps;
        for (size_t i = 0; i < fp.simplices.size(); ++i) {
            if (!active[i]) continue;
            int root = find((int)i);
            auto& el = comps[root];
            el.parent = (int)a;
            el.simplex_ids.push_back((int)i);
        }
        for (auto& [root, el] : comps) {
            el.anchor_simplex = fp.simplices[el.simplex_ids.front()];
            for (int sid : el.simplex_ids)
                if (fp.simplices[sid].size() == 1)
                    el.anchor = el.anchor < 0 ? fp.simplices[sid][0]
                                              : std::min(el.anchor, fp.simplices[sid][0]);
            fp.elements.push_back(el);
        }
    }
    std::sort(fp.elements.begin(), fp.elements.end(), [](const auto& x, const auto& y) {
        if (x.parent != y.parent) return x.parent < y.parent;
        bool xi = x.anchor < 0, yi = y.anchor < 0;
        if (xi != yi) return yi;
        if (x.anchor != y.anchor) return x.anchor < y.anchor;
        return x.anchor_simplex < y.anchor_simplex;
    });
    for (size_t e = 0; e < fp.elements.size(); ++e)
        for (int sid : fp.elements[e].simplex_ids)
            fp.component_of[fp.elements[e].parent][sid] = (int)e;
    return fp;
}

/// Nerve of a full pullback: elements intersect iff some simplex omega lies
/// in all their components and the image of omega meets all their parent
/// intervals at a common value.
inline SimplicialComplex full_nerve(const FullPullback& fp, const Cover& U, const VertexFunction& f,
                                    int max_dim = 2) {
    std::set<Simplex> simplices;
    for (size_t i = 0; i < fp.elements.size(); ++i) simplices.insert({(int)i});

    std::vector<std::pair<Rational, Rational>> images;
    images.reserve(fp.simplices.size());
    for (const auto& s : fp.simplices) images.push_back(detail::simplex_image(s, f));

    for (size_t w = 0; w < fp.simplices.size(); ++w) {
        std::vector<int> carriers;  // elements whose component contains omega
        for (size_t a = 0; a < fp.parent_count; ++a)
            if (fp.component_of[a][w] >= 0) carriers.push_back(fp.component_of[a][w]);
        if (carriers.size() < 2) continue;
        // DFS over subsets with a common value in the image of omega
        std::vector<int> stack;
        std::vector<const Interval*> ivs;
        std::function<void(size_t)> dfs = [&](size_t from) {
            if (stack.size() >= 2) {
                Simplex s(stack.begin(), stack.end());
                std::sort(s.begin(), s.end());
                simplices.insert(std::move(s));
            }
            if ((int)stack.size() == max_dim + 1) return;
            for (size_t i = from; i < carriers.size(); ++i) {
                ivs.push_back(&U[fp.elements[carriers[i]].parent].interval());
                if (detail::image_meets_all(images[w], ivs)) {
                    stack.push_back(carriers[i]);
                    dfs(i + 1);
                    stack.pop_back();
                }
                ivs.pop_back();
            }
        };
        dfs(0);
    }
    std::vector<Simplex> maximal(simplices.begin(), simplices.end());
    return SimplicialComplex::from_maximal(maximal, max_dim);
}

/// Full-complex multiscale mapper (reference path for the 1-skeleton
/// shortcut; quadratic in the total simplex count rather than the skeleton).
inline MapperTower multiscale_mapper_full(const CoverTower& W, const VertexFunction& f,
                                          const SimplicialComplex& K, int max_dim = 2) {
    if (!W.codomain->is_real())
        throw std::invalid_argument("multiscale_mapper_full: real codomain required");
    MapperTower out;
    out.tower.scales = W.scales;
    std::vector<FullPullback> fps;
    for (size_t i = 0; i < W.n_scales(); ++i) {
        FullPullback fp = pullback_exact_full(K, f, W.covers[i]);
        out.tower.complexes.push_back(full_nerve(fp, W.covers[i], f, max_dim));
        std::vector<PullbackElement> labels;
        for (const auto& el : fp.elements) {
            PullbackElement lab;
            lab.parent = el.parent;
            lab.anchor = el.anchor;
            if (el.anchor < 0 && el.anchor_simplex.size() >= 2)
                lab.island_edge = {el.anchor_simplex[0], el.anchor_simplex[1]};
            labels.push_back(std::move(lab));
        }
        out.elements.push_back(std::move(labels));
        fps.push_back(std::move(fp));
    }
    for (size_t i = 0; i + 1 < W.n_scales(); ++i) {
        const auto& fine = fps[i];
        const auto& coarse = fps[i + 1];
        std::map<VertexId, VertexId> vm;
        for (size_t e = 0; e < fine.elements.size(); ++e) {
            const auto& el = fine.elements[e];
            int target_parent = W.maps[i].at(el.parent);
            int img = -1;
            for (int sid : el.simplex_ids) {
                int c = coarse.component_of[target_parent][sid];
                if (c < 0)
                    throw std::runtime_error("multiscale_mapper_full: portion lost under cover map");
                if (img < 0) img = c;
                else if (img != c)
                    throw std::runtime_error("multiscale_mapper_full: component split under cover map");
            }
            vm[(int)e] = img;
        }
        out.tower.vertex_maps.push_back(std::move(vm));
    }
    out.tower.validate();
    return out;
}

/// Simplicial isomorphism of two towers via label keys (parent, anchor).
/// Returns an empty string on success, else a reason.
inline std::string towers_isomorphic_reason(const MapperTower& A, const MapperTower& B) {
    if (A.tower.size() != B.tower.size()) return "different tower lengths";
    std::vector<std::map<int, int>> a_to_b(A.tower.size());
    for (size_t i = 0; i < A.tower.size(); ++i) {
        std::map<std::pair<int, int>, int> keyA, keyB;
        for (size_t v = 0; v < A.elements[i].size(); ++v) {
            auto key = std::make_pair(A.elements[i][v].parent, A.elements[i][v].anchor);
            if (A.elements[i][v].anchor < 0) return "vertex-free element in tower A";
            if (keyA.count(key)) return "duplicate label in tower A";
            keyA[key] = (int)v;
        }
        for (size_t v = 0; v < B.elements[i].size(); ++v) {
            auto key = std::make_pair(B.elements[i][v].parent, B.elements[i][v].anchor);
            if (B.elements[i][v].anchor < 0) return "vertex-free element in tower B";
            if (keyB.count(key)) return "duplicate label in tower B";
            keyB[key] = (int)v;
        }
        if (keyA.size() != keyB.size()) return "different element counts at scale " + std::to_string(i);
        for (const auto& [key, va] : keyA) {
            auto it = keyB.find(key);
            if (it == keyB.end())
                return "label (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                       ") only in tower A at scale " + std::to_string(i);
            a_to_b[i][va] = it->second;
        }
        // simplex sets must correspond under the relabeling
        auto relabeled = [&](const SimplicialComplex& K, const std::map<int, int>& m) {
            std::vector<Simplex> out;
            for (const auto& s : K.all_simplices()) {
                Simplex t;
                for (VertexId v : s) t.push_back(m.at(v));
                out.push_back(make_simplex(std::move(t)));
            }
            std::sort(out.begin(), out.end());
            return out;
        };
        std::map<int, int> identity;
        for (VertexId v : B.tower.complexes[i].vertices()) identity[v] = v;
        if (relabeled(A.tower.complexes[i], a_to_b[i]) != relabeled(B.tower.complexes[i], identity))
            return "simplex sets differ at scale " + std::to_string(i);
    }
    for (size_t i = 0; i + 1 < A.tower.size(); ++i)
        for (const auto& [va, wb] : a_to_b[i]) {
            int fa = A.tower.vertex_maps[i].at(va);
            int fb = B.tower.vertex_maps[i].at(wb);
            if (a_to_b[i + 1].at(fa) != fb) return "maps do not commute at scale " + std::to_string(i);
        }
    return "";
}

}  // namespace mapscale
