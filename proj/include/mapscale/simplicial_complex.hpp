#pragma once

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mapscale {

using VertexId = int;

/// A simplex is a sorted, duplicate-free list of vertex ids.
using Simplex = std::vector<VertexId>;

inline Simplex make_simplex(std::vector<VertexId> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline std::string simplex_str(const Simplex& s) {
    std::string out = "{";
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + "}";
}

/// Finite abstract simplicial complex, closed under taking faces.
/// Simplices are stored per dimension in lexicographic order, so all
/// iteration is deterministic.
class SimplicialComplex {
public:
    SimplicialComplex() = default;

    /// Downward closure of the given maximal simplices.  max_dim >= 0 caps
    /// the stored dimension; -1 keeps everything.
    static SimplicialComplex from_maximal(const std::vector<Simplex>& maximal, int max_dim = -1) {
        SimplicialComplex K;
        std::set<Simplex> seen;
        std::set<VertexId> verts;
        for (const auto& raw : maximal) {
            if (raw.empty()) throw std::invalid_argument("from_maximal: empty simplex in input");
            Simplex s = make_simplex(raw);
            verts.insert(s.begin(), s.end());
            add_closure(s, max_dim, seen);
        }
        K.vertices_.assign(verts.begin(), verts.end());
        int top = 0;
        for (const auto& s : seen) top = std::max<int>(top, (int)s.size() - 1);
        K.by_dim_.assign(top + 1, {});
        for (const auto& s : seen) K.by_dim_[s.size() - 1].push_back(s);
        return K;
    }

    const std::vector<VertexId>& vertices() const { return vertices_; }

    int dimension() const { return (int)by_dim_.size() - 1; }

    size_t simplex_count() const {
        size_t n = 0;
        for (const auto& d : by_dim_) n += d.size();
        return n;
    }

    const std::vector<Simplex>& simplices(int dim) const {
        static const std::vector<Simplex> empty;
        if (dim < 0 || dim >= (int)by_dim_.size()) return empty;
        return by_dim_[dim];
    }

    bool contains(const Simplex& s) const {
        int d = (int)s.size() - 1;
        if (d < 0 || d >= (int)by_dim_.size()) return false;
        const auto& v = by_dim_[d];
        return std::binary_search(v.begin(), v.end(), s);
    }

    bool has_vertex(VertexId v) const {
        return std::binary_search(vertices_.begin(), vertices_.end(), v);
    }

    /// All simplices, dimension-major, lexicographic within a dimension.
    std::vector<Simplex> all_simplices() const {
        std::vector<Simplex> out;
        for (const auto& d : by_dim_) out.insert(out.end(), d.begin(), d.end());
        return out;
    }

    bool operator==(const SimplicialComplex& o) const {
        return vertices_ == o.vertices_ && by_dim_ == o.by_dim_;
    }

private:
    static void add_closure(const Simplex& s, int max_dim, std::set<Simplex>& seen) {
        if (max_dim >= 0 && (int)s.size() - 1 > max_dim) {
            // enumerate (max_dim+1)-subsets and close those instead
            std::vector<int> idx(max_dim + 1);
            subsets_of_size(s, max_dim + 1, [&](const Simplex& face) { add_closure(face, max_dim, seen); });
            return;
        }
        if (seen.count(s)) return;
        seen.insert(s);
        if (s.size() == 1) return;
        Simplex face;
        face.reserve(s.size() - 1);
        for (size_t skip = 0; skip < s.size(); ++skip) {
            face.clear();
            for (size_t i = 0; i < s.size(); ++i)
                if (i != skip) face.push_back(s[i]);
            add_closure(face, max_dim, seen);
        }
    }

    template <typename F>
    static void subsets_of_size(const Simplex& s, int k, F&& f) {
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            Simplex face(k);
            for (int i = 0; i < k; ++i) face[i] = s[idx[i]];
            f(face);
            int i = k - 1;
            while (i >= 0 && idx[i] == (int)s.size() - k + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }

    std::vector<VertexId> vertices_;
    std::vector<std::vector<Simplex>> by_dim_;
};

inline SimplicialComplex build_complex(const std::vector<Simplex>& maximal, int max_dim = -1) {
    return SimplicialComplex::from_maximal(maximal, max_dim);
}

/// Undirected graph over integer vertex ids; no self-loops.
struct Graph {
    std::vector<VertexId> vertices;                      // sorted
    std::vector<std::pair<VertexId, VertexId>> edges;    // (u,v), u < v, sorted

    bool has_vertex(VertexId v) const {
        return std::binary_search(vertices.begin(), vertices.end(), v);
    }
    bool has_edge(VertexId u, VertexId v) const {
        if (u > v) std::swap(u, v);
        return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
    }
};

inline Graph one_skeleton(const SimplicialComplex& K) {
    Graph g;
    g.vertices = K.vertices();
    for (const auto& e : K.simplices(1)) g.edges.emplace_back(e[0], e[1]);
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

/// Union-find keyed by vertex id, with the minimum id as the block label.
class UnionFind {
public:
    void add(VertexId v) { parent_.emplace(v, v); }
    bool has(VertexId v) const { return parent_.count(v) > 0; }
    VertexId find(VertexId v) {
        VertexId r = v;
        while (parent_.at(r) != r) r = parent_.at(r);
        while (parent_.at(v) != r) { VertexId p = parent_.at(v); parent_[v] = r; v = p; }
        return r;
    }
    void unite(VertexId a, VertexId b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);   // keep the smaller id as root
        parent_[b] = a;
    }
    std::map<VertexId, std::vector<VertexId>> blocks() {
        std::map<VertexId, std::vector<VertexId>> out;
        for (const auto& [v, p] : parent_) out[find(v)].push_back(v);
        return out;
    }

private:
    std::map<VertexId, VertexId> parent_;
};

/// Partition of O into maximal subsets mutually connected within the
/// subgraph of G spanned by O.  Blocks come back sorted by minimum id.
inline std::vector<std::vector<VertexId>> connected_components(const std::vector<VertexId>& O,
                                                               const Graph& G) {
    UnionFind uf;
    for (VertexId v : O) {
        if (!G.has_vertex(v))
            throw std::invalid_argument("connected_components: vertex " + std::to_string(v) +
                                        " not in graph");
        uf.add(v);
    }
    for (const auto& [u, v] : G.edges)
        if (uf.has(u) && uf.has(v)) uf.unite(u, v);
    std::vector<std::vector<VertexId>> out;
    for (auto& [root, block] : uf.blocks()) {
        std::sort(block.begin(), block.end());
        out.push_back(std::move(block));
    }
    return out;  // map iteration is ordered by root = min id
}

/// Vertex map between complexes; every simplex image must be a simplex of
/// the target (checked at construction).
struct SimplicialMap {
    SimplicialComplex source;
    SimplicialComplex target;
    std::map<VertexId, VertexId> vertex_map;

    SimplicialMap(SimplicialComplex src, SimplicialComplex tgt, std::map<VertexId, VertexId> vm)
        : source(std::move(src)), target(std::move(tgt)), vertex_map(std::move(vm)) {
        for (VertexId v : source.vertices())
            if (!vertex_map.count(v))
                throw std::invalid_argument("SimplicialMap: vertex " + std::to_string(v) +
                                            " has no image");
        for (const auto& s : source.all_simplices()) {
            Simplex img = apply(s);
            if (!target.contains(img))
                throw std::invalid_argument("SimplicialMap: image of " + simplex_str(s) +
                                            " is not a simplex of the target");
        }
    }

    Simplex apply(const Simplex& s) const {
        Simplex img;
        img.reserve(s.size());
        for (VertexId v : s) img.push_back(vertex_map.at(v));
        return make_simplex(std::move(img));
    }
};

/// h1(sigma) union h2(sigma) must be a target simplex for every sigma.
inline bool are_contiguous(const SimplicialMap& h1, const SimplicialMap& h2) {
    if (!(h1.source == h2.source) || !(h1.target == h2.target))
        throw std::invalid_argument("are_contiguous: maps must share source and target");
    for (const auto& s : h1.source.all_simplices()) {
        Simplex a = h1.apply(s);
        Simplex b = h2.apply(s);
        a.insert(a.end(), b.begin(), b.end());
        if (!h1.target.contains(make_simplex(std::move(a)))) return false;
    }
    return true;
}

}  // namespace mapscale
