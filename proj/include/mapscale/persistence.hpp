#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "mapscale/homology.hpp"
#include "mapscale/mapper.hpp"

namespace mapscale {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DiagramPoint {
    int dim = 0;
    double birth = 0;
    double death = kInf;

    friend bool operator<(const DiagramPoint& a, const DiagramPoint& b) {
        if (a.dim != b.dim) return a.dim < b.dim;
        if (a.birth != b.birth) return a.birth < b.birth;
        return a.death < b.death;
    }
    friend bool operator==(const DiagramPoint& a, const DiagramPoint& b) {
        return a.dim == b.dim && a.birth == b.birth && a.death == b.death;
    }
};

/// Multiset of (dim, birth, death) bars; death +inf means the class is alive
/// at the top index of the tower.  Bars are half-open [birth, death).
struct PersistenceDiagram {
    std::vector<DiagramPoint> points;

    void normalize() { std::sort(points.begin(), points.end()); }

    std::vector<DiagramPoint> in_dim(int k) const {
        std::vector<DiagramPoint> out;
        for (const auto& pt : points)
            if (pt.dim == k) out.push_back(pt);
        return out;
    }

    friend bool operator==(const PersistenceDiagram& a, const PersistenceDiagram& b) {
        return a.points == b.points;
    }
};

/// Applies natural log to all endpoints (for towers on a raw scale grid this
/// matches log-reindexing the tower before taking diagrams).
inline PersistenceDiagram log_diagram(const PersistenceDiagram& D) {
    PersistenceDiagram out = D;
    for (auto& pt : out.points) {
        if (!(pt.birth > 0)) throw std::invalid_argument("log_diagram: nonpositive birth");
        pt.birth = std::log(pt.birth);
        if (pt.death != kInf) pt.death = std::log(pt.death);
    }
    out.normalize();
    return out;
}

namespace detail {

struct Filtration {
    std::vector<int> dim_of;
    std::vector<int> batch_of;
    std::vector<Chain> boundary;  // over earlier column indices
};

/// Global relabeling for the telescope: one vertex namespace per level.
class LevelVertexIds {
public:
    int id(int level, VertexId v) {
        auto [it, fresh] = ids_.try_emplace({level, v}, next_);
        if (fresh) ++next_;
        return it->second;
    }

private:
    std::map<std::pair<int, VertexId>, int> ids_;
    int next_ = 0;
};

inline void closure_into(const Simplex& s, std::set<Simplex>& out) {
    if (out.count(s)) return;
    out.insert(s);
    if (s.size() == 1) return;
    Simplex face;
    for (size_t skip = 0; skip < s.size(); ++skip) {
        face.clear();
        for (size_t i = 0; i < s.size(); ++i)
            if (i != skip) face.push_back(s[i]);
        closure_into(face, out);
    }
}

/// Appends a batch of simplices (faces first) to the filtration.
inline void append_batch(Filtration& f, std::map<Simplex, int>& index,
                         const std::set<Simplex>& batch, int batch_no, const Zp& F) {
    std::vector<Simplex> ordered(batch.begin(), batch.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const Simplex& a, const Simplex& b) { return a.size() < b.size(); });
    for (const auto& s : ordered) {
        if (index.count(s)) continue;
        int col = (int)f.dim_of.size();
        index[s] = col;
        f.dim_of.push_back((int)s.size() - 1);
        f.batch_of.push_back(batch_no);
        Chain bd;
        if (s.size() > 1) {
            Simplex face;
            for (size_t skip = 0; skip < s.size(); ++skip) {
                face.clear();
                for (size_t i = 0; i < s.size(); ++i)
                    if (i != skip) face.push_back(s[i]);
                int sign = (skip % 2 == 0) ? 1 : F.p - 1;
                bd.push_back({index.at(face), sign});
            }
            std::sort(bd.begin(), bd.end());
        }
        f.boundary.push_back(std::move(bd));
    }
}

inline bool all_inclusions(const ComplexTower& T) {
    for (size_t i = 0; i + 1 < T.size(); ++i) {
        for (VertexId v : T.complexes[i].vertices()) {
            auto it = T.vertex_maps[i].find(v);
            if (it == T.vertex_maps[i].end() || it->second != v) return false;
        }
        for (const auto& s : T.complexes[i].all_simplices())
            if (!T.complexes[i + 1].contains(s)) return false;
    }
    return true;
}

/// Inclusion towers are already filtrations.
inline Filtration filtration_of_inclusions(const ComplexTower& T, const Zp& F) {
    Filtration f;
    std::map<Simplex, int> index;
    for (size_t j = 0; j < T.size(); ++j) {
        std::set<Simplex> batch;
        for (const auto& s : T.complexes[j].all_simplices())
            if (!index.count(s)) batch.insert(s);
        append_batch(f, index, batch, (int)j, F);
    }
    return f;
}

/// General towers run through the simplicial mapping telescope: each map is
/// replaced by its mapping cylinder, whose target is a deformation retract,
/// so the telescope filtration carries an isomorphic persistence module.
inline Filtration filtration_of_telescope(const ComplexTower& T, const Zp& F) {
    Filtration f;
    std::map<Simplex, int> index;
    LevelVertexIds ids;

    auto relabel = [&](int level, const Simplex& s) {
        Simplex out;
        out.reserve(s.size());
        for (VertexId v : s) out.push_back(ids.id(level, v));
        return make_simplex(std::move(out));
    };

    std::set<Simplex> batch;
    for (const auto& s : T.complexes[0].all_simplices()) batch.insert(relabel(0, s));
    append_batch(f, index, batch, 0, F);

    for (size_t j = 1; j < T.size(); ++j) {
        batch.clear();
        for (const auto& s : T.complexes[j].all_simplices())
            closure_into(relabel((int)j, s), batch);
        const auto& vm = T.vertex_maps[j - 1];
        for (const auto& s : T.complexes[j - 1].all_simplices()) {
            // source vertices in id order; cylinder cells {v0..vi, phi(vi)..phi(vk)}
            for (size_t i = 0; i < s.size(); ++i) {
                Simplex cell;
                for (size_t a = 0; a <= i; ++a) cell.push_back(ids.id((int)j - 1, s[a]));
                for (size_t a = i; a < s.size(); ++a) cell.push_back(ids.id((int)j, vm.at(s[a])));
                closure_into(make_simplex(std::move(cell)), batch);
            }
        }
        std::erase_if(batch, [&](const Simplex& s) { return index.count(s) > 0; });
        append_batch(f, index, batch, (int)j, F);
    }
    return f;
}

struct RawBar {
    int dim;
    int birth_batch;
    int death_batch;  // -1 for essential
};

/// Standard column reduction; bars in batch indices.
inline std::vector<RawBar> reduce_filtration(const Filtration& f, const Zp& F) {
    const size_t n = f.dim_of.size();
    std::vector<Chain> R(f.boundary);
    std::map<int, int> pivot;  // low index -> column
    std::vector<RawBar> bars;
    std::vector<char> creator(n, 0), killed(n, 0);
    for (size_t j = 0; j < n; ++j) {
        Chain& col = R[j];
        while (!col.empty()) {
            auto it = pivot.find(col.back().first);
            if (it == pivot.end()) break;
            const Chain& other = R[it->second];
            int coef = F.neg(F.mul(col.back().second, F.inv(other.back().second)));
            col = chain_add_scaled(col, other, coef, F);
        }
        if (col.empty()) {
            creator[j] = 1;
        } else {
            int i = col.back().first;
            pivot[i] = (int)j;
            killed[i] = 1;
            bars.push_back({f.dim_of[i], f.batch_of[i], f.batch_of[j]});
        }
    }
    for (size_t j = 0; j < n; ++j)
        if (creator[j] && !killed[j]) bars.push_back({f.dim_of[j], f.batch_of[j], -1});
    return bars;
}

}  // namespace detail

/// Persistence diagram of a tower of simplicial maps, through the mapping
/// telescope (or directly, when every map is an inclusion).
inline PersistenceDiagram tower_diagram(const ComplexTower& T, int max_dim = 1, int p = 2) {
    T.validate();
    Zp F(p);
    detail::Filtration f = detail::all_inclusions(T) ? detail::filtration_of_inclusions(T, F)
                                                     : detail::filtration_of_telescope(T, F);
    PersistenceDiagram D;
    for (const auto& bar : detail::reduce_filtration(f, F)) {
        if (bar.dim > max_dim) continue;
        if (bar.death_batch == bar.birth_batch) continue;
        DiagramPoint pt;
        pt.dim = bar.dim;
        pt.birth = T.scales[bar.birth_batch];
        pt.death = bar.death_batch < 0 ? kInf : T.scales[bar.death_batch];
        D.points.push_back(pt);
    }
    D.normalize();
    return D;
}

/// Independent oracle: left-to-right decomposition of the homology matrix
/// sequence via composite ranks.  Shares nothing with the telescope path
/// beyond homology_basis/induced_map.
inline PersistenceDiagram quiver_diagram(const ComplexTower& T, int max_dim = 1, int p = 2) {
    T.validate();
    const size_t n = T.size();
    PersistenceDiagram D;
    for (int k = 0; k <= max_dim; ++k) {
        std::vector<HomologyBasis> basis;
        std::vector<CycleCoordinates> coords;
        for (size_t i = 0; i < n; ++i) {
            basis.push_back(homology_basis(T.complexes[i], k, p));
            coords.emplace_back(T.complexes[i], basis.back(), p);
        }
        struct Mat {
            int rows = 0, cols = 0;
            std::vector<std::vector<int>> a;
        };
        std::vector<Mat> step(n > 0 ? n - 1 : 0);
        for (size_t i = 0; i + 1 < n; ++i) {
            step[i].rows = basis[i + 1].betti();
            step[i].cols = basis[i].betti();
            step[i].a = induced_map(T.vertex_maps[i], T.complexes[i], T.complexes[i + 1], k, p,
                                    basis[i], coords[i + 1]);
        }
        // rank(i,j) = rank of the composite V_i -> V_j
        std::vector<std::vector<int>> rank(n, std::vector<int>(n, 0));
        for (size_t i = 0; i < n; ++i) {
            rank[i][i] = basis[i].betti();
            Mat comp;
            for (size_t j = i + 1; j < n; ++j) {
                if (j == i + 1) {
                    comp = step[i];
                } else {
                    Mat next;
                    next.rows = step[j - 1].rows;
                    next.cols = comp.cols;
                    if (next.rows && next.cols && comp.rows)
                        next.a = matrix_mul(step[j - 1].a, comp.a, p);
                    comp = std::move(next);
                }
                rank[i][j] = (comp.rows && comp.cols && !comp.a.empty()) ? matrix_rank(comp.a, p) : 0;
            }
        }
        auto born_alive = [&](size_t i, size_t j) {
            // bars born exactly at index i and alive through index j
            int r = rank[i][j];
            if (i > 0) r -= rank[i - 1][j];
            return r;
        };
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i; j + 1 < n; ++j) {
                int count = born_alive(i, j) - born_alive(i, j + 1);
                for (int c = 0; c < count; ++c)
                    D.points.push_back({k, T.scales[i], T.scales[j + 1]});
            }
            int essential = born_alive(i, n - 1);
            for (int c = 0; c < essential; ++c) D.points.push_back({k, T.scales[i], kInf});
        }
    }
    D.normalize();
    return D;
}

}  // namespace mapscale
