#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "mapscale/simplicial_complex.hpp"

namespace mapscale {

/// Arithmetic mod a small prime p.
struct Zp {
    int p;
    explicit Zp(int prime) : p(prime) {
        if (prime < 2) throw std::invalid_argument("Zp: prime must be >= 2");
        for (int d = 2; d * d <= prime; ++d)
            if (prime % d == 0) throw std::invalid_argument("Zp: " + std::to_string(prime) + " is not prime");
    }
    int norm(long long x) const {
        long long r = x % p;
        return (int)(r < 0 ? r + p : r);
    }
    int add(int a, int b) const { return norm((long long)a + b); }
    int mul(int a, int b) const { return norm((long long)a * b); }
    int neg(int a) const { return norm(-(long long)a); }
    int inv(int a) const {
        a = norm(a);
        if (a == 0) throw std::domain_error("Zp: inverse of zero");
        int r = 1, base = a, e = p - 2;  // Fermat
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }
};

/// Sparse vector over Zp: (index, coeff) pairs, sorted by index, coeff != 0.
using Chain = std::vector<std::pair<int, int>>;

inline Chain chain_add_scaled(const Chain& a, const Chain& b, int coef, const Zp& F) {
    Chain out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            int c = F.mul(b[j].second, coef);
            if (c) out.push_back({b[j].first, c});
            ++j;
        } else {
            int c = F.add(a[i].second, F.mul(b[j].second, coef));
            if (c) out.push_back({a[i].first, c});
            ++i;
            ++j;
        }
    }
    return out;
}

/// Incremental column echelonization keyed by the largest nonzero index.
/// Used for ranks, kernels and quotient bases.
class ColumnReducer {
public:
    explicit ColumnReducer(const Zp& F) : F_(F) {}

    /// Fully reduces v against the stored columns.
    Chain reduce(Chain v) const {
        while (!v.empty()) {
            auto it = by_low_.find(v.back().first);
            if (it == by_low_.end()) break;
            const Chain& col = cols_[it->second];
            int coef = F_.neg(F_.mul(v.back().second, F_.inv(col.back().second)));
            v = chain_add_scaled(v, col, coef, F_);
        }
        return v;
    }

    /// Reduces and stores when independent; true iff the column was added.
    bool add(Chain v) {
        v = reduce(std::move(v));
        if (v.empty()) return false;
        by_low_[v.back().first] = cols_.size();
        cols_.push_back(std::move(v));
        return true;
    }

    size_t rank() const { return cols_.size(); }

private:
    Zp F_;
    std::vector<Chain> cols_;
    std::map<int, size_t> by_low_;
};

/// Indexed chain-complex view of a simplicial complex.
struct ChainContext {
    const SimplicialComplex* K;
    Zp F;
    std::vector<std::map<Simplex, int>> index;  // per dim

    ChainContext(const SimplicialComplex& cx, int p) : K(&cx), F(p) {
        index.resize(std::max(0, cx.dimension()) + 1);
        for (int d = 0; d <= cx.dimension(); ++d) {
            int i = 0;
            for (const auto& s : cx.simplices(d)) index[d][s] = i++;
        }
    }

    int count(int dim) const { return (int)K->simplices(dim).size(); }

    /// Boundary of the idx-th dim-simplex as a chain over (dim-1)-simplices.
    Chain boundary(int dim, int idx) const {
        Chain out;
        if (dim == 0) return out;
        const Simplex& s = K->simplices(dim)[idx];
        Simplex face;
        for (size_t skip = 0; skip < s.size(); ++skip) {
            face.clear();
            for (size_t i = 0; i < s.size(); ++i)
                if (i != skip) face.push_back(s[i]);
            int sign = (skip % 2 == 0) ? 1 : F.p - 1;
            out.push_back({index[dim - 1].at(face), sign});
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

struct HomologyBasis {
    int dim = 0;
    int p = 2;
    std::vector<Chain> cycles;  // representatives, over k-simplex indices
    int betti() const { return (int)cycles.size(); }
};

namespace detail {
/// Kernel basis of the boundary operator on dim-chains, via reduction with a
/// companion matrix.
inline std::vector<Chain> cycle_basis(const ChainContext& cc, int dim) {
    const Zp& F = cc.F;
    ColumnReducer red(F);
    std::vector<Chain> kernel;
    std::vector<Chain> stored_v;
    std::vector<Chain> stored_r;
    std::map<int, size_t> by_low;
    for (int j = 0; j < cc.count(dim); ++j) {
        Chain r = cc.boundary(dim, j);
        Chain v{{j, 1}};
        while (!r.empty()) {
            auto it = by_low.find(r.back().first);
            if (it == by_low.end()) break;
            int coef = F.neg(F.mul(r.back().second, F.inv(stored_r[it->second].back().second)));
            r = chain_add_scaled(r, stored_r[it->second], coef, F);
            v = chain_add_scaled(v, stored_v[it->second], coef, F);
        }
        if (r.empty()) {
            kernel.push_back(std::move(v));
        } else {
            by_low[r.back().first] = stored_r.size();
            stored_r.push_back(std::move(r));
            stored_v.push_back(std::move(v));
        }
    }
    return kernel;
}

/// Image basis of the boundary operator on (dim+1)-chains.
inline std::vector<Chain> boundary_basis(const ChainContext& cc, int dim) {
    ColumnReducer red(cc.F);
    std::vector<Chain> out;
    for (int j = 0; j < cc.count(dim + 1); ++j) {
        Chain b = red.reduce(cc.boundary(dim + 1, j));
        if (!b.empty()) {
            out.push_back(b);
            red.add(b);
        }
    }
    return out;
}
}  // namespace detail

/// Independent cycle representatives spanning H_dim(K; Z/p).
inline HomologyBasis homology_basis(const SimplicialComplex& K, int dim, int p = 2) {
    ChainContext cc(K, p);
    HomologyBasis out;
    out.dim = dim;
    out.p = p;
    if (dim > K.dimension()) return out;
    ColumnReducer quotient(cc.F);
    for (const Chain& b : detail::boundary_basis(cc, dim)) quotient.add(b);
    for (Chain& z : detail::cycle_basis(cc, dim)) {
        Chain rem = quotient.reduce(z);
        if (!rem.empty()) {
            quotient.add(rem);
            out.cycles.push_back(std::move(z));
        }
    }
    return out;
}

/// Expresses cycles of a fixed complex in a chosen homology basis.
class CycleCoordinates {
public:
    CycleCoordinates(const SimplicialComplex& K, const HomologyBasis& basis, int p)
        : cc_(K, p), F_(p), n_reps_((int)basis.cycles.size()) {
        for (const Chain& b : detail::boundary_basis(cc_, basis.dim)) store(b, Chain{});
        for (int i = 0; i < n_reps_; ++i) store(basis.cycles[i], Chain{{i, 1}});
    }

    /// Coordinates of a cycle z in the basis (throws if z is not a cycle
    /// modulo boundaries of the stored complex).
    std::vector<int> coords(Chain z) const {
        std::vector<int> out(n_reps_, 0);
        Chain tag;
        while (!z.empty()) {
            auto it = by_low_.find(z.back().first);
            if (it == by_low_.end())
                throw std::runtime_error("CycleCoordinates: vector outside cycle space");
            const auto& [col, coltag] = cols_[it->second];
            int lam = F_.mul(z.back().second, F_.inv(col.back().second));
            z = chain_add_scaled(z, col, F_.neg(lam), F_);
            tag = chain_add_scaled(tag, coltag, lam, F_);
        }
        for (const auto& [i, c] : tag) out[i] = c;
        return out;
    }

    const ChainContext& context() const { return cc_; }

private:
    void store(Chain v, Chain tag) {
        while (!v.empty()) {
            auto it = by_low_.find(v.back().first);
            if (it == by_low_.end()) break;
            const auto& [col, coltag] = cols_[it->second];
            int coef = F_.neg(F_.mul(v.back().second, F_.inv(col.back().second)));
            v = chain_add_scaled(v, col, coef, F_);
            tag = chain_add_scaled(tag, coltag, coef, F_);
        }
        if (!v.empty()) {
            by_low_[v.back().first] = cols_.size();
            cols_.push_back({std::move(v), std::move(tag)});
        }
    }

    ChainContext cc_;
    Zp F_;
    int n_reps_;
    std::vector<std::pair<Chain, Chain>> cols_;
    std::map<int, size_t> by_low_;
};

/// Matrix (rows = target basis, cols = source basis) of H_dim of a vertex
/// map.  The chain map sends a simplex to its image when nondegenerate and
/// to zero otherwise, with the sign of the sorting permutation.
inline std::vector<std::vector<int>> induced_map(const std::map<VertexId, VertexId>& vertex_map,
                                                 const SimplicialComplex& source,
                                                 const SimplicialComplex& target, int dim, int p,
                                                 const HomologyBasis& source_basis,
                                                 const CycleCoordinates& target_coords) {
    Zp F(p);
    ChainContext src(source, p);
    const ChainContext& tgt = target_coords.context();
    std::vector<std::vector<int>> M;
    const int rows = (int)target_coords.coords(Chain{}).size();
    for (const Chain& z : source_basis.cycles) {
        std::map<int, int> acc;
        for (const auto& [sidx, coeff] : z) {
            const Simplex& s = source.simplices(dim)[sidx];
            std::vector<VertexId> img;
            for (VertexId v : s) {
                auto it = vertex_map.find(v);
                if (it == vertex_map.end())
                    throw std::invalid_argument("induced_map: vertex map misses vertex " +
                                                std::to_string(v));
                img.push_back(it->second);
            }
            // permutation sign of the sort; degenerate images vanish
            int inversions = 0;
            bool degenerate = false;
            for (size_t i = 0; i < img.size() && !degenerate; ++i)
                for (size_t j = i + 1; j < img.size(); ++j) {
                    if (img[i] == img[j]) { degenerate = true; break; }
                    if (img[i] > img[j]) ++inversions;
                }
            if (degenerate) continue;
            Simplex t(img);
            std::sort(t.begin(), t.end());
            if (!target.contains(t))
                throw std::invalid_argument("induced_map: map is not simplicial on " + simplex_str(s));
            int c = (inversions % 2 == 0) ? coeff : F.neg(coeff);
            int ti = tgt.index[dim].at(t);
            acc[ti] = F.add(acc.count(ti) ? acc[ti] : 0, c);
        }
        Chain image;
        for (const auto& [i, c] : acc)
            if (c) image.push_back({i, c});
        std::vector<int> col = target_coords.coords(std::move(image));
        M.push_back(std::move(col));
    }
    // transpose: M currently holds one column per source rep
    std::vector<std::vector<int>> out(rows, std::vector<int>(M.size(), 0));
    for (size_t c = 0; c < M.size(); ++c)
        for (size_t r = 0; r < M[c].size(); ++r) out[r][c] = M[c][r];
    return out;
}

/// Rank of a dense matrix over Z/p.
inline int matrix_rank(std::vector<std::vector<int>> A, int p) {
    Zp F(p);
    if (A.empty()) return 0;
    const size_t rows = A.size(), cols = A[0].size();
    int rank = 0;
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t piv = row;
        while (piv < rows && A[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(A[piv], A[row]);
        int inv = F.inv(A[row][col]);
        for (size_t j = col; j < cols; ++j) A[row][j] = F.mul(A[row][j], inv);
        for (size_t i = 0; i < rows; ++i) {
            if (i == row || A[i][col] == 0) continue;
            int c = A[i][col];
            for (size_t j = col; j < cols; ++j)
                A[i][j] = F.add(A[i][j], F.neg(F.mul(c, A[row][j])));
        }
        ++row;
        ++rank;
    }
    return rank;
}

inline std::vector<std::vector<int>> matrix_mul(const std::vector<std::vector<int>>& A,
                                                const std::vector<std::vector<int>>& B, int p) {
    Zp F(p);
    if (A.empty() || B.empty()) return {};
    const size_t n = A.size(), m = B[0].size(), k = B.size();
    std::vector<std::vector<int>> C(n, std::vector<int>(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (A[i][l] == 0) continue;
            for (size_t j = 0; j < m; ++j)
                C[i][j] = F.add(C[i][j], F.mul(A[i][l], B[l][j]));
        }
    return C;
}

}  // namespace mapscale
