#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "mapscale/persistence.hpp"

namespace mapscale {

namespace detail {

/// Kuhn's augmenting-path bipartite matching.
class BipartiteMatcher {
public:
    BipartiteMatcher(int n_left, int n_right) : adj_(n_left), match_right_(n_right, -1) {}
    void add_edge(int l, int r) { adj_[l].push_back(r); }
    int max_matching() {
        int matched = 0;
        for (int l = 0; l < (int)adj_.size(); ++l) {
            std::vector<char> used(match_right_.size(), 0);
            if (try_augment(l, used)) ++matched;
        }
        return matched;
    }

private:
    bool try_augment(int l, std::vector<char>& used) {
        for (int r : adj_[l]) {
            if (used[r]) continue;
            used[r] = 1;
            if (match_right_[r] < 0 || try_augment(match_right_[r], used)) {
                match_right_[r] = l;
                return true;
            }
        }
        return false;
    }
    std::vector<std::vector<int>> adj_;
    std::vector<int> match_right_;
};

struct FinitePoint {
    double b, d;
    double diag_cost() const { return (d - b) / 2.0; }
};

inline double pair_cost(const FinitePoint& x, const FinitePoint& y) {
    return std::max(std::fabs(x.b - y.b), std::fabs(x.d - y.d));
}

/// Perfect matching at threshold t with diagonal slots on both sides.
inline bool feasible(const std::vector<FinitePoint>& A, const std::vector<FinitePoint>& B,
                     double t) {
    const int n1 = (int)A.size(), n2 = (int)B.size();
    // left: A points then n2 diagonal slots; right: B points then n1 slots
    BipartiteMatcher m(n1 + n2, n2 + n1);
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j)
            if (pair_cost(A[i], B[j]) <= t) m.add_edge(i, j);
        if (A[i].diag_cost() <= t) m.add_edge(i, n2 + i);
    }
    for (int j = 0; j < n2; ++j) {
        if (B[j].diag_cost() <= t) m.add_edge(n1 + j, j);
        for (int i = 0; i < n1; ++i) m.add_edge(n1 + j, n2 + i);  // diag-diag, free
    }
    return m.max_matching() == n1 + n2;
}

}  // namespace detail

/// Bottleneck distance between the dimension-k slices of two diagrams.
/// Points with death = +inf must match each other (cost |birth - birth'|);
/// a count mismatch of such points gives +inf.  The finite part is solved
/// exactly over the finite candidate-cost set.
inline double bottleneck(const PersistenceDiagram& D1, const PersistenceDiagram& D2, int k) {
    std::vector<detail::FinitePoint> A, B;
    std::vector<double> infA, infB;
    for (const auto& pt : D1.in_dim(k))
        (pt.death == kInf) ? infA.push_back(pt.birth) : A.push_back({pt.birth, pt.death});
    for (const auto& pt : D2.in_dim(k))
        (pt.death == kInf) ? infB.push_back(pt.birth) : B.push_back({pt.birth, pt.death});

    if (infA.size() != infB.size()) return kInf;
    double essential_part = 0;
    std::sort(infA.begin(), infA.end());
    std::sort(infB.begin(), infB.end());
    for (size_t i = 0; i < infA.size(); ++i)
        essential_part = std::max(essential_part, std::fabs(infA[i] - infB[i]));

    if (A.empty() && B.empty()) return essential_part;

    std::set<double> candidates{0.0};
    for (const auto& x : A) candidates.insert(x.diag_cost());
    for (const auto& y : B) candidates.insert(y.diag_cost());
    for (const auto& x : A)
        for (const auto& y : B) candidates.insert(detail::pair_cost(x, y));

    double finite_part = kInf;
    std::vector<double> cand(candidates.begin(), candidates.end());
    size_t lo = 0, hi = cand.size() - 1;
    if (!detail::feasible(A, B, cand[hi])) return kInf;  // cannot happen: all-diagonal works
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (detail::feasible(A, B, cand[mid])) hi = mid;
        else lo = mid + 1;
    }
    finite_part = cand[lo];
    return std::max(essential_part, finite_part);
}

}  // namespace mapscale
