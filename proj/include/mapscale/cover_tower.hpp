#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapscale/cover.hpp"

namespace mapscale {

/// A (c,s) certificate attached to a tower by its builder.
struct GoodnessCertificate {
    Rational c, s;
};

/// Finite tower of covers over an explicit, strictly increasing scale grid.
/// The continuous tower it stands for is the right-continuous step
/// extension: the cover at any scale t is the cover at the largest grid
/// scale <= t.
struct CoverTower {
    std::shared_ptr<const Codomain> codomain;
    std::vector<double> scales;           // strictly increasing
    std::vector<Rational> exact_scales;   // empty iff log_scale
    bool log_scale = false;
    std::vector<Cover> covers;            // one per scale
    std::vector<std::vector<int>> maps;   // maps[i]: element id at scale i -> id at scale i+1
    std::optional<GoodnessCertificate> goodness;
    std::string kind = "explicit";

    size_t n_scales() const { return scales.size(); }
    double res() const { return scales.front(); }
    Rational res_exact() const { return exact_scales.front(); }

    const Cover& cover(size_t i) const { return covers.at(i); }

    /// Composite element map from scale i to scale j (i <= j).
    std::vector<int> map_between(size_t i, size_t j) const {
        if (j < i || j >= covers.size()) throw std::invalid_argument("map_between: bad indices");
        std::vector<int> m(covers[i].size());
        for (size_t e = 0; e < m.size(); ++e) m[e] = (int)e;
        for (size_t k = i; k < j; ++k)
            for (auto& e : m) e = maps[k].at(e);
        return m;
    }

    /// Largest grid index with scale <= t (step extension).  Requires t >= res.
    size_t floor_index(const Rational& t) const {
        require_exact("floor_index");
        if (t < exact_scales.front()) throw std::invalid_argument("floor_index: below resolution");
        size_t i = 0;
        while (i + 1 < exact_scales.size() && exact_scales[i + 1] <= t) ++i;
        return i;
    }
    size_t floor_index(double t) const {
        if (t < scales.front()) throw std::invalid_argument("floor_index: below resolution");
        size_t i = 0;
        while (i + 1 < scales.size() && scales[i + 1] <= t) ++i;
        return i;
    }

    /// Smallest grid index with scale >= t, clamped to the top index.
    size_t ceil_index_clamped(const Rational& t) const {
        require_exact("ceil_index_clamped");
        for (size_t i = 0; i < exact_scales.size(); ++i)
            if (exact_scales[i] >= t) return i;
        return exact_scales.size() - 1;
    }
    size_t ceil_index_clamped(double t) const {
        for (size_t i = 0; i < scales.size(); ++i)
            if (scales[i] >= t) return i;
        return scales.size() - 1;
    }

    /// Largest ratio between consecutive grid scales (grid-slack bookkeeping).
    double max_grid_ratio() const {
        double r = 1;
        for (size_t i = 0; i + 1 < scales.size(); ++i) r = std::max(r, scales[i + 1] / scales[i]);
        return r;
    }

    /// Tower well-formedness: grid strictly increasing, every cover covers the
    /// codomain, every element is contained in its image (exact test).
    void validate() const {
        if (scales.empty()) throw std::invalid_argument("CoverTower: empty scale grid");
        if (covers.size() != scales.size()) throw std::invalid_argument("CoverTower: covers/scales mismatch");
        if (maps.size() + 1 != covers.size()) throw std::invalid_argument("CoverTower: maps/covers mismatch");
        for (size_t i = 0; i + 1 < scales.size(); ++i)
            if (!(scales[i] < scales[i + 1]))
                throw std::invalid_argument("CoverTower: scales not strictly increasing");
        for (size_t i = 0; i < covers.size(); ++i)
            if (!covers[i].covers(*codomain))
                throw std::invalid_argument("CoverTower: cover at scale index " + std::to_string(i) +
                                            " does not cover the codomain");
        for (size_t i = 0; i < maps.size(); ++i) {
            if (maps[i].size() != covers[i].size())
                throw std::invalid_argument("CoverTower: map size mismatch at " + std::to_string(i));
            for (size_t e = 0; e < maps[i].size(); ++e) {
                int img = maps[i][e];
                if (img < 0 || img >= (int)covers[i + 1].size())
                    throw std::invalid_argument("CoverTower: map image out of range");
                if (!covers[i].elements[e].subset_of(covers[i + 1].elements[img]))
                    throw std::invalid_argument("CoverTower: containment violated: " +
                                                covers[i].elements[e].str() + " not inside " +
                                                covers[i + 1].elements[img].str());
            }
        }
    }

private:
    void require_exact(const char* who) const {
        if (exact_scales.empty())
            throw std::logic_error(std::string(who) + ": tower has no exact scales (log-reindexed?)");
    }
};

/// Natural-log reindexing of the scale axis; covers and maps unchanged.
/// Certificates do not survive (they speak about raw scales).
inline CoverTower reindex_log(const CoverTower& W) {
    if (W.log_scale) throw std::invalid_argument("reindex_log: already log-reindexed");
    CoverTower out = W;
    out.exact_scales.clear();
    out.log_scale = true;
    out.goodness.reset();
    for (size_t i = 0; i < W.scales.size(); ++i) {
        if (!(W.scales[i] > 0)) throw std::invalid_argument("reindex_log: nonpositive scale");
        out.scales[i] = std::log(W.scales[i]);
    }
    return out;
}

/// Keep scales >= eps0.  The result's resolution is the smallest kept scale
/// and an attached certificate is re-based to it.
inline CoverTower truncate(const CoverTower& W, const Rational& eps0) {
    if (W.exact_scales.empty()) throw std::invalid_argument("truncate: requires exact scales");
    if (eps0 < W.exact_scales.front()) throw std::invalid_argument("truncate: eps0 below resolution");
    if (eps0 > W.exact_scales.back()) throw std::invalid_argument("truncate: eps0 beyond top scale");
    size_t first = 0;
    while (W.exact_scales[first] < eps0) ++first;
    CoverTower out;
    out.codomain = W.codomain;
    out.log_scale = false;
    out.kind = W.kind;
    out.scales.assign(W.scales.begin() + first, W.scales.end());
    out.exact_scales.assign(W.exact_scales.begin() + first, W.exact_scales.end());
    out.covers.assign(W.covers.begin() + first, W.covers.end());
    out.maps.assign(W.maps.begin() + first, W.maps.end());
    if (W.goodness) out.goodness = GoodnessCertificate{W.goodness->c, out.exact_scales.front()};
    return out;
}

namespace detail {
inline bool same_codomain(const Codomain& a, const Codomain& b) {
    if (a.is_real() != b.is_real()) return false;
    if (a.is_real())
        return a.segment().lo == b.segment().lo && a.segment().hi == b.segment().hi;
    return a.metric().point_ids == b.metric().point_ids;
}

inline bool interleaves_at(const CoverTower& U, const CoverTower& V, const Rational& eta) {
    for (size_t i = 0; i < U.n_scales(); ++i) {
        size_t j = V.floor_index(U.exact_scales[i] + eta);
        for (const auto& e : U.covers[i].elements) {
            bool ok = false;
            for (const auto& t : V.covers[j].elements)
                if (e.subset_of(t)) { ok = true; break; }
            if (!ok) return false;
        }
    }
    return true;
}
}  // namespace detail

/// Smallest grid offset eta such that every element of U at scale e fits in
/// some element of V at scale e+eta and symmetrically; +inf when none works.
inline double min_interleaving(const CoverTower& U, const CoverTower& V) {
    if (!detail::same_codomain(*U.codomain, *V.codomain))
        throw std::invalid_argument("min_interleaving: codomain mismatch");
    if (U.exact_scales.empty() || V.exact_scales.empty())
        throw std::invalid_argument("min_interleaving: requires raw (non-log) towers");
    if (!(U.res_exact() == V.res_exact()))
        throw std::invalid_argument("min_interleaving: resolutions differ; truncate first");
    std::set<Rational> candidates;
    candidates.insert(Rational(0));
    for (const Rational& a : U.exact_scales)
        for (const Rational& b : V.exact_scales) {
            if (b >= a) candidates.insert(b - a);
            if (a >= b) candidates.insert(a - b);
        }
    for (const Rational& eta : candidates)
        if (detail::interleaves_at(U, V, eta) && detail::interleaves_at(V, U, eta))
            return eta.to_double();
    return std::numeric_limits<double>::infinity();
}

/// Probe for goodness certification: an interval or a point set in Z.
using Probe = CoverElement;

struct GoodnessReport {
    bool pass = false;
    Rational c{1}, s{1};
    bool cond1_pass = false;   // res == s and s <= diam(Z)
    bool cond1_vacuous = false;
    bool cond2_pass = false;   // diam(W) <= eps everywhere
    bool cond3_pass = false;   // probes swallowed at scale c*diam
    std::vector<std::string> cond2_witnesses;
    std::vector<std::string> cond3_witnesses;
    std::string note;
};

/// All elements of all covers of a tower, as probes.
inline std::vector<Probe> default_probes(const CoverTower& W) {
    std::vector<Probe> out;
    for (const auto& cov : W.covers)
        for (const auto& e : cov.elements) out.push_back(e);
    return out;
}

/// Certifies Def-style (c,s)-goodness over a finite probe family.
/// Condition 3 is checked at the smallest grid scale >= c*diam(O), clamped
/// to the top scale (step extension); this is the documented one-grid-step
/// surrogate for the continuous condition.
inline GoodnessReport verify_goodness(const CoverTower& W, const Rational& c, const Rational& s,
                                      const std::vector<Probe>& probes) {
    if (probes.empty()) throw std::invalid_argument("verify_goodness: empty probe family");
    if (W.exact_scales.empty()) throw std::invalid_argument("verify_goodness: raw towers only");
    GoodnessReport rep;
    rep.c = c;
    rep.s = s;
    const bool real = W.codomain->is_real();
    const double diamZ = W.codomain->diameter();

    rep.cond1_vacuous = diamZ == 0.0;
    rep.cond1_pass = (W.res_exact() == s) && (s.to_double() <= diamZ || rep.cond1_vacuous);
    if (rep.cond1_vacuous) rep.note = "codomain is a single point; conditions hold vacuously";

    rep.cond2_pass = true;
    for (size_t i = 0; i < W.n_scales(); ++i) {
        for (const auto& e : W.covers[i].elements) {
            bool ok = real ? (e.diameter_exact() <= W.exact_scales[i])
                           : (e.diameter(*W.codomain) <= W.scales[i] + 1e-12);
            if (!ok) {
                rep.cond2_pass = false;
                rep.cond2_witnesses.push_back("element " + e.str() + " at scale index " +
                                              std::to_string(i));
            }
        }
    }

    rep.cond3_pass = true;
    for (const auto& O : probes) {
        bool contained = false;
        size_t j;
        if (real) {
            Rational dO = O.diameter_exact();
            if (dO < s) continue;
            j = W.ceil_index_clamped(c * dO);
        } else {
            double dO = O.diameter(*W.codomain);
            if (dO < s.to_double()) continue;
            j = W.ceil_index_clamped(c.to_double() * dO);
        }
        for (const auto& e : W.covers[j].elements)
            if (O.subset_of(e)) { contained = true; break; }
        if (!contained) {
            rep.cond3_pass = false;
            rep.cond3_witnesses.push_back("probe " + O.str() + " not inside any element at scale index " +
                                          std::to_string(j));
        }
    }

    rep.pass = rep.cond1_pass && rep.cond2_pass && rep.cond3_pass;
    return rep;
}

}  // namespace mapscale
