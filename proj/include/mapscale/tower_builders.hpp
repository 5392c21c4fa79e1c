#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapscale/cover_tower.hpp"

namespace mapscale {

/// Tower of balls B_{eps/2}(p) around sample points p of a real segment.
/// P must be a nu-sample of the segment.  Certificate: (3, 2*nu).
inline CoverTower build_ball_tower_segment(const RealSegment& seg, std::vector<Rational> P,
                                           const Rational& nu,
                                           std::vector<Rational> scale_grid = {}) {
    if (P.empty()) throw std::invalid_argument("build_ball_tower: empty sample");
    if (!(nu > Rational(0))) throw std::invalid_argument("build_ball_tower: nu must be positive");
    if (!(seg.lo < seg.hi)) throw std::invalid_argument("build_ball_tower: degenerate segment");
    std::sort(P.begin(), P.end());
    for (const Rational& p : P)
        if (p < seg.lo || p > seg.hi)
            throw std::invalid_argument("build_ball_tower: sample point " + p.str() + " outside codomain");
    // nu-sample check; the witness is a codomain point farther than nu from P
    if (P.front() - seg.lo > nu)
        throw std::invalid_argument("build_ball_tower: P is not a nu-sample (witness " + seg.lo.str() + ")");
    if (seg.hi - P.back() > nu)
        throw std::invalid_argument("build_ball_tower: P is not a nu-sample (witness " + seg.hi.str() + ")");
    for (size_t i = 0; i + 1 < P.size(); ++i)
        if (P[i + 1] - P[i] > nu * Rational(2))
            throw std::invalid_argument("build_ball_tower: P is not a nu-sample (witness " +
                                        ((P[i] + P[i + 1]) / Rational(2)).str() + ")");

    const Rational s = nu * Rational(2);
    if (scale_grid.empty()) {
        Rational target = Rational(3) * seg.diameter();
        scale_grid.push_back(s);
        while (scale_grid.back() < target) scale_grid.push_back(scale_grid.back() * Rational(2));
    } else if (!(scale_grid.front() == s)) {
        throw std::invalid_argument("build_ball_tower: scale grid must start at 2*nu");
    }

    CoverTower W;
    W.codomain = std::make_shared<Codomain>(Codomain{seg});
    W.kind = "balls";
    W.exact_scales = scale_grid;
    for (const Rational& e : scale_grid) W.scales.push_back(e.to_double());
    for (const Rational& eps : scale_grid) {
        Cover cov;
        Rational r = eps / Rational(2);
        for (size_t i = 0; i < P.size(); ++i) {
            auto clipped = Interval(P[i] - r, P[i] + r).clip(seg);
            if (!clipped) throw std::logic_error("build_ball_tower: clipped ball vanished");
            CoverElement e;
            e.id = (int)i;
            e.extent = *clipped;
            cov.elements.push_back(std::move(e));
        }
        W.covers.push_back(std::move(cov));
    }
    for (size_t i = 0; i + 1 < scale_grid.size(); ++i) {
        std::vector<int> m(P.size());
        for (size_t e = 0; e < P.size(); ++e) m[e] = (int)e;
        W.maps.push_back(std::move(m));
    }
    W.goodness = GoodnessCertificate{Rational(3), s};
    W.validate();
    return W;
}

/// Same construction over a finite metric codomain; centers are point ids.
inline CoverTower build_ball_tower_metric(std::shared_ptr<const Codomain> Z, std::vector<int> P,
                                          const Rational& nu,
                                          std::vector<Rational> scale_grid = {}) {
    if (!Z || Z->is_real()) throw std::invalid_argument("build_ball_tower_metric: finite metric codomain required");
    if (P.empty()) throw std::invalid_argument("build_ball_tower: empty sample");
    const FiniteMetricSpace& M = Z->metric();
    std::sort(P.begin(), P.end());
    for (int p : M.point_ids) {
        double best = std::numeric_limits<double>::infinity();
        for (int q : P) best = std::min(best, M.d(p, q));
        if (best > nu.to_double())
            throw std::invalid_argument("build_ball_tower: P is not a nu-sample (witness point " +
                                        std::to_string(p) + ")");
    }
    const Rational s = nu * Rational(2);
    if (scale_grid.empty()) {
        double target = 3.0 * M.diameter();
        scale_grid.push_back(s);
        while (scale_grid.back().to_double() < target && M.diameter() > 0)
            scale_grid.push_back(scale_grid.back() * Rational(2));
    } else if (!(scale_grid.front() == s)) {
        throw std::invalid_argument("build_ball_tower: scale grid must start at 2*nu");
    }

    CoverTower W;
    W.codomain = std::move(Z);
    W.kind = "balls";
    W.exact_scales = scale_grid;
    for (const Rational& e : scale_grid) W.scales.push_back(e.to_double());
    for (const Rational& eps : scale_grid) {
        Cover cov;
        for (size_t i = 0; i < P.size(); ++i) {
            CoverElement e;
            e.id = (int)i;
            e.extent = MetricBall::make(M, P[i], eps.to_double() / 2.0);
            cov.elements.push_back(std::move(e));
        }
        W.covers.push_back(std::move(cov));
    }
    for (size_t i = 0; i + 1 < scale_grid.size(); ++i) {
        std::vector<int> m(P.size());
        for (size_t e = 0; e < P.size(); ++e) m[e] = (int)e;
        W.maps.push_back(std::move(m));
    }
    W.goodness = GoodnessCertificate{Rational(3), s};
    W.validate();
    return W;
}

/// Nested nets over a finite metric space: greedy farthest-point insertion,
/// coarsest level first, finer levels seeded with the coarser net.
/// For each level l: covering radius <= rho^l, pairwise separation
/// >= rho^(l-1)/16, and nets nested across levels.
inline std::map<int, std::vector<int>> build_nets(const FiniteMetricSpace& Z, double rho,
                                                  std::vector<int> levels) {
    if (rho < 11.0) throw std::invalid_argument("build_nets: rho must be >= 11");
    if (levels.empty()) throw std::invalid_argument("build_nets: no levels");
    std::sort(levels.begin(), levels.end(), std::greater<int>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::map<int, std::vector<int>> nets;
    std::vector<int> current;  // net of the previous (coarser) level
    for (int level : levels) {
        const double radius = std::pow(rho, level);
        std::vector<int> net = current;
        auto dist_to_net = [&](int p) {
            double best = std::numeric_limits<double>::infinity();
            for (int q : net) best = std::min(best, Z.d(p, q));
            return best;
        };
        if (net.empty()) net.push_back(Z.point_ids.front());
        while (true) {
            int far_id = -1;
            double far_d = radius;
            for (int p : Z.point_ids) {
                double dd = dist_to_net(p);
                if (dd > far_d) { far_d = dd; far_id = p; }
            }
            if (far_id < 0) break;
            net.push_back(far_id);
        }
        std::sort(net.begin(), net.end());
        nets[level] = net;
        current = net;
    }
    return nets;
}

struct NetConditionReport {
    bool covering_pass = true;    // (i)
    bool separation_pass = true;  // (ii)
    bool nesting_pass = true;     // (iii)
    std::vector<std::string> witnesses;
    bool pass() const { return covering_pass && separation_pass && nesting_pass; }
};

inline NetConditionReport verify_net_conditions(const FiniteMetricSpace& Z,
                                                const std::map<int, std::vector<int>>& nets,
                                                double rho) {
    NetConditionReport rep;
    for (const auto& [level, net] : nets) {
        const double radius = std::pow(rho, level);
        for (int p : Z.point_ids) {
            double best = std::numeric_limits<double>::infinity();
            for (int q : net) best = std::min(best, Z.d(p, q));
            if (best > radius) {
                rep.covering_pass = false;
                rep.witnesses.push_back("point " + std::to_string(p) + " uncovered at level " +
                                        std::to_string(level));
            }
        }
        const double sep = std::pow(rho, level - 1) / 16.0;
        for (size_t i = 0; i < net.size(); ++i)
            for (size_t j = i + 1; j < net.size(); ++j)
                if (Z.d(net[i], net[j]) < sep) {
                    rep.separation_pass = false;
                    rep.witnesses.push_back("net points " + std::to_string(net[i]) + "," +
                                            std::to_string(net[j]) + " too close at level " +
                                            std::to_string(level));
                }
    }
    for (auto it = nets.begin(); it != nets.end(); ++it)
        for (auto jt = std::next(it); jt != nets.end(); ++jt)   // jt: larger level
            if (!std::includes(it->second.begin(), it->second.end(), jt->second.begin(),
                               jt->second.end())) {
                rep.nesting_pass = false;
                rep.witnesses.push_back("net at level " + std::to_string(jt->first) +
                                        " not inside net at level " + std::to_string(it->first));
            }
    return rep;
}

struct NetTower {
    CoverTower tower;
    std::map<int, std::vector<int>> nets;  // level i -> N(i)
    double rho = 11;
};

/// Space-efficient tower from nested nets: scale eps_i = 4(rho+1)^i with
/// balls of radius eps_i/2 around N(i); the map at step i follows nearest
/// neighbors into N(i+1).  Certificate: c = s = 4(rho+1).
inline NetTower build_net_tower(std::shared_ptr<const Codomain> Z, const Rational& rho) {
    if (!Z || Z->is_real()) throw std::invalid_argument("build_net_tower: finite metric codomain required");
    if (rho < Rational(11)) throw std::invalid_argument("build_net_tower: rho must be >= 11");
    const FiniteMetricSpace& M = Z->metric();
    // sampling precondition: here P is the whole point set, a 0-sample (nu <= 1)
    const double diam = M.diameter();
    const double base = (rho + Rational(1)).to_double();
    int m = 1;
    while (std::pow(base, m - 1) < diam) ++m;
    m = std::max(m, 2);

    std::vector<int> levels(m);
    for (int i = 0; i < m; ++i) levels[i] = i + 1;
    NetTower out;
    out.rho = rho.to_double();
    out.nets = build_nets(M, rho.to_double(), levels);

    CoverTower W;
    W.codomain = Z;
    W.kind = "nets";
    Rational eps = Rational(4) * (rho + Rational(1));
    const Rational s = eps;
    for (int i = 1; i <= m; ++i) {
        W.exact_scales.push_back(eps);
        W.scales.push_back(eps.to_double());
        Cover cov;
        const auto& net = out.nets.at(i);
        for (size_t k = 0; k < net.size(); ++k) {
            CoverElement e;
            e.id = (int)k;
            e.extent = MetricBall::make(M, net[k], eps.to_double() / 2.0);
            cov.elements.push_back(std::move(e));
        }
        W.covers.push_back(std::move(cov));
        eps = eps * (rho + Rational(1));
    }
    for (int i = 1; i < m; ++i) {
        const auto& fine = out.nets.at(i);
        const auto& coarse = out.nets.at(i + 1);
        std::vector<int> mp(fine.size());
        for (size_t k = 0; k < fine.size(); ++k) {
            int nn = M.nearest_in(fine[k], coarse);
            mp[k] = (int)(std::lower_bound(coarse.begin(), coarse.end(), nn) - coarse.begin());
        }
        W.maps.push_back(std::move(mp));
    }
    W.goodness = GoodnessCertificate{Rational(4) * (rho + Rational(1)), s};
    W.validate();
    out.tower = std::move(W);
    return out;
}

/// Tower of dyadic intervals of width 2^floor(log2 eps) meeting [-M, M].
/// The map sends each interval to the unique containing dyadic interval at
/// the coarser width.  Deliberately carries no goodness certificate: no
/// element at any scale contains an interval straddling 0.
inline CoverTower build_dyadic_tower(const Rational& M, const Rational& s,
                                     std::vector<Rational> scale_grid = {},
                                     const Rational& thicken = Rational(0)) {
    if (!(M > Rational(0))) throw std::invalid_argument("build_dyadic_tower: M must be positive");
    if (!(s > Rational(0))) throw std::invalid_argument("build_dyadic_tower: s must be positive");
    if (thicken.sign() < 0 || (thicken.sign() > 0 && !(thicken < s)))
        throw std::invalid_argument("build_dyadic_tower: thickening must satisfy 0 <= nu < s");

    const Rational w0 = Rational::pow2(s.floor_log2());
    if (scale_grid.empty()) {
        scale_grid.push_back(s);
        Rational next = w0 * Rational(2);
        while (next <= s) next = next * Rational(2);
        const Rational top = M * Rational(2);
        while (scale_grid.back() < top) {
            scale_grid.push_back(next);
            next = next * Rational(2);
        }
    }
    for (size_t i = 0; i + 1 < scale_grid.size(); ++i)
        if (!(scale_grid[i] < scale_grid[i + 1]))
            throw std::invalid_argument("build_dyadic_tower: scales not increasing");
    if (!(scale_grid.front() == s))
        throw std::invalid_argument("build_dyadic_tower: scale grid must start at s");

    CoverTower W;
    W.codomain = std::make_shared<Codomain>(Codomain{RealSegment(-M, M)});
    W.kind = "dyadic";
    W.exact_scales = scale_grid;
    for (const Rational& e : scale_grid) W.scales.push_back(e.to_double());

    std::vector<std::vector<long long>> ks_per_scale;
    std::vector<int> exps;
    for (const Rational& eps : scale_grid) {
        const int e2 = eps.floor_log2();
        const Rational w = Rational::pow2(e2);
        exps.push_back(e2);
        Cover cov;
        std::vector<long long> ks;
        // smallest k with (k+1)w >= -M
        long long k = -(long long)std::ceil((M / w).to_double()) - 1;
        while (Rational(k) * w <= M) {
            if (Rational(k + 1) * w >= -M) {
                CoverElement el;
                el.id = (int)ks.size();
                if (thicken.sign() > 0)
                    el.extent = Interval(Rational(k) * w - thicken, Rational(k + 1) * w + thicken,
                                         true, true);
                else
                    el.extent = Interval(Rational(k) * w, Rational(k + 1) * w);
                cov.elements.push_back(std::move(el));
                ks.push_back(k);
            }
            ++k;
        }
        W.covers.push_back(std::move(cov));
        ks_per_scale.push_back(std::move(ks));
    }
    for (size_t i = 0; i + 1 < scale_grid.size(); ++i) {
        const int shift = exps[i + 1] - exps[i];
        std::vector<int> mp(ks_per_scale[i].size());
        for (size_t e = 0; e < mp.size(); ++e) {
            long long k = ks_per_scale[i][e];
            long long kp = shift == 0 ? k : (k >= 0 ? k >> shift : -(((-k) + (1LL << shift) - 1) >> shift));
            const auto& next = ks_per_scale[i + 1];
            auto it = std::lower_bound(next.begin(), next.end(), kp);
            if (it == next.end() || *it != kp)
                throw std::logic_error("build_dyadic_tower: containing interval missing");
            mp[e] = (int)(it - next.begin());
        }
        W.maps.push_back(std::move(mp));
    }
    W.validate();
    return W;
}

}  // namespace mapscale
