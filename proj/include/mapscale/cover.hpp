#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mapscale/metric_space.hpp"
#include "mapscale/rational.hpp"

namespace mapscale {

/// Real interval with exact endpoints and open/closed flags.
struct Interval {
    Rational lo, hi;
    bool open_lo = false, open_hi = false;

    Interval() : lo(0), hi(1) {}
    Interval(Rational l, Rational h, bool ol = false, bool oh = false)
        : lo(l), hi(h), open_lo(ol), open_hi(oh) {
        if (!(lo < hi)) throw std::invalid_argument("Interval: requires lo < hi");
    }

    bool contains(const Rational& x) const {
        if (x < lo || hi < x) return false;
        if (x == lo && open_lo) return false;
        if (x == hi && open_hi) return false;
        return true;
    }

    /// Subset test, honoring end flags exactly.
    bool contains_interval(const Interval& o) const {
        bool lo_ok = lo < o.lo || (lo == o.lo && (!open_lo || o.open_lo));
        bool hi_ok = o.hi < hi || (o.hi == hi && (!open_hi || o.open_hi));
        return lo_ok && hi_ok;
    }

    bool intersects(const Interval& o) const {
        Rational l = rat_max(lo, o.lo);
        Rational h = rat_min(hi, o.hi);
        if (l > h) return false;
        if (l < h) return true;
        // single shared point: closed on both relevant sides?
        bool l_ok = contains(l) && o.contains(l);
        return l_ok;
    }

    Rational diameter() const { return hi - lo; }

    /// Clip to a segment; returns nullopt when the clipped set is empty or a
    /// single point that the flags exclude.
    std::optional<Interval> clip(const RealSegment& seg) const {
        Rational l = rat_max(lo, seg.lo);
        Rational h = rat_min(hi, seg.hi);
        if (l > h) return std::nullopt;
        if (l == h) return std::nullopt;  // degenerate: covers no interval
        bool ol = (l == lo) ? open_lo : false;
        bool oh = (h == hi) ? open_hi : false;
        return Interval(l, h, ol, oh);
    }

    std::string str() const {
        return std::string(open_lo ? "(" : "[") + lo.str() + "," + hi.str() +
               (open_hi ? ")" : "]");
    }
};

/// Metric ball in a finite codomain, materialized as the set of covered points.
struct MetricBall {
    int center = 0;
    double radius = 0;
    std::vector<int> members;  // sorted point ids

    static MetricBall make(const FiniteMetricSpace& Z, int center, double radius) {
        MetricBall b;
        b.center = center;
        b.radius = radius;
        if (radius < 0) throw std::invalid_argument("MetricBall: negative radius");
        for (int p : Z.point_ids)
            if (Z.d(center, p) <= radius) b.members.push_back(p);
        return b;
    }
};

/// Arbitrary finite point set in a finite metric codomain.
struct ExplicitSet {
    std::vector<int> members;  // sorted
};

struct CoverElement {
    int id = -1;
    std::variant<Interval, MetricBall, ExplicitSet> extent;

    bool is_interval() const { return std::holds_alternative<Interval>(extent); }
    const Interval& interval() const { return std::get<Interval>(extent); }

    const std::vector<int>& point_members() const {
        if (auto* b = std::get_if<MetricBall>(&extent)) return b->members;
        if (auto* s = std::get_if<ExplicitSet>(&extent)) return s->members;
        throw std::logic_error("point_members: interval element");
    }

    bool contains_value(const Rational& x) const { return interval().contains(x); }

    bool contains_point(int p) const {
        const auto& m = point_members();
        return std::binary_search(m.begin(), m.end(), p);
    }

    /// Exact subset test between extents of the same kind.
    bool subset_of(const CoverElement& o) const {
        if (is_interval() != o.is_interval())
            throw std::invalid_argument("subset_of: mixed element kinds");
        if (is_interval()) return o.interval().contains_interval(interval());
        const auto& a = point_members();
        const auto& b = o.point_members();
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    }

    bool intersects(const CoverElement& o) const {
        if (is_interval()) return interval().intersects(o.interval());
        const auto& a = point_members();
        const auto& b = o.point_members();
        size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] == b[j]) return true;
            (a[i] < b[j]) ? ++i : ++j;
        }
        return false;
    }

    double diameter(const Codomain& Z) const {
        if (is_interval()) return interval().diameter().to_double();
        const auto& m = point_members();
        double best = 0;
        for (size_t i = 0; i < m.size(); ++i)
            for (size_t j = i + 1; j < m.size(); ++j)
                best = std::max(best, Z.metric().d(m[i], m[j]));
        return best;
    }

    Rational diameter_exact() const { return interval().diameter(); }

    std::string str() const {
        if (is_interval()) return interval().str();
        const auto& m = point_members();
        std::string s = "{";
        for (size_t i = 0; i < m.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(m[i]);
        }
        return s + "}";
    }
};

/// Finite cover of the codomain.  Element ids are their positions.
struct Cover {
    std::vector<CoverElement> elements;

    size_t size() const { return elements.size(); }
    const CoverElement& operator[](size_t i) const { return elements.at(i); }

    /// True when the union of elements contains the whole codomain.
    bool covers(const Codomain& Z) const {
        if (elements.empty()) return false;
        if (!Z.is_real()) {
            for (int p : Z.metric().point_ids) {
                bool hit = false;
                for (const auto& e : elements)
                    if (e.contains_point(p)) { hit = true; break; }
                if (!hit) return false;
            }
            return true;
        }
        // Sweep the segment.  `reach` is the largest value x such that
        // [lo, x] is covered, tracking whether x itself is covered.
        const RealSegment& seg = Z.segment();
        std::vector<Interval> iv;
        for (const auto& e : elements) iv.push_back(e.interval());
        std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) {
            if (a.lo != b.lo) return a.lo < b.lo;
            return a.open_lo < b.open_lo;
        });
        Rational reach = seg.lo;
        bool reach_covered = false;
        for (const auto& e : iv) {
            bool extends = (e.lo < reach) || (e.lo == reach && (!e.open_lo || reach_covered));
            if (!extends) break;
            Rational end = e.hi;
            if (end > reach || (end == reach && !reach_covered)) {
                if (end > reach) {
                    reach = end;
                    reach_covered = !e.open_hi;
                } else {
                    reach_covered = reach_covered || !e.open_hi;
                }
            }
            if (reach > seg.hi || (reach == seg.hi && reach_covered)) return true;
        }
        return reach > seg.hi || (reach == seg.hi && reach_covered);
    }
};

}  // namespace mapscale
