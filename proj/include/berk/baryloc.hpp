// Copyright 2026 The berklab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BERK_BARYLOC_HPP
#define BERK_BARYLOC_HPP

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "berk/crucial.hpp"

namespace berk {

// ---------------------------------------------------------------------------
// Loci: minimal-resultant sets and barycenters are points or segments.
// ---------------------------------------------------------------------------

enum class LocusKind { Point, Segment };

struct SegmentLocus {
    LocusKind kind = LocusKind::Point;
    std::vector<TreePoint> endpoints;  // one entry for a point, two for a segment

    static SegmentLocus point(TreePoint P) {
        return SegmentLocus{LocusKind::Point, {std::move(P)}};
    }
    static SegmentLocus segment(TreePoint A, TreePoint B) {
        return SegmentLocus{LocusKind::Segment, {std::move(A), std::move(B)}};
    }
};

inline bool locus_contains(const SegmentLocus& L, const TreePoint& x) {
    if (L.kind == LocusKind::Point) return same_point(L.endpoints[0], x);
    return same_point(median(L.endpoints[0], L.endpoints[1], x), x);
}

// Distance from a point to the locus, as min over its endpoint projections.
inline Rat locus_distance(const SegmentLocus& L, const TreePoint& x) {
    if (L.kind == LocusKind::Point) return rho(L.endpoints[0], x);
    return rho(x, median(L.endpoints[0], L.endpoints[1], x));
}

namespace detail {

inline bool tree_point_less(const TreePoint& a, const TreePoint& b) {
    const auto& ca = a.center.coords();
    const auto& cb = b.center.coords();
    for (size_t i = 0; i < ca.size() && i < cb.size(); ++i) {
        if (ca[i] != cb[i]) return ca[i] < cb[i];
    }
    return a.t < b.t;
}

// Hull of a nonempty set of points known to lie on one path.
inline SegmentLocus locus_from_points(std::vector<TreePoint> pts) {
    if (pts.empty()) throw RouteMismatch("locus is empty");
    std::vector<TreePoint> uniq;
    for (auto& P : pts) {
        bool seen = false;
        for (const auto& Q : uniq) seen = seen || same_point(P, Q);
        if (!seen) uniq.push_back(std::move(P));
    }
    if (uniq.size() == 1) return SegmentLocus::point(uniq[0]);
    size_t ia = 0, ib = 1;
    Rat best = rho(uniq[0], uniq[1]);
    for (size_t i = 0; i < uniq.size(); ++i)
        for (size_t j = i + 1; j < uniq.size(); ++j) {
            Rat d = rho(uniq[i], uniq[j]);
            if (d > best) {
                best = d;
                ia = i;
                ib = j;
            }
        }
    SegmentLocus out = SegmentLocus::segment(uniq[ia], uniq[ib]);
    if (tree_point_less(out.endpoints[1], out.endpoints[0]))
        std::swap(out.endpoints[0], out.endpoints[1]);
    for (const auto& P : uniq)
        if (!locus_contains(out, P))
            throw RouteMismatch("minimizing set is neither a point nor a segment");
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Barycenter of a discrete probability measure: the set of points where
// every complementary component carries mass at most one half.  Only the
// spanning tree of the support needs scanning; all other directions see
// mass zero.
// ---------------------------------------------------------------------------

inline SegmentLocus barycenter(const TreeMeasure& nu) {
    if (nu.empty()) throw NotProbability("measure has no atoms");
    for (const auto& wp : nu)
        if (wp.mass < 0) throw NotProbability("measure has a negative atom");
    if (total_mass(nu) != Rat(1)) throw NotProbability("total mass is not one");

    std::vector<TreePoint> support;
    for (const auto& wp : nu)
        if (wp.mass > 0) support.push_back(wp.point);
    SpanTree T = SpanTree::span(support);
    TreeMeasure at = retract_measure(T, nu);

    std::vector<Rat> below(static_cast<size_t>(T.size()));
    for (int v = 0; v < T.size(); ++v)
        below[static_cast<size_t>(v)] = subtree_mass(T, at, v);

    std::vector<TreePoint> pass;
    for (int v = 0; v < T.size(); ++v) {
        bool ok = Rat(1) - below[static_cast<size_t>(v)] <= Rat(1, 2);
        for (int c : T.children(v))
            ok = ok && below[static_cast<size_t>(c)] <= Rat(1, 2);
        if (ok) pass.push_back(T.point(v));
    }
    return detail::locus_from_points(std::move(pass));
}

// ---------------------------------------------------------------------------
// Arakelov-Green's function of a discrete probability measure, with the
// additive constant fixed by a vanishing double integral.
// ---------------------------------------------------------------------------

struct DiscreteGreen {
    TreeMeasure nu;
    Rat C;
};

inline Rat green_pair_raw(const TreeMeasure& nu, const TreePoint& x, const TreePoint& y) {
    Rat out(0);
    for (const auto& wp : nu) out += wp.mass * jfun(wp.point, x, y);
    return out;
}

inline DiscreteGreen make_discrete_green(TreeMeasure nu) {
    if (nu.empty()) throw NotProbability("measure has no atoms");
    for (const auto& wp : nu)
        if (wp.mass < 0) throw NotProbability("measure has a negative atom");
    if (total_mass(nu) != Rat(1)) throw NotProbability("total mass is not one");
    Rat dbl(0);
    for (const auto& wj : nu)
        for (const auto& wk : nu)
            dbl += wj.mass * wk.mass * green_pair_raw(nu, wj.point, wk.point);
    return DiscreteGreen{std::move(nu), -dbl};
}

inline Rat green_pair(const DiscreteGreen& G, const TreePoint& x, const TreePoint& y) {
    return green_pair_raw(G.nu, x, y) + G.C;
}

inline Rat green_discrete(const DiscreteGreen& G, const TreePoint& x) {
    return green_pair(G, x, x);
}

// Mass of the open component at Q in the direction v.
inline Rat component_mass(const TreeMeasure& nu, const TreePoint& Q, const Direction& v) {
    Rat out(0);
    if (v.kind == Direction::Kind::Infinity) {
        for (const auto& wp : nu)
            if (!is_ancestor(Q, wp.point)) out += wp.mass;
        return out;
    }
    OrdVal o = (v.center - Q.center).ord();
    if (!o.is_infinite() && o.value() < Q.t)
        throw ConfigInvalid("direction center lies outside the disc of the base point");
    TreePoint rep{v.center, Q.t};
    for (const auto& wp : nu) {
        if (same_point(wp.point, Q) || !is_ancestor(Q, wp.point)) continue;
        OrdVal sep = (wp.point.center - v.center).ord();
        if ((sep.is_infinite() || sep.value() > Q.t) && wp.point.t > Q.t) out += wp.mass;
    }
    return out;
}

inline Rat green_slope(const DiscreteGreen& G, const TreePoint& Q, const Direction& v) {
    return Rat(1) - Rat(2) * component_mass(G.nu, Q, v);
}

// ---------------------------------------------------------------------------
// Minimal-resultant locus.  Primary route: barycenter of the crucial
// measure.  Verification route: convex descent of the normalized resultant
// on the skeleton; the two must agree exactly.
// ---------------------------------------------------------------------------

struct MinResResult {
    SegmentLocus locus;
    Rat min_value;
};

namespace detail {

inline SegmentLocus descend_normalized_res(const Dynamics& dyn, int n, Rat& min_out) {
    SpanTree T = crucial_skeleton(dyn, n);
    std::vector<Rat> r(static_cast<size_t>(T.size()));
    for (int i = 0; i < T.size(); ++i)
        r[static_cast<size_t>(i)] = dyn.normalized_ord_res(T.point(i), n);

    int cur = T.find_vertex(TreePoint{ValElement(dyn.context()), Rat(0)});
    if (cur < 0) throw RouteMismatch("skeleton does not contain the Gauss point");

    auto neighbors = [&](int v) {
        std::vector<int> nb = T.children(v);
        if (T.parent(v) >= 0) nb.push_back(T.parent(v));
        return nb;
    };

    for (int guard = 0; guard <= T.size(); ++guard) {
        int next = -1;
        Rat best(0);
        for (int w : neighbors(cur)) {
            Rat slope = (r[static_cast<size_t>(w)] - r[static_cast<size_t>(cur)]) /
                        rho(T.point(w), T.point(cur));
            if (slope < best ||
                (slope == best && slope < 0 &&
                 (next < 0 || tree_point_less(T.point(w), T.point(next))))) {
                best = slope;
                next = w;
            }
        }
        if (next < 0) break;
        cur = next;
        if (guard == T.size())
            throw RouteMismatch("descent failed to terminate on the skeleton");
    }

    const Rat m = r[static_cast<size_t>(cur)];
    for (int i = 0; i < T.size(); ++i)
        if (r[static_cast<size_t>(i)] < m)
            throw RouteMismatch("descent stopped above the skeleton minimum");

    // The minimizing set is the flat region around the descent endpoint.
    std::vector<TreePoint> flat;
    std::vector<char> seen(static_cast<size_t>(T.size()), 0);
    std::vector<int> stack = {cur};
    seen[static_cast<size_t>(cur)] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        flat.push_back(T.point(v));
        for (int w : neighbors(v))
            if (!seen[static_cast<size_t>(w)] && r[static_cast<size_t>(w)] == m) {
                seen[static_cast<size_t>(w)] = 1;
                stack.push_back(w);
            }
    }
    min_out = m;
    return locus_from_points(std::move(flat));
}

}  // namespace detail

inline MinResResult minresloc(const Dynamics& dyn, int n) {
    TreeMeasure nu = crucial_measure_laplacian(dyn, n);
    SegmentLocus by_measure = barycenter(nu);

    Rat min_desc(0);
    SegmentLocus by_descent = detail::descend_normalized_res(dyn, n, min_desc);

    if (by_measure.kind != by_descent.kind)
        throw RouteMismatch("barycenter and descent loci have different shapes");
    for (const auto& P : by_measure.endpoints) {
        if (!locus_contains(by_descent, P))
            throw RouteMismatch("barycenter endpoint missing from the descent locus");
        if (dyn.normalized_ord_res(P, n) != min_desc)
            throw RouteMismatch("barycenter is not level at the descent minimum");
    }
    for (const auto& P : by_descent.endpoints)
        if (!locus_contains(by_measure, P))
            throw RouteMismatch("descent endpoint missing from the barycenter");
    if (dyn.deg_pow(n) % 2 == 0 && by_measure.kind != LocusKind::Point)
        throw RouteMismatch("even iterate degree forces a one-point locus");
    return MinResResult{std::move(by_measure), std::move(min_desc)};
}

// ---------------------------------------------------------------------------
// Containment of the minimal-resultant loci in a reference neighborhood,
// and the sequence of minimal normalized resultants.
// ---------------------------------------------------------------------------

struct ContainmentRow {
    int n;
    Rat distance;  // sup over the locus of the distance to the reference
    bool contained;
};

inline std::vector<ContainmentRow> epsilon_containment(const Dynamics& dyn, int n_lo,
                                                       int n_hi, const SegmentLocus& bary_ref,
                                                       const Rat& eps) {
    if (n_lo < 1 || n_hi < n_lo) throw ConfigInvalid("bad iterate range");
    if (eps < 0) throw ConfigInvalid("containment radius must be nonnegative");
    std::vector<ContainmentRow> rows;
    for (int n = n_lo; n <= n_hi; ++n) {
        MinResResult res = minresloc(dyn, n);
        Rat dist(0);
        for (const auto& P : res.locus.endpoints)
            dist = std::max(dist, locus_distance(bary_ref, P));
        rows.push_back(ContainmentRow{n, dist, dist <= eps});
    }
    return rows;
}

inline std::vector<Rat> min_value_sequence(const Dynamics& dyn, int n_lo, int n_hi) {
    if (n_lo < 1 || n_hi < n_lo) throw ConfigInvalid("bad iterate range");
    std::vector<Rat> out;
    for (int n = n_lo; n <= n_hi; ++n) out.push_back(minresloc(dyn, n).min_value);
    return out;
}

}  // namespace berk

#endif  // BERK_BARYLOC_HPP
