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

#pragma once

#include "berk/valfield.hpp"

#include <algorithm>
#include <vector>

namespace berk {

/**
 * A point zeta_{a,t} of the Berkovich line: the seminorm of the disc with
 * center a and radius |pi|^{e t}.  Type II when t is in the value group
 * (1/e)Z, type III otherwise; t may be any rational, including negative.
 * Two points are equal iff the discs agree: t = t' and ord(a - a') >= t.
 *
 * The hyperbolic path metric, with t as the natural vertical coordinate
 * (t increases toward type I points, decreases toward infinity):
 *
 *   rho(P, Q) = (t_P - t_J) + (t_Q - t_J),
 *   t_J = min(t_P, t_Q, ord(a_P - a_Q)),
 *
 * where zeta_{a_P, t_J} is the join of P and Q seen from infinity.
 */
struct TreePoint {
    ValElement center;
    Rat t;
};

inline Rat join_level(const TreePoint& P, const TreePoint& Q) {
    Rat tj = std::min(P.t, Q.t);
    OrdVal o = (P.center - Q.center).ord();
    if (!o.is_infinite() && o.value() < tj) tj = o.value();
    return tj;
}

inline TreePoint join(const TreePoint& P, const TreePoint& Q) {
    return {P.center, join_level(P, Q)};
}

inline bool same_point(const TreePoint& P, const TreePoint& Q) {
    if (P.t != Q.t) return false;
    OrdVal o = (P.center - Q.center).ord();
    return o.is_infinite() || o.value() >= P.t;
}

inline Rat rho(const TreePoint& P, const TreePoint& Q) {
    Rat tj = join_level(P, Q);
    return (P.t - tj) + (Q.t - tj);
}

// True when A lies on the path [P, infinity), i.e. A's disc contains P's.
inline bool is_ancestor(const TreePoint& A, const TreePoint& P) {
    if (A.t > P.t) return false;
    OrdVal o = (A.center - P.center).ord();
    return o.is_infinite() || o.value() >= A.t;
}

// The median (tripod center) of three points: the deepest pairwise join.
inline TreePoint median(const TreePoint& P, const TreePoint& Q, const TreePoint& R) {
    TreePoint a = join(P, Q), b = join(P, R), c = join(Q, R);
    TreePoint best = a;
    if (b.t > best.t) best = b;
    if (c.t > best.t) best = c;
    return best;
}

// Gromov product based at zeta: the distance from zeta to the path [x, y].
inline Rat jfun(const TreePoint& base, const TreePoint& x, const TreePoint& y) {
    return rho(base, median(base, x, y));
}

// Point on the path [P, Q] at distance s from P.
inline TreePoint interpolate(const TreePoint& P, const TreePoint& Q, const Rat& s) {
    Rat tj = join_level(P, Q);
    Rat up = P.t - tj;
    Rat total = up + (Q.t - tj);
    if (s < 0 || s > total) throw ConfigInvalid("interpolation parameter outside the path");
    if (s <= up) return {P.center, P.t - s};
    return {Q.center, tj + (s - up)};
}

/**
 * Finite subtree spanned by a set of points, stored rooted at its highest
 * point (the retraction of infinity).  The vertex set is the closure of
 * the seeds under pairwise joins; every edge is vertical, i.e. runs
 * between nested discs sharing a center.
 */
class SpanTree {
public:
    static SpanTree span(const std::vector<TreePoint>& seeds) {
        if (seeds.empty()) throw ConfigInvalid("span of an empty point set");
        std::vector<TreePoint> pts;
        auto push_unique = [&](const TreePoint& P) {
            for (const auto& Q : pts)
                if (same_point(P, Q)) return;
            pts.push_back(P);
        };
        for (const auto& s : seeds) push_unique(s);
        const size_t nseeds = pts.size();
        for (size_t i = 0; i < nseeds; ++i)
            for (size_t j = i + 1; j < nseeds; ++j) push_unique(join(pts[i], pts[j]));
        std::stable_sort(pts.begin(), pts.end(),
                         [](const TreePoint& a, const TreePoint& b) { return a.t < b.t; });
        SpanTree T;
        T.pts_ = std::move(pts);
        T.parent_.assign(T.pts_.size(), -1);
        T.children_.assign(T.pts_.size(), {});
        for (int i = 0; i < (int)T.pts_.size(); ++i) {
            int best = -1;
            for (int j = 0; j < i; ++j) {
                if (!is_ancestor(T.pts_[j], T.pts_[i])) continue;
                if (best < 0 || T.pts_[j].t > T.pts_[best].t) best = j;
            }
            T.parent_[i] = best;
            if (best >= 0) T.children_[best].push_back(i);
        }
        int roots = 0;
        for (int i = 0; i < (int)T.pts_.size(); ++i)
            if (T.parent_[i] < 0) {
                T.root_ = i;
                ++roots;
            }
        if (roots != 1) throw Error("span closure failed to produce a rooted tree");
        return T;
    }

    int size() const { return (int)pts_.size(); }
    const TreePoint& point(int i) const { return pts_[i]; }
    int parent(int i) const { return parent_[i]; }
    const std::vector<int>& children(int i) const { return children_[i]; }
    int root() const { return root_; }

    // Number of directions at vertex i within the tree.
    int valence(int i) const {
        return (int)children_[i].size() + (parent_[i] >= 0 ? 1 : 0);
    }

    Rat edge_length(int child) const {
        if (parent_[child] < 0) throw ConfigInvalid("root has no parent edge");
        return pts_[child].t - pts_[parent_[child]].t;
    }

    int find_vertex(const TreePoint& P) const {
        for (int i = 0; i < size(); ++i)
            if (same_point(pts_[i], P)) return i;
        return -1;
    }

    // Retraction onto the tree: the entry point of the path [x, infinity).
    TreePoint retract(const TreePoint& x) const {
        int best = root_;
        Rat bt = join_level(x, pts_[root_]);
        for (int i = 0; i < size(); ++i) {
            Rat tj = join_level(x, pts_[i]);
            if (tj > bt) {
                bt = tj;
                best = i;
            }
        }
        if (bt <= pts_[root_].t) return pts_[root_];
        return {pts_[best].center, bt};
    }

    struct Location {
        int vertex = -1;      // set when the point is a vertex
        int edge_child = -1;  // else: interior of edge (parent(edge_child), edge_child)
    };

    Location locate(const TreePoint& P) const {
        Location loc;
        loc.vertex = find_vertex(P);
        if (loc.vertex >= 0) return loc;
        for (int c = 0; c < size(); ++c) {
            if (parent_[c] < 0) continue;
            const TreePoint& u = pts_[parent_[c]];
            if (u.t < P.t && P.t < pts_[c].t && is_ancestor(u, P) && is_ancestor(P, pts_[c])) {
                loc.edge_child = c;
                return loc;
            }
        }
        throw SupportOffGraph("point does not lie on the tree");
    }

    bool contains(const TreePoint& P) const {
        try {
            locate(P);
            return true;
        } catch (const SupportOffGraph&) {
            return false;
        }
    }

private:
    std::vector<TreePoint> pts_;
    std::vector<int> parent_;
    std::vector<std::vector<int>> children_;
    int root_ = -1;
};

// log_v of the diagonal Hsia kernel relative to infinity: the disc diameter.
inline Rat hsia_diag_logv(const TreePoint& P) { return -P.t; }

/**
 * Tangent direction at a point: toward infinity, or into the residue disc
 * containing a given center.  At zeta_{a,t} the residue-disc directions
 * biject with residue classes of (c - a)/pi^{e t}; two centers give the
 * same direction iff ord(c - c') > t.  The center form works at any
 * rational t, the residue label only when e t is integral.
 */
struct Direction {
    enum class Kind { Infinity, Center } kind = Kind::Infinity;
    ValElement center;  // meaningful for Kind::Center

    static Direction toward_infinity() { return {}; }
    static Direction toward(ValElement c) { return {Kind::Center, std::move(c)}; }
};

inline bool same_direction(const TreePoint& P, const Direction& u, const Direction& v) {
    if (u.kind != v.kind) return false;
    if (u.kind == Direction::Kind::Infinity) return true;
    OrdVal o = (u.center - v.center).ord();
    return o.is_infinite() || o.value() > P.t;
}

inline Direction direction_toward(const TreePoint& P, const TreePoint& target) {
    if (same_point(P, target)) throw ConfigInvalid("no direction from a point to itself");
    if (is_ancestor(target, P)) return Direction::toward_infinity();
    // The path to the target leaves P through the residue disc of the
    // target's center (which is the join's center when they diverge lower).
    return Direction::toward(target.center);
}

// Residue label of a direction at P (needs e t integral).
inline Int direction_residue(const TreePoint& P, const Direction& v) {
    if (v.kind == Direction::Kind::Infinity)
        throw ConfigInvalid("the direction toward infinity has no residue label");
    const auto& ctx = P.center.context();
    Rat te = P.t * ctx->e;
    if (denominator(te) != 1)
        throw RamificationNeeded("residue labels need e*t integral");
    ValElement scaled = (v.center - P.center) * pi_power(ctx, -te.convert_to<long long>());
    return reduce_residue(scaled).r;
}

inline TreePoint point_along(const TreePoint& P, const Direction& v, const Rat& s) {
    if (s <= 0) throw ConfigInvalid("step along a direction must be positive");
    if (v.kind == Direction::Kind::Infinity) return {P.center, P.t - s};
    OrdVal o = (v.center - P.center).ord();
    if (!o.is_infinite() && o.value() < P.t)
        throw ConfigInvalid("direction center lies outside the disc of the base point");
    return {v.center, P.t + s};
}

// Finitely supported measure on the tree.
struct WeightedPoint {
    TreePoint point;
    Rat mass;
};

using TreeMeasure = std::vector<WeightedPoint>;

inline Rat total_mass(const TreeMeasure& mu) {
    Rat s = 0;
    for (const auto& a : mu) s += a.mass;
    return s;
}

// Adds an atom, merging with an existing one at the same point.
inline void add_atom(TreeMeasure& mu, const TreePoint& P, const Rat& mass) {
    if (mass == 0) return;
    for (auto& a : mu) {
        if (same_point(a.point, P)) {
            a.mass += mass;
            return;
        }
    }
    mu.push_back({P, mass});
}

inline void drop_zero_atoms(TreeMeasure& mu) {
    mu.erase(std::remove_if(mu.begin(), mu.end(), [](const WeightedPoint& a) { return a.mass == 0; }),
             mu.end());
}

/**
 * Graph Laplacian of a function that is affine on every edge, given by its
 * vertex values:  Delta(f) = - sum_P ( sum_directions d_v f(P) ) delta_P.
 * Only directions inside the tree count; a leaf sees one direction, the
 * root sees only its children.
 */
inline TreeMeasure graph_laplacian(const SpanTree& T, const std::vector<Rat>& values) {
    if ((int)values.size() != T.size()) throw ConfigInvalid("one value per vertex required");
    TreeMeasure out;
    for (int i = 0; i < T.size(); ++i) {
        Rat sum = 0;
        for (int c : T.children(i)) sum += (values[c] - values[i]) / T.edge_length(c);
        if (T.parent(i) >= 0) sum += (values[T.parent(i)] - values[i]) / T.edge_length(i);
        add_atom(out, T.point(i), -sum);
    }
    drop_zero_atoms(out);
    return out;
}

// Valence-defect measure (2 - v(P))/2 at every vertex; total mass 1 on any
// finite tree.  Appears as the Laplacian of the vertical coordinate:
// Delta(-t) = -2 mu_Br + 2 delta_root.
inline TreeMeasure branching_measure(const SpanTree& T) {
    TreeMeasure out;
    for (int i = 0; i < T.size(); ++i) add_atom(out, T.point(i), Rat(2 - T.valence(i), 2));
    drop_zero_atoms(out);
    return out;
}

// Pushforward of a measure under retraction onto a (sub)tree.
inline TreeMeasure retract_measure(const SpanTree& T, const TreeMeasure& mu) {
    TreeMeasure out;
    for (const auto& a : mu) add_atom(out, T.retract(a.point), a.mass);
    drop_zero_atoms(out);
    return out;
}

// Value at an on-tree point of the function with the given vertex values,
// extended affinely along edges.
inline Rat cpa_value(const SpanTree& T, const std::vector<Rat>& values, const TreePoint& P) {
    if ((int)values.size() != T.size()) throw ConfigInvalid("one value per vertex required");
    SpanTree::Location loc = T.locate(P);
    if (loc.vertex >= 0) return values[loc.vertex];
    int c = loc.edge_child, u = T.parent(c);
    Rat lam = (P.t - T.point(u).t) / T.edge_length(c);
    return values[u] + lam * (values[c] - values[u]);
}

// Exact integral of a CPA function against a finitely supported measure
// whose atoms lie on the tree.
inline Rat integrate_cpa(const SpanTree& T, const std::vector<Rat>& values, const TreeMeasure& mu) {
    Rat s = 0;
    for (const auto& a : mu) s += a.mass * cpa_value(T, values, a.point);
    return s;
}

// Mass of the closed subtree hanging below (and including) vertex v.
inline Rat subtree_mass(const SpanTree& T, const TreeMeasure& mu, int v) {
    Rat s = 0;
    for (const auto& a : mu) {
        TreePoint r = T.retract(a.point);
        // r lies weakly below v iff v is an ancestor of r.
        if (is_ancestor(T.point(v), r)) s += a.mass;
    }
    return s;
}

}  // namespace berk
