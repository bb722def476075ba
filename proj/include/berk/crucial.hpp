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

#include "berk/newton.hpp"
#include "berk/resfunc.hpp"

#include <optional>
#include <string>
#include <vector>

namespace berk {

// ---------------------------------------------------------------------------
// Locating the classical fixed points of an iterate.
//
// The descent walks the cluster tree of the fixed-point divisor: Newton
// polygon for the valuations, residual polynomials for the digits.  Repeated
// roots are stripped first (the radical), so every cluster eventually
// becomes a singleton, an exact root, or stops where its digits leave F_p
// or its level leaves (1/e)Z.  A stopped cluster still pins down the point
// of the rational tree where the missing branches attach, which is all the
// skeleton needs.
// ---------------------------------------------------------------------------

struct FixedCluster {
    ValElement center;
    OrdVal level;   // ord(root - center); infinite when center is the root
    int count;      // distinct roots represented
    bool resolved;  // singleton tracked in the ground field
};

namespace detail {

inline void explore_clusters(const VPoly& f, const ValElement& a,
                             const std::optional<Rat>& floor, std::vector<FixedCluster>& out,
                             int depth) {
    if (depth > 512) throw UnresolvableBreakpoint("cluster descent did not terminate");
    const auto& ctx = a.context();
    RootOrdProfile prof = root_ord_profile(f);
    if (prof.zero_mult > 0) out.push_back({a, OrdVal::infinity(), prof.zero_mult, true});
    for (const auto& sc : prof.slopes) {
        if (floor && sc.root_ord <= *floor) continue;  // sibling branches
        if (sc.count == 1) {
            out.push_back({a, OrdVal(sc.root_ord), 1, true});
            continue;
        }
        Rat le = sc.root_ord * ctx->e;
        if (denominator(le) != 1) {
            out.push_back({a, OrdVal(sc.root_ord), sc.count, false});
            continue;
        }
        int covered = 0;
        for (const auto& [digit, mult] : fp_roots(residual_poly(f, sc.root_ord))) {
            if (digit == 0) continue;
            ValElement step =
                lift_residue(ctx, digit) * pi_power(ctx, le.convert_to<long long>());
            explore_clusters(taylor_shift(f, step), a + step, sc.root_ord, out, depth + 1);
            covered += mult;
        }
        if (covered < sc.count)
            out.push_back({a, OrdVal(sc.root_ord), sc.count - covered, false});
    }
}

}  // namespace detail

struct FixedPointSky {
    FixedPointDivisor divisor;
    std::vector<FixedCluster> clusters;  // finite fixed points, grouped
    bool infinity_fixed = false;
};

inline FixedPointSky locate_fixed_points(const Dynamics& dyn, int n) {
    FixedPointSky sky{fixed_point_divisor(dyn.iterate(n)), {}, false};
    sky.infinity_fixed = sky.divisor.inf_mult > 0;
    VPoly rad = vpoly_radical(sky.divisor.finite);
    if (vpoly_degree(rad) >= 1)
        detail::explore_clusters(rad, ValElement(dyn.context()), std::nullopt, sky.clusters, 0);
    return sky;
}

// ---------------------------------------------------------------------------
// The skeleton: the truncated tree spanned by the located fixed points,
// with a vertex at every bend of f_n.  Because the restriction of f_n to
// the ray at any center is read off a coefficient envelope, the bends are
// known exactly and no bisection is needed; every edge of the result
// carries a single slope by construction.  The leg toward infinity is
// present exactly when infinity is fixed.
// ---------------------------------------------------------------------------

inline SpanTree crucial_skeleton(const Dynamics& dyn, int n,
                                 const std::vector<TreePoint>& extra_seeds = {}) {
    const auto& ctx = dyn.context();
    FixedPointSky sky = locate_fixed_points(dyn, n);

    std::vector<ValElement> centers;
    centers.push_back(ValElement(ctx));  // the Gauss center, always probed
    std::vector<TreePoint> seeds;
    seeds.push_back(TreePoint{ValElement(ctx), Rat(0)});  // the Gauss point

    auto add_center = [&](const ValElement& a) {
        for (const auto& c : centers)
            if ((c - a).is_zero()) return;
        centers.push_back(a);
    };
    for (const auto& cl : sky.clusters) {
        add_center(cl.center);
        // Digits outside the residue field stop the descent at the cluster
        // point; any mass deeper in those directions retracts onto it.
        if (!cl.level.is_infinite() && !cl.resolved)
            seeds.push_back(TreePoint{cl.center, cl.level.value()});
    }
    for (const auto& P : extra_seeds) {
        add_center(P.center);
        seeds.push_back(P);
    }

    // Every bend of f_n along a probed ray sits where fixed points separate,
    // so the deepest bend per ray is the natural truncation depth: beyond it
    // the function is affine and carries no mass.  Extending further would
    // leave the fixed-point hull.
    for (const auto& a : centers)
        for (const Rat& b : dyn.ray_breakpoints(a, n)) seeds.push_back(TreePoint{a, b});

    Rat top(0);
    for (const auto& P : seeds)
        if (P.t < top) top = P.t;
    if (sky.infinity_fixed) seeds.push_back(TreePoint{ValElement(ctx), top - 1});
    return SpanTree::span(seeds);
}

// ---------------------------------------------------------------------------
// Route one: solve Delta_Gamma(f_n) = -2 nu + 2 delta_{r(infinity)} on the
// skeleton.  The result is the crucial measure of the n-th iterate pushed
// onto the rational tree (exactly the measure itself whenever every fixed
// branch is rational).
// ---------------------------------------------------------------------------

inline TreeMeasure crucial_measure_laplacian(const Dynamics& dyn, int n,
                                             const std::vector<TreePoint>& extra_seeds = {}) {
    SpanTree T = crucial_skeleton(dyn, n, extra_seeds);
    std::vector<Rat> f(T.size());
    for (int i = 0; i < T.size(); ++i) f[i] = dyn.eval_fn(T.point(i), n);
    std::vector<Rat> atom(T.size(), Rat(0));
    atom[T.root()] += 1;
    for (const auto& wp : graph_laplacian(T, f)) {
        int i = T.find_vertex(wp.point);
        if (i < 0) throw UnresolvableBreakpoint("laplacian atom off the skeleton");
        atom[i] -= wp.mass / 2;
    }
    // Caller-supplied seeds may stick out of the fixed-point hull; on such
    // a leg the function climbs linearly, leaving a debit at the leaf that
    // cancels the matching credit at the junction.  Retracting the debits
    // rootward reproduces the pushforward onto the hull exactly.
    for (int pass = 0; pass < T.size(); ++pass) {
        bool moved = false;
        for (int i = 0; i < T.size(); ++i) {
            if (i == T.root() || atom[i] >= 0) continue;
            atom[T.parent(i)] += atom[i];
            atom[i] = 0;
            moved = true;
        }
        if (!moved) break;
    }

    const Int denom = dyn.deg_pow(n) - 1;
    Rat mass(0);
    TreeMeasure nu;
    for (int i = 0; i < T.size(); ++i) {
        if (atom[i] == 0) continue;
        if (atom[i] < 0)
            throw UnresolvableBreakpoint("negative atom: skeleton misses a bend of f_n");
        if (denominator(Rat(atom[i] * denom)) != 1)
            throw UnresolvableBreakpoint("atom outside the weight lattice");
        mass += atom[i];
        add_atom(nu, T.point(i), atom[i]);
    }
    if (mass != 1) throw UnresolvableBreakpoint("crucial measure mass is not 1");
    return nu;
}

// ---------------------------------------------------------------------------
// The reduced rational map at a type II point, acting on P^1 over the
// residue field.
// ---------------------------------------------------------------------------

struct ReducedMap {
    Int p;
    int deg = 0;            // 0 means a constant map
    std::vector<Int> A, B;  // coprime forms, X-power coefficients, size deg+1

    bool constant() const { return deg == 0; }
    bool identity() const {
        return deg == 1 && A[0] == 0 && B[1] == 0 && A[1] == B[0] && A[1] != 0;
    }

    // Image of a direction: residue class u, or infinity (nullopt).
    std::optional<Int> apply(const std::optional<Int>& u) const {
        Int num, den;
        if (u) {
            FpPoly fa(p, A), fb(p, B);
            num = fa.eval(*u);
            den = fb.eval(*u);
        } else {
            num = A[deg];  // value at (1 : 0)
            den = B[deg];
        }
        if (den == 0) return std::nullopt;
        // den^{p-2} = den^{-1} in F_p
        Int acc = 1, base = den, k = p - 2;
        while (k > 0) {
            if (k % 2 == 1) acc = acc * base % p;
            base = base * base % p;
            k /= 2;
        }
        return num * acc % p;
    }
};

inline ReducedMap reduced_map_at(const Dynamics& dyn, int n, const TreePoint& P) {
    Lift conj = reference_lift(conjugate_lift(dyn.iterate(n), P.center, P.t));
    auto [av, bv] = reduce_lift(conj);
    const Int p = dyn.context()->p;
    FpPoly fa(p, av), fb(p, bv);
    int ya = (int)av.size() - 1 - fa.degree();  // multiplicity of the Y factor
    int yb = (int)bv.size() - 1 - fb.degree();
    int ycommon = std::min(ya, yb);
    if (fb.degree() < 0) {  // constant map to infinity
        return {p, 0, {1}, {0}};
    }
    if (fa.degree() < 0) {  // constant map to zero
        return {p, 0, {0}, {1}};
    }
    FpPoly g = fp_gcd(fa, fb);
    fa = fa.divmod(g).first;
    fb = fb.divmod(g).first;
    ReducedMap out;
    out.p = p;
    out.deg = std::max(fa.degree() + ya - ycommon, fb.degree() + yb - ycommon);
    out.A.assign(out.deg + 1, Int(0));
    out.B.assign(out.deg + 1, Int(0));
    for (int i = 0; i <= fa.degree(); ++i) out.A[i] = fa.coeff(i);
    for (int i = 0; i <= fb.degree(); ++i) out.B[i] = fb.coeff(i);
    return out;
}

enum class LocalStatus { NonFixed, FixedNonId, IdIndifferent };

inline LocalStatus classify_point(const Dynamics& dyn, int n, const TreePoint& P) {
    ReducedMap rm = reduced_map_at(dyn, n, P);
    if (rm.constant()) return LocalStatus::NonFixed;
    return rm.identity() ? LocalStatus::IdIndifferent : LocalStatus::FixedNonId;
}

// ---------------------------------------------------------------------------
// Route two: the dynamical weights.
// ---------------------------------------------------------------------------

struct WeightReport {
    TreePoint point;
    int weight = 0;
    LocalStatus status = LocalStatus::NonFixed;
    int map_degree = 0;  // degree of the reduced map, for fixed points
    int shearing = 0;    // sheared directions with fixed points, for fixed points
    int fixed_dirs = 0;  // directions holding a classical fixed point
};

inline std::vector<WeightReport> crucial_measure_weights(const Dynamics& dyn, int n,
                                                         const std::vector<TreePoint>& candidates) {
    FixedPointDivisor R = fixed_point_divisor(dyn.iterate(n));
    const Int p = dyn.context()->p;
    const int e = dyn.context()->e;
    std::vector<WeightReport> out;
    std::vector<std::string> unresolved;
    for (const TreePoint& P : candidates) {
        if (denominator(Rat(P.t * e)) != 1) {
            unresolved.push_back(format_rational(P.t));
            continue;
        }
        WeightReport rep;
        rep.point = P;
        ReducedMap rm = reduced_map_at(dyn, n, P);

        // Per-direction fixed-point counts: residue classes, then the
        // complement (infinity plus everything outside the closed ball).
        const long pl = p.convert_to<long>();
        int inf_count = R.total;
        std::vector<int> dir_count(pl, 0);
        for (long u = 0; u < pl; ++u) {
            ValElement c = P.center + lift_residue(dyn.context(), Int(u)) *
                                          pi_power(dyn.context(), (P.t * e).convert_to<long long>());
            dir_count[u] = count_roots_in_ball(R.finite, c, P.t, /*open=*/true);
            inf_count -= dir_count[u];
        }
        // Roots of the closed ball missed by every rational residue class
        // sit in directions the ground field cannot name.
        int at_p = count_roots_in_ball(R.finite, P.center, P.t, /*open=*/false);
        for (long u = 0; u < pl; ++u) at_p -= dir_count[u];
        inf_count -= at_p;
        if (at_p > 0) {
            unresolved.push_back(format_rational(P.t) + " (residue extension)");
            continue;
        }

        for (long u = 0; u < pl; ++u) rep.fixed_dirs += dir_count[u] > 0;
        rep.fixed_dirs += inf_count > 0;

        if (rm.constant()) {
            rep.status = LocalStatus::NonFixed;
            rep.weight = std::max(0, rep.fixed_dirs - 2);
        } else {
            rep.status = rm.identity() ? LocalStatus::IdIndifferent : LocalStatus::FixedNonId;
            rep.map_degree = rm.deg;
            for (long u = 0; u < pl; ++u) {
                if (dir_count[u] == 0) continue;
                auto img = rm.apply(Int(u));
                if (!img || *img != u) ++rep.shearing;
            }
            if (inf_count > 0) {
                auto img = rm.apply(std::nullopt);
                if (img) ++rep.shearing;
            }
            rep.weight = rm.deg - 1 + rep.shearing;
        }
        out.push_back(std::move(rep));
    }
    if (!unresolved.empty()) {
        std::string msg = "tangent analysis needs ramification at:";
        for (const auto& s : unresolved) msg += " " + s;
        throw PartialCoverage(msg);
    }
    return out;
}

inline TreeMeasure measure_from_weights(const std::vector<WeightReport>& reports, int d, int n) {
    Int denom = iterate_degree(d, n) - 1;
    TreeMeasure nu;
    for (const auto& rep : reports)
        if (rep.weight > 0) add_atom(nu, rep.point, Rat(rep.weight) / Rat(denom));
    drop_zero_atoms(nu);
    return nu;
}

// ---------------------------------------------------------------------------
// Slope formulas for points off the truncated fixed tree.
// ---------------------------------------------------------------------------

// Total slope of f_n over the local star at P.  For a non-fixed point,
// v_count is the valence of the star; for a fixed point that does not
// reduce to the identity it counts the sheared directions; id-indifferent
// points are balanced.
inline Rat predicted_offtree_slope(LocalStatus status, int v_count, int d, int n) {
    Rat denom(iterate_degree(d, n) - 1);
    switch (status) {
        case LocalStatus::NonFixed:
            return Rat(2 * (v_count - 2)) / denom;
        case LocalStatus::FixedNonId:
            return Rat(2 * v_count) / denom;
        case LocalStatus::IdIndifferent:
            return Rat(0);
    }
    return Rat(0);
}

// ---------------------------------------------------------------------------
// The explicit weak-convergence bound on a fixed test graph.
// ---------------------------------------------------------------------------

struct WeakBoundReport {
    Rat R;          // Gamma sits inside the closed rho-ball of this radius
    Int K;          // 2 * edge count
    Rat D;          // the graph constant
    Rat lap_tv;     // total variation of the tree Laplacian of f
    Rat max_abs_f;  // sup of |f| over Gamma
    Rat bound;
};

inline WeakBoundReport weak_conv_bound(const SpanTree& T, const std::vector<Rat>& values, int d,
                                       int n, const Rat& C_phi) {
    if ((int)values.size() != T.size()) throw ConfigInvalid("one value per vertex required");
    WeakBoundReport rep;
    TreePoint gauss{ValElement(T.point(0).center.context()), Rat(0)};
    rep.R = 0;
    for (int i = 0; i < T.size(); ++i) {
        Rat reach = rho(T.point(i), gauss);
        if (reach > rep.R) rep.R = reach;
    }
    Int edges = T.size() - 1;
    rep.K = 2 * edges;
    Rat excess(0);
    Int maxv(0);
    for (int i = 0; i < T.size(); ++i) {
        int v = T.valence(i);
        if (v != 2) excess += v > 2 ? v - 2 : 2 - v;
        if (v > maxv) maxv = v;
    }
    rep.D = Rat(rep.K) * (excess + Rat(edges + 1) * Rat(maxv));
    rep.lap_tv = 0;
    for (const auto& wp : graph_laplacian(T, values))
        rep.lap_tv += wp.mass < 0 ? -wp.mass : wp.mass;
    rep.max_abs_f = 0;
    for (const Rat& x : values) {
        Rat a = x < 0 ? -x : x;
        if (a > rep.max_abs_f) rep.max_abs_f = a;
    }
    Rat reach = C_phi > rep.R ? C_phi : rep.R;
    rep.bound = Rat(2, iterate_degree(d, n) - 1) * (reach * rep.lap_tv + rep.max_abs_f * rep.D);
    return rep;
}

// ---------------------------------------------------------------------------
// Equidistribution against a known reference measure.
// ---------------------------------------------------------------------------

// Largest valuation of (a - z) achievable with z in Z_p; infinite when a
// itself lies in the closure of the rational integers.
inline OrdVal zp_reach(const ValElement& a) {
    const auto& ctx = a.context();
    const auto& c = a.coords();
    if (c[0] != 0 && rat_ord_p(c[0], ctx->p) < 0) return OrdVal(Rat(rat_ord_p(c[0], ctx->p)));
    OrdVal best = OrdVal::infinity();
    for (int i = 1; i < ctx->e; ++i) {
        if (c[i] == 0) continue;
        OrdVal cand(Rat(rat_ord_p(c[i], ctx->p)) + Rat(i, ctx->e));
        if (cand < best) best = cand;
    }
    return best;
}

namespace detail {

inline Int rat_floor(const Rat& x) {
    Int q = numerator(x) / denominator(x);
    if (Rat(q) > x) --q;
    return q;
}

inline Int rat_ceil(const Rat& x) { return -rat_floor(-x); }

}  // namespace detail

// Exact retraction of the Haar measure on Z_p onto the graph.
inline TreeMeasure haar_reference(const SpanTree& T) {
    const auto& ctx = T.point(0).center.context();
    const Int p = ctx->p;
    // Candidate atoms: vertices plus integer levels interior to edges.
    // Integers z have integer valuations, so the retraction of the Haar
    // measure charges nothing else.
    std::vector<TreePoint> cand;
    for (int i = 0; i < T.size(); ++i) {
        cand.push_back(T.point(i));
        if (T.parent(i) < 0) continue;
        const TreePoint& u = T.point(T.parent(i));
        for (Int k = detail::rat_floor(u.t) + 1; Rat(k) < T.point(i).t; ++k)
            if (Rat(k) > u.t) cand.push_back(TreePoint{T.point(i).center, Rat(k)});
    }
    // Mass funneling through each candidate: the Haar measure of the
    // intersection of Z_p with the closed ball the point bounds.
    auto funnel = [&](const TreePoint& P, bool is_root) -> Rat {
        if (is_root) return Rat(1);
        if (zp_reach(P.center) < OrdVal(P.t)) return Rat(0);
        Int k = detail::rat_ceil(P.t);
        Rat mass(1);
        for (Int i = 0; i < k; ++i) mass /= p;
        return mass > 1 ? Rat(1) : mass;
    };
    int rootidx = -1;
    for (size_t i = 0; i < cand.size(); ++i)
        if (same_point(cand[i], T.point(T.root()))) rootidx = (int)i;
    TreeMeasure mu;
    for (size_t i = 0; i < cand.size(); ++i) {
        Rat mass = funnel(cand[i], (int)i == rootidx);
        if (mass == 0) continue;
        // Subtract what continues into deeper candidates.
        for (size_t j = 0; j < cand.size(); ++j) {
            if (j == i || !is_ancestor(cand[i], cand[j]) || same_point(cand[i], cand[j])) continue;
            // Only immediate successors: no third candidate strictly between.
            bool immediate = true;
            for (size_t k = 0; k < cand.size(); ++k) {
                if (k == i || k == j) continue;
                if (is_ancestor(cand[i], cand[k]) && is_ancestor(cand[k], cand[j]) &&
                    !same_point(cand[k], cand[i]) && !same_point(cand[k], cand[j])) {
                    immediate = false;
                    break;
                }
            }
            if (immediate) mass -= funnel(cand[j], false);
        }
        if (mass != 0) add_atom(mu, cand[i], mass);
    }
    drop_zero_atoms(mu);
    return mu;
}

struct EquidistRow {
    int n;
    Rat integral_nu;
    Rat integral_ref;
    Rat deviation;
    Rat bound;
};

inline std::vector<EquidistRow> equidist_report(const Dynamics& dyn, int n_lo, int n_hi,
                                                const SpanTree& T, const std::vector<Rat>& f,
                                                const TreeMeasure& reference, const Rat& C_phi) {
    if (n_lo < 1 || n_hi < n_lo) throw ConfigInvalid("bad iterate range");
    Rat ref_int = integrate_cpa(T, f, reference);
    std::vector<EquidistRow> rows;
    for (int n = n_lo; n <= n_hi; ++n) {
        TreeMeasure nu = crucial_measure_laplacian(dyn, n);
        TreeMeasure pushed = retract_measure(T, nu);
        EquidistRow row;
        row.n = n;
        row.integral_nu = integrate_cpa(T, f, pushed);
        row.integral_ref = ref_int;
        row.deviation = row.integral_nu - ref_int;
        if (row.deviation < 0) row.deviation = -row.deviation;
        row.bound = weak_conv_bound(T, f, dyn.degree(), n, C_phi).bound;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace berk
