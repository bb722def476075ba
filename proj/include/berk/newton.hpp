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

#include "berk/berktree.hpp"
#include "berk/fppoly.hpp"
#include "berk/projmap.hpp"
#include "berk/valfield.hpp"

#include <algorithm>
#include <vector>

namespace berk {

// Dehomogenized polynomial over the valued field; index = power of z.
using VPoly = std::vector<ValElement>;

inline int vpoly_degree(const VPoly& f) {
    for (int i = (int)f.size() - 1; i >= 0; --i)
        if (!f[i].is_zero()) return i;
    return -1;
}

inline ValElement vpoly_eval(const VPoly& f, const ValElement& x) {
    ValElement acc(x.context());
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// f(z + a), exact Taylor shift by repeated synthetic division.
inline VPoly taylor_shift(const VPoly& f, const ValElement& a) {
    VPoly g = f;
    const int n = (int)g.size();
    for (int k = 0; k < n - 1; ++k)
        for (int i = n - 2; i >= k; --i) g[i] += a * g[i + 1];
    return g;
}

/**
 * Valuations of the roots of f, read off the lower Newton polygon of
 * { (i, ord c_i) }.  A hull segment of slope sigma accounts for
 * (horizontal length) roots of valuation -sigma in an algebraic closure.
 * Roots exactly at 0 show up as trailing zero coefficients and are
 * reported separately; vanishing leading coefficients (drop in degree)
 * are the caller's business.
 */
struct SlopeClass {
    Rat root_ord;  // common valuation of the roots in this class
    int count;     // number of such roots, with multiplicity
};

struct RootOrdProfile {
    int zero_mult = 0;              // multiplicity of the root z = 0
    std::vector<SlopeClass> slopes;  // descending in root_ord (deepest first)
};

inline RootOrdProfile root_ord_profile(const VPoly& f) {
    const int deg = vpoly_degree(f);
    if (deg < 0) throw ZeroPolynomial("Newton polygon of the zero polynomial");
    RootOrdProfile out;
    int lo = 0;
    while (f[lo].is_zero()) ++lo;
    out.zero_mult = lo;
    if (lo == deg) return out;
    // Lower convex hull, scanning left to right (Andrew's monotone chain).
    std::vector<std::pair<Int, Rat>> pts;  // (index, ord)
    for (int i = lo; i <= deg; ++i)
        if (!f[i].is_zero()) pts.push_back({Int(i), f[i].ord().value()});
    std::vector<std::pair<Int, Rat>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // keep b if it turns strictly left of segment a -> pt
            Rat cross = (b.second - a.second) * Rat(pt.first - a.first) -
                        (pt.second - a.second) * Rat(b.first - a.first);
            if (cross < 0) break;
            hull.pop_back();
        }
        hull.push_back(pt);
    }
    for (size_t s = 0; s + 1 < hull.size(); ++s) {
        Rat slope = (hull[s + 1].second - hull[s].second) / Rat(hull[s + 1].first - hull[s].first);
        int count = (int)(hull[s + 1].first - hull[s].first).convert_to<long long>();
        out.slopes.push_back({-slope, count});
    }
    return out;
}

/**
 * Residual polynomial for the roots of valuation lambda: with
 * u = pi^{e lambda} w, the roots of f of valuation lambda reduce to the
 * nonzero roots of the returned polynomial in w over F_p (counted with
 * multiplicity).  Needs e*lambda integral; residues living in proper
 * extensions of F_p appear as irreducible factors of degree > 1.
 */
inline FpPoly residual_poly(const VPoly& f, const Rat& lambda) {
    const auto& ctx = f.empty() ? ContextPtr() : f[0].context();
    if (!ctx) throw ZeroPolynomial("residual of an empty polynomial");
    Rat le = lambda * ctx->e;
    if (denominator(le) != 1)
        throw RamificationNeeded("residue digits at level " + format_rational(lambda) +
                                 " need e*t integral");
    const int deg = vpoly_degree(f);
    if (deg < 0) throw ZeroPolynomial("residual of the zero polynomial");
    // mu = min_i (ord c_i + lambda i); support of the residual = argmin set.
    bool have = false;
    Rat mu;
    std::vector<Rat> s(deg + 1);
    for (int i = 0; i <= deg; ++i) {
        if (f[i].is_zero()) continue;
        s[i] = f[i].ord().value() + lambda * i;
        if (!have || s[i] < mu) {
            mu = s[i];
            have = true;
        }
    }
    int i1 = -1, i2 = -1;
    for (int i = 0; i <= deg; ++i) {
        if (f[i].is_zero() || s[i] != mu) continue;
        if (i1 < 0) i1 = i;
        i2 = i;
    }
    std::vector<Int> coeffs(i2 - i1 + 1, Int(0));
    for (int i = i1; i <= i2; ++i) {
        if (f[i].is_zero() || s[i] != mu) continue;  // above the segment: residue 0
        // c_i pi^{e(lambda i - mu)} is a unit; take its residue.
        Rat k = (lambda * i - mu) * ctx->e;
        ValElement unit = f[i] * pi_power(ctx, k.convert_to<long long>());
        coeffs[i - i1] = reduce_residue(unit).r;
    }
    return FpPoly(ctx->p, coeffs);
}

/**
 * Refines a center toward the unique root of f lying in the cluster
 * { z : ord(z - a) > from_level } until ord(root - a) >= target or the
 * root is hit exactly.  The cluster must contain exactly one root; it is
 * then fixed by Galois, lies in the ground field, and every digit is an
 * F_p residue at a level in (1/e)Z.  Returns the refined center and the
 * final ord(root - a) (infinity when the root was reached).
 */
struct RefinedCenter {
    ValElement center;
    OrdVal level;
};

inline RefinedCenter refine_isolated_root(const VPoly& f, ValElement a, const Rat& target) {
    const auto& ctx = a.context();
    long guard = 0;
    while (true) {
        if (++guard > 4096) throw IterationBudgetExceeded("root refinement loop");
        VPoly g = taylor_shift(f, a);
        RootOrdProfile prof = root_ord_profile(g);
        if (prof.zero_mult > 0) return {a, OrdVal::infinity()};  // a is the root
        // The cluster root is the deepest root of g; its ord is the largest
        // slope class value.
        if (prof.slopes.empty()) throw UnlocatableFixedPoints("no roots near the given center");
        const SlopeClass& deepest = prof.slopes.front();
        if (deepest.count != 1)
            throw UnlocatableFixedPoints("cluster is not a single root");
        Rat level = deepest.root_ord;
        if (level >= target) return {a, OrdVal(level)};
        FpPoly res = residual_poly(g, level);
        auto roots = fp_roots(res);
        Int digit = 0;
        bool found = false;
        for (const auto& [r, m] : roots) {
            if (r == 0) continue;
            if (found) throw UnlocatableFixedPoints("isolated root with ambiguous digit");
            digit = r;
            found = true;
        }
        if (!found) throw UnlocatableFixedPoints("isolated root has no rational digit");
        Rat ke = level * ctx->e;
        a += lift_residue(ctx, digit) * pi_power(ctx, ke.convert_to<long long>());
    }
}

// ---------------------------------------------------------------------------
// Polynomial arithmetic over the valued field (exact; used to strip
// repeated roots before cluster descent).
// ---------------------------------------------------------------------------

inline VPoly vpoly_trim(VPoly f) {
    int d = vpoly_degree(f);
    f.resize(d + 1 > 0 ? d + 1 : 0);
    return f;
}

inline VPoly vpoly_derivative(const VPoly& f) {
    if (f.size() <= 1) return {};
    const auto& ctx = f[0].context();
    VPoly g(f.size() - 1, ValElement(ctx));
    for (size_t i = 1; i < f.size(); ++i) g[i - 1] = f[i] * ValElement(ctx, Rat(i));
    return vpoly_trim(std::move(g));
}

inline std::pair<VPoly, VPoly> vpoly_divmod(VPoly num, const VPoly& den) {
    int dd = vpoly_degree(den);
    if (dd < 0) throw ZeroPolynomial("division by the zero polynomial");
    const auto& ctx = den[dd].context();
    ValElement inv = den[dd].inverse();
    int dn = vpoly_degree(num);
    VPoly quot(std::max(dn - dd + 1, 0), ValElement(ctx));
    for (int k = dn - dd; k >= 0; --k) {
        ValElement c = num[k + dd] * inv;
        quot[k] = c;
        if (c.is_zero()) continue;
        for (int j = 0; j <= dd; ++j) num[k + j] -= c * den[j];
    }
    return {vpoly_trim(std::move(quot)), vpoly_trim(std::move(num))};
}

inline VPoly vpoly_gcd(VPoly a, VPoly b) {
    a = vpoly_trim(std::move(a));
    b = vpoly_trim(std::move(b));
    while (vpoly_degree(b) >= 0) {
        VPoly r = vpoly_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    int d = vpoly_degree(a);
    if (d >= 0) {
        ValElement inv = a[d].inverse();
        for (auto& c : a) c = c * inv;
    }
    return a;
}

// Same roots, all simple (characteristic zero, so f / gcd(f, f') works).
inline VPoly vpoly_radical(const VPoly& f) {
    VPoly g = vpoly_gcd(f, vpoly_derivative(f));
    if (vpoly_degree(g) <= 0) return vpoly_trim(f);
    return vpoly_divmod(vpoly_trim(f), g).first;
}

// ---------------------------------------------------------------------------
// Newton polygons as a public summary, and exact root counts in balls.
// ---------------------------------------------------------------------------

struct NewtonPolygon {
    std::vector<SlopeClass> segments;  // root valuations, strictly increasing
    int zero_root_multiplicity = 0;
    int nominal_degree = 0;
    int leading_drop = 0;  // vanished leading coefficients (roots at infinity)
};

inline NewtonPolygon newton_polygon(const VPoly& f) {
    NewtonPolygon np;
    np.nominal_degree = (int)f.size() - 1;
    int deg = vpoly_degree(f);
    if (deg < 0) throw ZeroPolynomial("Newton polygon of the zero polynomial");
    np.leading_drop = np.nominal_degree - deg;
    RootOrdProfile prof = root_ord_profile(f);
    np.zero_root_multiplicity = prof.zero_mult;
    np.segments.assign(prof.slopes.rbegin(), prof.slopes.rend());
    return np;
}

// Number of roots x of f (with multiplicity) with ord(x - center) > t,
// or >= t when open is false.  Exact for any rational t.
inline int count_roots_in_ball(const VPoly& f, const ValElement& center, const Rat& t,
                               bool open) {
    RootOrdProfile prof = root_ord_profile(taylor_shift(f, center));
    int cnt = prof.zero_mult;
    for (const auto& sc : prof.slopes)
        if (sc.root_ord > t || (!open && sc.root_ord == t)) cnt += sc.count;
    return cnt;
}

// ---------------------------------------------------------------------------
// The fixed-point divisor Y F - X G and direction-resolved counts.
// ---------------------------------------------------------------------------

struct FixedPointDivisor {
    VPoly finite;      // R(z, 1); roots are the finite fixed points
    int inf_mult = 0;  // multiplicity of the fixed point at infinity
    int total = 0;     // degree + 1
};

inline FixedPointDivisor fixed_point_divisor(const Lift& L) {
    std::vector<ValElement> R = fixed_point_form(L);
    FixedPointDivisor out;
    out.total = L.d + 1;
    int top = (int)R.size() - 1;
    while (top >= 0 && R[top].is_zero()) --top;
    if (top < 0) throw IdentityMap("the fixed-point form vanishes identically");
    out.inf_mult = (int)R.size() - 1 - top;
    out.finite.assign(R.begin(), R.begin() + top + 1);
    return out;
}

// Fixed points of the n-th iterate (with multiplicity, infinity included)
// in the open ball cut off at P by direction v.
inline int count_fixed_in_direction(const Lift& L, int n, const TreePoint& P,
                                    const Direction& v) {
    FixedPointDivisor R = fixed_point_divisor(iterate_lift(reference_lift(L), n));
    if (v.kind == Direction::Kind::Infinity)
        return R.total - count_roots_in_ball(R.finite, P.center, P.t, /*open=*/false);
    return count_roots_in_ball(R.finite, v.center, P.t, /*open=*/true);
}

}  // namespace berk
