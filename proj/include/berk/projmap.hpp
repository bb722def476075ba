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

#include "berk/fppoly.hpp"
#include "berk/valfield.hpp"

#include <utility>
#include <vector>

namespace berk {

/**
 * Homogeneous lift [F, G] of a rational map of degree d on the projective
 * line.  F and G are binary forms of degree d, stored as coefficient
 * vectors indexed by the power of X (size d+1).
 *
 * `shift` records renormalization: the represented pair is
 * pi^{e*shift} * (F, G) with shift in (1/e)Z.  Keeping the scale factor
 * symbolic lets iteration renormalize at every step (so stored
 * coefficients stay reduced) without losing the exact resultant
 * valuation of the unnormalized composite.
 */
struct Lift {
    ContextPtr ctx;
    int d = 0;
    std::vector<ValElement> F, G;
    Rat shift{0};
};

namespace detail {

using Form = std::vector<ValElement>;  // homogeneous in X, Y; index = X-power

inline Form form_mul(const ContextPtr& ctx, const Form& a, const Form& b) {
    Form out(a.size() + b.size() - 1, ValElement(ctx));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            if (b[j].is_zero()) continue;
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

inline Form form_smul(const ValElement& s, Form f) {
    for (auto& c : f) c = c * s;
    return f;
}

inline OrdVal form_min_ord(const Form& f) {
    OrdVal m = OrdVal::infinity();
    for (const auto& c : f) m = min(m, c.ord());
    return m;
}

}  // namespace detail

inline Lift make_lift(ContextPtr ctx, std::vector<ValElement> F, std::vector<ValElement> G,
                      Rat shift = Rat(0)) {
    if (F.size() != G.size() || F.size() < 2)
        throw ConfigInvalid("lift needs two coefficient vectors of equal size >= 2");
    Lift L;
    L.ctx = std::move(ctx);
    L.d = (int)F.size() - 1;
    L.F = std::move(F);
    L.G = std::move(G);
    L.shift = std::move(shift);
    return L;
}

inline OrdVal min_ord(const Lift& L) {
    return min(detail::form_min_ord(L.F), detail::form_min_ord(L.G));
}

// Scales the stored coefficients so their minimum valuation is 0, folding
// the removed power of pi into `shift`.
inline Lift normalized(Lift L) {
    OrdVal m = min_ord(L);
    if (m.is_infinite()) throw DegenerateMap("both forms vanish identically");
    if (m.value() == 0) return L;
    Rat mv = m.value();
    Rat scaled_e = mv * L.ctx->e;
    if (denominator(scaled_e) != 1)
        throw Error("minimum valuation not in (1/e)Z");
    long k = -scaled_e.convert_to<long long>();
    ValElement u = pi_power(L.ctx, k);
    L.F = detail::form_smul(u, std::move(L.F));
    L.G = detail::form_smul(u, std::move(L.G));
    L.shift += mv;
    return L;
}

// Canonical representative of the underlying map: normalized coefficients
// with the scale discarded.  Resultant-based invariants of the map itself
// (as opposed to invariants of a particular lift) refer to this object.
inline Lift reference_lift(Lift L) {
    L = normalized(std::move(L));
    L.shift = 0;
    return L;
}

// A ∘ B: F_A(F_B, G_B), G_A(F_B, G_B).  Degrees multiply; the symbolic
// scale obeys shift(A∘B) = shift(A) + d_A * shift(B).
inline Lift compose(const Lift& A, const Lift& B) {
    if (*A.ctx != *B.ctx) throw IncompatibleRamification("composing lifts over different fields");
    const auto& ctx = A.ctx;
    using detail::Form;
    std::vector<Form> powF(A.d + 1), powG(A.d + 1);
    powF[0] = powG[0] = Form{ValElement(ctx, Rat(1))};
    for (int i = 1; i <= A.d; ++i) {
        powF[i] = detail::form_mul(ctx, powF[i - 1], B.F);
        powG[i] = detail::form_mul(ctx, powG[i - 1], B.G);
    }
    const int dd = A.d * B.d;
    Form outF(dd + 1, ValElement(ctx)), outG(dd + 1, ValElement(ctx));
    for (int i = 0; i <= A.d; ++i) {
        Form term = detail::form_mul(ctx, powF[i], powG[A.d - i]);
        for (int k = 0; k <= dd; ++k) {
            if (!A.F[i].is_zero()) outF[k] += A.F[i] * term[k];
            if (!A.G[i].is_zero()) outG[k] += A.G[i] * term[k];
        }
    }
    Lift out = make_lift(ctx, std::move(outF), std::move(outG));
    out.shift = A.shift + Rat(A.d) * B.shift;
    return out;
}

// Integer power of the map degree, with the overridable safety budget.
inline Int iterate_degree(int d, int n) {
    Int deg = 1;
    for (int i = 0; i < n; ++i) deg *= d;
    return deg;
}

inline Int max_iterate_budget() {
    if (const char* env = std::getenv("DYNLAB_MAX_BUDGET")) {
        try {
            return Int(std::string(env));
        } catch (...) {
            throw ConfigInvalid("DYNLAB_MAX_BUDGET must be an integer");
        }
    }
    return Int(65);
}

// n-fold self-composition, renormalizing after every step.  For a
// normalized input the final shift equals the accumulated minimum
// valuation m_n of the literal (unnormalized) composite.
inline Lift iterate_lift(const Lift& base, int n) {
    if (n < 1) throw ConfigInvalid("iterate count must be >= 1");
    if (iterate_degree(base.d, n) > max_iterate_budget())
        throw IterationBudgetExceeded("d^n exceeds the iteration budget");
    Lift cur = normalized(base);
    for (int k = 1; k < n; ++k) cur = normalized(compose(cur, base));
    return cur;
}

// ---------------------------------------------------------------------------
// Resultant valuation.
// ---------------------------------------------------------------------------

namespace detail {

// Exact determinant by Gaussian elimination over the field.
inline ValElement val_det(std::vector<std::vector<ValElement>> M, const ContextPtr& ctx) {
    const size_t n = M.size();
    ValElement det(ctx, Rat(1));
    bool negate = false;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && M[piv][col].is_zero()) ++piv;
        if (piv == n) return ValElement(ctx);  // zero
        if (piv != col) {
            std::swap(M[piv], M[col]);
            negate = !negate;
        }
        det *= M[col][col];
        ValElement inv = M[col][col].inverse();
        for (size_t row = col + 1; row < n; ++row) {
            if (M[row][col].is_zero()) continue;
            ValElement factor = M[row][col] * inv;
            for (size_t j = col; j < n; ++j) M[row][j] -= factor * M[col][j];
        }
    }
    if (negate) det = -det;
    return det;
}

}  // namespace detail

// Resultant of the stored coefficient pair as binary forms of formal
// degree d (vanishing leading coefficients allowed): determinant of the
// 2d x 2d Sylvester matrix.
inline ValElement resultant(const Lift& L) {
    const int d = L.d;
    const auto& ctx = L.ctx;
    std::vector<std::vector<ValElement>> M(2 * d, std::vector<ValElement>(2 * d, ValElement(ctx)));
    for (int r = 0; r < d; ++r)
        for (int j = 0; j <= d; ++j) {
            M[r][r + j] = L.F[d - j];
            M[d + r][r + j] = L.G[d - j];
        }
    return detail::val_det(std::move(M), ctx);
}

// ord Res of the stored coefficients only (shift ignored).
inline Rat sylvester_ord(const Lift& L) {
    ValElement res = resultant(L);
    OrdVal o = res.ord();
    if (o.is_infinite()) throw DegenerateMap("resultant vanishes: F and G share a root");
    return o.value();
}

// ord Res of the represented pair pi^{e*shift} (F, G).  Res is homogeneous
// of degree 2d in the coefficients, hence the 2d * shift correction.
inline Rat ord_resultant(const Lift& L) {
    return sylvester_ord(L) + Rat(2 * L.d) * L.shift;
}

// ---------------------------------------------------------------------------
// Coordinate changes.
// ---------------------------------------------------------------------------

// T_a: coefficients of H(X + aY, Y) for a binary form H of degree d.
inline std::vector<ValElement> translate_form(const std::vector<ValElement>& H, const ValElement& a) {
    const int d = (int)H.size() - 1;
    const auto& ctx = a.context();
    std::vector<ValElement> out(d + 1, ValElement(ctx));
    // binomial coefficients C(i, m): out[m] = sum_{i >= m} C(i,m) a^{i-m} H[i]
    std::vector<std::vector<Int>> C(d + 1, std::vector<Int>(d + 1, Int(0)));
    for (int i = 0; i <= d; ++i) {
        C[i][0] = 1;
        for (int m = 1; m <= i; ++m) C[i][m] = C[i - 1][m - 1] + (m <= i - 1 ? C[i - 1][m] : Int(0));
    }
    for (int m = 0; m <= d; ++m) {
        ValElement acc(ctx);
        ValElement apow(ctx, Rat(1));
        for (int i = m; i <= d; ++i) {
            if (!H[i].is_zero()) acc += ValElement(ctx, Rat(C[i][m])) * apow * H[i];
            apow *= a;
        }
        out[m] = acc;
    }
    return out;
}

/**
 * Lift of the conjugate by gamma(z) = b z + a with b = pi^{e t}, acting on
 * points as the disc coordinate change sending the Gauss point to the
 * point with center a and radius |b|.  Requires e*t integral so that b
 * exists in the field; otherwise RamificationNeeded.
 *
 *   F^gamma = F(bX + aY, Y) - a G(bX + aY, Y),   G^gamma = b G(bX + aY, Y).
 */
inline Lift conjugate_lift(const Lift& L, const ValElement& a, const Rat& t) {
    const auto& ctx = L.ctx;
    Rat te = t * ctx->e;
    if (denominator(te) != 1)
        throw RamificationNeeded("radius parameter t needs e*t integral in this field");
    ValElement b = pi_power(ctx, te.convert_to<long long>());
    std::vector<ValElement> TF = translate_form(L.F, a);
    std::vector<ValElement> TG = translate_form(L.G, a);
    std::vector<ValElement> outF(L.d + 1, ValElement(ctx)), outG(L.d + 1, ValElement(ctx));
    ValElement bpow(ctx, Rat(1));
    for (int m = 0; m <= L.d; ++m) {
        outF[m] = bpow * (TF[m] - a * TG[m]);
        outG[m] = bpow * b * TG[m];
        bpow *= b;
    }
    Lift out = make_lift(ctx, std::move(outF), std::move(outG));
    out.shift = L.shift;
    return out;
}

// ---------------------------------------------------------------------------
// Reduction and fixed-point form.
// ---------------------------------------------------------------------------

// Residue coefficient vectors of a normalized lift (min ord exactly 0).
// Returned vectors keep full length d+1; callers needing the reduced map
// must cancel the common factor themselves.
inline std::pair<std::vector<Int>, std::vector<Int>> reduce_lift(const Lift& L) {
    OrdVal m = min_ord(L);
    if (m.is_infinite() || m.value() != 0)
        throw Error("reduce_lift requires a normalized lift");
    std::vector<Int> rf, rg;
    for (const auto& c : L.F) rf.push_back(reduce_residue(c).r);
    for (const auto& c : L.G) rg.push_back(reduce_residue(c).r);
    return {rf, rg};
}

// R(X, Y) = Y F(X, Y) - X G(X, Y), the degree d+1 form whose roots are the
// classical fixed points of the map; index = X-power.
inline std::vector<ValElement> fixed_point_form(const Lift& L) {
    const auto& ctx = L.ctx;
    std::vector<ValElement> r(L.d + 2, ValElement(ctx));
    for (int i = 0; i <= L.d; ++i) r[i] += L.F[i];
    for (int i = 0; i <= L.d; ++i) r[i + 1] -= L.G[i];
    return r;
}

inline void ensure_nondegenerate(const Lift& L) {
    sylvester_ord(L);  // throws DegenerateMap when Res = 0
}

}  // namespace berk
