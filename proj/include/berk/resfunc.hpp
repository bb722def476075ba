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
#include "berk/projmap.hpp"

#include <map>
#include <optional>
#include <vector>

namespace berk {

// ---------------------------------------------------------------------------
// Lower envelope of finitely many affine functions of t (concave, piecewise
// affine).  Used for the minimum coefficient valuation of a conjugated
// lift: every coefficient valuation is affine in the radius parameter t,
// so the minimum over coefficients is such an envelope.
// ---------------------------------------------------------------------------

struct AffinePiece {
    Rat slope;
    Rat intercept;
    Rat at(const Rat& t) const { return slope * t + intercept; }
};

class LowerEnvelope {
public:
    static LowerEnvelope of(const std::vector<AffinePiece>& lines) {
        if (lines.empty()) throw Error("envelope of an empty family");
        // One line per slope suffices: the lowest intercept.
        std::map<Rat, Rat> best;  // slope -> min intercept
        for (const auto& L : lines) {
            auto it = best.find(L.slope);
            if (it == best.end() || L.intercept < it->second) best[L.slope] = L.intercept;
        }
        LowerEnvelope env;
        // Sweep slopes in decreasing order (steepest wins at t -> -infinity).
        for (auto it = best.rbegin(); it != best.rend(); ++it) {
            AffinePiece L{it->first, it->second};
            while (!env.pieces_.empty()) {
                const AffinePiece& top = env.pieces_.back();
                Rat cross = (L.intercept - top.intercept) / (top.slope - L.slope);
                if (env.breaks_.empty() || cross > env.breaks_.back()) {
                    env.breaks_.push_back(cross);
                    break;
                }
                env.pieces_.pop_back();
                if (!env.breaks_.empty()) env.breaks_.pop_back();
            }
            env.pieces_.push_back(L);
        }
        return env;
    }

    Rat eval(const Rat& t) const { return pieces_[index_at(t, true)].at(t); }

    // One-sided slopes: toward larger t and toward smaller t.
    Rat slope_right(const Rat& t) const { return pieces_[index_at(t, true)].slope; }
    Rat slope_left(const Rat& t) const { return pieces_[index_at(t, false)].slope; }

    const std::vector<Rat>& breakpoints() const { return breaks_; }
    const std::vector<AffinePiece>& pieces() const { return pieces_; }

private:
    // Piece active at t; at a breakpoint, right_side picks the piece on the
    // larger-t side.
    size_t index_at(const Rat& t, bool right_side) const {
        size_t i = 0;
        while (i < breaks_.size() && (breaks_[i] < t || (right_side && breaks_[i] == t))) ++i;
        return i;
    }

    std::vector<AffinePiece> pieces_;  // slopes strictly decreasing
    std::vector<Rat> breaks_;          // increasing; size = pieces - 1
};

// ---------------------------------------------------------------------------
// Resultant functions of iterates.
// ---------------------------------------------------------------------------

struct GreenEstimate {
    int n;
    Rat value;        // (1/(d^{2n}-d^n)) ordRes_{phi^n}(x)
    Rat error_bound;  // 2/(d^n-1) * max(C, rho(x, Gauss))
    std::optional<Rat> empirical_gap;
    Rat C_used;
};

struct HeightEstimate {
    int n;
    Rat value;
    Rat error_bound;  // max(C, rho(x, Gauss))/(d^n-1)
};

/**
 * Evaluator for ordRes_{phi^n} on the tree of discs.
 *
 * Everything is anchored to the reference (normalized, scale-free) lift.
 * Writing gamma(z) = b z + a with ord b = t, so that gamma moves the Gauss
 * point to zeta_{a,t}:
 *
 *   ordRes_{phi^n}(zeta_{a,t}) = ordRes(F(n), G(n)) + (d^{2n}+d^n) t
 *                                - 2 d^n min_ord((F(n), G(n))^gamma)
 *
 * with (F(n), G(n)) the normalized n-th composite.  The first summand has
 * the closed form (d^{2n}-d^n)/(d^2-d) ordRes(F,G) - 2 d^n m_n, where m_n
 * is the renormalization shift accumulated while composing.  The last
 * summand is evaluated through the coefficient envelope: conjugating by
 * gamma scales the X^m-coefficient of a translated form by b^m, so every
 * coefficient valuation is affine in t and no b in the field is needed.
 * That makes the whole expression exact for every rational t; a concrete
 * b enters only in the cross-check route, which literally conjugates,
 * renormalizes, composes, and takes a Sylvester determinant.
 */
class Dynamics {
public:
    explicit Dynamics(Lift input) : base_(reference_lift(std::move(input))) {
        if (base_.d < 2) throw ConfigInvalid("dynamical degree must be at least 2");
        ensure_nondegenerate(base_);
        s1_ = sylvester_ord(base_);
    }

    const ContextPtr& context() const { return base_.ctx; }
    int degree() const { return base_.d; }
    const Lift& base() const { return base_; }
    Rat base_ord_res() const { return s1_; }

    Int deg_pow(int n) const { return iterate_degree(base_.d, n); }

    const Lift& iterate(int n) const {
        if (n < 1) throw ConfigInvalid("iterate count must be >= 1");
        if (deg_pow(n) > max_iterate_budget())
            throw IterationBudgetExceeded("d^n exceeds the iteration budget");
        auto it = cache_.find(n);
        if (it != cache_.end()) return it->second;
        Lift cur = (n == 1) ? base_ : normalized(compose(iterate(n - 1), base_));
        return cache_.emplace(n, std::move(cur)).first->second;
    }

    // ordRes of the normalized n-th composite, by the closed form.
    Rat iterate_ord_res(int n) const {
        const Int D = deg_pow(n);
        Rat lead = Rat(D * D - D) / Rat(base_.d * base_.d - base_.d);
        return lead * s1_ - Rat(2) * Rat(D) * iterate(n).shift;
    }

    // Envelope of min_ord((F(n), G(n))^gamma) as a function of t at center a.
    LowerEnvelope conj_min_ord(const ValElement& a, int n) const {
        const Lift& N = iterate(n);
        std::vector<ValElement> ta_f = translate_form(N.F, a);
        std::vector<ValElement> ta_g = translate_form(N.G, a);
        std::vector<AffinePiece> lines;
        for (int m = 0; m < (int)ta_f.size(); ++m) {
            ValElement vm = ta_f[m] - a * ta_g[m];
            if (!vm.is_zero()) lines.push_back({Rat(m), vm.ord().value()});
            if (!ta_g[m].is_zero()) lines.push_back({Rat(m + 1), ta_g[m].ord().value()});
        }
        return LowerEnvelope::of(lines);
    }

    Rat ord_res_at(const TreePoint& P, int n) const {
        LowerEnvelope env = conj_min_ord(P.center, n);
        return ord_res_from_envelope(env, P.t, n);
    }

    Rat ord_res_from_envelope(const LowerEnvelope& env, const Rat& t, int n) const {
        const Int D = deg_pow(n);
        return iterate_ord_res(n) + Rat(D * D + D) * t - Rat(2) * Rat(D) * env.eval(t);
    }

    // Cross-check route: conjugate the base lift (needs e t integral),
    // renormalize, compose n times, and take the Sylvester valuation of the
    // final normalized pair.
    Rat ord_res_at_route_b(const TreePoint& P, int n) const {
        Lift conj = reference_lift(conjugate_lift(base_, P.center, P.t));
        Lift it = iterate_lift(conj, n);
        return sylvester_ord(it);
    }

    Rat normalized_ord_res(const TreePoint& P, int n) const {
        const Int D = deg_pow(n);
        return ord_res_at(P, n) / Rat(D * D - D);
    }

    // f_n = normalized ordRes plus the log of the Hsia diagonal.
    Rat eval_fn(const TreePoint& P, int n) const {
        return normalized_ord_res(P, n) + hsia_diag_logv(P);
    }

    // One-sided derivative of ordRes_{phi^n} along the ray t -> zeta_{a,t},
    // in the direction of increasing (down = true) or decreasing t.
    Rat ray_slope(const ValElement& a, const Rat& t, int n, bool down) const {
        LowerEnvelope env = conj_min_ord(a, n);
        const Int D = deg_pow(n);
        Rat es = down ? env.slope_right(t) : env.slope_left(t);
        Rat d_ordres_dt = Rat(D * D + D) - Rat(2) * Rat(D) * es;
        return down ? d_ordres_dt : -d_ordres_dt;
    }

    // Envelope vertices: the exact breakpoints of f_n along the ray at a.
    std::vector<Rat> ray_breakpoints(const ValElement& a, int n) const {
        return conj_min_ord(a, n).breakpoints();
    }

private:
    Lift base_;
    Rat s1_;
    mutable std::map<int, Lift> cache_;
};

// ---------------------------------------------------------------------------
// Slope probing by step halving (the generic mechanism; exact envelopes
// make it terminate quickly, and it doubles as a validation of them).
// ---------------------------------------------------------------------------

struct SlopeProbeOptions {
    Rat initial_step = Rat(1);
    Rat min_step = Rat(1, 1 << 20);
    bool of_fn = false;  // probe f_n instead of normalized ordRes
};

inline Rat empirical_slope(const Dynamics& dyn, int n, const TreePoint& P, const Direction& v,
                           const SlopeProbeOptions& opt = {}) {
    auto value = [&](const TreePoint& x) {
        return opt.of_fn ? dyn.eval_fn(x, n) : dyn.normalized_ord_res(x, n);
    };
    const Rat f0 = value(P);
    Rat step = opt.initial_step;
    std::optional<Rat> prev;
    while (step >= opt.min_step) {
        TreePoint Q = point_along(P, v, step);
        Rat quot = (value(Q) - f0) / step;
        if (prev && *prev == quot) return quot;
        prev = quot;
        step /= 2;
    }
    throw NoStabilization("difference quotients kept changing above the minimum step");
}

// ---------------------------------------------------------------------------
// Certified ladders.
// ---------------------------------------------------------------------------

// Default scale constant: max(1, (2/(d-1)) * valuation spread of the
// reference coefficients).  The certified error bounds are conditional on
// the supplied constant; the empirical gaps reported alongside are not.
inline Rat default_C(const Dynamics& dyn) {
    Rat spread = 0;
    const Lift& L = dyn.base();
    for (const auto& c : L.F)
        if (!c.is_zero() && c.ord().value() > spread) spread = c.ord().value();
    for (const auto& c : L.G)
        if (!c.is_zero() && c.ord().value() > spread) spread = c.ord().value();
    Rat cand = Rat(2) * spread / Rat(dyn.degree() - 1);
    return cand > 1 ? cand : Rat(1);
}

inline GreenEstimate green_estimate(const Dynamics& dyn, const TreePoint& P, int n, const Rat& C,
                                    const std::optional<Rat>& prev_value = std::nullopt) {
    if (C <= 0) throw ConfigInvalid("scale constant C must be positive");
    GreenEstimate out;
    out.n = n;
    out.value = dyn.normalized_ord_res(P, n);
    TreePoint gauss{ValElement(dyn.context()), Rat(0)};
    Rat reach = rho(P, gauss);
    Rat m = reach > C ? reach : C;
    out.error_bound = Rat(2) * m / Rat(dyn.deg_pow(n) - 1);
    out.C_used = C;
    if (prev_value) out.empirical_gap = abs(out.value - *prev_value);
    return out;
}

inline std::vector<GreenEstimate> green_ladder(const Dynamics& dyn, const TreePoint& P, int n_max,
                                               const Rat& C) {
    std::vector<GreenEstimate> out;
    std::optional<Rat> prev;
    for (int n = 1; n <= n_max; ++n) {
        out.push_back(green_estimate(dyn, P, n, C, prev));
        prev = out.back().value;
    }
    return out;
}

inline HeightEstimate height_convergent(const Dynamics& dyn, const TreePoint& P, int n,
                                        const Rat& C) {
    HeightEstimate out;
    out.n = n;
    LowerEnvelope env = dyn.conj_min_ord(P.center, n);
    Rat denom = Rat(dyn.deg_pow(n) - 1);
    out.value = -env.eval(P.t) / denom - hsia_diag_logv(P) / denom;
    TreePoint gauss{ValElement(dyn.context()), Rat(0)};
    Rat reach = rho(P, gauss);
    Rat m = reach > C ? reach : C;
    out.error_bound = m / denom;
    return out;
}

}  // namespace berk
