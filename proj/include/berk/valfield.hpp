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

#include "berk/common.hpp"

#include <memory>
#include <sstream>
#include <vector>

namespace berk {

/**
 * Exact arithmetic in Q(pi) where pi^e = p, together with its valuation.
 *
 * An element is stored as its coordinate vector (c_0, ..., c_{e-1}) over Q
 * with respect to the basis 1, pi, ..., pi^{e-1}.  The valuation is
 *
 *     ord(sum c_i pi^i) = min_i ( ord_p(c_i) + i/e ),
 *
 * which is exact because the candidate values are pairwise distinct mod 1.
 * ord(0) = +infinity.  The residue field is F_p for every e.
 */
struct ValContext {
    Int p;
    int e;

    ValContext(Int p_, int e_) : p(std::move(p_)), e(e_) {
        if (p < 2) throw ConfigInvalid("p must be at least 2");
        if (e < 1 || e > 12) throw ConfigInvalid("ramification index e must be in [1,12]");
    }

    bool operator==(const ValContext& o) const { return p == o.p && e == o.e; }
    bool operator!=(const ValContext& o) const { return !(*this == o); }
};

using ContextPtr = std::shared_ptr<const ValContext>;

inline ContextPtr make_context(Int p, int e = 1) {
    return std::make_shared<const ValContext>(std::move(p), e);
}

// Residue of a unit (or zero) in F_p, stored as an integer in [0, p).
struct ResidueElement {
    Int p;
    Int r;
};

class ValElement {
public:
    ValElement() = default;

    explicit ValElement(ContextPtr ctx) : ctx_(std::move(ctx)), c_(ctx_->e, Rat(0)) {}

    ValElement(ContextPtr ctx, Rat rational_part) : ValElement(std::move(ctx)) {
        c_[0] = std::move(rational_part);
    }

    ValElement(ContextPtr ctx, std::vector<Rat> coords) : ctx_(std::move(ctx)), c_(std::move(coords)) {
        if ((int)c_.size() != ctx_->e)
            throw IncompatibleRamification("coordinate vector length does not match e");
    }

    const ContextPtr& context() const { return ctx_; }
    const std::vector<Rat>& coords() const { return c_; }

    bool is_zero() const {
        for (const auto& c : c_)
            if (c != 0) return false;
        return true;
    }

    OrdVal ord() const {
        OrdVal best = OrdVal::infinity();
        for (int i = 0; i < (int)c_.size(); ++i) {
            if (c_[i] == 0) continue;
            Rat cand = Rat(rat_ord_p(c_[i], ctx_->p)) + Rat(i, ctx_->e);
            best = min(best, OrdVal(cand));
        }
        return best;
    }

    friend ValElement operator+(const ValElement& a, const ValElement& b) {
        a.check(b);
        ValElement out(a.ctx_);
        for (int i = 0; i < (int)a.c_.size(); ++i) out.c_[i] = a.c_[i] + b.c_[i];
        return out;
    }

    friend ValElement operator-(const ValElement& a, const ValElement& b) {
        a.check(b);
        ValElement out(a.ctx_);
        for (int i = 0; i < (int)a.c_.size(); ++i) out.c_[i] = a.c_[i] - b.c_[i];
        return out;
    }

    friend ValElement operator-(const ValElement& a) {
        ValElement out(a.ctx_);
        for (int i = 0; i < (int)a.c_.size(); ++i) out.c_[i] = -a.c_[i];
        return out;
    }

    // Convolution modulo pi^e = p.
    friend ValElement operator*(const ValElement& a, const ValElement& b) {
        a.check(b);
        const int e = a.ctx_->e;
        ValElement out(a.ctx_);
        for (int i = 0; i < e; ++i) {
            if (a.c_[i] == 0) continue;
            for (int j = 0; j < e; ++j) {
                if (b.c_[j] == 0) continue;
                Rat term = a.c_[i] * b.c_[j];
                int k = i + j;
                if (k >= e) {
                    k -= e;
                    term *= Rat(a.ctx_->p);
                }
                out.c_[k] += term;
            }
        }
        return out;
    }

    ValElement& operator+=(const ValElement& b) { return *this = *this + b; }
    ValElement& operator-=(const ValElement& b) { return *this = *this - b; }
    ValElement& operator*=(const ValElement& b) { return *this = *this * b; }

    friend bool operator==(const ValElement& a, const ValElement& b) {
        a.check(b);
        return a.c_ == b.c_;
    }
    friend bool operator!=(const ValElement& a, const ValElement& b) { return !(a == b); }

    // Multiplicative inverse via the extended Euclidean algorithm in Q[x]
    // applied to the minimal polynomial x^e - p (irreducible by Eisenstein).
    ValElement inverse() const;

    void check(const ValElement& o) const {
        if (!ctx_ || !o.ctx_) throw Error("ValElement without context");
        if (*ctx_ != *o.ctx_) throw IncompatibleRamification("mixed contexts");
    }

private:
    ContextPtr ctx_;
    std::vector<Rat> c_;
};

namespace detail {

// Dense polynomials over Q, lowest degree first; used only for inversion.
using QPoly = std::vector<Rat>;

inline void qp_trim(QPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline QPoly qp_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly out(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    qp_trim(out);
    return out;
}

inline QPoly qp_sub(QPoly a, const QPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rat(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    qp_trim(a);
    return a;
}

// Division with remainder: a = q*b + r.
inline std::pair<QPoly, QPoly> qp_divmod(QPoly a, const QPoly& b) {
    if (b.empty()) throw Error("polynomial division by zero");
    QPoly q;
    qp_trim(a);
    while (a.size() >= b.size()) {
        Rat coef = a.back() / b.back();
        size_t shift = a.size() - b.size();
        if (q.size() < shift + 1) q.resize(shift + 1, Rat(0));
        q[shift] += coef;
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= coef * b[i];
        qp_trim(a);
    }
    return {q, a};
}

}  // namespace detail

inline ValElement ValElement::inverse() const {
    if (is_zero()) throw Error("inverse of zero");
    const int e = ctx_->e;
    if (e == 1) {
        ValElement out(ctx_);
        const_cast<std::vector<Rat>&>(out.coords());  // no-op; silence unused warnings
        std::vector<Rat> v{Rat(1) / c_[0]};
        return ValElement(ctx_, v);
    }
    using detail::QPoly;
    QPoly modulus(e + 1, Rat(0));
    modulus[0] = -Rat(ctx_->p);
    modulus[e] = 1;
    QPoly a(c_.begin(), c_.end());
    detail::qp_trim(a);
    // Extended Euclid: maintain s.t. s*a = r (mod modulus).
    QPoly r0 = modulus, r1 = a;
    QPoly s0 = {}, s1 = {Rat(1)};
    while (!r1.empty() && r1.size() > 1) {
        auto [q, r2] = detail::qp_divmod(r0, r1);
        QPoly s2 = detail::qp_sub(s0, detail::qp_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r1.empty()) throw Error("inverse: element not invertible (unexpected)");
    // r1 is a nonzero constant: s1 * a == r1 (mod modulus).
    Rat scale = Rat(1) / r1[0];
    std::vector<Rat> out(e, Rat(0));
    for (size_t i = 0; i < s1.size(); ++i) out[i] = s1[i] * scale;
    return ValElement(ctx_, out);
}

inline ValElement operator/(const ValElement& a, const ValElement& b) { return a * b.inverse(); }

// ---------------------------------------------------------------------------
// Valuation-facing operations.
// ---------------------------------------------------------------------------

inline OrdVal ord(const ValElement& x) { return x.ord(); }

// Reduction of an integral element to F_p.  Elements of positive valuation
// reduce to 0; negative valuation is an error.
inline ResidueElement reduce_residue(const ValElement& x) {
    const auto& ctx = *x.context();
    OrdVal v = x.ord();
    if (!v.is_infinite() && v.value() < 0)
        throw NegativeValuation("cannot reduce an element of negative valuation");
    if (v.is_infinite() || v.value() > 0) return {ctx.p, Int(0)};
    // ord 0: the minimum is attained at i = 0 (only i = 0 has integral ord).
    const Rat& c0 = x.coords()[0];
    Int num = numerator(c0) % ctx.p;
    Int den = denominator(c0) % ctx.p;
    if (num < 0) num += ctx.p;
    // den is prime to p; invert mod p.
    Int inv = 1, base = den % ctx.p, exp = ctx.p - 2, mod = ctx.p;
    while (exp > 0) {
        if (exp % 2 == 1) inv = inv * base % mod;
        base = base * base % mod;
        exp /= 2;
    }
    return {ctx.p, num * inv % mod};
}

inline ValElement lift_residue(const ContextPtr& ctx, const Int& r) {
    Int rr = r % ctx->p;
    if (rr < 0) rr += ctx->p;
    return ValElement(ctx, Rat(rr));
}

// pi^k (k may be negative; pi^{-1} = pi^{e-1}/p).
inline ValElement pi_power(const ContextPtr& ctx, long k) {
    const int e = ctx->e;
    long q = k >= 0 ? k / e : -((-k + e - 1) / e);
    long rem = k - q * e;  // in [0, e)
    std::vector<Rat> c(e, Rat(0));
    Rat scale = 1;
    if (q >= 0)
        for (long i = 0; i < q; ++i) scale *= Rat(ctx->p);
    else
        for (long i = 0; i < -q; ++i) scale /= Rat(ctx->p);
    c[rem] = scale;
    return ValElement(ctx, c);
}

// Embeds x into a context with a larger (multiple) ramification index.
inline ValElement embed(const ValElement& x, const ContextPtr& target) {
    const auto& src = *x.context();
    if (src.p != target->p) throw IncompatibleRamification("different residue characteristics");
    if (target->e % src.e != 0)
        throw IncompatibleRamification("target ramification index is not a multiple");
    const int k = target->e / src.e;
    std::vector<Rat> c(target->e, Rat(0));
    for (int i = 0; i < src.e; ++i) c[i * k] = x.coords()[i];
    return ValElement(target, c);
}

// ---------------------------------------------------------------------------
// Parsing and formatting: "c0 + c1*pi + c2*pi^2 + ...", rationals as num/den.
// ---------------------------------------------------------------------------

inline std::string format_val(const ValElement& x) {
    const int e = x.context()->e;
    std::ostringstream out;
    bool first = true;
    for (int i = 0; i < e; ++i) {
        const Rat& c = x.coords()[i];
        if (c == 0) continue;
        if (!first) out << " + ";
        out << format_rational(c);
        if (i == 1) out << "*pi";
        if (i > 1) out << "*pi^" << i;
        first = false;
    }
    if (first) out << "0";
    return out.str();
}

inline ValElement parse_val(const ContextPtr& ctx, const std::string& text) {
    std::vector<Rat> c(ctx->e, Rat(0));
    std::string s;
    for (char ch : text)
        if (!isspace((unsigned char)ch)) s += ch;
    if (s.empty()) throw ConfigInvalid("empty field element literal");
    // Split into signed terms.
    size_t pos = 0;
    while (pos < s.size()) {
        size_t start = pos;
        if (s[pos] == '+' || s[pos] == '-') ++pos;
        while (pos < s.size() && s[pos] != '+' && s[pos] != '-') ++pos;
        std::string term = s.substr(start, pos - start);
        if (term == "+" || term == "-" || term.empty())
            throw ConfigInvalid("bad field element literal '" + text + "'");
        bool neg = term[0] == '-';
        if (term[0] == '+' || term[0] == '-') term = term.substr(1);
        // term is  rat | rat*pi | rat*pi^k | pi | pi^k
        Rat coef = 1;
        int power = 0;
        auto star = term.find("*pi");
        if (term.rfind("pi", 0) == 0) {
            power = 1;
            if (term.size() > 2) {
                if (term[2] != '^') throw ConfigInvalid("bad pi power in '" + text + "'");
                power = std::stoi(term.substr(3));
            }
        } else if (star != std::string::npos) {
            coef = parse_rational(term.substr(0, star));
            power = 1;
            std::string rest = term.substr(star + 3);
            if (!rest.empty()) {
                if (rest[0] != '^') throw ConfigInvalid("bad pi power in '" + text + "'");
                power = std::stoi(rest.substr(1));
            }
        } else {
            coef = parse_rational(term);
        }
        if (power < 0 || power >= ctx->e)
            throw IncompatibleRamification("pi power " + std::to_string(power) +
                                           " outside [0, e) for e=" + std::to_string(ctx->e));
        c[power] += neg ? -coef : coef;
    }
    return ValElement(ctx, c);
}

}  // namespace berk
