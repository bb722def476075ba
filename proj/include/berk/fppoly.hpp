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

#include <algorithm>
#include <vector>

namespace berk {

// Polynomials over F_p, coefficients in [0, p), lowest degree first.
// Used for residue-level work: reduced maps, fixed directions, root counts.
class FpPoly {
public:
    FpPoly() = default;
    FpPoly(Int p, std::vector<Int> coeffs) : p_(std::move(p)), c_(std::move(coeffs)) {
        normalize();
    }

    static FpPoly zero(Int p) { return FpPoly(std::move(p), {}); }
    static FpPoly constant(Int p, Int v) { return FpPoly(std::move(p), {std::move(v)}); }

    const Int& p() const { return p_; }
    const std::vector<Int>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return (int)c_.size() - 1; }  // -1 for zero

    Int coeff(int i) const {
        if (i < 0 || i >= (int)c_.size()) return 0;
        return c_[i];
    }

    Int eval(const Int& x) const {
        Int acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = (acc * x + *it) % p_;
        if (acc < 0) acc += p_;
        return acc;
    }

    friend FpPoly operator+(const FpPoly& a, const FpPoly& b) {
        std::vector<Int> out(std::max(a.c_.size(), b.c_.size()), Int(0));
        for (size_t i = 0; i < out.size(); ++i) out[i] = (a.coeff((int)i) + b.coeff((int)i)) % a.p_;
        return FpPoly(a.p_, out);
    }

    friend FpPoly operator-(const FpPoly& a, const FpPoly& b) {
        std::vector<Int> out(std::max(a.c_.size(), b.c_.size()), Int(0));
        for (size_t i = 0; i < out.size(); ++i)
            out[i] = ((a.coeff((int)i) - b.coeff((int)i)) % a.p_ + a.p_) % a.p_;
        return FpPoly(a.p_, out);
    }

    friend FpPoly operator*(const FpPoly& a, const FpPoly& b) {
        if (a.is_zero() || b.is_zero()) return zero(a.p_);
        std::vector<Int> out(a.c_.size() + b.c_.size() - 1, Int(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) out[i + j] = (out[i + j] + a.c_[i] * b.c_[j]) % a.p_;
        return FpPoly(a.p_, out);
    }

    FpPoly derivative() const {
        if (c_.size() <= 1) return zero(p_);
        std::vector<Int> out(c_.size() - 1, Int(0));
        for (size_t i = 1; i < c_.size(); ++i) out[i - 1] = (Int(i) % p_) * c_[i] % p_;
        return FpPoly(p_, out);
    }

    FpPoly monic() const {
        if (is_zero()) return *this;
        Int inv = inv_mod(c_.back(), p_);
        std::vector<Int> out(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) out[i] = c_[i] * inv % p_;
        return FpPoly(p_, out);
    }

    // Long division: returns {quotient, remainder}.
    std::pair<FpPoly, FpPoly> divmod(const FpPoly& b) const {
        if (b.is_zero()) throw ZeroPolynomial("division by the zero polynomial");
        std::vector<Int> rem = c_;
        std::vector<Int> quot;
        Int lead_inv = inv_mod(b.c_.back(), p_);
        while ((int)rem.size() >= (int)b.c_.size() && !rem.empty()) {
            Int coef = rem.back() * lead_inv % p_;
            size_t shift = rem.size() - b.c_.size();
            if (quot.size() < shift + 1) quot.resize(shift + 1, Int(0));
            quot[shift] = coef;
            for (size_t i = 0; i < b.c_.size(); ++i) {
                rem[shift + i] = ((rem[shift + i] - coef * b.c_[i]) % p_ + p_) % p_;
            }
            while (!rem.empty() && rem.back() == 0) rem.pop_back();
        }
        return {FpPoly(p_, quot), FpPoly(p_, rem)};
    }

    static Int inv_mod(Int a, const Int& p) {
        a %= p;
        if (a < 0) a += p;
        if (a == 0) throw Error("inverse of 0 mod p");
        Int inv = 1, base = a, exp = p - 2;
        while (exp > 0) {
            if (exp % 2 == 1) inv = inv * base % p;
            base = base * base % p;
            exp /= 2;
        }
        return inv;
    }

private:
    void normalize() {
        for (auto& x : c_) {
            x %= p_;
            if (x < 0) x += p_;
        }
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    Int p_{2};
    std::vector<Int> c_;
};

inline FpPoly fp_gcd(FpPoly a, FpPoly b) {
    while (!b.is_zero()) {
        FpPoly r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
}

// Roots in F_p with multiplicities, by direct enumeration of residues.
inline std::vector<std::pair<Int, int>> fp_roots(const FpPoly& f) {
    if (f.is_zero()) throw ZeroPolynomial("every residue is a root of the zero polynomial");
    if (f.p() > 1000000) throw IterationBudgetExceeded("residue enumeration for large p");
    std::vector<std::pair<Int, int>> out;
    FpPoly cur = f;
    for (Int r = 0; r < f.p(); ++r) {
        if (cur.is_zero() || cur.degree() == 0) break;
        if (cur.eval(r) != 0) continue;
        int mult = 0;
        FpPoly lin(f.p(), {(f.p() - r) % f.p(), Int(1)});
        while (true) {
            auto [q, rem] = cur.divmod(lin);
            if (!rem.is_zero()) break;
            cur = q;
            ++mult;
        }
        if (mult > 0) out.push_back({r, mult});
    }
    return out;
}

namespace detail {

// When f' = 0 in characteristic p, f(u) = g(u^p); u -> u^p is a bijection
// on the algebraic closure, so f and g have the same distinct-root count.
inline FpPoly fp_contract(const FpPoly& f) {
    for (int i = 0; i <= f.degree(); ++i) {
        if (f.coeff(i) == 0) continue;
        if (Int(i) % f.p() != 0) throw Error("inconsistent zero derivative");
    }
    long pl = (long)f.p().convert_to<long long>();
    std::vector<Int> gc;
    for (int i = 0; i <= f.degree(); i += (int)pl) gc.push_back(f.coeff(i));
    return FpPoly(f.p(), gc);
}

}  // namespace detail

// Number of distinct roots in an algebraic closure of F_p.  The quotient
// f / gcd(f, f') collects one copy of each factor whose multiplicity is not
// divisible by p; factors with multiplicity divisible by p sit entirely
// inside gcd(f, f') and are handled by stripping and exponent contraction.
inline int fp_distinct_root_count(FpPoly f) {
    if (f.is_zero()) throw ZeroPolynomial("distinct roots of the zero polynomial");
    int count = 0;
    long iters = 0;
    while (f.degree() > 0) {
        if (++iters > 256) throw IterationBudgetExceeded("squarefree decomposition loop");
        FpPoly d = f.derivative();
        if (d.is_zero()) {
            f = detail::fp_contract(f);
            continue;
        }
        FpPoly g = fp_gcd(f, d);
        FpPoly s = f.divmod(g).first;
        count += s.degree();
        // Remove the counted factors from g; what is left has every
        // multiplicity divisible by p, so its derivative vanishes.
        while (true) {
            FpPoly h = fp_gcd(g, s);
            if (h.degree() <= 0) break;
            g = g.divmod(h).first;
        }
        f = std::move(g);
    }
    return count;
}

}  // namespace berk
