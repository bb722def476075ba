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

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace berk {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Errors. Names mirror the error conditions of the public operations.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define BERK_ERROR(Name)                                              \
    struct Name : Error {                                             \
        explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
    }

BERK_ERROR(NegativeValuation);
BERK_ERROR(IncompatibleRamification);
BERK_ERROR(DegenerateMap);
BERK_ERROR(IterationBudgetExceeded);
BERK_ERROR(SingularMatrix);
BERK_ERROR(ZeroPolynomial);
BERK_ERROR(IdentityMap);
BERK_ERROR(RamificationNeeded);
BERK_ERROR(SupportOffGraph);
BERK_ERROR(NotProbability);
BERK_ERROR(TypeISupport);
BERK_ERROR(RouteMismatch);
BERK_ERROR(PartialCoverage);
BERK_ERROR(UnlocatableFixedPoints);
BERK_ERROR(UnresolvableBreakpoint);
BERK_ERROR(NoStabilization);
BERK_ERROR(ConfigInvalid);
BERK_ERROR(IOError);

#undef BERK_ERROR

// ---------------------------------------------------------------------------
// Rational helpers.
// ---------------------------------------------------------------------------

// p-adic valuation of a nonzero integer.
inline Int int_ord_p(Int n, const Int& p) {
    if (n == 0) throw Error("int_ord_p of zero");
    Int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// p-adic valuation of a nonzero rational.
inline Int rat_ord_p(const Rat& x, const Int& p) {
    if (x == 0) throw Error("rat_ord_p of zero");
    return int_ord_p(numerator(x), p) - int_ord_p(denominator(x), p);
}

// Valuation value extended with +infinity (the valuation of zero).
class OrdVal {
public:
    OrdVal() : inf_(true) {}  // +infinity
    OrdVal(const Rat& v) : inf_(false), v_(v) {}
    OrdVal(long v) : inf_(false), v_(v) {}

    static OrdVal infinity() { return OrdVal(); }

    bool is_infinite() const { return inf_; }
    const Rat& value() const {
        if (inf_) throw Error("OrdVal: +infinity has no finite value");
        return v_;
    }

    friend bool operator==(const OrdVal& a, const OrdVal& b) {
        if (a.inf_ || b.inf_) return a.inf_ && b.inf_;
        return a.v_ == b.v_;
    }
    friend bool operator!=(const OrdVal& a, const OrdVal& b) { return !(a == b); }
    friend bool operator<(const OrdVal& a, const OrdVal& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.v_ < b.v_;
    }
    friend bool operator<=(const OrdVal& a, const OrdVal& b) { return a < b || a == b; }
    friend bool operator>(const OrdVal& a, const OrdVal& b) { return b < a; }
    friend bool operator>=(const OrdVal& a, const OrdVal& b) { return b <= a; }

    friend OrdVal operator+(const OrdVal& a, const OrdVal& b) {
        if (a.inf_ || b.inf_) return infinity();
        return OrdVal(a.v_ + b.v_);
    }

    friend OrdVal min(const OrdVal& a, const OrdVal& b) { return a < b ? a : b; }

private:
    bool inf_;
    Rat v_ = 0;
};

// Parses "num/den" or "num" (decimal integers, optional sign).
inline Rat parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw Error("zero denominator");
        return Rat(num, den);
    } catch (const std::exception& e) {
        throw ConfigInvalid("bad rational literal '" + s + "': " + e.what());
    }
}

inline std::string format_rational(const Rat& x) {
    std::string s = numerator(x).str();
    if (denominator(x) != 1) s += "/" + denominator(x).str();
    return s;
}

// Display-only decimal rendering; exact strings remain authoritative.
inline std::string decimal_string(const Rat& x, unsigned digits = 12) {
    Int num = numerator(x), den = denominator(x);
    const bool neg = num < 0;
    if (neg) num = -num;
    Int ip = num / den, rem = num % den;
    std::string out = (neg && (ip != 0 || rem != 0) ? "-" : "") + ip.str();
    if (digits == 0) return out;
    out += '.';
    for (unsigned i = 0; i < digits; ++i) {
        rem *= 10;
        out += char('0' + int(rem / den));
        rem %= den;
    }
    return out;
}

}  // namespace berk
