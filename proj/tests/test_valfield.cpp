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

#include <catch2/catch_amalgamated.hpp>

#include "berk/valfield.hpp"

#include <random>

using namespace berk;

TEST_CASE("ord on rationals", "[valfield]") {
    auto ctx = make_context(Int(3));
    CHECK(ValElement(ctx, Rat(9, 2)).ord().value() == 2);
    CHECK(ValElement(ctx, Rat(2, 27)).ord().value() == -3);
    CHECK(ValElement(ctx, Rat(5)).ord().value() == 0);
    CHECK(ValElement(ctx).ord().is_infinite());
}

TEST_CASE("ord with ramification", "[valfield]") {
    auto ctx = make_context(Int(2), 3);  // pi^3 = 2
    // 4 + pi: ord = min(2, 1/3) = 1/3
    ValElement x = parse_val(ctx, "4 + pi");
    CHECK(x.ord().value() == Rat(1, 3));
    // pi^2/2 has ord 2/3 - 1 = -1/3
    ValElement y = parse_val(ctx, "1/2*pi^2");
    CHECK(y.ord().value() == Rat(-1, 3));
    // The candidate list ord_p(c_i) + i/e has pairwise distinct entries mod 1,
    // so no cancellation can hide the minimum: (4 + pi) - 4 = pi.
    ValElement four(ctx, Rat(4));
    CHECK((x - four).ord().value() == Rat(1, 3));
}

TEST_CASE("ultrametric inequality holds on random pairs", "[valfield]") {
    auto ctx = make_context(Int(5), 2);
    std::mt19937 rng(20260394);
    std::uniform_int_distribution<int> num(-40, 40), den(1, 24);
    auto rand_elt = [&] {
        std::vector<Rat> c(2);
        for (auto& q : c) q = Rat(num(rng), den(rng));
        return ValElement(ctx, c);
    };
    for (int i = 0; i < 1000; ++i) {
        ValElement a = rand_elt(), b = rand_elt();
        OrdVal lhs = (a + b).ord();
        OrdVal rhs = min(a.ord(), b.ord());
        CHECK(rhs <= lhs);
        // Multiplicativity: ord(ab) = ord(a) + ord(b).
        CHECK((a * b).ord() == a.ord() + b.ord());
    }
}

TEST_CASE("field inversion", "[valfield]") {
    auto ctx = make_context(Int(3), 4);
    ValElement one(ctx, Rat(1));
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> num(-20, 20), den(1, 12);
    int tried = 0;
    while (tried < 200) {
        std::vector<Rat> c(4);
        for (auto& q : c) q = Rat(num(rng), den(rng));
        ValElement a(ctx, c);
        if (a.is_zero()) continue;
        ++tried;
        ValElement b = a.inverse();
        CHECK(a * b == one);
        CHECK(b.ord().value() == -a.ord().value());
    }
    CHECK_THROWS(ValElement(ctx).inverse());
}

TEST_CASE("residue reduction and lifting", "[valfield]") {
    auto ctx = make_context(Int(7), 2);
    CHECK(reduce_residue(ValElement(ctx, Rat(10))).r == 3);
    CHECK(reduce_residue(ValElement(ctx, Rat(3, 5))).r == 2);  // 3 * 5^{-1} = 3*3 = 2 mod 7
    CHECK(reduce_residue(parse_val(ctx, "3 + pi")).r == 3);    // pi has positive ord
    CHECK(reduce_residue(ValElement(ctx, Rat(14))).r == 0);
    CHECK(reduce_residue(ValElement(ctx)).r == 0);
    CHECK_THROWS_AS(reduce_residue(ValElement(ctx, Rat(1, 7))), NegativeValuation);
    ValElement lifted = lift_residue(ctx, Int(5));
    CHECK(reduce_residue(lifted).r == 5);
}

TEST_CASE("pi powers", "[valfield]") {
    auto ctx = make_context(Int(3), 2);
    CHECK(pi_power(ctx, 2) == ValElement(ctx, Rat(3)));
    CHECK(pi_power(ctx, 5) == parse_val(ctx, "9*pi"));
    CHECK(pi_power(ctx, -1) == parse_val(ctx, "1/3*pi"));
    CHECK(pi_power(ctx, -4) == ValElement(ctx, Rat(1, 9)));
    for (long k = -7; k <= 7; ++k) CHECK(pi_power(ctx, k).ord().value() == Rat(k, 2));
}

TEST_CASE("embedding into larger ramification", "[valfield]") {
    auto c2 = make_context(Int(5), 2);
    auto c6 = make_context(Int(5), 6);
    ValElement x = parse_val(c2, "2 + 1/5*pi");
    ValElement y = embed(x, c6);
    CHECK(y.ord() == x.ord());
    CHECK(y == parse_val(c6, "2 + 1/5*pi^3"));
    CHECK_THROWS_AS(embed(x, make_context(Int(5), 3)), IncompatibleRamification);
    CHECK_THROWS_AS(embed(x, make_context(Int(7), 4)), IncompatibleRamification);
}

TEST_CASE("parse and format round trip", "[valfield]") {
    auto ctx = make_context(Int(3), 3);
    for (const char* s : {"0", "1", "-4/3", "2 + pi", "1/2 + 2*pi + 1/9*pi^2", "-pi^2"}) {
        ValElement x = parse_val(ctx, s);
        CHECK(parse_val(ctx, format_val(x)) == x);
    }
    CHECK_THROWS_AS(parse_val(ctx, "pi^5"), IncompatibleRamification);
    CHECK_THROWS_AS(parse_val(ctx, "what"), ConfigInvalid);
    CHECK_THROWS_AS(parse_rational("1/0"), ConfigInvalid);
}
