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

#include <random>

#include "berk/newton.hpp"

using namespace berk;

namespace {

ValElement q(const ContextPtr& ctx, Rat r) { return ValElement(ctx, std::move(r)); }

VPoly poly(const ContextPtr& ctx, std::vector<Rat> cs) {
    VPoly f;
    for (auto& c : cs) f.push_back(q(ctx, std::move(c)));
    return f;
}

}  // namespace

TEST_CASE("taylor shift", "[newton]") {
    auto ctx = make_context(Int(5));
    // (z - 1)(z - 2) = z^2 - 3z + 2; shifted by 1: z(z - 1) = z^2 - z.
    VPoly f = poly(ctx, {2, -3, 1});
    VPoly g = taylor_shift(f, q(ctx, 1));
    CHECK(g[0] == q(ctx, 0));
    CHECK(g[1] == q(ctx, -1));
    CHECK(g[2] == q(ctx, 1));
    CHECK(vpoly_eval(f, q(ctx, 7)) == vpoly_eval(g, q(ctx, 6)));
}

TEST_CASE("root valuations from the polygon", "[newton]") {
    auto ctx = make_context(Int(3));
    // z^2 (z - 3)(z - 1/3): roots at 0 (twice), ord 1, ord -1.
    VPoly f = poly(ctx, {0, 0, 1, Rat(-10, 3), 1});
    auto prof = root_ord_profile(f);
    CHECK(prof.zero_mult == 2);
    REQUIRE(prof.slopes.size() == 2);
    CHECK(prof.slopes[0].root_ord == 1);
    CHECK(prof.slopes[0].count == 1);
    CHECK(prof.slopes[1].root_ord == -1);
    CHECK(prof.slopes[1].count == 1);
}

TEST_CASE("polygon groups roots of equal valuation", "[newton]") {
    auto ctx = make_context(Int(3));
    // (z - 3)(z - 6)(z - 1) = z^3 - 10z^2 + 27z - 18: two roots of ord 1,
    // one of ord 0.
    VPoly f = poly(ctx, {-18, 27, -10, 1});
    auto prof = root_ord_profile(f);
    CHECK(prof.zero_mult == 0);
    REQUIRE(prof.slopes.size() == 2);
    CHECK(prof.slopes[0].root_ord == 1);
    CHECK(prof.slopes[0].count == 2);
    CHECK(prof.slopes[1].root_ord == 0);
    CHECK(prof.slopes[1].count == 1);
}

TEST_CASE("fractional root valuations", "[newton]") {
    auto ctx = make_context(Int(2));
    // z^2 - 2: two roots of ord 1/2.
    VPoly f = poly(ctx, {-2, 0, 1});
    auto prof = root_ord_profile(f);
    REQUIRE(prof.slopes.size() == 1);
    CHECK(prof.slopes[0].root_ord == Rat(1, 2));
    CHECK(prof.slopes[0].count == 2);
    CHECK_THROWS_AS(residual_poly(f, Rat(1, 2)), RamificationNeeded);
    // Over Q(sqrt 2) the digits become visible.
    auto ctx2 = make_context(Int(2), 2);
    VPoly f2 = poly(ctx2, {-2, 0, 1});
    FpPoly res = residual_poly(f2, Rat(1, 2));
    // w^2 - 1 = (w - 1)(w + 1) over F_2: double root at w = 1.
    auto roots = fp_roots(res);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].first == 1);
    CHECK(roots[0].second == 2);
}

TEST_CASE("residual polynomial digits", "[newton]") {
    auto ctx = make_context(Int(3));
    // (z - 3)(z - 6)(z - 1): at level 1 the ord-1 roots 3, 6 have digits 1, 2.
    VPoly f = poly(ctx, {-18, 27, -10, 1});
    FpPoly res = residual_poly(f, Rat(1));
    auto roots = fp_roots(res);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].first == 1);
    CHECK(roots[1].first == 2);
    // At level 0 only the root 1 contributes a nonzero digit.
    FpPoly res0 = residual_poly(f, Rat(0));
    auto roots0 = fp_roots(res0);
    bool saw_one = false;
    for (auto& [r, m] : roots0)
        if (r == 1) saw_one = (m == 1);
    CHECK(saw_one);
}

TEST_CASE("residues in extensions stay irreducible", "[newton]") {
    auto ctx = make_context(Int(3));
    // z^2 + 1 is irreducible over F_3: ord-0 roots with conjugate digits.
    VPoly f = poly(ctx, {1, 0, 1});
    FpPoly res = residual_poly(f, Rat(0));
    CHECK(res.degree() == 2);
    CHECK(fp_roots(res).empty());
    CHECK(fp_distinct_root_count(res) == 2);
}

TEST_CASE("isolated root refinement", "[newton]") {
    auto ctx = make_context(Int(3));
    // f = (z - 2)(z - 11)(z - 29) = z^3 - 42 z^2 + 399 z - 638.
    VPoly f = poly(ctx, {-638, 399, -42, 1});
    // From center 110 the deepest root is 29 (distance ord 4, others at 2, 3).
    // 29 - 110 = -81 has the infinite digit string of -1, so refinement walks
    // one level per step and stops at the requested level.
    RefinedCenter rc = refine_isolated_root(f, q(ctx, 110), Rat(10));
    REQUIRE_FALSE(rc.level.is_infinite());
    CHECK(rc.level.value() == 10);
    CHECK((q(ctx, 29) - rc.center).ord().value() == 10);
    // A center already within the requested level returns unchanged.
    RefinedCenter rc2 = refine_isolated_root(f, q(ctx, 92), Rat(3));
    CHECK(rc2.level.value() == 4);
    CHECK(rc2.center == q(ctx, 92));
    // Hitting a root exactly reports infinite level.
    RefinedCenter rc3 = refine_isolated_root(f, q(ctx, 29), Rat(5));
    CHECK(rc3.level.is_infinite());
    CHECK(rc3.center == q(ctx, 29));
}

TEST_CASE("refinement requires a singleton cluster", "[newton]") {
    auto ctx = make_context(Int(3));
    // z^2 + 1: conjugate roots at equal depth from any rational center.
    VPoly f = poly(ctx, {1, 0, 1});
    CHECK_THROWS_AS(refine_isolated_root(f, q(ctx, 0), Rat(4)), UnlocatableFixedPoints);
}

TEST_CASE("polynomial division, gcd and radical", "[newton]") {
    auto ctx = make_context(Int(3));
    // f = (z - 1)^2 (z - 1/2) = z^3 - 5/2 z^2 + 2z - 1/2.
    VPoly f = poly(ctx, {Rat(-1, 2), 2, Rat(-5, 2), 1});
    auto [quot, rem] = vpoly_divmod(f, poly(ctx, {-1, 1}));
    CHECK(vpoly_degree(rem) < 0);
    CHECK(quot == poly(ctx, {Rat(1, 2), Rat(-3, 2), 1}));

    VPoly g = vpoly_gcd(f, vpoly_derivative(f));
    REQUIRE(vpoly_degree(g) == 1);  // z - 1, monic
    CHECK(g[1] == q(ctx, 1));
    CHECK(g[0] == q(ctx, -1));

    VPoly rad = vpoly_radical(f);
    REQUIRE(vpoly_degree(rad) == 2);
    CHECK(vpoly_eval(rad, q(ctx, 1)).is_zero());
    CHECK(vpoly_eval(rad, q(ctx, Rat(1, 2))).is_zero());
    // Radical of a squarefree polynomial keeps its degree.
    CHECK(vpoly_degree(vpoly_radical(poly(ctx, {-1, 0, 1}))) == 2);
}

TEST_CASE("newton polygon summaries", "[newton]") {
    auto ctx = make_context(Int(5));
    NewtonPolygon eis = newton_polygon(poly(ctx, {-5, 0, 1}));  // z^2 - p
    REQUIRE(eis.segments.size() == 1);
    CHECK(eis.segments[0].root_ord == Rat(1, 2));
    CHECK(eis.segments[0].count == 2);
    CHECK(eis.zero_root_multiplicity == 0);

    NewtonPolygon unit = newton_polygon(poly(ctx, {-1, -5, 1}));  // z^2 - pz - 1
    REQUIRE(unit.segments.size() == 1);
    CHECK(unit.segments[0].root_ord == 0);
    CHECK(unit.segments[0].count == 2);

    NewtonPolygon mix = newton_polygon(poly(ctx, {0, -5, 1}));  // z^2 - pz
    CHECK(mix.zero_root_multiplicity == 1);
    REQUIRE(mix.segments.size() == 1);
    CHECK(mix.segments[0].root_ord == 1);
    CHECK(mix.segments[0].count == 1);

    // Segment slopes increase and everything sums to the nominal degree.
    NewtonPolygon big = newton_polygon(poly(ctx, {0, Rat(1, 5), 0, 25, 1, 0}));
    int total = big.zero_root_multiplicity + big.leading_drop;
    for (size_t i = 0; i < big.segments.size(); ++i) {
        total += big.segments[i].count;
        if (i) CHECK(big.segments[i - 1].root_ord < big.segments[i].root_ord);
    }
    CHECK(total == big.nominal_degree);
    CHECK(big.leading_drop == 1);
}

TEST_CASE("root counts in balls", "[newton]") {
    auto ctx = make_context(Int(3));
    VPoly sq = poly(ctx, {-1, 0, 1});  // z^2 - 1
    CHECK(count_roots_in_ball(sq, q(ctx, 1), Rat(1), true) == 1);
    CHECK(count_roots_in_ball(sq, q(ctx, 0), Rat(0), false) == 2);
    CHECK(count_roots_in_ball(poly(ctx, {-3, 0, 1}), q(ctx, 0), Rat(1), false) == 0);

    // Against brute force on a polynomial with known rational roots.
    std::vector<Rat> roots = {Rat(0), Rat(3), Rat(6), Rat(1), Rat(1, 3), Rat(10)};
    VPoly f = poly(ctx, {1});
    for (const Rat& r : roots) {
        VPoly next(f.size() + 1, ValElement(ctx));
        for (size_t i = 0; i < f.size(); ++i) {
            next[i + 1] += f[i];
            next[i] -= f[i] * q(ctx, r);
        }
        f = next;
    }
    std::mt19937 rng(1765);
    std::uniform_int_distribution<int> cnum(-9, 9);
    std::uniform_int_distribution<int> tnum(-4, 8);
    for (int trial = 0; trial < 200; ++trial) {
        Rat center(cnum(rng));
        Rat t(tnum(rng), 2);
        bool open = trial % 2;
        int expect = 0;
        for (const Rat& r : roots) {
            OrdVal o = q(ctx, r - center).ord();
            if (o.is_infinite() || o.value() > t || (!open && o.value() == t)) ++expect;
        }
        CHECK(count_roots_in_ball(f, q(ctx, center), t, open) == expect);
    }
}

TEST_CASE("fixed point divisors", "[newton]") {
    auto ctx = make_context(Int(3));
    // z^2: divisor z(z - 1), infinity fixed once.
    Lift sq = make_lift(ctx, {q(ctx, 0), q(ctx, 0), q(ctx, 1)},
                        {q(ctx, 1), q(ctx, 0), q(ctx, 0)}, 2);
    FixedPointDivisor D = fixed_point_divisor(sq);
    CHECK(D.total == 3);
    CHECK(D.inf_mult == 1);
    CHECK(D.finite == poly(ctx, {0, -1, 1}));

    // (z^2 - 1)/3 scaled: finite part z^2 - 3z - 1, infinity fixed.
    Lift ben = make_lift(ctx, {q(ctx, -1), q(ctx, 0), q(ctx, 1)},
                         {q(ctx, 3), q(ctx, 0), q(ctx, 0)}, 2);
    FixedPointDivisor B = fixed_point_divisor(ben);
    CHECK(B.inf_mult == 1);
    CHECK(B.finite == poly(ctx, {-1, -3, 1}));

    // Second iterate: (z^2-3z-1)(z^2+3z+8) = z^4 - 2z^2 - 27z - 8.
    FixedPointDivisor B2 = fixed_point_divisor(iterate_lift(ben, 2));
    CHECK(B2.total == 5);
    CHECK(B2.inf_mult == 1);
    CHECK(B2.finite == poly(ctx, {-8, -27, -2, 0, 1}));

    Lift ident = make_lift(ctx, {q(ctx, 0), q(ctx, 1)}, {q(ctx, 1), q(ctx, 0)}, 1);
    CHECK_THROWS_AS(fixed_point_divisor(ident), IdentityMap);
}

TEST_CASE("fixed points per direction", "[newton]") {
    auto ctx = make_context(Int(3));
    Lift sq = make_lift(ctx, {q(ctx, 0), q(ctx, 0), q(ctx, 1)},
                        {q(ctx, 1), q(ctx, 0), q(ctx, 0)}, 2);
    TreePoint gauss{q(ctx, 0), Rat(0)};
    CHECK(count_fixed_in_direction(sq, 1, gauss, Direction::toward(q(ctx, 0))) == 1);
    CHECK(count_fixed_in_direction(sq, 1, gauss, Direction::toward(q(ctx, 1))) == 1);
    CHECK(count_fixed_in_direction(sq, 1, gauss, Direction::toward(q(ctx, 2))) == 0);
    CHECK(count_fixed_in_direction(sq, 1, gauss, Direction::toward_infinity()) == 1);

    TreePoint deep{q(ctx, 0), Rat(1)};
    CHECK(count_fixed_in_direction(sq, 1, deep, Direction::toward_infinity()) == 2);

    // Sums over a full direction decomposition give d^n + 1.
    Lift ben = make_lift(ctx, {q(ctx, -1), q(ctx, 0), q(ctx, 1)},
                         {q(ctx, 3), q(ctx, 0), q(ctx, 0)}, 2);
    for (int n : {1, 2}) {
        int total = count_fixed_in_direction(ben, n, gauss, Direction::toward_infinity());
        for (long u = 0; u < 3; ++u)
            total += count_fixed_in_direction(ben, n, gauss, Direction::toward(q(ctx, u)));
        CHECK(total == (n == 1 ? 3 : 5));
    }
    // The two finite fixed points of (z^2-1)/3 sit in the residue-1 and
    // residue-2 directions.
    CHECK(count_fixed_in_direction(ben, 1, gauss, Direction::toward(q(ctx, 1))) == 1);
    CHECK(count_fixed_in_direction(ben, 1, gauss, Direction::toward(q(ctx, 2))) == 1);
    CHECK(count_fixed_in_direction(ben, 1, gauss, Direction::toward(q(ctx, 0))) == 0);
}
