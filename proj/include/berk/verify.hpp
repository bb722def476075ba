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

#ifndef BERK_VERIFY_HPP
#define BERK_VERIFY_HPP

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "berk/baryloc.hpp"
#include "berk/io.hpp"
#include "berk/presets.hpp"

namespace berk {

// Randomized invariant suites behind `dynlab verify`.  Exact checks only;
// a failure message pins the offending configuration.

struct SuiteResult {
    std::string name;
    int cases = 0;
    std::vector<std::string> failures;
    bool passed() const { return failures.empty(); }
};

namespace detail {

inline TreePoint random_point(const ContextPtr& ctx, std::mt19937& rng) {
    std::uniform_int_distribution<int> cs(-30, 30), tn(-6, 12);
    return TreePoint{ValElement(ctx, Rat(cs(rng))), Rat(tn(rng), 4)};
}

inline std::vector<TreePoint> random_points(const ContextPtr& ctx, std::mt19937& rng,
                                            int lo, int hi) {
    std::uniform_int_distribution<int> k(lo, hi);
    std::vector<TreePoint> pts;
    int count = k(rng);
    for (int i = 0; i < count; ++i) pts.push_back(random_point(ctx, rng));
    return pts;
}

inline TreeMeasure random_probability(const ContextPtr& ctx, std::mt19937& rng) {
    std::uniform_int_distribution<int> natoms(2, 5), cs(-8, 8), ts(0, 3), ws(1, 6);
    int k = natoms(rng);
    std::vector<int> w(static_cast<size_t>(k));
    int tot = 0;
    for (int& x : w) {
        x = ws(rng);
        tot += x;
    }
    TreeMeasure nu;
    for (int i = 0; i < k; ++i)
        nu.push_back(WeightedPoint{TreePoint{ValElement(ctx, Rat(cs(rng))), Rat(ts(rng))},
                                   Rat(w[static_cast<size_t>(i)], tot)});
    return nu;
}

inline Rat fd_slope(const std::function<Rat(const TreePoint&)>& f, const TreePoint& Q,
                    const Direction& v) {
    Rat f0 = f(Q);
    Rat step(1, 2);
    std::optional<Rat> prev;
    for (int i = 0; i < 40; ++i) {
        Rat quot = (f(point_along(Q, v, step)) - f0) / step;
        if (prev && *prev == quot) return quot;
        prev = quot;
        step /= 2;
    }
    throw NoStabilization("difference quotients did not settle");
}

inline bool same_measure(const TreeMeasure& a, const TreeMeasure& b) {
    auto covered = [](const TreeMeasure& x, const TreeMeasure& y) {
        for (const auto& wp : x) {
            Rat mx(0), my(0);
            for (const auto& o : x)
                if (same_point(o.point, wp.point)) mx += o.mass;
            for (const auto& o : y)
                if (same_point(o.point, wp.point)) my += o.mass;
            if (mx != my) return false;
        }
        return true;
    };
    return covered(a, b) && covered(b, a);
}

}  // namespace detail

// Tree metric and retraction invariants.
inline SuiteResult verify_metric(unsigned seed, int trials) {
    SuiteResult res{"metric"};
    auto ctx = make_context(Int(3), 1);
    std::mt19937 rng(seed);
    for (int i = 0; i < trials; ++i) {
        ++res.cases;
        TreePoint P = detail::random_point(ctx, rng);
        TreePoint Q = detail::random_point(ctx, rng);
        TreePoint R = detail::random_point(ctx, rng);
        if (rho(P, Q) != rho(Q, P) || rho(P, Q) < 0)
            res.failures.push_back("metric symmetry failed at " + point_to_string(P));
        if ((rho(P, Q) == 0) != same_point(P, Q))
            res.failures.push_back("zero distance vs identity failed at " +
                                   point_to_string(P));
        if (rho(P, R) > rho(P, Q) + rho(Q, R))
            res.failures.push_back("triangle inequality failed at " + point_to_string(P));
        TreePoint m = median(P, Q, R);
        if (rho(P, Q) != rho(P, m) + rho(m, Q) || rho(P, R) != rho(P, m) + rho(m, R) ||
            rho(Q, R) != rho(Q, m) + rho(m, R))
            res.failures.push_back("median not on all three paths at " +
                                   point_to_string(P));
        auto pts = detail::random_points(ctx, rng, 2, 6);
        if (pts.empty()) continue;
        SpanTree T = SpanTree::span(pts);
        TreePoint x = detail::random_point(ctx, rng);
        TreePoint r = T.retract(x);
        if (!same_point(T.retract(r), r))
            res.failures.push_back("retraction is not idempotent");
        for (int v = 0; v < T.size(); ++v)
            if (rho(x, r) > rho(x, T.point(v)))
                res.failures.push_back("retraction is not the nearest tree point");
    }
    return res;
}

// CPA Laplacian calculus: zero total mass, the branching identity, and
// retraction compatibility on nested graphs.
inline SuiteResult verify_laplacian(unsigned seed, int trials) {
    SuiteResult res{"laplacian"};
    auto ctx = make_context(Int(3), 1);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> fv(-12, 12);
    for (int i = 0; i < trials; ++i) {
        ++res.cases;
        auto pts = detail::random_points(ctx, rng, 3, 7);
        pts.push_back(TreePoint{ValElement(ctx, Rat(0)), Rat(0)});
        SpanTree T = SpanTree::span(pts);

        std::vector<Rat> f(static_cast<size_t>(T.size()));
        for (auto& x : f) x = Rat(fv(rng), 4);
        if (total_mass(graph_laplacian(T, f)) != 0)
            res.failures.push_back("laplacian total mass is nonzero");

        std::vector<Rat> depth(static_cast<size_t>(T.size()));
        for (int v = 0; v < T.size(); ++v)
            depth[static_cast<size_t>(v)] = -T.point(v).t;
        TreeMeasure lhs = graph_laplacian(T, depth);
        TreeMeasure rhs = branching_measure(T);
        for (auto& wp : rhs) wp.mass *= Rat(-2);
        add_atom(rhs, T.point(T.root()), Rat(2));
        drop_zero_atoms(rhs);
        if (!detail::same_measure(lhs, rhs))
            res.failures.push_back("branching identity failed on a random tree");

        // Retraction compatibility: retracting a measure onto a subtree of
        // the seeds matches retracting pointwise.
        auto sub = std::vector<TreePoint>(pts.begin(), pts.begin() + 2);
        SpanTree S = SpanTree::span(sub);
        TreeMeasure mu = detail::random_probability(ctx, rng);
        TreeMeasure direct = retract_measure(S, mu);
        TreeMeasure staged = retract_measure(S, retract_measure(T, mu));
        if (!detail::same_measure(direct, staged))
            res.failures.push_back("retraction onto nested graphs is inconsistent");
    }
    return res;
}

// Resultant evaluation routes agree wherever both apply, and the closed-form
// value of the composite matches a literal Sylvester valuation.
inline SuiteResult verify_routes(unsigned seed, int trials) {
    SuiteResult res{"routes"};
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> num(-40, 40), tn(-2, 4);
    const long primes[] = {2, 3, 5};
    for (int attempt = 0; attempt < 20 * trials && res.cases < trials; ++attempt) {
        auto ctx = make_context(primes[attempt % 3], 1);
        auto sc = [&](int v) { return ValElement(ctx, Rat(v)); };
        try {
            Dynamics dyn(make_lift(ctx, {sc(num(rng)), sc(num(rng)), sc(num(rng))},
                                   {sc(num(rng)), sc(num(rng)), sc(num(rng))}, 2));
            int n = 1 + attempt % 2;
            TreePoint P{sc(num(rng)), Rat(tn(rng))};
            ++res.cases;
            if (dyn.ord_res_at(P, n) != dyn.ord_res_at_route_b(P, n))
                res.failures.push_back("resultant routes disagree at " +
                                       point_to_string(P));
            Lift N = iterate_lift(dyn.base(), n);
            if (dyn.iterate_ord_res(n) != sylvester_ord(N))
                res.failures.push_back("composite resultant mismatch at iterate " +
                                       std::to_string(n));
        } catch (const DegenerateMap&) {
        } catch (const ZeroPolynomial&) {
        } catch (const ConfigInvalid&) {
        }
    }
    if (res.cases < trials)
        res.failures.push_back("too few nondegenerate samples were drawn");
    return res;
}

// Local star slopes of f_n match the tangent-classification prediction.
inline SuiteResult verify_slopes(unsigned seed, int trials) {
    SuiteResult res{"slopes"};
    auto ctx = make_context(Int(3), 1);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> cs(-40, 40), tn(1, 4), which(0, 1);
    Dynamics haar(preset_lift("haar", ctx));
    Dynamics ben(preset_lift("benedetto", ctx));
    const Rat delta(1, 97);
    for (int i = 0; i < trials; ++i) {
        ++res.cases;
        Dynamics& dyn = which(rng) ? haar : ben;
        int n = 1 + i % 2;
        ValElement a(ctx, Rat(cs(rng)));
        Rat t(tn(rng));
        LocalStatus st = classify_point(dyn, n, TreePoint{a, t});
        if (st != LocalStatus::NonFixed) continue;  // random probes are generic
        Rat f0 = dyn.eval_fn(TreePoint{a, t}, n);
        Rat sum = (dyn.eval_fn(TreePoint{a, t - delta}, n) - f0) / delta;
        for (long b = 0; b < 3; ++b) {
            ValElement c = a + lift_residue(ctx, Int(b)) *
                                   pi_power(ctx, t.convert_to<long long>());
            sum += (dyn.eval_fn(TreePoint{c, t + delta}, n) - f0) / delta;
        }
        if (sum != predicted_offtree_slope(st, 4, dyn.degree(), n))
            res.failures.push_back("star slope mismatch at " +
                                   point_to_string(TreePoint{a, t}));
    }
    return res;
}

// Barycenter boundary and Green's-function slope formula.
inline SuiteResult verify_barycenter(unsigned seed, int trials) {
    SuiteResult res{"barycenter"};
    auto ctx = make_context(Int(3), 1);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> cs(-8, 8), tn(0, 8), coin(0, 1), digit(0, 2);
    for (int i = 0; i < trials; ++i) {
        ++res.cases;
        TreeMeasure nu = detail::random_probability(ctx, rng);
        DiscreteGreen G = make_discrete_green(nu);
        SegmentLocus L = barycenter(nu);

        std::vector<TreePoint> support;
        for (const auto& wp : nu) support.push_back(wp.point);
        SpanTree T = SpanTree::span(support);
        Rat best = green_discrete(G, T.point(0));
        for (int v = 1; v < T.size(); ++v)
            best = std::min(best, green_discrete(G, T.point(v)));
        for (int v = 0; v < T.size(); ++v)
            if ((green_discrete(G, T.point(v)) == best) != locus_contains(L, T.point(v)))
                res.failures.push_back("green minimum does not match the barycenter");

        TreePoint Q{ValElement(ctx, Rat(cs(rng))), Rat(tn(rng), 2)};
        Direction v = Direction::toward_infinity();
        if (coin(rng))
            v = Direction::toward(Q.center + ValElement(ctx, Rat(digit(rng))) *
                                                 pi_power(ctx, 6));
        Rat fd = detail::fd_slope(
            [&](const TreePoint& x) { return green_discrete(G, x); }, Q, v);
        if (fd != green_slope(G, Q, v))
            res.failures.push_back("green slope formula mismatch at " +
                                   point_to_string(Q));
    }
    return res;
}

inline std::vector<std::string> verify_suite_names() {
    return {"metric", "laplacian", "routes", "slopes", "barycenter"};
}

inline SuiteResult run_verify_suite(const std::string& name, unsigned seed, int trials) {
    if (name == "metric") return verify_metric(seed, trials);
    if (name == "laplacian") return verify_laplacian(seed, trials);
    if (name == "routes") return verify_routes(seed, trials);
    if (name == "slopes") return verify_slopes(seed, trials);
    if (name == "barycenter") return verify_barycenter(seed, trials);
    throw ConfigInvalid("unknown verify suite '" + name + "'");
}

}  // namespace berk

#endif  // BERK_VERIFY_HPP
