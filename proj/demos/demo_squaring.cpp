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

// The squaring map z^2 has good reduction at the Gauss point, so every
// resultant-based quantity collapses: the crucial measures are Dirac, the
// minimal values vanish, and the Green's function is the plain tree metric.

#include <cstdio>

#include "berk/runner.hpp"

using namespace berk;

int main() {
    auto ctx = make_context(3, 1);
    Dynamics dyn(preset_lift("squaring", ctx));

    std::printf("phi = z^2 over Q_3, ordRes(phi) = %s (good reduction)\n\n",
                format_rational(dyn.base_ord_res()).c_str());

    for (int n = 1; n <= 4; ++n) {
        TreeMeasure nu = crucial_measure_laplacian(dyn, n);
        MinResResult res = minresloc(dyn, n);
        std::printf("n=%d: crucial measure is %zu atom at %s, minimal value %s\n", n,
                    nu.size(), point_to_string(nu.front().point).c_str(),
                    format_rational(res.min_value).c_str());
    }

    // At zeta_{0,1} the normalized resultants and the metric term cancel to
    // the same constant at every step: the ladder has already converged.
    TreePoint probe{ValElement(ctx, Rat(0)), Rat(1)};
    std::printf("\ngreen ladder at %s:\n", point_to_string(probe).c_str());
    for (const auto& g : green_ladder(dyn, probe, 4, Rat(1)))
        std::printf("  n=%d  value %s  bound %-5s  gap %s\n", g.n,
                    format_rational(g.value).c_str(),
                    format_rational(g.error_bound).c_str(),
                    g.empirical_gap ? format_rational(*g.empirical_gap).c_str() : "-");

    // The local degree at the Gauss point is the full degree of the
    // iterate, which is the whole content of good reduction.
    for (int n : {1, 2}) {
        ReducedMap rm = reduced_map_at(dyn, n, TreePoint{ValElement(ctx), Rat(0)});
        std::printf("\nreduced map of iterate %d has degree %d", n, rm.deg);
    }
    std::printf("\n");
    return 0;
}
