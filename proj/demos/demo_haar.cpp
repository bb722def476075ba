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

// Walkthrough of phi = (z^3 - z)/3 over Q_3, whose invariant measure is
// additive Haar measure on Z_3.  Every printed value is an exact rational.

#include <cstdio>

#include "berk/runner.hpp"

using namespace berk;

namespace {

void show_measure(const char* label, const TreeMeasure& nu) {
    std::printf("%s\n", label);
    for (const auto& atom : nu)
        std::printf("  %-10s  mass %s\n", point_to_string(atom.point).c_str(),
                    format_rational(atom.mass).c_str());
}

}  // namespace

int main() {
    auto ctx = make_context(3, 1);
    Dynamics dyn(preset_lift("haar", ctx));

    std::printf("phi = (z^3 - z)/3 over Q_3, ordRes(phi) = %s\n\n",
                format_rational(dyn.base_ord_res()).c_str());

    // The crucial measures spread mass over deeper and deeper disc centers;
    // at step n there are (3^n - 1)/2 atoms of weight 2/(3^n - 1).
    for (int n = 1; n <= 3; ++n) {
        TreeMeasure nu = crucial_measure_laplacian(dyn, n);
        char label[64];
        std::snprintf(label, sizeof label, "crucial measure, iterate %d (%zu atoms):",
                      n, nu.size());
        show_measure(label, nu);
    }

    // Diagonal Green's ladder at zeta_{0,2}: the value converges to the
    // tree distance from the Gauss point, here rho = 2.
    TreePoint probe{ValElement(ctx, Rat(0)), Rat(2)};
    std::printf("\ngreen ladder at %s:\n", point_to_string(probe).c_str());
    for (const auto& g : green_ladder(dyn, probe, 3, default_C(dyn)))
        std::printf("  n=%d  value %-6s  bound %s\n", g.n,
                    format_rational(g.value).c_str(),
                    format_rational(g.error_bound).c_str());

    // Integrals of f = rho(zeta_Gauss, .) along [zeta_Gauss, zeta_{0,2}]
    // against the crucial measures approach the Haar value 4/9.
    SpanTree seg = SpanTree::span({TreePoint{ValElement(ctx, Rat(0)), Rat(0)},
                                   TreePoint{ValElement(ctx, Rat(0)), Rat(2)}});
    std::vector<Rat> f(static_cast<size_t>(seg.size()));
    for (int i = 0; i < seg.size(); ++i) f[static_cast<size_t>(i)] = seg.point(i).t;
    std::printf("\nequidistribution along [zeta_Gauss, zeta_{0,2}]:\n");
    for (const auto& row :
         equidist_report(dyn, 1, 3, seg, f, haar_reference(seg), default_C(dyn)))
        std::printf("  n=%d  integral %-5s  haar %s  deviation %s\n", row.n,
                    format_rational(row.integral_nu).c_str(),
                    format_rational(row.integral_ref).c_str(),
                    format_rational(row.deviation).c_str());

    // The minimal-resultant locus stays at the Gauss point; the barycenter
    // route and the descent route agree by construction or minresloc throws.
    MinResResult res = minresloc(dyn, 2);
    std::printf("\nminimal resultant locus at n=2: %s, normalized value %s\n",
                point_to_string(res.locus.endpoints[0]).c_str(),
                format_rational(res.min_value).c_str());
    return 0;
}
