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

#ifndef BERK_PRESETS_HPP
#define BERK_PRESETS_HPP

#include <string>
#include <vector>

#include "berk/baryloc.hpp"

namespace berk {

inline std::vector<std::string> preset_names() {
    return {"haar", "benedetto", "squaring"};
}

// Built-in example maps over Q_p (e = 1, p = 3 unless overridden):
//   haar       (z^p - z)/p, whose invariant measure is Haar measure on Z_p
//   benedetto  (z^2 - 1)/p, potentially good reduction away from Gauss
//   squaring   z^2, good reduction
inline Lift preset_lift(const std::string& name, const ContextPtr& ctx) {
    const long p = ctx->p.convert_to<long>();
    auto sc = [&](long num, long den = 1) { return ValElement(ctx, Rat(num, den)); };
    if (name == "haar") {
        std::vector<ValElement> F(static_cast<size_t>(p) + 1, sc(0));
        std::vector<ValElement> G(static_cast<size_t>(p) + 1, sc(0));
        F[1] = sc(-1, p);
        F[static_cast<size_t>(p)] = sc(1, p);
        G[0] = sc(1);
        return make_lift(ctx, F, G, static_cast<int>(p));
    }
    if (name == "benedetto")
        return make_lift(ctx, {sc(-1, p), sc(0), sc(1, p)}, {sc(1), sc(0), sc(0)}, 2);
    if (name == "squaring")
        return make_lift(ctx, {sc(0), sc(0), sc(1)}, {sc(1), sc(0), sc(0)}, 2);
    throw ConfigInvalid("unknown preset map '" + name + "'");
}

// Reference barycenter of the invariant measure for the benedetto preset:
// the segment between zeta_{1,1} and zeta_{-1,1}.
inline SegmentLocus benedetto_bary_ref(const ContextPtr& ctx) {
    return SegmentLocus::segment(TreePoint{ValElement(ctx, Rat(1)), Rat(1)},
                                 TreePoint{ValElement(ctx, Rat(-1)), Rat(1)});
}

}  // namespace berk

#endif  // BERK_PRESETS_HPP
