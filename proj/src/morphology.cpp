// Copyright 2026 The autolabel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "autolabel/morphology.hpp"

#include <algorithm>
#include <string>

namespace autolabel {

void PoolSpec::validate() const {
    if (kernel < 1 || kernel % 2 == 0) {
        throw InvalidArgument("pool kernel must be odd and >= 1, got " + std::to_string(kernel));
    }
    if (stride < 1) throw InvalidArgument("pool stride must be >= 1");
    if (padding < 0 || padding >= kernel) {
        throw InvalidArgument("pool padding must lie in [0, kernel)");
    }
}

Plane pool(const Plane& x, const PoolSpec& spec, PoolMode mode) {
    spec.validate();
    const int out_h = (x.height() + 2 * spec.padding - spec.kernel) / spec.stride + 1;
    const int out_w = (x.width() + 2 * spec.padding - spec.kernel) / spec.stride + 1;
    if (x.height() + 2 * spec.padding < spec.kernel || x.width() + 2 * spec.padding < spec.kernel) {
        throw InvalidArgument("pool window larger than padded input");
    }

    Plane out(out_h, out_w);
    for (int oi = 0; oi < out_h; ++oi) {
        const int top = oi * spec.stride - spec.padding;
        const int i0 = std::max(0, top);
        const int i1 = std::min(x.height(), top + spec.kernel);
        for (int oj = 0; oj < out_w; ++oj) {
            const int left = oj * spec.stride - spec.padding;
            const int j0 = std::max(0, left);
            const int j1 = std::min(x.width(), left + spec.kernel);
            if (i0 >= i1 || j0 >= j1) {
                throw InvalidArgument("pool window lies entirely outside the input");
            }
            double best = x(i0, j0);
            for (int i = i0; i < i1; ++i) {
                for (int j = j0; j < j1; ++j) {
                    best = mode == PoolMode::Max ? std::max(best, x(i, j)) : std::min(best, x(i, j));
                }
            }
            out(oi, oj) = best;
        }
    }
    return out;
}

Plane boundary_extract(const Plane& x, const PoolSpec& spec) {
    spec.validate();
    if (!spec.preserves_size()) {
        throw InvalidArgument("boundary_extract needs stride 1 and padding (kernel-1)/2");
    }
    return pool(x, spec, PoolMode::Max) - pool(x, spec, PoolMode::Min);
}

}  // namespace autolabel
