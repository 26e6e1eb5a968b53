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

#pragma once

#include "autolabel/image_core.hpp"

namespace autolabel {

/// Square sliding window. Padded cells never take part in the extremum.
struct PoolSpec {
    int kernel = 3;
    int stride = 1;
    int padding = 1;

    /// Throws InvalidArgument unless kernel is odd and >= 1, stride >= 1 and
    /// 0 <= padding < kernel.
    void validate() const;

    bool preserves_size() const { return stride == 1 && padding == (kernel - 1) / 2; }

    static PoolSpec same_size(int kernel) { return PoolSpec{kernel, 1, (kernel - 1) / 2}; }
};

enum class PoolMode { Max, Min };

Plane pool(const Plane& x, const PoolSpec& spec, PoolMode mode);

/// Maxpool(x) - Minpool(x): near zero in flat regions, large across edges.
Plane boundary_extract(const Plane& x, const PoolSpec& spec = PoolSpec{});

}  // namespace autolabel
