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

struct GuidedFilterParams {
    int radius = 2;
    double epsilon = 1e-2;

    void validate() const;
};

/// Literal per-pixel kernel evaluation: g_i = sum_j W_ij(I) p_j.
///
/// Costs O(n * (2r+1)^4); meant as a reference for small inputs. Windows are
/// clipped to the image. The kernel weight contributed by window k to the pair
/// (i, j) is (1 + (I_i - mu_k)(I_j - mu_k) / (var_k + eps)) / (|w_i| |w_k|),
/// which reduces to the textbook 1/|w|^2 away from the border and keeps every
/// row of W summing to one near it.
Plane guided_filter_naive(const Plane& guide, const Plane& input, const GuidedFilterParams& params);

/// The kernel weight W_ij(I) used by guided_filter_naive. i and j are flat
/// row-major indices.
double guided_filter_weight(const Plane& guide, std::size_t i, std::size_t j,
                            const GuidedFilterParams& params);

/// O(n) form via per-window linear coefficients a_k, b_k and box means.
Plane guided_filter_fast(const Plane& guide, const Plane& input, const GuidedFilterParams& params);

/// Filters each class channel, clamps to [0,1] and renormalizes per pixel
/// (uniform when a pixel's channels all clamp to zero).
ProbMap refine_probmap(const Plane& guide, const ProbMap& probs, const GuidedFilterParams& params);

}  // namespace autolabel
