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

// Shared helpers for the test suites: random rasters and brute-force oracles
// that stay independent of the library's fast paths.

#include <cstdint>
#include <random>

#include "autolabel/image_core.hpp"

namespace autolabel::testing {

inline Plane random_plane(std::mt19937_64& rng, int h, int w, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Plane p(h, w);
    for (double& v : p.values()) v = dist(rng);
    return p;
}

inline Image random_image(std::mt19937_64& rng, int h, int w) {
    return Image({random_plane(rng, h, w), random_plane(rng, h, w), random_plane(rng, h, w)});
}

inline Mask random_mask(std::mt19937_64& rng, int h, int w, int classes) {
    std::uniform_int_distribution<int> dist(0, classes - 1);
    Mask m(h, w);
    for (auto& v : m.ids()) v = static_cast<std::uint8_t>(dist(rng));
    return m;
}

inline double max_abs_diff(const Plane& a, const Plane& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        worst = std::max(worst, std::abs(a.values()[k] - b.values()[k]));
    }
    return worst;
}

/// Direct mean over the clipped (2r+1)^2 window.
inline double direct_window_mean(const Plane& p, int i, int j, int r) {
    double sum = 0.0;
    int count = 0;
    for (int a = i - r; a <= i + r; ++a) {
        for (int b = j - r; b <= j + r; ++b) {
            if (a < 0 || b < 0 || a >= p.height() || b >= p.width()) continue;
            sum += p(a, b);
            ++count;
        }
    }
    return sum / count;
}

}  // namespace autolabel::testing
