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

#include "autolabel/thresholding.hpp"

namespace autolabel {

std::uint8_t otsu_threshold(std::span<const std::uint64_t, 256> hist) {
    std::uint64_t total = 0;
    unsigned __int128 total_sum = 0;
    for (int k = 0; k < 256; ++k) {
        total += hist[static_cast<std::size_t>(k)];
        total_sum += static_cast<unsigned __int128>(k) * hist[static_cast<std::size_t>(k)];
    }
    if (total == 0) throw InvalidArgument("otsu_threshold: empty histogram");

    // Between-class variance up to the constant factor 1/N^2:
    //   (s0 * n1 - s1 * n0)^2 / (n0 * n1)
    // evaluated from exact integer cumulative sums.
    std::uint64_t n0 = 0;
    unsigned __int128 s0 = 0;
    int best_t = 0;
    double best = -1.0;
    for (int t = 0; t < 256; ++t) {
        n0 += hist[static_cast<std::size_t>(t)];
        s0 += static_cast<unsigned __int128>(t) * hist[static_cast<std::size_t>(t)];
        const std::uint64_t n1 = total - n0;
        double score = 0.0;
        if (n0 > 0 && n1 > 0) {
            const unsigned __int128 s1 = total_sum - s0;
            const __int128 diff = static_cast<__int128>(s0 * n1) - static_cast<__int128>(s1 * n0);
            const double d = static_cast<double>(diff);
            score = d * d / (static_cast<double>(n0) * static_cast<double>(n1));
        }
        if (score > best) {
            best = score;
            best_t = t;
        }
    }
    return static_cast<std::uint8_t>(best_t);
}

Histogram histogram(const Plane& plane) {
    Histogram hist{};
    for (double v : plane.values()) ++hist[quantize_byte(v)];
    return hist;
}

Mask otsu_mask(const Image& img, Polarity polarity) {
    const Plane gray = to_grayscale(img);
    const Histogram hist = histogram(gray);
    const std::uint8_t t = otsu_threshold(hist);

    std::uint64_t dark = 0;
    for (int k = 0; k <= t; ++k) dark += hist[static_cast<std::size_t>(k)];
    const std::uint64_t bright = gray.size() - dark;

    bool fg_bright = true;
    switch (polarity) {
        case Polarity::ForegroundBright: fg_bright = true; break;
        case Polarity::ForegroundDark: fg_bright = false; break;
        case Polarity::Auto: fg_bright = bright <= dark; break;
    }

    Mask mask(img.height(), img.width());
    auto ids = mask.ids();
    const auto g = gray.values();
    for (std::size_t k = 0; k < ids.size(); ++k) {
        const bool above = quantize_byte(g[k]) > t;
        ids[k] = above == fg_bright ? 1 : 0;
    }
    return mask;
}

}  // namespace autolabel
