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

#include <array>
#include <cstdint>
#include <span>

#include "autolabel/image_core.hpp"

namespace autolabel {

using Histogram = std::array<std::uint64_t, 256>;

enum class Polarity { ForegroundBright, ForegroundDark, Auto };

/// Threshold t maximizing between-class variance, class 0 being bins <= t.
/// Ties go to the smallest t. Throws InvalidArgument on an empty histogram.
std::uint8_t otsu_threshold(std::span<const std::uint64_t, 256> hist);

/// 256-bin histogram of floor(v * 255 + 0.5).
Histogram histogram(const Plane& plane);

/// Binary mask from the Otsu threshold of the grayscale image. Auto polarity
/// labels the side with fewer pixels as foreground.
Mask otsu_mask(const Image& img, Polarity polarity = Polarity::Auto);

}  // namespace autolabel
