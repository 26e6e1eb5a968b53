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
#include <vector>

#include "autolabel/image_core.hpp"

namespace autolabel {

using Rgb = std::array<double, 3>;

enum class ShapeFamily { Disk, Rectangle, Blob, Mixed };
enum class BackgroundMode { Constant, Gradient, Texture };

/// Scene recipe for the synthetic generator. Object area fraction is kept in
/// [0.1, 0.9] by rejection.
struct SceneSpec {
    int side = 48;
    ShapeFamily shape = ShapeFamily::Mixed;
    /// One base color per image-level class; objects of sample n use
    /// object_colors[label(n)] plus uniform jitter.
    std::vector<Rgb> object_colors{{0.80, 0.22, 0.18}};
    double object_jitter = 0.06;
    /// Gray level range for constant backgrounds.
    double background_lo = 0.72;
    double background_hi = 0.95;
    /// Share of constant backgrounds drawn from the dark range instead.
    double dark_background_probability = 0.3;
    double dark_background_lo = 0.03;
    double dark_background_hi = 0.15;
    /// 0 gives neutral gray constant backgrounds, 1 fully tinted ones.
    double background_saturation = 1.0;
    /// Mode used by gen_complex (gen_simple is always Constant).
    BackgroundMode background = BackgroundMode::Texture;
    double noise = 0.02;
    std::uint64_t seed = 0;

    int image_classes() const { return static_cast<int>(object_colors.size()); }
    void validate() const;
};

struct SyntheticSample {
    Image image;
    Mask mask;  // 1 = object
    int label = 0;
};

/// Homogeneous light background; Otsu-separable.
std::vector<SyntheticSample> gen_simple(const SceneSpec& spec, int n);

/// Gradient or textured background with additive noise.
std::vector<SyntheticSample> gen_complex(const SceneSpec& spec, int n);

/// Seed of sample `index` for a stream; shared by both generators.
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// splitmix64-based generator whose output is independent of the standard
/// library implementation.
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Uniform in [lo, hi).
    double uniform(double lo = 0.0, double hi = 1.0);
    int uniform_int(int lo, int hi);  // inclusive

private:
    std::uint64_t state_;
};

}  // namespace autolabel
