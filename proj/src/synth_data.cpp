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

#include "autolabel/synth_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace autolabel {

namespace {

constexpr std::uint64_t kSimpleStream = 1;
constexpr std::uint64_t kComplexStream = 2;

struct Disk {
    double ci, cj, r;
    bool contains(int i, int j) const {
        const double di = i + 0.5 - ci;
        const double dj = j + 0.5 - cj;
        return di * di + dj * dj <= r * r;
    }
};

Disk random_disk(SplitMix& rng, int side, double area_fraction) {
    const double r = std::sqrt(area_fraction * side * side / std::numbers::pi);
    const double margin = std::min(r, side / 2.0);
    return {rng.uniform(margin, side - margin + 1e-9), rng.uniform(margin, side - margin + 1e-9), r};
}

Mask draw_shape(SplitMix& rng, int side, ShapeFamily family) {
    if (family == ShapeFamily::Mixed) {
        family = static_cast<ShapeFamily>(rng.uniform_int(0, 2));
    }
    Mask mask(side, side);
    switch (family) {
        case ShapeFamily::Disk: {
            const Disk d = random_disk(rng, side, rng.uniform(0.15, 0.45));
            for (int i = 0; i < side; ++i)
                for (int j = 0; j < side; ++j) mask(i, j) = d.contains(i, j);
            break;
        }
        case ShapeFamily::Rectangle: {
            const int h = rng.uniform_int(side * 3 / 10, side * 7 / 10);
            const int w = rng.uniform_int(side * 3 / 10, side * 7 / 10);
            const int top = rng.uniform_int(0, side - h);
            const int left = rng.uniform_int(0, side - w);
            for (int i = top; i < top + h; ++i)
                for (int j = left; j < left + w; ++j) mask(i, j) = 1;
            break;
        }
        case ShapeFamily::Blob:
        case ShapeFamily::Mixed: {
            const Disk core = random_disk(rng, side, rng.uniform(0.08, 0.2));
            std::vector<Disk> parts{core};
            for (int k = 0; k < 3; ++k) {
                const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
                const double dist = core.r * rng.uniform(0.5, 1.0);
                parts.push_back({std::clamp(core.ci + dist * std::sin(angle), 0.0, double(side)),
                                 std::clamp(core.cj + dist * std::cos(angle), 0.0, double(side)),
                                 core.r * rng.uniform(0.5, 0.8)});
            }
            for (int i = 0; i < side; ++i)
                for (int j = 0; j < side; ++j)
                    mask(i, j) = std::any_of(parts.begin(), parts.end(),
                                             [&](const Disk& d) { return d.contains(i, j); });
            break;
        }
    }
    return mask;
}

double area_fraction(const Mask& mask) {
    const auto ids = mask.ids();
    return static_cast<double>(std::count_if(ids.begin(), ids.end(), [](auto v) { return v != 0; })) /
           static_cast<double>(ids.size());
}

Mask draw_valid_shape(SplitMix& rng, int side, ShapeFamily family) {
    for (;;) {
        Mask mask = draw_shape(rng, side, family);
        const double a = area_fraction(mask);
        if (a >= 0.1 && a <= 0.9) return mask;
    }
}

// Background colour that never looks like the (red) objects: red stays below
// the larger of green and blue.
Rgb random_background_color(SplitMix& rng) {
    const double g = rng.uniform(0.1, 0.95);
    const double b = rng.uniform(0.1, 0.95);
    const double r = rng.uniform(0.3, 0.9) * std::max(g, b);
    return {r, g, b};
}

void paint_object(Image& img, const Mask& mask, const Rgb& base, double jitter, SplitMix& rng) {
    Rgb color;
    for (int c = 0; c < 3; ++c) color[static_cast<std::size_t>(c)] =
        std::clamp(base[static_cast<std::size_t>(c)] + rng.uniform(-jitter, jitter), 0.0, 1.0);
    // Soft shading across the object.
    const double shade_dir = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double shade = rng.uniform(0.0, 0.08);
    const int side = img.height();
    for (int i = 0; i < side; ++i) {
        for (int j = 0; j < side; ++j) {
            if (!mask(i, j)) continue;
            const double t = ((i - side / 2.0) * std::sin(shade_dir) +
                              (j - side / 2.0) * std::cos(shade_dir)) / side;
            for (int c = 0; c < 3; ++c) {
                img.channel(c)(i, j) = std::clamp(color[static_cast<std::size_t>(c)] + shade * t, 0.0, 1.0);
            }
        }
    }
}

void add_noise(Image& img, double amplitude, SplitMix& rng) {
    if (amplitude <= 0.0) return;
    for (int c = 0; c < 3; ++c) {
        for (double& v : img.channel(c).values()) {
            v = std::clamp(v + rng.uniform(-amplitude, amplitude), 0.0, 1.0);
        }
    }
}

SyntheticSample make_sample(const SceneSpec& spec, BackgroundMode mode, std::uint64_t seed,
                            int label) {
    SplitMix rng(seed);
    const int side = spec.side;
    Image img(side, side);

    switch (mode) {
        case BackgroundMode::Constant: {
            // Homogeneous background of a random non-object hue, rescaled so
            // its gray level lies in [background_lo, background_hi].
            const bool dark = rng.uniform() < spec.dark_background_probability;
            const double level = dark ? rng.uniform(spec.dark_background_lo, spec.dark_background_hi)
                                      : rng.uniform(spec.background_lo, spec.background_hi);
            Rgb color = random_background_color(rng);
            const double gray = 0.299 * color[0] + 0.587 * color[1] + 0.114 * color[2];
            const double mix = rng.uniform(0.0, spec.background_saturation);
            for (int c = 0; c < 3; ++c) {
                const double tinted = color[static_cast<std::size_t>(c)] - gray + level;
                const double v = std::clamp(level + mix * (tinted - level), 0.0, 1.0);
                for (double& x : img.channel(c).values()) x = v;
            }
            break;
        }
        case BackgroundMode::Gradient:
        case BackgroundMode::Texture: {
            const Rgb from = random_background_color(rng);
            const Rgb to = random_background_color(rng);
            const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const bool texture = mode == BackgroundMode::Texture;
            const Rgb stripe = random_background_color(rng);
            const double period = rng.uniform(3.0, 8.0);
            const double stripe_angle = rng.uniform(0.0, std::numbers::pi);
            const double stripe_amp = texture ? rng.uniform(0.2, 0.5) : 0.0;
            for (int i = 0; i < side; ++i) {
                for (int j = 0; j < side; ++j) {
                    const double t = std::clamp(
                        0.5 + ((i - side / 2.0) * std::sin(angle) + (j - side / 2.0) * std::cos(angle)) /
                                  side,
                        0.0, 1.0);
                    const double phase = (i * std::sin(stripe_angle) + j * std::cos(stripe_angle)) /
                                         period;
                    const double s = stripe_amp * (std::sin(2.0 * std::numbers::pi * phase) > 0 ? 1.0 : 0.0);
                    for (std::size_t c = 0; c < 3; ++c) {
                        const double base = from[c] * (1.0 - t) + to[c] * t;
                        img.channel(static_cast<int>(c))(i, j) =
                            std::clamp(base * (1.0 - s) + stripe[c] * s, 0.0, 1.0);
                    }
                }
            }
            break;
        }
    }

    Mask mask = draw_valid_shape(rng, side, spec.shape);
    paint_object(img, mask, spec.object_colors[static_cast<std::size_t>(label)], spec.object_jitter,
                 rng);
    add_noise(img, spec.noise, rng);
    return {std::move(img), std::move(mask), label};
}

std::vector<SyntheticSample> generate(const SceneSpec& spec, int n, BackgroundMode mode,
                                      std::uint64_t stream) {
    spec.validate();
    if (n < 0) throw InvalidArgument("sample count must be >= 0");
    std::vector<SyntheticSample> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const int label = k % spec.image_classes();
        out.push_back(make_sample(spec, mode, sample_seed(spec.seed, stream, static_cast<std::uint64_t>(k)),
                                  label));
    }
    return out;
}

}  // namespace

std::uint64_t SplitMix::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double SplitMix::uniform(double lo, double hi) {
    const double unit = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

int SplitMix::uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(next() % span);
}

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    SplitMix mix(seed ^ (stream * 0xD1B54A32D192ED03ull));
    const std::uint64_t base = mix.next();
    SplitMix per(base + index * 0x9E3779B97F4A7C15ull);
    return per.next();
}

void SceneSpec::validate() const {
    if (side < 8) throw InvalidArgument("scene side must be >= 8");
    if (object_colors.empty()) throw InvalidArgument("scene needs at least one object colour");
    if (object_colors.size() > 3) throw InvalidArgument("at most 3 object classes are supported");
    if (!(background_lo <= background_hi) || background_lo < 0.0 || background_hi > 1.0) {
        throw InvalidArgument("background range must lie in [0,1]");
    }
    if (!(dark_background_lo <= dark_background_hi) || dark_background_lo < 0.0 ||
        dark_background_hi > 1.0 || dark_background_probability < 0.0 ||
        dark_background_probability > 1.0) {
        throw InvalidArgument("dark background settings must lie in [0,1]");
    }
    if (noise < 0.0 || object_jitter < 0.0) throw InvalidArgument("noise must be >= 0");
}

std::vector<SyntheticSample> gen_simple(const SceneSpec& spec, int n) {
    return generate(spec, n, BackgroundMode::Constant, kSimpleStream);
}

std::vector<SyntheticSample> gen_complex(const SceneSpec& spec, int n) {
    if (spec.background == BackgroundMode::Constant) {
        throw InvalidArgument("gen_complex needs a gradient or texture background");
    }
    return generate(spec, n, spec.background, kComplexStream);
}

}  // namespace autolabel
