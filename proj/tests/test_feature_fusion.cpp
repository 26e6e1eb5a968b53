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

#include <gtest/gtest.h>

#include "autolabel/feature_fusion.hpp"
#include "test_support.hpp"

namespace autolabel {
namespace {

FeatureStack random_stack(std::mt19937_64& rng, int channels, int h, int w) {
    std::vector<Plane> planes;
    for (int c = 0; c < channels; ++c) planes.push_back(testing::random_plane(rng, h, w, -1.0, 1.0));
    return FeatureStack(std::move(planes));
}

FeatureStack constant_stack(int channels, int h, int w, double v) {
    return FeatureStack(std::vector<Plane>(static_cast<std::size_t>(channels), Plane(h, w, v)));
}

TEST(Hgl, OnesAreIdentity) {
    std::mt19937_64 rng(1);
    const FeatureStack low = random_stack(rng, 3, 5, 4);
    const FeatureStack out = hgl(constant_stack(3, 5, 4, 1.0), low);
    for (int c = 0; c < 3; ++c) EXPECT_EQ(out[c], low[c]);
}

TEST(Hgl, ZerosAnnihilate) {
    std::mt19937_64 rng(2);
    const FeatureStack out = hgl(random_stack(rng, 2, 3, 3), constant_stack(2, 3, 3, 0.0));
    for (int c = 0; c < 2; ++c)
        for (double v : out[c].values()) EXPECT_EQ(v, 0.0);
}

TEST(Hgl, MatchesDirectProductAndCommutes) {
    std::mt19937_64 rng(3);
    const FeatureStack a = random_stack(rng, 2, 4, 4);
    const FeatureStack b = random_stack(rng, 2, 4, 4);
    const FeatureStack ab = hgl(a, b);
    const FeatureStack ba = hgl(b, a);
    for (int c = 0; c < 2; ++c) {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) EXPECT_EQ(ab[c](i, j), a[c](i, j) * b[c](i, j));
        EXPECT_EQ(ab[c], ba[c]);
    }
}

TEST(Bg, ConstantHighPassesThrough) {
    std::mt19937_64 rng(4);
    std::vector<Plane> planes{Plane(6, 5, 0.2), Plane(6, 5, -1.5)};
    const FeatureStack high(planes);
    const FeatureStack out = bg(high, random_stack(rng, 2, 6, 5));
    for (int c = 0; c < 2; ++c) EXPECT_EQ(out[c], high[c]);
}

TEST(Bg, ZeroLowPassesThrough) {
    std::mt19937_64 rng(5);
    const FeatureStack high = random_stack(rng, 3, 5, 5);
    const FeatureStack out = bg(high, constant_stack(3, 5, 5, 0.0));
    for (int c = 0; c < 3; ++c) EXPECT_EQ(out[c], high[c]);
}

TEST(Bg, MatchesComposition) {
    std::mt19937_64 rng(6);
    const FeatureStack high = random_stack(rng, 2, 7, 6);
    const FeatureStack low = random_stack(rng, 2, 7, 6);
    const FeatureStack out = bg(high, low);
    for (int c = 0; c < 2; ++c) {
        for (int i = 0; i < 7; ++i) {
            for (int j = 0; j < 6; ++j) {
                double mx = -1e300, mn = 1e300;
                for (int a = std::max(0, i - 1); a <= std::min(6, i + 1); ++a)
                    for (int b = std::max(0, j - 1); b <= std::min(5, j + 1); ++b) {
                        mx = std::max(mx, high[c](a, b));
                        mn = std::min(mn, high[c](a, b));
                    }
                EXPECT_NEAR(out[c](i, j), high[c](i, j) + low[c](i, j) * (mx - mn), 1e-15);
            }
        }
        EXPECT_EQ(out[c].height(), 7);
        EXPECT_EQ(out[c].width(), 6);
    }
}

TEST(Fusion, MismatchesAreRejected) {
    std::mt19937_64 rng(7);
    EXPECT_THROW(hgl(random_stack(rng, 2, 4, 4), random_stack(rng, 3, 4, 4)), DimensionMismatch);
    EXPECT_THROW(bg(random_stack(rng, 2, 4, 4), random_stack(rng, 2, 4, 5)), DimensionMismatch);
    EXPECT_THROW(bg(random_stack(rng, 2, 4, 4), random_stack(rng, 2, 4, 4), PoolSpec{3, 2, 1}),
                 InvalidArgument);
    EXPECT_THROW(FeatureStack(std::vector<Plane>{}), InvalidArgument);
}

}  // namespace
}  // namespace autolabel
