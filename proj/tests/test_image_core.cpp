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

#include <filesystem>
#include <fstream>
#include <string>

#include "autolabel/image_core.hpp"
#include "test_support.hpp"

namespace autolabel {
namespace {

namespace fs = std::filesystem;

class PnmTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("autolabel_pnm_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_raw(const std::string& name, const std::string& bytes) {
        const fs::path p = dir_ / name;
        std::ofstream(p, std::ios::binary) << bytes;
        return p;
    }

    std::string read_raw(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    fs::path dir_;
};

TEST_F(PnmTest, LoadsGrayscaleScaledByByte) {
    const auto path = write_raw("a.pgm", std::string("P5\n2 2\n255\n") + std::string("\x00\xff\x80\x40", 4));
    const Plane p = std::get<Plane>(load_pnm(path));
    ASSERT_EQ(p.height(), 2);
    ASSERT_EQ(p.width(), 2);
    EXPECT_EQ(p(0, 0), 0.0);
    EXPECT_EQ(p(0, 1), 1.0);
    EXPECT_EQ(p(1, 0), 128.0 / 255.0);
    EXPECT_EQ(p(1, 1), 64.0 / 255.0);
}

TEST_F(PnmTest, LoadsColourPixel) {
    const auto path = write_raw("a.ppm", std::string("P6 1 1 255\n") + std::string("\xff\x00\x00", 3));
    const Image img = std::get<Image>(load_pnm(path));
    EXPECT_EQ(img.channel(0)(0, 0), 1.0);
    EXPECT_EQ(img.channel(1)(0, 0), 0.0);
    EXPECT_EQ(img.channel(2)(0, 0), 0.0);
}

TEST_F(PnmTest, ReportsEachErrorDistinctly) {
    auto kind_of = [&](const std::string& name, const std::string& bytes) {
        try {
            load_pnm(write_raw(name, bytes));
        } catch (const PnmError& e) {
            return e.kind();
        }
        ADD_FAILURE() << name << " loaded without error";
        return PnmErrorKind::UnsupportedFormat;
    };
    EXPECT_EQ(kind_of("p7.pam", "P7\n1 1\n255\n\x00"), PnmErrorKind::UnsupportedFormat);
    EXPECT_EQ(kind_of("bad.pgm", "P5\n1 x\n255\n\x00"), PnmErrorKind::MalformedHeader);
    EXPECT_EQ(kind_of("max.pgm", "P5\n1 1\n65535\n\x00\x00"), PnmErrorKind::UnsupportedMaxval);
    EXPECT_EQ(kind_of("short.pgm", std::string("P5\n2 2\n255\n") + std::string("\x00\x01", 2)),
              PnmErrorKind::TruncatedPayload);
    EXPECT_THROW(load_pnm(dir_ / "missing.pgm"), IoError);
}

TEST_F(PnmTest, RoundTripWithinQuantizationBound) {
    std::mt19937_64 rng(11);
    const Plane p = testing::random_plane(rng, 8, 8);
    save_pnm(p, dir_ / "rt.pgm");
    const Plane back = load_pgm(dir_ / "rt.pgm");
    EXPECT_LE(testing::max_abs_diff(p, back), 1.0 / 510.0 + 1e-15);
}

TEST_F(PnmTest, PayloadBytesForExtremes) {
    save_pnm(Plane(3, 4, 0.0), dir_ / "zeros.pgm");
    const std::string zeros = read_raw(dir_ / "zeros.pgm");
    EXPECT_EQ(zeros, std::string("P5\n4 3\n255\n") + std::string(12, '\0'));

    save_pnm(Image(2, 2, 1.0), dir_ / "ones.ppm");
    const std::string ones = read_raw(dir_ / "ones.ppm");
    EXPECT_EQ(ones, std::string("P6\n2 2\n255\n") + std::string(12, '\xff'));
}

TEST_F(PnmTest, MaskStoresClassIdsVerbatim) {
    Mask m(2, 3);
    m(0, 1) = 1;
    m(1, 2) = 7;
    save_mask(m, dir_ / "m.pgm");
    EXPECT_EQ(load_mask(dir_ / "m.pgm"), m);
    Mask bad(1, 1, 255);
    EXPECT_THROW(save_mask(bad, dir_ / "bad.pgm"), InvalidArgument);
}

TEST_F(PnmTest, UnwritablePathFails) {
    EXPECT_THROW(save_pnm(Plane(1, 1), dir_ / "no_such_dir" / "x.pgm"), IoError);
}

TEST(Grayscale, LumaWeights) {
    Image img(1, 2);
    img.set_pixel(0, 0, 1, 1, 1);
    img.set_pixel(0, 1, 1, 0, 0);
    const Plane g = to_grayscale(img);
    EXPECT_DOUBLE_EQ(g(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(g(0, 1), 0.299);
}

TEST(Grayscale, MatchesDirectLoop) {
    std::mt19937_64 rng(3);
    const Image img = testing::random_image(rng, 9, 7);
    const Plane g = to_grayscale(img);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 7; ++j)
            EXPECT_NEAR(g(i, j),
                        0.299 * img.channel(0)(i, j) + 0.587 * img.channel(1)(i, j) +
                            0.114 * img.channel(2)(i, j),
                        1e-15);
}

TEST(Integral, CountsAndZeros) {
    const IntegralPlane ones = integral(Plane(3, 3, 1.0));
    EXPECT_EQ(ones.at(3, 3), 9.0);
    const IntegralPlane zeros = integral(Plane(4, 5, 0.0));
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; j <= 5; ++j) EXPECT_EQ(zeros.at(i, j), 0.0);
}

TEST(Integral, BorderRowAndColumnAreZero) {
    std::mt19937_64 rng(5);
    const IntegralPlane t = integral(testing::random_plane(rng, 6, 4));
    for (int i = 0; i <= 6; ++i) EXPECT_EQ(t.at(i, 0), 0.0);
    for (int j = 0; j <= 4; ++j) EXPECT_EQ(t.at(0, j), 0.0);
}

TEST(Integral, WindowSumsMatchDirectSummation) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
        std::uniform_int_distribution<int> size(1, 64);
        const int h = size(rng), w = size(rng);
        const Plane p = testing::random_plane(rng, h, w);
        const IntegralPlane t(p);
        std::uniform_int_distribution<int> row(0, h), col(0, w);
        int top = row(rng), bottom = row(rng), left = col(rng), right = col(rng);
        if (top > bottom) std::swap(top, bottom);
        if (left > right) std::swap(left, right);
        double direct = 0.0;
        for (int i = top; i < bottom; ++i)
            for (int j = left; j < right; ++j) direct += p(i, j);
        EXPECT_LE(std::abs(t.window_sum(top, left, bottom, right) - direct),
                  1e-9 * std::max(1.0, direct));
    }
}

TEST(BoxMean, RadiusZeroIsIdentity) {
    std::mt19937_64 rng(1);
    const Plane p = testing::random_plane(rng, 5, 6);
    EXPECT_EQ(box_mean(p, 0), p);
}

TEST(BoxMean, ConstantStaysConstant) {
    for (int r : {1, 2, 5, 20}) {
        const Plane out = box_mean(Plane(7, 4, 0.37), r);
        for (double v : out.values()) EXPECT_EQ(v, 0.37);
    }
}

TEST(BoxMean, MatchesDirectLoopWithClippedBorders) {
    std::mt19937_64 rng(2);
    const Plane p = testing::random_plane(rng, 6, 6);
    const Plane out = box_mean(p, 2);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) EXPECT_NEAR(out(i, j), testing::direct_window_mean(p, i, j, 2), 1e-12);
}

TEST(BoxMean, LinearAndBounded) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const Plane p = testing::random_plane(rng, 12, 9, -2.0, 3.0);
        const Plane q = testing::random_plane(rng, 12, 9);
        const double alpha = 1.7, beta = -0.4;
        const int r = trial % 4;
        const Plane lhs = box_mean(alpha * p + beta * q, r);
        const Plane rhs = alpha * box_mean(p, r) + beta * box_mean(q, r);
        EXPECT_LE(testing::max_abs_diff(lhs, rhs), 1e-9);

        const Plane m = box_mean(p, r + 1);
        const auto [lo, hi] = std::minmax_element(p.values().begin(), p.values().end());
        for (double v : m.values()) {
            EXPECT_GE(v, *lo);
            EXPECT_LE(v, *hi);
        }
    }
}

TEST(BoxMean, RejectsNegativeRadius) { EXPECT_THROW(box_mean(Plane(2, 2), -1), InvalidArgument); }

TEST(Plane, RejectsBadDimensions) {
    EXPECT_THROW(Plane(0, 3), InvalidArgument);
    EXPECT_THROW(Plane(2, 2, std::vector<double>(3)), DimensionMismatch);
}

}  // namespace
}  // namespace autolabel
