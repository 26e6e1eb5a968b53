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

#include <cmath>
#include <filesystem>
#include <numbers>

#include "autolabel/pixel_classifier.hpp"
#include "autolabel/synth_data.hpp"
#include "test_support.hpp"

namespace autolabel {
namespace {

using testing::random_image;
using testing::random_mask;
using testing::random_plane;

FeatureStack random_features(std::mt19937_64& rng, int h, int w) {
    std::vector<Plane> planes;
    for (int c = 0; c < FeatureSpec::kChannels; ++c) planes.push_back(random_plane(rng, h, w, -1.0, 1.0));
    return FeatureStack(std::move(planes));
}

Model random_model(std::mt19937_64& rng, int classes, int image_classes, double scale) {
    Model m = Model::zeros(classes, image_classes);
    std::normal_distribution<double> dist(0.0, scale);
    for (auto* block : {&m.pixel_weights, &m.pixel_bias, &m.gap_weights, &m.gap_bias})
        for (double& v : *block) v = dist(rng);
    return m;
}

// Relative error with a small floor on the scale so exact zeros compare sanely.
double relative_error(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

double pixel_objective(const Model& m, const FeatureStack& fused, const Mask& target) {
    return loss(pixel_probabilities(m, fused), target);
}

TEST(PixelHead, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> side(2, 6), ncls(2, 4);
    const double h = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int classes = ncls(rng);
        const int rows = side(rng), cols = side(rng);
        const Model m = random_model(rng, classes, 0, 0.7);
        const FeatureStack fused = random_features(rng, rows, cols);
        const Mask target = random_mask(rng, rows, cols, classes);
        const auto analytic = pixel_loss_gradient(m, fused, target);
        EXPECT_NEAR(analytic.loss, pixel_objective(m, fused, target), 1e-12);

        for (std::size_t k = 0; k < m.pixel_weights.size(); ++k) {
            Model plus = m, minus = m;
            plus.pixel_weights[k] += h;
            minus.pixel_weights[k] -= h;
            const double numeric =
                (pixel_objective(plus, fused, target) - pixel_objective(minus, fused, target)) / (2 * h);
            worst = std::max(worst, relative_error(analytic.gradient.weights[k], numeric));
        }
        for (std::size_t k = 0; k < m.pixel_bias.size(); ++k) {
            Model plus = m, minus = m;
            plus.pixel_bias[k] += h;
            minus.pixel_bias[k] -= h;
            const double numeric =
                (pixel_objective(plus, fused, target) - pixel_objective(minus, fused, target)) / (2 * h);
            worst = std::max(worst, relative_error(analytic.gradient.bias[k], numeric));
        }
    }
    EXPECT_LE(worst, 1e-4);
}

double gap_objective(const Model& m, std::span<const FeatureStack> fused, std::span<const int> labels) {
    // Softmax cross-entropy of pooled features, computed directly.
    double total = 0.0;
    for (std::size_t n = 0; n < fused.size(); ++n) {
        const auto pooled = global_average_pool(fused[n]);
        std::vector<double> z;
        for (int c = 0; c < m.image_classes; ++c) {
            double s = m.gap_bias[c];
            for (int q = 0; q < m.features; ++q) s += m.gap_weights[c * m.features + q] * pooled[q];
            z.push_back(s);
        }
        double lse = 0.0;
        for (double v : z) lse += std::exp(v);
        total += std::log(lse) - z[labels[n]];
    }
    return total / static_cast<double>(fused.size());
}

TEST(GapHead, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(32);
    std::uniform_int_distribution<int> side(2, 6), ncls(2, 4), count(1, 4);
    const double h = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int classes = ncls(rng);
        const Model m = random_model(rng, 2, classes, 0.7);
        std::vector<FeatureStack> fused;
        std::vector<int> labels;
        std::uniform_int_distribution<int> label(0, classes - 1);
        for (int n = count(rng); n > 0; --n) {
            fused.push_back(random_features(rng, side(rng), side(rng)));
            labels.push_back(label(rng));
        }
        const auto analytic = gap_loss_gradient(m, fused, labels);
        EXPECT_NEAR(analytic.loss, gap_objective(m, fused, labels), 1e-12);
        for (std::size_t k = 0; k < m.gap_weights.size(); ++k) {
            Model plus = m, minus = m;
            plus.gap_weights[k] += h;
            minus.gap_weights[k] -= h;
            const double numeric =
                (gap_objective(plus, fused, labels) - gap_objective(minus, fused, labels)) / (2 * h);
            worst = std::max(worst, relative_error(analytic.gradient.weights[k], numeric));
        }
        for (std::size_t k = 0; k < m.gap_bias.size(); ++k) {
            Model plus = m, minus = m;
            plus.gap_bias[k] += h;
            minus.gap_bias[k] -= h;
            const double numeric =
                (gap_objective(plus, fused, labels) - gap_objective(minus, fused, labels)) / (2 * h);
            worst = std::max(worst, relative_error(analytic.gradient.bias[k], numeric));
        }
    }
    EXPECT_LE(worst, 1e-4);
}

TEST(PixelHead, ZeroModelGivesUniformProbabilities) {
    std::mt19937_64 rng(33);
    const FeatureStack fused = random_features(rng, 3, 4);
    const ProbMap p = pixel_probabilities(Model::zeros(4), fused);
    for (const auto& ch : p.channels)
        for (double v : ch.values()) EXPECT_DOUBLE_EQ(v, 0.25);
    EXPECT_NEAR(loss(p, random_mask(rng, 3, 4, 4)), std::log(4.0), 1e-15);
}

TEST(PixelHead, ProbabilitiesSumToOneBeforeAndAfterRefinement) {
    std::mt19937_64 rng(36);
    const Model m = random_model(rng, 3, 0, 1.0);
    const Image img = random_image(rng, 12, 10);
    const ProbMap raw = pixel_probabilities(m, fuse(extract_features(img)));
    const ProbMap refined = forward(m, img, {2, 0.01});
    for (const ProbMap* p : {&raw, &refined})
        for (std::size_t k = 0; k < p->channels[0].size(); ++k) {
            double sum = 0.0;
            for (const auto& ch : p->channels) sum += ch.values()[k];
            EXPECT_NEAR(sum, 1.0, 1e-12);
        }
    const ProbMap flat = forward(Model::zeros(2), img, {2, 0.01});
    for (double v : flat.channels[1].values()) EXPECT_NEAR(v, 0.5, 1e-12);
}

TEST(PixelHead, BoundaryWeightFavoursEdgePixels) {
    Image img(16, 16);
    for (int i = 0; i < 16; ++i)
        for (int j = 8; j < 16; ++j)
            for (int c = 0; c < 3; ++c) img.channel(c)(i, j) = 1.0;
    Model m = Model::zeros(2);
    m.pixel_weights[m.features + 4] = 20.0;
    const ProbMap p = pixel_probabilities(m, fuse(extract_features(img)));
    const Plane& fg = p.channels[1];
    for (int i = 0; i < 16; ++i) {
        EXPECT_GT(fg(i, 7), fg(i, 1));
        EXPECT_GT(fg(i, 8), fg(i, 14));
    }
}

TEST(PixelHead, SoftmaxIgnoresCommonLogitShift) {
    std::mt19937_64 rng(34);
    Model m = random_model(rng, 3, 0, 1.0);
    const FeatureStack fused = random_features(rng, 4, 4);
    const ProbMap before = pixel_probabilities(m, fused);
    for (double& b : m.pixel_bias) b += 500.0;
    const ProbMap after = pixel_probabilities(m, fused);
    for (int c = 0; c < 3; ++c) EXPECT_LE(testing::max_abs_diff(before.channels[c], after.channels[c]), 1e-12);
}

TEST(PixelHead, LossKnownValue) {
    ProbMap p;
    p.channels = {Plane(1, 2, 0.5), Plane(1, 2, 0.5)};
    p.channels[0](0, 1) = 0.25;
    p.channels[1](0, 1) = 0.75;
    Mask t(1, 2);
    t(0, 1) = 1;
    EXPECT_NEAR(loss(p, t), (std::log(2.0) - std::log(0.75)) / 2.0, 1e-15);
    p.channels[1](0, 1) = 0.0;
    EXPECT_NEAR(loss(p, t), (std::log(2.0) + std::log(1e12)) / 2.0, 1e-9);
}

TEST(PixelHead, ValidityMaskRestrictsPixels) {
    std::mt19937_64 rng(35);
    const Model m = random_model(rng, 3, 0, 0.5);
    const FeatureStack fused = random_features(rng, 4, 5);
    const Mask target = random_mask(rng, 4, 5, 3);
    Mask valid(4, 5);
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < valid.size(); ++k)
        if (k % 3 == 0) {
            valid.ids()[k] = 1;
            kept.push_back(k);
        }
    // Oracle: the same pixels packed into a 1-row image.
    std::vector<Plane> planes;
    for (int c = 0; c < fused.channels(); ++c) {
        Plane row(1, static_cast<int>(kept.size()));
        for (std::size_t n = 0; n < kept.size(); ++n) row.values()[n] = fused[c].values()[kept[n]];
        planes.push_back(row);
    }
    Mask packed(1, static_cast<int>(kept.size()));
    for (std::size_t n = 0; n < kept.size(); ++n) packed.ids()[n] = target.ids()[kept[n]];
    const auto a = pixel_loss_gradient(m, fused, target, valid);
    const auto b = pixel_loss_gradient(m, FeatureStack(planes), packed);
    EXPECT_EQ(a.pixels, kept.size());
    EXPECT_NEAR(a.loss, b.loss, 1e-12);
    for (std::size_t k = 0; k < a.gradient.weights.size(); ++k)
        EXPECT_NEAR(a.gradient.weights[k], b.gradient.weights[k], 1e-12);

    const auto none = pixel_loss_gradient(m, fused, target, Mask(4, 5));
    EXPECT_EQ(none.pixels, 0u);
    EXPECT_EQ(none.loss, 0.0);
}

TEST(PixelHead, RejectsMismatches) {
    std::mt19937_64 rng(36);
    const Model m = Model::zeros(2);
    const FeatureStack fused = random_features(rng, 3, 3);
    EXPECT_THROW(pixel_loss_gradient(m, fused, Mask(3, 4)), DimensionMismatch);
    EXPECT_THROW(pixel_loss_gradient(m, fused, Mask(3, 3, 2)), InvalidArgument);
    EXPECT_THROW(pixel_loss_gradient(m, fused, Mask(3, 3), Mask(2, 2)), DimensionMismatch);
    EXPECT_THROW(pixel_probabilities(m, FeatureStack({Plane(3, 3)})), DimensionMismatch);
}

TEST(TrainConfig, StepSchedule) {
    TrainConfig cfg;
    EXPECT_DOUBLE_EQ(cfg.learning_rate_at(0), 0.007);
    EXPECT_DOUBLE_EQ(cfg.learning_rate_at(4), 0.007);
    EXPECT_NEAR(cfg.learning_rate_at(5), 0.0007, 1e-18);
    EXPECT_NEAR(cfg.learning_rate_at(10), 0.00007, 1e-18);
    cfg.batch_size = 0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
}

std::vector<TrainingSample> split_color_images(int n) {
    std::vector<TrainingSample> out;
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<int> cut(3, 12);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    for (int k = 0; k < n; ++k) {
        const int split = cut(rng);
        Image img(16, 16);
        Mask target(16, 16);
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j) {
                const bool fg = j >= split;
                const double e = jitter(rng);
                if (fg) img.set_pixel(i, j, 0.85 + e, 0.2 + e, 0.15 + e);
                else img.set_pixel(i, j, 0.15 + e, 0.3 + e, 0.8 + e);
                target(i, j) = fg ? 1 : 0;
            }
        out.push_back({img, target, {}});
    }
    return out;
}

TEST(Training, SeparableDataConverges) {
    const auto data = split_color_images(16);
    TrainConfig cfg;
    cfg.learning_rate = 0.5;
    cfg.epochs = 20;
    cfg.lr_step_epochs = 10;
    cfg.batch_size = 4;
    const TrainResult r = train_with_history(Model::zeros(2), data, cfg);
    ASSERT_EQ(r.epoch_loss.size(), 20u);
    EXPECT_NEAR(r.epoch_loss.front(), std::log(2.0), 0.1);
    EXPECT_LT(r.epoch_loss.back(), 0.1);
    EXPECT_LT(r.epoch_loss.back(), r.epoch_loss.front());
}

TEST(Training, DeterministicPerSeed) {
    const auto data = split_color_images(10);
    TrainConfig cfg;
    cfg.learning_rate = 0.3;
    cfg.epochs = 3;
    cfg.batch_size = 3;
    cfg.seed = 5;
    const Model a = train(Model::zeros(2), data, cfg);
    const Model b = train(Model::zeros(2), data, cfg);
    EXPECT_EQ(serialize_model(a), serialize_model(b));
    cfg.seed = 6;
    EXPECT_NE(serialize_model(train(Model::zeros(2), data, cfg)), serialize_model(a));
}

TEST(Training, ZeroEpochsReturnsInput) {
    const auto data = split_color_images(2);
    TrainConfig cfg;
    cfg.epochs = 0;
    EXPECT_EQ(train(Model::zeros(2), data, cfg), Model::zeros(2));
}

TEST(Training, RejectsEmptyData) {
    TrainConfig cfg;
    EXPECT_THROW(train(Model::zeros(2), {}, cfg), InvalidArgument);
    auto data = split_color_images(2);
    for (auto& s : data) s.valid = Mask(16, 16);
    EXPECT_THROW(train(Model::zeros(2), data, cfg), InvalidArgument);
}

std::vector<LabelledImage> labelled_scenes(std::uint64_t seed, int n) {
    SceneSpec spec;
    spec.side = 24;
    spec.object_colors = {{0.92, 0.90, 0.85}, {0.10, 0.10, 0.14}};
    spec.background_lo = 0.45;
    spec.background_hi = 0.55;
    spec.background_saturation = 0.0;
    spec.dark_background_probability = 0.0;
    spec.seed = seed;
    std::vector<LabelledImage> out;
    for (auto& s : gen_simple(spec, n)) out.push_back({s.image, s.label});
    return out;
}

TEST(ImageClassifier, LearnsTwoClasses) {
    const auto train_set = labelled_scenes(1, 60);
    const auto test_set = labelled_scenes(2, 40);
    TrainConfig cfg;
    cfg.learning_rate = 0.5;
    cfg.epochs = 30;
    cfg.lr_step_epochs = 20;
    const Model m = train_image_classifier(Model::zeros(2, 2), train_set, cfg).model;
    int correct = 0;
    for (const auto& li : test_set) {
        const auto p = classify(m, li.image);
        EXPECT_NEAR(p[0] + p[1], 1.0, 1e-12);
        correct += (p[1] > p[0] ? 1 : 0) == li.label;
    }
    EXPECT_GE(correct, 38);
}

TEST(Cam, MatchesDirectComputation) {
    std::mt19937_64 rng(38);
    const Model m = random_model(rng, 2, 3, 1.0);
    const Image img = random_image(rng, 9, 7);
    const auto maps = cam(m, img);
    ASSERT_EQ(maps.size(), 3u);
    const FeatureStack fused = fuse(extract_features(img));
    for (int c = 0; c < 3; ++c) {
        Plane act(9, 7);
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 7; ++j)
                for (int q = 0; q < m.features; ++q) act(i, j) += m.gap_weights[c * m.features + q] * fused[q](i, j);
        double lo = 1e300, hi = -1e300;
        for (double v : act.values()) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 7; ++j) EXPECT_NEAR(maps[c](i, j), (act(i, j) - lo) / (hi - lo), 1e-12);
    }
}

TEST(Cam, FlatEvidenceGivesZeros) {
    Model m = Model::zeros(2, 2);
    std::mt19937_64 rng(39);
    for (const Plane& map : cam(m, random_image(rng, 5, 5)))
        for (double v : map.values()) EXPECT_EQ(v, 0.0);
}

TEST(Features, LayoutAndCoordinates) {
    std::mt19937_64 rng(40);
    const Image img = random_image(rng, 6, 8);
    const Features f = extract_features(img);
    EXPECT_EQ(f.low.channels(), FeatureSpec::kChannels);
    EXPECT_EQ(f.high.channels(), FeatureSpec::kChannels);
    EXPECT_EQ(f.low.name(6), "x");
    EXPECT_EQ(f.low[0], img.channel(0));
    EXPECT_DOUBLE_EQ(f.low[6](2, 4), 0.5);
    EXPECT_DOUBLE_EQ(f.low[7](3, 0), 0.5);
    for (double v : f.low[5].values()) EXPECT_GE(v, 0.0);
    EXPECT_EQ(fuse(f).channels(), FeatureSpec::kChannels);
}

TEST(FeatureSpec, IdRoundTrip) {
    FeatureSpec spec;
    EXPECT_EQ(spec.id(), "hf1-r4-t2-k3");
    spec.high_radius = 6;
    EXPECT_EQ(FeatureSpec::from_id(spec.id()), spec);
    EXPECT_THROW(FeatureSpec::from_id("hf9-r1-t1-k3"), InvalidArgument);
}

TEST(ModelIo, RoundTrip) {
    std::mt19937_64 rng(41);
    const Model m = random_model(rng, 3, 2, 1.0);
    const auto bytes = serialize_model(m);
    ASSERT_GE(bytes.size(), 4u);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "ALMD");
    EXPECT_EQ(deserialize_model(bytes), m);

    const auto path = std::filesystem::temp_directory_path() / "autolabel_model_io_test.bin";
    save_model(m, path);
    EXPECT_EQ(load_model(path), m);
    std::filesystem::remove(path);
}

TEST(ModelIo, RejectsCorruptRecords) {
    const auto bytes = serialize_model(Model::zeros(2));
    auto truncated = bytes;
    truncated.pop_back();
    EXPECT_THROW(deserialize_model(truncated), Error);
    auto trailing = bytes;
    trailing.push_back(0);
    EXPECT_THROW(deserialize_model(trailing), Error);
    auto magic = bytes;
    magic[0] = 'X';
    EXPECT_THROW(deserialize_model(magic), Error);
    EXPECT_THROW(load_model("/nonexistent/dir/model.bin"), IoError);
}

}  // namespace
}  // namespace autolabel
