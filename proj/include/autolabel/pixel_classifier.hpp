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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "autolabel/feature_fusion.hpp"
#include "autolabel/guided_filter.hpp"
#include "autolabel/image_core.hpp"

namespace autolabel {

/// Recipe for the handcrafted feature stacks. Low-level channels, in order:
/// R, G, B, gray, boundary(gray), local std of gray, x/width, y/height.
/// High-level channels are box means of the low-level ones.
struct FeatureSpec {
    static constexpr int kVersion = 1;
    static constexpr int kChannels = 8;

    int high_radius = 4;
    int texture_radius = 2;
    int boundary_kernel = 3;

    /// Stable identifier stored with serialized models, e.g. "hf1-r4-t2-k3".
    std::string id() const;
    static FeatureSpec from_id(const std::string& id);

    friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

struct Features {
    FeatureStack low;
    FeatureStack high;
};

Features extract_features(const Image& img, const FeatureSpec& spec = {});

/// bg(high, hgl(high, low)): the stack the linear heads read.
FeatureStack fuse(const Features& features, const FeatureSpec& spec = {});

/// First HGL channel, used as guidance for refinement.
Plane guidance(const Features& features);

/// Linear per-pixel softmax head plus an image-level GAP head.
struct Model {
    int classes = 2;
    int image_classes = 0;
    int features = FeatureSpec::kChannels;
    FeatureSpec feature_spec;

    std::vector<double> pixel_weights;  // classes x features, row-major
    std::vector<double> pixel_bias;     // classes
    std::vector<double> gap_weights;    // image_classes x features
    std::vector<double> gap_bias;       // image_classes

    static Model zeros(int classes, int image_classes = 0, FeatureSpec spec = {});

    void validate() const;
    std::size_t parameter_count() const;

    friend bool operator==(const Model&, const Model&) = default;
};

struct TrainConfig {
    double learning_rate = 0.007;
    double momentum = 0.9;
    double weight_decay = 0.0002;
    int batch_size = 8;
    int lr_step_epochs = 5;  // lr is divided by 10 this often
    int epochs = 10;
    std::uint64_t seed = 0;

    void validate() const;
    double learning_rate_at(int epoch) const;
};

struct TrainingSample {
    Image image;
    Mask target;
    /// Nonzero where the pixel takes part in the loss. Empty means all pixels.
    Mask valid;
};

struct LabelledImage {
    Image image;
    int label = 0;
};

/// Softmax of the pixel head on precomputed fused features (no refinement).
ProbMap pixel_probabilities(const Model& model, const FeatureStack& fused);

/// Full pipeline: features, fusion, softmax head, guided refinement.
ProbMap forward(const Model& model, const Image& img, const GuidedFilterParams& gf);

/// Mean per-pixel cross-entropy; probabilities are clamped to >= 1e-12.
double loss(const ProbMap& probs, const Mask& target);

/// Parameter gradient laid out like the model's weight/bias vectors.
struct Gradient {
    std::vector<double> weights;
    std::vector<double> bias;
};

struct LossAndGradient {
    double loss = 0.0;
    Gradient gradient;
    std::uint64_t pixels = 0;
};

/// Cross-entropy of the pixel head averaged over valid pixels, with its
/// analytic gradient. An empty `valid` mask counts every pixel.
LossAndGradient pixel_loss_gradient(const Model& model, const FeatureStack& fused,
                                    const Mask& target, const Mask& valid = {});

/// Spatial mean of every channel.
std::vector<double> global_average_pool(const FeatureStack& fused);

/// Cross-entropy of the GAP head averaged over images, with its gradient.
LossAndGradient gap_loss_gradient(const Model& model, std::span<const FeatureStack> fused,
                                  std::span<const int> labels);

struct TrainResult {
    Model model;
    std::vector<double> epoch_loss;  // mean loss over valid pixels per epoch
};

/// Minibatch SGD with momentum and weight decay on the pixel head, starting
/// from `model`. Samples without valid pixels are dropped before shuffling.
TrainResult train_with_history(Model model, std::span<const TrainingSample> dataset,
                               const TrainConfig& cfg);
Model train(Model model, std::span<const TrainingSample> dataset, const TrainConfig& cfg);

/// Trains the GAP head of `model` (image_classes must be set) on image-level
/// labels. The pixel head is left untouched.
TrainResult train_image_classifier(Model model, std::span<const LabelledImage> images,
                                   const TrainConfig& cfg);

/// Image-level class scores of the GAP head.
std::vector<double> classify(const Model& model, const Image& img);

/// Per-class activation maps gapW_c . fused(i,j), each min-max normalized to
/// [0,1]; a constant map becomes all zeros.
std::vector<Plane> cam(const Model& model, const Image& img);

// Model serialization: little-endian "ALMD" record.
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);
std::vector<std::uint8_t> serialize_model(const Model& model);
Model deserialize_model(std::span<const std::uint8_t> bytes);

}  // namespace autolabel
