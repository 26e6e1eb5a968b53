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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "autolabel/guided_filter.hpp"
#include "autolabel/image_core.hpp"
#include "autolabel/pixel_classifier.hpp"

namespace autolabel {

/// Images are kept for training when lo <= area ratio <= hi.
struct SelectionPolicy {
    double lo = 0.1;
    double hi = 0.9;
    double tau = 0.5;  // binarization threshold on the class-1 probability

    void validate() const;
};

/// Fraction of nonzero pixels.
double area_ratio(const Mask& mask);

struct Selection {
    std::vector<std::size_t> selected;
    std::vector<std::size_t> rejected;
};

Selection select_reliable(std::span<const Mask> masks, const SelectionPolicy& policy);

/// Two classes: foreground where p1 >= tau. More classes: argmax, ties to the
/// lowest id.
Mask binarize(const ProbMap& probs, double tau);

/// Everything the bootstrap and refinement loop need besides the data.
struct PipelineConfig {
    TrainConfig train;
    GuidedFilterParams gf;
    SelectionPolicy policy;
    int classes = 2;
    FeatureSpec features;
    double tau_cam = 0.2;
    int patience = 1;
    bool reinit_each_round = false;

    void validate() const;
};

struct BootstrapResult {
    Model model;
    std::vector<Mask> masks;
};

/// forward + binarize for every image.
std::vector<Mask> predict_masks(const Model& model, std::span<const Image> images,
                                const PipelineConfig& cfg);

/// Train on a labelled source set, then label the targets.
BootstrapResult bootstrap_transfer(std::span<const TrainingSample> source,
                                   std::span<const Image> targets, const PipelineConfig& cfg);

/// Otsu masks on simple images become training data for the complex ones.
BootstrapResult bootstrap_simple_to_complex(std::span<const Image> simple,
                                            std::span<const Image> complex,
                                            const PipelineConfig& cfg);

/// CAM bootstrap from image-level labels. Each image is labelled with the
/// activation map of its own class: pixels whose normalized activation
/// reaches tau_cam become that class (id label + 1), the rest background.
/// The one-hot map is refined with the grayscale image as guidance.
BootstrapResult bootstrap_cam(std::span<const LabelledImage> images, int image_classes,
                              const PipelineConfig& cfg);

struct ValidationSplit {
    std::vector<std::size_t> indices;  // into the target list
    std::vector<Mask> ground_truth;    // one per index
};

struct IterationReport {
    int round = 0;
    double miou = 0.0;
    std::size_t selected = 0;
    std::size_t rejected = 0;
    std::string checkpoint;  // e.g. "round_3"
};

struct IterationResult {
    Model best_model;
    std::vector<Mask> best_masks;
    int best_round = 0;
    double best_miou = 0.0;
    std::vector<IterationReport> reports;
    std::vector<std::vector<Mask>> round_masks;  // predictions after each round
    bool stopped_early = false;
    bool starved = false;  // a round selected no images
};

/// Self-training loop: select reliable pseudo labels, train, relabel, score
/// on the validation split. Stops once validation mIoU has not improved on
/// the best round for `patience` consecutive rounds and returns the best
/// round. `start` is the model the first round fine-tunes (zeros if empty).
IterationResult iterate(std::span<const Mask> initial_masks, std::span<const Image> targets,
                        const ValidationSplit& validation, const PipelineConfig& cfg,
                        int max_rounds, std::optional<Model> start = std::nullopt);

/// One line per round: `<round> <miou> <selected> <rejected>`.
std::string format_reports(std::span<const IterationReport> reports);

struct SweepPoint {
    int radius;
    double epsilon;
    double miou;
};

/// Scores every (r, eps) pair by validation mIoU for a fixed model. Results
/// follow the r-major order of the inputs; ties keep the first pair.
std::vector<SweepPoint> grid_search_gf(const Model& model, std::span<const Image> images,
                                       std::span<const Mask> ground_truth,
                                       std::span<const int> radii,
                                       std::span<const double> epsilons,
                                       const PipelineConfig& cfg);

const SweepPoint& best_point(std::span<const SweepPoint> points);

}  // namespace autolabel
