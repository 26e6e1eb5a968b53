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

#include "autolabel/self_training.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "autolabel/evaluation.hpp"
#include "autolabel/thresholding.hpp"

namespace autolabel {

void SelectionPolicy::validate() const {
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
        throw InvalidArgument("selection bounds must satisfy 0 <= lo < hi <= 1");
    }
    if (!(tau > 0.0 && tau < 1.0)) throw InvalidArgument("binarize threshold must be in (0,1)");
}

void PipelineConfig::validate() const {
    train.validate();
    gf.validate();
    policy.validate();
    if (classes < 2 || classes > 255) throw InvalidArgument("pipeline needs 2..255 classes");
    if (!(tau_cam >= 0.0 && tau_cam <= 1.0)) throw InvalidArgument("tau_cam must be in [0,1]");
    if (patience < 1) throw InvalidArgument("patience must be >= 1");
}

double area_ratio(const Mask& mask) {
    const auto ids = mask.ids();
    const auto labelled = std::count_if(ids.begin(), ids.end(), [](std::uint8_t v) { return v != 0; });
    return static_cast<double>(labelled) / static_cast<double>(ids.size());
}

Selection select_reliable(std::span<const Mask> masks, const SelectionPolicy& policy) {
    policy.validate();
    Selection out;
    for (std::size_t n = 0; n < masks.size(); ++n) {
        const double ratio = area_ratio(masks[n]);
        (ratio >= policy.lo && ratio <= policy.hi ? out.selected : out.rejected).push_back(n);
    }
    return out;
}

Mask binarize(const ProbMap& probs, double tau) {
    if (probs.classes() < 2) throw InvalidArgument("binarize needs at least two classes");
    Mask out(probs.height(), probs.width());
    auto ids = out.ids();
    if (probs.classes() == 2) {
        const auto p1 = probs.channels[1].values();
        for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = p1[k] >= tau ? 1 : 0;
        return out;
    }
    for (std::size_t k = 0; k < ids.size(); ++k) {
        int best = 0;
        for (int c = 1; c < probs.classes(); ++c) {
            if (probs.channels[static_cast<std::size_t>(c)].values()[k] >
                probs.channels[static_cast<std::size_t>(best)].values()[k]) {
                best = c;
            }
        }
        ids[k] = static_cast<std::uint8_t>(best);
    }
    return out;
}

std::vector<Mask> predict_masks(const Model& model, std::span<const Image> images,
                                const PipelineConfig& cfg) {
    std::vector<Mask> masks;
    masks.reserve(images.size());
    for (const auto& img : images) masks.push_back(binarize(forward(model, img, cfg.gf), cfg.policy.tau));
    return masks;
}

BootstrapResult bootstrap_transfer(std::span<const TrainingSample> source,
                                   std::span<const Image> targets, const PipelineConfig& cfg) {
    cfg.validate();
    if (source.empty()) throw InvalidArgument("bootstrap_transfer: empty source set");
    Model model = train(Model::zeros(cfg.classes, 0, cfg.features), source, cfg.train);
    auto masks = predict_masks(model, targets, cfg);
    return {std::move(model), std::move(masks)};
}

BootstrapResult bootstrap_simple_to_complex(std::span<const Image> simple,
                                            std::span<const Image> complex,
                                            const PipelineConfig& cfg) {
    if (simple.empty()) throw InvalidArgument("bootstrap_simple_to_complex: no simple images");
    std::vector<TrainingSample> source;
    source.reserve(simple.size());
    for (const auto& img : simple) source.push_back({img, otsu_mask(img, Polarity::Auto), Mask{}});
    return bootstrap_transfer(source, complex, cfg);
}

BootstrapResult bootstrap_cam(std::span<const LabelledImage> images, int image_classes,
                              const PipelineConfig& cfg) {
    cfg.validate();
    if (images.empty()) throw InvalidArgument("bootstrap_cam: no images");
    if (image_classes < 2) throw InvalidArgument("bootstrap_cam: needs at least two image classes");
    std::set<int> seen;
    for (const auto& li : images) seen.insert(li.label);
    if (seen.size() < 2) {
        throw InvalidArgument("bootstrap_cam: images cover a single class; CAM needs two or more");
    }

    Model model = train_image_classifier(Model::zeros(cfg.classes, image_classes, cfg.features),
                                         images, cfg.train)
                      .model;

    std::vector<Mask> masks;
    masks.reserve(images.size());
    for (const auto& li : images) {
        const Plane act = cam(model, li.image)[static_cast<std::size_t>(li.label)];
        ProbMap onehot;
        onehot.channels.assign(2, Plane(act.height(), act.width()));
        for (std::size_t k = 0; k < act.size(); ++k) {
            const bool fg = act.values()[k] >= cfg.tau_cam;
            onehot.channels[0].values()[k] = fg ? 0.0 : 1.0;
            onehot.channels[1].values()[k] = fg ? 1.0 : 0.0;
        }
        Mask mask = binarize(refine_probmap(to_grayscale(li.image), onehot, cfg.gf), cfg.policy.tau);
        for (auto& id : mask.ids()) id = id ? static_cast<std::uint8_t>(li.label + 1) : 0;
        masks.push_back(std::move(mask));
    }
    return {std::move(model), std::move(masks)};
}

IterationResult iterate(std::span<const Mask> initial_masks, std::span<const Image> targets,
                        const ValidationSplit& validation, const PipelineConfig& cfg,
                        int max_rounds, std::optional<Model> start) {
    cfg.validate();
    if (max_rounds < 1) throw InvalidArgument("iterate: max_rounds must be >= 1");
    if (initial_masks.size() != targets.size()) {
        throw DimensionMismatch("iterate: one initial mask per target image required");
    }
    if (validation.indices.empty() || validation.indices.size() != validation.ground_truth.size()) {
        throw InvalidArgument("iterate: validation split needs ground truth for every index");
    }
    for (auto idx : validation.indices) {
        if (idx >= targets.size()) throw InvalidArgument("iterate: validation index out of range");
    }

    const Model fresh = Model::zeros(cfg.classes, 0, cfg.features);
    Model model = start ? *start : fresh;
    std::vector<Mask> current(initial_masks.begin(), initial_masks.end());

    IterationResult result;
    int stale = 0;
    for (int round = 1; round <= max_rounds; ++round) {
        const Selection sel = select_reliable(current, cfg.policy);
        if (sel.selected.empty()) {
            result.starved = true;
            break;
        }

        // Rejected images stay in the list with an empty validity mask, which
        // removes them before batching.
        std::vector<TrainingSample> dataset;
        dataset.reserve(targets.size());
        std::vector<bool> keep(targets.size(), false);
        for (auto idx : sel.selected) keep[idx] = true;
        for (std::size_t n = 0; n < targets.size(); ++n) {
            dataset.push_back({targets[n], current[n],
                               Mask(targets[n].height(), targets[n].width(), keep[n] ? 1 : 0)});
        }

        TrainConfig round_cfg = cfg.train;
        round_cfg.seed = cfg.train.seed + static_cast<std::uint64_t>(round);
        model = train(cfg.reinit_each_round ? fresh : model, dataset, round_cfg);

        std::vector<Mask> predicted = predict_masks(model, targets, cfg);
        std::vector<Mask> val_pred;
        for (auto idx : validation.indices) val_pred.push_back(predicted[idx]);
        const double score = miou(val_pred, validation.ground_truth, cfg.classes);

        result.reports.push_back({round, score, sel.selected.size(), sel.rejected.size(),
                                  "round_" + std::to_string(round)});
        result.round_masks.push_back(predicted);

        if (result.best_round == 0 || score > result.best_miou) {
            result.best_round = round;
            result.best_miou = score;
            result.best_model = model;
            result.best_masks = predicted;
            stale = 0;
        } else if (++stale >= cfg.patience) {
            result.stopped_early = round < max_rounds;
            break;
        }
        current = std::move(predicted);
    }
    if (result.best_round == 0) {
        throw Error("iterate: no image passed pseudo-label selection in the first round");
    }
    return result;
}

std::string format_reports(std::span<const IterationReport> reports) {
    std::string out;
    char line[96];
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line, "%d %.6f %zu %zu\n", r.round, r.miou, r.selected, r.rejected);
        out += line;
    }
    return out;
}

std::vector<SweepPoint> grid_search_gf(const Model& model, std::span<const Image> images,
                                       std::span<const Mask> ground_truth,
                                       std::span<const int> radii,
                                       std::span<const double> epsilons,
                                       const PipelineConfig& cfg) {
    if (radii.empty() || epsilons.empty()) throw InvalidArgument("grid search needs candidates");
    if (images.size() != ground_truth.size() || images.empty()) {
        throw InvalidArgument("grid search needs one ground-truth mask per image");
    }
    std::vector<SweepPoint> points;
    for (int r : radii) {
        for (double eps : epsilons) {
            PipelineConfig trial = cfg;
            trial.gf = GuidedFilterParams{r, eps};
            trial.gf.validate();
            const auto preds = predict_masks(model, images, trial);
            points.push_back({r, eps, miou(preds, ground_truth, cfg.classes)});
        }
    }
    return points;
}

const SweepPoint& best_point(std::span<const SweepPoint> points) {
    if (points.empty()) throw InvalidArgument("no sweep points");
    const SweepPoint* best = &points.front();
    for (const auto& p : points) {
        if (p.miou > best->miou) best = &p;
    }
    return *best;
}

}  // namespace autolabel
