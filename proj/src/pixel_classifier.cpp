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

#include "autolabel/pixel_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "autolabel/morphology.hpp"

namespace autolabel {

namespace {

constexpr double kLogFloor = 1e-12;

// Numerically stable softmax in place.
void softmax(std::span<double> z) {
    const double top = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (double& v : z) {
        v = std::exp(v - top);
        total += v;
    }
    for (double& v : z) v /= total;
}

void require_model_matches(const Model& model, const FeatureStack& fused) {
    if (fused.channels() != model.features) {
        throw DimensionMismatch("model expects " + std::to_string(model.features) +
                                " feature channels, got " + std::to_string(fused.channels()));
    }
}

// Unnormalized pixel-head loss and gradient sums over valid pixels.
void accumulate_pixel(const Model& model, const FeatureStack& fused, const Mask& target,
                      const Mask& valid, LossAndGradient& acc) {
    require_model_matches(model, fused);
    if (target.height() != fused.height() || target.width() != fused.width()) {
        throw DimensionMismatch("target mask does not match image size");
    }
    const bool use_valid = valid.size() > 0;
    if (use_valid && !valid.same_shape(target)) {
        throw DimensionMismatch("validity mask does not match target size");
    }

    const int C = model.classes;
    const int F = model.features;
    std::vector<double> f(static_cast<std::size_t>(F));
    std::vector<double> z(static_cast<std::size_t>(C));
    const auto t = target.ids();
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (use_valid && valid.ids()[k] == 0) continue;
        if (t[k] >= C) {
            throw InvalidArgument("target class " + std::to_string(t[k]) + " out of range for " +
                                  std::to_string(C) + " classes");
        }
        for (int c = 0; c < F; ++c) f[static_cast<std::size_t>(c)] = fused[c].values()[k];
        for (int c = 0; c < C; ++c) {
            double s = model.pixel_bias[static_cast<std::size_t>(c)];
            for (int q = 0; q < F; ++q) {
                s += model.pixel_weights[static_cast<std::size_t>(c * F + q)] *
                     f[static_cast<std::size_t>(q)];
            }
            z[static_cast<std::size_t>(c)] = s;
        }
        softmax(z);
        acc.loss -= std::log(std::max(z[t[k]], kLogFloor));
        for (int c = 0; c < C; ++c) {
            const double delta = z[static_cast<std::size_t>(c)] - (c == t[k] ? 1.0 : 0.0);
            acc.gradient.bias[static_cast<std::size_t>(c)] += delta;
            for (int q = 0; q < F; ++q) {
                acc.gradient.weights[static_cast<std::size_t>(c * F + q)] +=
                    delta * f[static_cast<std::size_t>(q)];
            }
        }
        ++acc.pixels;
    }
}

LossAndGradient empty_accumulator(std::size_t weights, std::size_t bias) {
    LossAndGradient acc;
    acc.gradient.weights.assign(weights, 0.0);
    acc.gradient.bias.assign(bias, 0.0);
    return acc;
}

void scale(LossAndGradient& acc, double factor) {
    acc.loss *= factor;
    for (double& g : acc.gradient.weights) g *= factor;
    for (double& g : acc.gradient.bias) g *= factor;
}

// Fisher-Yates on raw engine output, so the permutation depends only on the
// seed and not on the standard library's distribution implementation.
void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
    for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }
}

struct Sgd {
    const TrainConfig& cfg;
    std::vector<double> velocity_w;
    std::vector<double> velocity_b;

    Sgd(const TrainConfig& c, std::size_t nw, std::size_t nb)
        : cfg(c), velocity_w(nw, 0.0), velocity_b(nb, 0.0) {}

    void step(std::vector<double>& weights, std::vector<double>& bias, const Gradient& grad,
              double lr) {
        for (std::size_t k = 0; k < weights.size(); ++k) {
            velocity_w[k] = cfg.momentum * velocity_w[k] +
                            lr * (grad.weights[k] + cfg.weight_decay * weights[k]);
            weights[k] -= velocity_w[k];
        }
        for (std::size_t k = 0; k < bias.size(); ++k) {
            velocity_b[k] = cfg.momentum * velocity_b[k] + lr * grad.bias[k];
            bias[k] -= velocity_b[k];
        }
    }
};

void require_finite(const Model& model) {
    auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (!finite(model.pixel_weights) || !finite(model.pixel_bias) || !finite(model.gap_weights) ||
        !finite(model.gap_bias)) {
        throw Error("training diverged: non-finite model parameters");
    }
}

}  // namespace

// ---------------------------------------------------------------------------

std::string FeatureSpec::id() const {
    return "hf" + std::to_string(kVersion) + "-r" + std::to_string(high_radius) + "-t" +
           std::to_string(texture_radius) + "-k" + std::to_string(boundary_kernel);
}

FeatureSpec FeatureSpec::from_id(const std::string& id) {
    FeatureSpec spec;
    int version = 0;
    char tail = 0;
    if (std::sscanf(id.c_str(), "hf%d-r%d-t%d-k%d%c", &version, &spec.high_radius,
                    &spec.texture_radius, &spec.boundary_kernel, &tail) != 4 ||
        version != kVersion) {
        throw InvalidArgument("unknown feature spec '" + id + "'");
    }
    return spec;
}

Features extract_features(const Image& img, const FeatureSpec& spec) {
    const int h = img.height();
    const int w = img.width();
    const Plane gray = to_grayscale(img);

    const Plane local_mean = box_mean(gray, spec.texture_radius);
    const Plane local_sq = box_mean(gray * gray, spec.texture_radius);
    Plane texture(h, w);
    for (std::size_t k = 0; k < texture.size(); ++k) {
        const double m = local_mean.values()[k];
        texture.values()[k] = std::sqrt(std::max(0.0, local_sq.values()[k] - m * m));
    }

    Plane xs(h, w), ys(h, w);
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            xs(i, j) = static_cast<double>(j) / w;
            ys(i, j) = static_cast<double>(i) / h;
        }
    }

    std::vector<Plane> low{img.channel(0), img.channel(1), img.channel(2), gray,
                           boundary_extract(gray, PoolSpec::same_size(spec.boundary_kernel)),
                           std::move(texture), std::move(xs), std::move(ys)};
    std::vector<std::string> names{"r", "g", "b", "gray", "boundary", "texture", "x", "y"};

    std::vector<Plane> high;
    std::vector<std::string> high_names;
    for (std::size_t c = 0; c < low.size(); ++c) {
        high.push_back(box_mean(low[c], spec.high_radius));
        high_names.push_back("mean_" + names[c]);
    }
    return {FeatureStack(std::move(low), std::move(names)),
            FeatureStack(std::move(high), std::move(high_names))};
}

FeatureStack fuse(const Features& features, const FeatureSpec& spec) {
    return bg(features.high, hgl(features.high, features.low),
              PoolSpec::same_size(spec.boundary_kernel));
}

Plane guidance(const Features& features) { return features.high[0] * features.low[0]; }

// ---------------------------------------------------------------------------

Model Model::zeros(int classes, int image_classes, FeatureSpec spec) {
    Model m;
    m.classes = classes;
    m.image_classes = image_classes;
    m.features = FeatureSpec::kChannels;
    m.feature_spec = spec;
    m.pixel_weights.assign(static_cast<std::size_t>(classes * m.features), 0.0);
    m.pixel_bias.assign(static_cast<std::size_t>(classes), 0.0);
    m.gap_weights.assign(static_cast<std::size_t>(image_classes * m.features), 0.0);
    m.gap_bias.assign(static_cast<std::size_t>(image_classes), 0.0);
    m.validate();
    return m;
}

void Model::validate() const {
    if (classes < 1 || classes > 255) throw InvalidArgument("model class count must be in [1,255]");
    if (image_classes < 0) throw InvalidArgument("model image class count must be >= 0");
    if (features != FeatureSpec::kChannels) {
        throw InvalidArgument("model feature count does not match feature spec");
    }
    if (pixel_weights.size() != static_cast<std::size_t>(classes * features) ||
        pixel_bias.size() != static_cast<std::size_t>(classes) ||
        gap_weights.size() != static_cast<std::size_t>(image_classes * features) ||
        gap_bias.size() != static_cast<std::size_t>(image_classes)) {
        throw InvalidArgument("model parameter blocks are inconsistent with C/F");
    }
}

std::size_t Model::parameter_count() const {
    return pixel_weights.size() + pixel_bias.size() + gap_weights.size() + gap_bias.size();
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be > 0");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw InvalidArgument("momentum must be in [0,1)");
    if (!(weight_decay >= 0.0)) throw InvalidArgument("weight decay must be >= 0");
    if (batch_size < 1) throw InvalidArgument("batch size must be >= 1");
    if (lr_step_epochs < 1) throw InvalidArgument("lr step must be >= 1 epoch");
    if (epochs < 0) throw InvalidArgument("epochs must be >= 0");
}

double TrainConfig::learning_rate_at(int epoch) const {
    return learning_rate / std::pow(10.0, epoch / lr_step_epochs);
}

// ---------------------------------------------------------------------------

ProbMap pixel_probabilities(const Model& model, const FeatureStack& fused) {
    require_model_matches(model, fused);
    const int C = model.classes;
    const int F = model.features;
    ProbMap out;
    out.channels.assign(static_cast<std::size_t>(C), Plane(fused.height(), fused.width()));
    std::vector<double> z(static_cast<std::size_t>(C));
    const std::size_t n = fused[0].size();
    for (std::size_t k = 0; k < n; ++k) {
        for (int c = 0; c < C; ++c) {
            double s = model.pixel_bias[static_cast<std::size_t>(c)];
            for (int q = 0; q < F; ++q) {
                s += model.pixel_weights[static_cast<std::size_t>(c * F + q)] * fused[q].values()[k];
            }
            z[static_cast<std::size_t>(c)] = s;
        }
        softmax(z);
        for (int c = 0; c < C; ++c) {
            out.channels[static_cast<std::size_t>(c)].values()[k] = z[static_cast<std::size_t>(c)];
        }
    }
    return out;
}

ProbMap forward(const Model& model, const Image& img, const GuidedFilterParams& gf) {
    model.validate();
    const Features features = extract_features(img, model.feature_spec);
    const FeatureStack fused = fuse(features, model.feature_spec);
    return refine_probmap(guidance(features), pixel_probabilities(model, fused), gf);
}

double loss(const ProbMap& probs, const Mask& target) {
    if (probs.height() != target.height() || probs.width() != target.width()) {
        throw DimensionMismatch("loss: probability map and target differ in size");
    }
    const auto t = target.ids();
    double total = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] >= probs.classes()) {
            throw InvalidArgument("loss: target class " + std::to_string(t[k]) + " out of range");
        }
        total -= std::log(std::max(probs.channels[t[k]].values()[k], kLogFloor));
    }
    return total / static_cast<double>(t.size());
}

LossAndGradient pixel_loss_gradient(const Model& model, const FeatureStack& fused,
                                    const Mask& target, const Mask& valid) {
    auto acc = empty_accumulator(model.pixel_weights.size(), model.pixel_bias.size());
    accumulate_pixel(model, fused, target, valid, acc);
    if (acc.pixels > 0) scale(acc, 1.0 / static_cast<double>(acc.pixels));
    return acc;
}

std::vector<double> global_average_pool(const FeatureStack& fused) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(fused.channels()));
    for (const auto& plane : fused.planes()) {
        const auto v = plane.values();
        out.push_back(std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()));
    }
    return out;
}

namespace {

std::vector<double> gap_logits(const Model& model, const std::vector<double>& pooled) {
    const int F = model.features;
    std::vector<double> z(static_cast<std::size_t>(model.image_classes));
    for (int c = 0; c < model.image_classes; ++c) {
        double s = model.gap_bias[static_cast<std::size_t>(c)];
        for (int q = 0; q < F; ++q) {
            s += model.gap_weights[static_cast<std::size_t>(c * F + q)] *
                 pooled[static_cast<std::size_t>(q)];
        }
        z[static_cast<std::size_t>(c)] = s;
    }
    return z;
}

void accumulate_gap(const Model& model, const std::vector<double>& pooled, int label,
                    LossAndGradient& acc) {
    if (label < 0 || label >= model.image_classes) {
        throw InvalidArgument("image label " + std::to_string(label) + " out of range");
    }
    const int F = model.features;
    auto z = gap_logits(model, pooled);
    softmax(z);
    acc.loss -= std::log(std::max(z[static_cast<std::size_t>(label)], kLogFloor));
    for (int c = 0; c < model.image_classes; ++c) {
        const double delta = z[static_cast<std::size_t>(c)] - (c == label ? 1.0 : 0.0);
        acc.gradient.bias[static_cast<std::size_t>(c)] += delta;
        for (int q = 0; q < F; ++q) {
            acc.gradient.weights[static_cast<std::size_t>(c * F + q)] +=
                delta * pooled[static_cast<std::size_t>(q)];
        }
    }
    ++acc.pixels;
}

}  // namespace

LossAndGradient gap_loss_gradient(const Model& model, std::span<const FeatureStack> fused,
                                  std::span<const int> labels) {
    if (fused.size() != labels.size()) throw DimensionMismatch("gap: image/label count mismatch");
    auto acc = empty_accumulator(model.gap_weights.size(), model.gap_bias.size());
    for (std::size_t n = 0; n < fused.size(); ++n) {
        require_model_matches(model, fused[n]);
        accumulate_gap(model, global_average_pool(fused[n]), labels[n], acc);
    }
    if (acc.pixels > 0) scale(acc, 1.0 / static_cast<double>(acc.pixels));
    return acc;
}

// ---------------------------------------------------------------------------

TrainResult train_with_history(Model model, std::span<const TrainingSample> dataset,
                               const TrainConfig& cfg) {
    cfg.validate();
    model.validate();
    if (dataset.empty()) throw InvalidArgument("train: empty dataset");

    struct Prepared {
        FeatureStack fused;
        const TrainingSample* sample;
    };
    std::vector<Prepared> usable;
    for (const auto& s : dataset) {
        const bool any_valid = s.valid.size() == 0 ||
                               std::any_of(s.valid.ids().begin(), s.valid.ids().end(),
                                           [](std::uint8_t v) { return v != 0; });
        if (!any_valid) continue;
        usable.push_back({fuse(extract_features(s.image, model.feature_spec), model.feature_spec),
                          &s});
    }
    if (usable.empty()) throw InvalidArgument("train: no valid pixels in the dataset");

    std::mt19937_64 rng(cfg.seed);
    Sgd sgd(cfg, model.pixel_weights.size(), model.pixel_bias.size());
    std::vector<std::size_t> order(usable.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    TrainResult result;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle(order, rng);
        const double lr = cfg.learning_rate_at(epoch);
        double epoch_loss = 0.0;
        std::uint64_t epoch_pixels = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            auto acc = empty_accumulator(model.pixel_weights.size(), model.pixel_bias.size());
            for (std::size_t n = start; n < stop; ++n) {
                const Prepared& p = usable[order[n]];
                accumulate_pixel(model, p.fused, p.sample->target, p.sample->valid, acc);
            }
            epoch_loss += acc.loss;
            epoch_pixels += acc.pixels;
            scale(acc, 1.0 / static_cast<double>(acc.pixels));
            sgd.step(model.pixel_weights, model.pixel_bias, acc.gradient, lr);
        }
        result.epoch_loss.push_back(epoch_loss / static_cast<double>(epoch_pixels));
    }
    require_finite(model);
    result.model = std::move(model);
    return result;
}

Model train(Model model, std::span<const TrainingSample> dataset, const TrainConfig& cfg) {
    return train_with_history(std::move(model), dataset, cfg).model;
}

TrainResult train_image_classifier(Model model, std::span<const LabelledImage> images,
                                   const TrainConfig& cfg) {
    cfg.validate();
    model.validate();
    if (images.empty()) throw InvalidArgument("train_image_classifier: empty input");
    if (model.image_classes < 1) throw InvalidArgument("model has no image-level head");

    std::vector<std::vector<double>> pooled;
    for (const auto& li : images) {
        if (li.label < 0 || li.label >= model.image_classes) {
            throw InvalidArgument("image label " + std::to_string(li.label) + " out of range");
        }
        pooled.push_back(global_average_pool(
            fuse(extract_features(li.image, model.feature_spec), model.feature_spec)));
    }

    std::mt19937_64 rng(cfg.seed);
    Sgd sgd(cfg, model.gap_weights.size(), model.gap_bias.size());
    std::vector<std::size_t> order(images.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    TrainResult result;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle(order, rng);
        const double lr = cfg.learning_rate_at(epoch);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            auto acc = empty_accumulator(model.gap_weights.size(), model.gap_bias.size());
            for (std::size_t n = start; n < stop; ++n) {
                accumulate_gap(model, pooled[order[n]], images[order[n]].label, acc);
            }
            epoch_loss += acc.loss;
            scale(acc, 1.0 / static_cast<double>(acc.pixels));
            sgd.step(model.gap_weights, model.gap_bias, acc.gradient, lr);
        }
        result.epoch_loss.push_back(epoch_loss / static_cast<double>(images.size()));
    }
    require_finite(model);
    result.model = std::move(model);
    return result;
}

std::vector<double> classify(const Model& model, const Image& img) {
    model.validate();
    auto z = gap_logits(model, global_average_pool(fuse(extract_features(img, model.feature_spec),
                                                        model.feature_spec)));
    softmax(z);
    return z;
}

std::vector<Plane> cam(const Model& model, const Image& img) {
    model.validate();
    const FeatureStack fused = fuse(extract_features(img, model.feature_spec), model.feature_spec);
    const int F = model.features;
    std::vector<Plane> maps;
    for (int c = 0; c < model.image_classes; ++c) {
        Plane act(fused.height(), fused.width());
        for (int q = 0; q < F; ++q) {
            const double wq = model.gap_weights[static_cast<std::size_t>(c * F + q)];
            const auto f = fused[q].values();
            auto a = act.values();
            for (std::size_t k = 0; k < a.size(); ++k) a[k] += wq * f[k];
        }
        const auto [lo, hi] = std::minmax_element(act.values().begin(), act.values().end());
        const double low = *lo;
        const double range = *hi - *lo;
        for (double& v : act.values()) v = range > 0.0 ? (v - low) / range : 0.0;
        maps.push_back(std::move(act));
    }
    return maps;
}

}  // namespace autolabel
