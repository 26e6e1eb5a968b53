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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "autolabel/image_core.hpp"

namespace autolabel {

/// IoU of class c; 1.0 when the class is absent from both masks.
double iou(const Mask& pred, const Mask& gt, int c);

double pixel_accuracy(const Mask& pred, const Mask& gt);

/// Dataset-level intersection and union counts per class.
struct ConfusionCounts {
    std::vector<std::uint64_t> intersection;
    std::vector<std::uint64_t> union_;

    explicit ConfusionCounts(int classes)
        : intersection(static_cast<std::size_t>(classes), 0),
          union_(static_cast<std::size_t>(classes), 0) {}

    void add(const Mask& pred, const Mask& gt);
};

struct MiouReport {
    /// Empty for classes absent from every prediction and ground truth.
    std::vector<std::optional<double>> class_iou;
    double miou = 0.0;

    /// `class_<c>_iou=<x.xxxxxx>` lines followed by `miou=<x.xxxxxx>`.
    std::string format() const;
};

/// Per-class IoU over aggregated counts, averaged over classes that occur.
MiouReport miou_report(std::span<const Mask> preds, std::span<const Mask> gts, int classes);
double miou(std::span<const Mask> preds, std::span<const Mask> gts, int classes);

/// Mask with every nonzero id mapped to 1.
Mask foreground(const Mask& mask);

}  // namespace autolabel
