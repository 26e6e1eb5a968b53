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

#include "autolabel/evaluation.hpp"

#include <cstdio>

namespace autolabel {

namespace {

void require_same_mask_shape(const Mask& a, const Mask& b, const char* what) {
    if (!a.same_shape(b)) {
        throw DimensionMismatch(std::string(what) + ": mask sizes differ");
    }
}

}  // namespace

double iou(const Mask& pred, const Mask& gt, int c) {
    require_same_mask_shape(pred, gt, "iou");
    std::uint64_t inter = 0, uni = 0;
    const auto p = pred.ids();
    const auto g = gt.ids();
    for (std::size_t k = 0; k < p.size(); ++k) {
        const bool a = p[k] == c;
        const bool b = g[k] == c;
        inter += a && b;
        uni += a || b;
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double pixel_accuracy(const Mask& pred, const Mask& gt) {
    require_same_mask_shape(pred, gt, "pixel_accuracy");
    std::uint64_t same = 0;
    const auto p = pred.ids();
    const auto g = gt.ids();
    for (std::size_t k = 0; k < p.size(); ++k) same += p[k] == g[k];
    return static_cast<double>(same) / static_cast<double>(p.size());
}

void ConfusionCounts::add(const Mask& pred, const Mask& gt) {
    require_same_mask_shape(pred, gt, "miou");
    const auto classes = intersection.size();
    const auto p = pred.ids();
    const auto g = gt.ids();
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] >= classes || g[k] >= classes) {
            throw InvalidArgument("mask class id " + std::to_string(std::max(p[k], g[k])) +
                                  " out of range for " + std::to_string(classes) + " classes");
        }
        if (p[k] == g[k]) {
            ++intersection[p[k]];
            ++union_[p[k]];
        } else {
            ++union_[p[k]];
            ++union_[g[k]];
        }
    }
}

std::string MiouReport::format() const {
    std::string out;
    char line[64];
    for (std::size_t c = 0; c < class_iou.size(); ++c) {
        if (!class_iou[c]) continue;
        std::snprintf(line, sizeof line, "class_%zu_iou=%.6f\n", c, *class_iou[c]);
        out += line;
    }
    std::snprintf(line, sizeof line, "miou=%.6f\n", miou);
    out += line;
    return out;
}

MiouReport miou_report(std::span<const Mask> preds, std::span<const Mask> gts, int classes) {
    if (preds.empty()) throw InvalidArgument("miou: empty dataset");
    if (preds.size() != gts.size()) throw DimensionMismatch("miou: prediction/gt count mismatch");
    if (classes < 1) throw InvalidArgument("miou: classes must be >= 1");

    ConfusionCounts counts(classes);
    for (std::size_t n = 0; n < preds.size(); ++n) counts.add(preds[n], gts[n]);

    MiouReport report;
    double sum = 0.0;
    int present = 0;
    for (int c = 0; c < classes; ++c) {
        const auto uni = counts.union_[static_cast<std::size_t>(c)];
        if (uni == 0) {
            report.class_iou.emplace_back();
            continue;
        }
        const double value =
            static_cast<double>(counts.intersection[static_cast<std::size_t>(c)]) /
            static_cast<double>(uni);
        report.class_iou.emplace_back(value);
        sum += value;
        ++present;
    }
    report.miou = present == 0 ? 1.0 : sum / present;
    return report;
}

double miou(std::span<const Mask> preds, std::span<const Mask> gts, int classes) {
    return miou_report(preds, gts, classes).miou;
}

Mask foreground(const Mask& mask) {
    Mask out(mask.height(), mask.width());
    auto o = out.ids();
    const auto m = mask.ids();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] = m[k] != 0 ? 1 : 0;
    return out;
}

}  // namespace autolabel
