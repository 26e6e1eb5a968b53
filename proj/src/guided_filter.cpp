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

#include "autolabel/guided_filter.hpp"

#include <algorithm>
#include <string>

namespace autolabel {

namespace {

struct Window {
    int top, left, bottom, right;  // half-open

    int count() const { return (bottom - top) * (right - left); }
    bool contains(int i, int j) const { return i >= top && i < bottom && j >= left && j < right; }
};

Window window_at(int i, int j, int radius, int h, int w) {
    return {std::max(0, i - radius), std::max(0, j - radius), std::min(h, i + radius + 1),
            std::min(w, j + radius + 1)};
}

struct WindowStats {
    double mean;
    double variance;  // population variance
};

WindowStats window_stats(const Plane& guide, const Window& win) {
    double sum = 0.0;
    for (int i = win.top; i < win.bottom; ++i)
        for (int j = win.left; j < win.right; ++j) sum += guide(i, j);
    const double mean = sum / win.count();
    double sq = 0.0;
    for (int i = win.top; i < win.bottom; ++i)
        for (int j = win.left; j < win.right; ++j) sq += (guide(i, j) - mean) * (guide(i, j) - mean);
    return {mean, sq / win.count()};
}

}  // namespace

void GuidedFilterParams::validate() const {
    if (radius < 0) throw InvalidArgument("guided filter radius must be >= 0");
    if (!(epsilon > 0.0)) throw InvalidArgument("guided filter epsilon must be > 0");
}

Plane guided_filter_naive(const Plane& guide, const Plane& input, const GuidedFilterParams& params) {
    params.validate();
    require_same_shape(guide, input, "guided_filter_naive");
    const int h = guide.height();
    const int w = guide.width();
    const int r = params.radius;

    std::vector<WindowStats> stats(guide.size());
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j)
            stats[static_cast<std::size_t>(i * w + j)] = window_stats(guide, window_at(i, j, r, h, w));

    Plane out(h, w);
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            const Window own = window_at(i, j, r, h, w);
            const double gi = guide(i, j);
            double acc = 0.0;
            // Windows w_k containing pixel (i, j) are exactly those centred in own.
            for (int ki = own.top; ki < own.bottom; ++ki) {
                for (int kj = own.left; kj < own.right; ++kj) {
                    const Window wk = window_at(ki, kj, r, h, w);
                    const WindowStats& s = stats[static_cast<std::size_t>(ki * w + kj)];
                    const double norm = 1.0 / (static_cast<double>(own.count()) * wk.count());
                    const double denom = s.variance + params.epsilon;
                    for (int qi = wk.top; qi < wk.bottom; ++qi) {
                        for (int qj = wk.left; qj < wk.right; ++qj) {
                            const double weight =
                                norm * (1.0 + (gi - s.mean) * (guide(qi, qj) - s.mean) / denom);
                            acc += weight * input(qi, qj);
                        }
                    }
                }
            }
            out(i, j) = acc;
        }
    }
    return out;
}

double guided_filter_weight(const Plane& guide, std::size_t i, std::size_t j,
                            const GuidedFilterParams& params) {
    params.validate();
    const int h = guide.height();
    const int w = guide.width();
    const int r = params.radius;
    const int ii = static_cast<int>(i) / w, ij = static_cast<int>(i) % w;
    const int ji = static_cast<int>(j) / w, jj = static_cast<int>(j) % w;
    const Window own = window_at(ii, ij, r, h, w);
    double weight = 0.0;
    for (int ki = own.top; ki < own.bottom; ++ki) {
        for (int kj = own.left; kj < own.right; ++kj) {
            const Window wk = window_at(ki, kj, r, h, w);
            if (!wk.contains(ji, jj)) continue;
            const WindowStats s = window_stats(guide, wk);
            weight += (1.0 + (guide(ii, ij) - s.mean) * (guide(ji, jj) - s.mean) /
                                 (s.variance + params.epsilon)) /
                      (static_cast<double>(own.count()) * wk.count());
        }
    }
    return weight;
}

Plane guided_filter_fast(const Plane& guide, const Plane& input, const GuidedFilterParams& params) {
    params.validate();
    require_same_shape(guide, input, "guided_filter_fast");
    const int r = params.radius;

    const Plane mean_i = box_mean(guide, r);
    const Plane mean_p = box_mean(input, r);
    const Plane corr_ii = box_mean(guide * guide, r);
    const Plane corr_ip = box_mean(guide * input, r);

    Plane a(guide.height(), guide.width());
    Plane b(guide.height(), guide.width());
    auto av = a.values();
    auto bv = b.values();
    const auto mi = mean_i.values();
    const auto mp = mean_p.values();
    const auto cii = corr_ii.values();
    const auto cip = corr_ip.values();
    for (std::size_t k = 0; k < av.size(); ++k) {
        const double variance = std::max(0.0, cii[k] - mi[k] * mi[k]);
        const double covariance = cip[k] - mi[k] * mp[k];
        av[k] = covariance / (variance + params.epsilon);
        bv[k] = mp[k] - av[k] * mi[k];
    }
    return box_mean(a, r) * guide + box_mean(b, r);
}

ProbMap refine_probmap(const Plane& guide, const ProbMap& probs, const GuidedFilterParams& params) {
    if (probs.channels.empty()) throw InvalidArgument("refine_probmap needs at least one class");
    for (const auto& ch : probs.channels) require_same_shape(guide, ch, "refine_probmap");

    ProbMap out;
    out.channels.reserve(probs.channels.size());
    for (const auto& ch : probs.channels) {
        Plane filtered = guided_filter_fast(guide, ch, params);
        for (double& v : filtered.values()) v = std::clamp(v, 0.0, 1.0);
        out.channels.push_back(std::move(filtered));
    }

    const double uniform = 1.0 / static_cast<double>(out.channels.size());
    for (std::size_t k = 0; k < guide.size(); ++k) {
        double total = 0.0;
        for (const auto& ch : out.channels) total += ch.values()[k];
        for (auto& ch : out.channels) {
            double& v = ch.values()[k];
            v = total > 0.0 ? v / total : uniform;
        }
    }
    return out;
}

}  // namespace autolabel
