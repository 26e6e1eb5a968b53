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

#include "autolabel/feature_fusion.hpp"

namespace autolabel {

namespace {

void require_compatible(const FeatureStack& a, const FeatureStack& b, const char* what) {
    if (a.channels() != b.channels()) {
        throw DimensionMismatch(std::string(what) + ": channel counts differ (" +
                                std::to_string(a.channels()) + " vs " +
                                std::to_string(b.channels()) + ")");
    }
    require_same_shape(a[0], b[0], what);
}

}  // namespace

FeatureStack::FeatureStack(std::vector<Plane> channels, std::vector<std::string> names)
    : planes_(std::move(channels)), names_(std::move(names)) {
    if (planes_.empty()) throw InvalidArgument("feature stack needs at least one channel");
    for (const auto& p : planes_) require_same_shape(planes_.front(), p, "feature stack");
    if (names_.empty()) {
        for (std::size_t c = 0; c < planes_.size(); ++c) names_.push_back("f" + std::to_string(c));
    }
    if (names_.size() != planes_.size()) {
        throw InvalidArgument("feature stack name count does not match channel count");
    }
}

FeatureStack hgl(const FeatureStack& high, const FeatureStack& low) {
    require_compatible(high, low, "hgl");
    std::vector<Plane> out;
    std::vector<std::string> names;
    for (int c = 0; c < high.channels(); ++c) {
        out.push_back(high[c] * low[c]);
        names.push_back("hgl_" + low.name(c));
    }
    return FeatureStack(std::move(out), std::move(names));
}

FeatureStack bg(const FeatureStack& high, const FeatureStack& low, const PoolSpec& spec) {
    require_compatible(high, low, "bg");
    std::vector<Plane> out;
    std::vector<std::string> names;
    for (int c = 0; c < high.channels(); ++c) {
        out.push_back(high[c] + low[c] * boundary_extract(high[c], spec));
        names.push_back("bg_" + high.name(c));
    }
    return FeatureStack(std::move(out), std::move(names));
}

}  // namespace autolabel
