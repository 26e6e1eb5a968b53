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

#include <string>
#include <vector>

#include "autolabel/image_core.hpp"
#include "autolabel/morphology.hpp"

namespace autolabel {

/// Ordered, named planes of identical size.
class FeatureStack {
public:
    FeatureStack() = default;
    FeatureStack(std::vector<Plane> channels, std::vector<std::string> names = {});

    int channels() const { return static_cast<int>(planes_.size()); }
    int height() const { return planes_.front().height(); }
    int width() const { return planes_.front().width(); }

    const Plane& operator[](int c) const { return planes_.at(static_cast<std::size_t>(c)); }
    Plane& operator[](int c) { return planes_.at(static_cast<std::size_t>(c)); }
    const std::string& name(int c) const { return names_.at(static_cast<std::size_t>(c)); }

    const std::vector<Plane>& planes() const { return planes_; }

    friend bool operator==(const FeatureStack&, const FeatureStack&) = default;

private:
    std::vector<Plane> planes_;
    std::vector<std::string> names_;
};

/// High-level-guided-low-level fusion: channelwise elementwise product.
FeatureStack hgl(const FeatureStack& high, const FeatureStack& low);

/// Boundary-guided fusion: out_c = high_c + low_c * D(high_c).
FeatureStack bg(const FeatureStack& high, const FeatureStack& low,
                const PoolSpec& spec = PoolSpec{});

}  // namespace autolabel
