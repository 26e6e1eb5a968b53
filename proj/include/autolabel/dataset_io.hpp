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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "autolabel/image_core.hpp"
#include "autolabel/synth_data.hpp"

namespace autolabel {

/// One manifest line: `<image path> <mask path or -> <label or ->`, paths
/// relative to the manifest's directory.
struct ManifestEntry {
    std::string image;
    std::string mask;   // "-" when absent
    std::string label;  // "-" when absent
};

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

struct Dataset {
    std::vector<std::string> names;  // image file stem
    std::vector<Image> images;
    std::vector<std::optional<Mask>> masks;
    std::vector<int> labels;  // -1 when absent

    std::size_t size() const { return images.size(); }
};

/// Loads `<dir>/manifest.txt` and everything it references.
Dataset load_dataset(const std::filesystem::path& dir);

/// Writes images/<prefix>_NNNN.ppm, masks/<prefix>_NNNN.pgm and manifest.txt.
void write_dataset(const std::filesystem::path& dir, const std::vector<SyntheticSample>& samples,
                   const std::string& prefix, bool with_labels);

}  // namespace autolabel
