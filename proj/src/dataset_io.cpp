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

#include "autolabel/dataset_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace autolabel {

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path.string());
    std::vector<ManifestEntry> entries;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        ManifestEntry e;
        std::string extra;
        if (!(fields >> e.image >> e.mask >> e.label) || (fields >> extra)) {
            throw InvalidArgument(path.string() + ":" + std::to_string(number) +
                                  ": expected '<image> <mask|-> <label|->'");
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write manifest " + path.string());
    for (const auto& e : entries) out << e.image << ' ' << e.mask << ' ' << e.label << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

Dataset load_dataset(const std::filesystem::path& dir) {
    const auto entries = read_manifest(dir / "manifest.txt");
    Dataset ds;
    for (const auto& e : entries) {
        ds.names.push_back(std::filesystem::path(e.image).stem().string());
        ds.images.push_back(load_ppm(dir / e.image));
        if (e.mask == "-") {
            ds.masks.emplace_back();
        } else {
            ds.masks.emplace_back(load_mask(dir / e.mask));
        }
        if (e.label == "-") {
            ds.labels.push_back(-1);
        } else {
            try {
                ds.labels.push_back(std::stoi(e.label));
            } catch (const std::exception&) {
                throw InvalidArgument("manifest label '" + e.label + "' is not an integer");
            }
        }
    }
    return ds;
}

void write_dataset(const std::filesystem::path& dir, const std::vector<SyntheticSample>& samples,
                   const std::string& prefix, bool with_labels) {
    std::filesystem::create_directories(dir / "images");
    std::filesystem::create_directories(dir / "masks");
    std::vector<ManifestEntry> entries;
    char name[64];
    for (std::size_t n = 0; n < samples.size(); ++n) {
        std::snprintf(name, sizeof name, "%s_%04zu", prefix.c_str(), n);
        const std::string image = std::string("images/") + name + ".ppm";
        const std::string mask = std::string("masks/") + name + ".pgm";
        save_pnm(samples[n].image, dir / image);
        save_mask(samples[n].mask, dir / mask);
        entries.push_back({image, mask, with_labels ? std::to_string(samples[n].label) : "-"});
    }
    write_manifest(dir / "manifest.txt", entries);
}

}  // namespace autolabel
