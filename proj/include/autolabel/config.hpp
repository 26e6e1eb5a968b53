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
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "autolabel/self_training.hpp"
#include "autolabel/synth_data.hpp"

namespace autolabel {

/// Where a resolved configuration value came from.
enum class ConfigSource { Default, Environment, File, Flag };

struct ConfigKey {
    std::string name;
    std::string default_value;
    std::string help;
};

/// `key = value` settings with `#` comments. Later layers win:
/// built-in default < AUTOLABEL_SEED (seed only) < config file < flag.
class Config {
public:
    Config();

    static const std::vector<ConfigKey>& keys();
    static bool known(const std::string& key);

    void load_file(const std::filesystem::path& path);
    void parse(const std::string& text, const std::string& origin = "<config>");
    /// Applies AUTOLABEL_SEED when set, below file and flag values.
    void apply_environment();
    void set_flag(const std::string& key, const std::string& value);

    const std::string& get(const std::string& key) const;
    ConfigSource source(const std::string& key) const;
    int get_int(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    double get_double(const std::string& key) const;
    bool get_bool(const std::string& key) const;

private:
    void set(const std::string& key, const std::string& value, ConfigSource source);

    struct Entry {
        std::string value;
        ConfigSource source;
    };
    std::map<std::string, Entry> values_;
};

PipelineConfig pipeline_config(const Config& config);

/// Inputs for the bootstrap / iterate commands: either generated from the
/// built-in scenario or loaded from manifest directories.
struct Scenario {
    std::vector<Image> simple;
    std::vector<TrainingSample> source;    // transfer bootstrap
    std::vector<LabelledImage> labelled;   // CAM bootstrap (targets with labels)
    std::vector<Image> targets;
    std::vector<std::string> target_names;
    std::vector<std::optional<Mask>> target_truth;
    ValidationSplit validation;
    int image_classes = 0;
};

/// The built-in scene specs; `seed` and `side` come from the config.
SceneSpec simple_scene(const Config& config);
SceneSpec complex_scene(const Config& config);
SceneSpec cam_scene(const Config& config);

/// Builds the scenario for `strategy` ("transfer", "simple2complex", "cam").
Scenario build_scenario(const Config& config, const std::string& strategy);

}  // namespace autolabel
