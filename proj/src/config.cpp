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

#include "autolabel/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "autolabel/dataset_io.hpp"

namespace autolabel {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

const std::vector<ConfigKey>& Config::keys() {
    static const std::vector<ConfigKey> table = {
        {"seed", "0", "master rng seed (fallback: AUTOLABEL_SEED)"},
        {"side", "48", "side length of generated images"},
        {"n_simple", "80", "generated simple images for simple2complex"},
        {"n_complex", "200", "generated complex target images"},
        {"n_val", "50", "target images scored as the validation split"},
        {"n_source", "64", "generated labelled source images for transfer"},
        {"complex_noise", "0.06", "additive noise amplitude of generated complex images"},
        {"simple_dir", "", "dataset directory with simple images (overrides generation)"},
        {"complex_dir", "", "dataset directory with target images (overrides generation)"},
        {"source_dir", "", "dataset directory with labelled source images"},
        {"strategy", "simple2complex", "bootstrap strategy: transfer | simple2complex | cam"},
        {"classes", "2", "pixel classes including background"},
        {"lr", "0.07", "initial learning rate"},
        {"momentum", "0.9", "SGD momentum"},
        {"weight_decay", "0.0002", "L2 weight decay"},
        {"batch", "8", "images per minibatch"},
        {"epochs", "4", "epochs per training call"},
        {"lr_step", "5", "divide the learning rate by 10 every this many epochs"},
        {"gf_r", "2", "guided filter radius"},
        {"gf_eps", "0.02", "guided filter epsilon"},
        {"sel_lo", "0.05", "lower area-ratio bound for pseudo-label selection"},
        {"sel_hi", "0.9", "upper area-ratio bound for pseudo-label selection"},
        {"tau", "0.4", "foreground probability threshold"},
        {"tau_cam", "0.2", "normalized CAM activation threshold"},
        {"patience", "1", "rounds without mIoU gain before stopping"},
        {"reinit", "false", "retrain from zeros each round instead of fine-tuning"},
        {"rounds", "8", "maximum self-training rounds"},
    };
    return table;
}

bool Config::known(const std::string& key) {
    const auto& k = keys();
    return std::any_of(k.begin(), k.end(), [&](const ConfigKey& c) { return c.name == key; });
}

Config::Config() {
    for (const auto& k : keys()) values_[k.name] = {k.default_value, ConfigSource::Default};
}

void Config::set(const std::string& key, const std::string& value, ConfigSource source) {
    if (!known(key)) throw InvalidArgument("unknown config key '" + key + "'");
    auto& entry = values_[key];
    if (source >= entry.source) entry = {value, source};
}

void Config::parse(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument(origin + ":" + std::to_string(number) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        if (!known(key)) {
            throw InvalidArgument(origin + ":" + std::to_string(number) + ": unknown key '" + key + "'");
        }
        set(key, trim(line.substr(eq + 1)), ConfigSource::File);
    }
}

void Config::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    parse(buffer.str(), path.string());
}

void Config::apply_environment() {
    if (const char* seed = std::getenv("AUTOLABEL_SEED"); seed != nullptr && *seed != '\0') {
        set("seed", seed, ConfigSource::Environment);
    }
}

void Config::set_flag(const std::string& key, const std::string& value) {
    set(key, value, ConfigSource::Flag);
}

const std::string& Config::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw InvalidArgument("unknown config key '" + key + "'");
    return it->second.value;
}

ConfigSource Config::source(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw InvalidArgument("unknown config key '" + key + "'");
    return it->second.source;
}

int Config::get_int(const std::string& key) const {
    const std::string& v = get(key);
    std::size_t used = 0;
    int out = 0;
    try {
        out = std::stoi(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size()) throw InvalidArgument(key + ": expected an integer, got '" + v + "'");
    return out;
}

std::uint64_t Config::get_u64(const std::string& key) const {
    const std::string& v = get(key);
    if (v.empty() || !std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw InvalidArgument(key + ": expected a non-negative integer, got '" + v + "'");
    }
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw InvalidArgument(key + ": value out of range '" + v + "'");
    }
}

double Config::get_double(const std::string& key) const {
    const std::string& v = get(key);
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size()) throw InvalidArgument(key + ": expected a number, got '" + v + "'");
    return out;
}

bool Config::get_bool(const std::string& key) const {
    const std::string& v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InvalidArgument(key + ": expected true/false, got '" + v + "'");
}

PipelineConfig pipeline_config(const Config& config) {
    PipelineConfig cfg;
    cfg.train.learning_rate = config.get_double("lr");
    cfg.train.momentum = config.get_double("momentum");
    cfg.train.weight_decay = config.get_double("weight_decay");
    cfg.train.batch_size = config.get_int("batch");
    cfg.train.epochs = config.get_int("epochs");
    cfg.train.lr_step_epochs = config.get_int("lr_step");
    cfg.train.seed = config.get_u64("seed");
    cfg.gf.radius = config.get_int("gf_r");
    cfg.gf.epsilon = config.get_double("gf_eps");
    cfg.policy.lo = config.get_double("sel_lo");
    cfg.policy.hi = config.get_double("sel_hi");
    cfg.policy.tau = config.get_double("tau");
    cfg.classes = config.get_int("classes");
    cfg.tau_cam = config.get_double("tau_cam");
    cfg.patience = config.get_int("patience");
    cfg.reinit_each_round = config.get_bool("reinit");
    cfg.validate();
    return cfg;
}

SceneSpec simple_scene(const Config& config) {
    SceneSpec spec;
    spec.side = config.get_int("side");
    spec.seed = config.get_u64("seed");
    spec.noise = 0.02;
    return spec;
}

SceneSpec complex_scene(const Config& config) {
    SceneSpec spec = simple_scene(config);
    spec.background = BackgroundMode::Texture;
    spec.noise = config.get_double("complex_noise");
    return spec;
}

SceneSpec cam_scene(const Config& config) {
    SceneSpec spec = simple_scene(config);
    // Bright and dark objects on a mid-gray background.
    spec.object_colors = {{0.92, 0.90, 0.85}, {0.10, 0.10, 0.14}};
    spec.background_lo = 0.45;
    spec.background_hi = 0.55;
    spec.background_saturation = 0.0;
    spec.dark_background_probability = 0.0;
    spec.noise = 0.05;
    return spec;
}

namespace {

void fill_targets(Scenario& s, std::vector<SyntheticSample> samples, int n_val) {
    for (std::size_t n = 0; n < samples.size(); ++n) {
        char name[32];
        std::snprintf(name, sizeof name, "target_%04zu", n);
        s.target_names.emplace_back(name);
        s.targets.push_back(samples[n].image);
        s.target_truth.emplace_back(samples[n].mask);
        s.labelled.push_back({samples[n].image, samples[n].label});
    }
    for (std::size_t n = 0; n < samples.size() && static_cast<int>(n) < n_val; ++n) {
        s.validation.indices.push_back(n);
        s.validation.ground_truth.push_back(samples[n].mask);
    }
}

}  // namespace

Scenario build_scenario(const Config& config, const std::string& strategy) {
    if (strategy != "transfer" && strategy != "simple2complex" && strategy != "cam") {
        throw InvalidArgument("unknown strategy '" + strategy + "'");
    }
    Scenario s;
    const int n_val = config.get_int("n_val");

    if (!config.get("complex_dir").empty()) {
        Dataset ds = load_dataset(config.get("complex_dir"));
        s.target_names = ds.names;
        s.targets = ds.images;
        s.target_truth = ds.masks;
        for (std::size_t n = 0; n < ds.size(); ++n) {
            if (ds.labels[n] >= 0) {
                s.labelled.push_back({ds.images[n], ds.labels[n]});
                s.image_classes = std::max(s.image_classes, ds.labels[n] + 1);
            }
            if (ds.masks[n] && static_cast<int>(s.validation.indices.size()) < n_val) {
                s.validation.indices.push_back(n);
                s.validation.ground_truth.push_back(*ds.masks[n]);
            }
        }
        if (strategy == "cam" && s.labelled.size() != s.targets.size()) {
            throw InvalidArgument("cam strategy needs an image-level label for every target");
        }
    } else if (strategy == "cam") {
        const SceneSpec spec = cam_scene(config);
        auto samples = gen_simple(spec, config.get_int("n_complex"));
        // Object pixels carry their image class, offset past background.
        for (auto& sample : samples) {
            for (auto& id : sample.mask.ids()) {
                if (id != 0) id = static_cast<std::uint8_t>(sample.label + 1);
            }
        }
        fill_targets(s, std::move(samples), n_val);
        s.image_classes = spec.image_classes();
    } else {
        fill_targets(s, gen_complex(complex_scene(config), config.get_int("n_complex")), n_val);
        s.labelled.clear();
    }

    if (strategy == "simple2complex") {
        if (!config.get("simple_dir").empty()) {
            s.simple = load_dataset(config.get("simple_dir")).images;
        } else {
            for (auto& sample : gen_simple(simple_scene(config), config.get_int("n_simple"))) {
                s.simple.push_back(std::move(sample.image));
            }
        }
    } else if (strategy == "transfer") {
        if (!config.get("source_dir").empty()) {
            Dataset ds = load_dataset(config.get("source_dir"));
            for (std::size_t n = 0; n < ds.size(); ++n) {
                if (!ds.masks[n]) throw InvalidArgument("transfer source images need masks");
                s.source.push_back({ds.images[n], *ds.masks[n], Mask{}});
            }
        } else {
            // Same scene family as the targets, disjoint seeds.
            SceneSpec spec = complex_scene(config);
            spec.seed = config.get_u64("seed") + 0x5EED;
            for (auto& sample : gen_complex(spec, config.get_int("n_source"))) {
                s.source.push_back({std::move(sample.image), std::move(sample.mask), Mask{}});
            }
        }
    }
    if (s.validation.indices.empty()) {
        throw InvalidArgument("scenario has no validation images with ground truth");
    }
    return s;
}

}  // namespace autolabel
