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

#include "autolabel/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include "autolabel/error.hpp"

namespace autolabel {

int pixel_classes(const Scenario& scenario, const std::string& strategy, int configured) {
    if (strategy == "cam") return std::max(configured, scenario.image_classes + 1);
    return configured;
}

BootstrapResult run_bootstrap(const Scenario& scenario, const std::string& strategy,
                              const PipelineConfig& cfg) {
    if (strategy == "transfer") {
        std::vector<Image> targets = scenario.targets;
        return bootstrap_transfer(scenario.source, targets, cfg);
    }
    if (strategy == "simple2complex") {
        return bootstrap_simple_to_complex(scenario.simple, scenario.targets, cfg);
    }
    if (strategy == "cam") return bootstrap_cam(scenario.labelled, scenario.image_classes, cfg);
    throw InvalidArgument("unknown strategy '" + strategy + "'");
}

PipelineRun run_pipeline(const Config& config) {
    PipelineRun run;
    const std::string strategy = config.get("strategy");
    run.scenario = build_scenario(config, strategy);
    run.config = pipeline_config(config);
    run.config.classes = pixel_classes(run.scenario, strategy, run.config.classes);
    run.bootstrap = run_bootstrap(run.scenario, strategy, run.config);
    run.iteration = iterate(run.bootstrap.masks, run.scenario.targets, run.scenario.validation,
                            run.config, config.get_int("rounds"));
    return run;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw IoError("cannot write " + path.string());
}

void write_masks(const std::filesystem::path& dir, const Scenario& scenario,
                 const std::vector<Mask>& masks) {
    std::filesystem::create_directories(dir);
    for (std::size_t n = 0; n < masks.size(); ++n) {
        save_mask(masks[n], dir / (scenario.target_names[n] + ".pgm"));
    }
}

}  // namespace

void write_pipeline(const std::filesystem::path& out, const PipelineRun& run) {
    std::filesystem::create_directories(out);
    const auto& it = run.iteration;
    for (std::size_t k = 0; k < it.reports.size(); ++k) {
        write_masks(out / it.reports[k].checkpoint, run.scenario, it.round_masks[k]);
    }
    write_text(out / "report.txt", format_reports(it.reports));
    save_model(it.best_model, out / "model.bin");
}

void write_bootstrap(const std::filesystem::path& out, const Scenario& scenario,
                     const BootstrapResult& result) {
    std::filesystem::create_directories(out);
    write_masks(out / "masks", scenario, result.masks);
    save_model(result.model, out / "model.bin");
}

}  // namespace autolabel
