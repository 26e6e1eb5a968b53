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
#include <string>

#include "autolabel/config.hpp"
#include "autolabel/self_training.hpp"

namespace autolabel {

/// Pixel classes needed for `strategy`: CAM masks carry one id per image
/// class on top of background.
int pixel_classes(const Scenario& scenario, const std::string& strategy, int configured);

/// Runs the configured bootstrap strategy on the scenario's targets.
BootstrapResult run_bootstrap(const Scenario& scenario, const std::string& strategy,
                              const PipelineConfig& cfg);

struct PipelineRun {
    Scenario scenario;
    PipelineConfig config;
    BootstrapResult bootstrap;
    IterationResult iteration;
};

/// Scenario, bootstrap and self-training rounds as set up by `config`.
PipelineRun run_pipeline(const Config& config);

/// Writes round_<k>/<name>.pgm for every round, report.txt and model.bin
/// (the best round's model).
void write_pipeline(const std::filesystem::path& out, const PipelineRun& run);

/// Writes masks/<name>.pgm and model.bin for a bootstrap result.
void write_bootstrap(const std::filesystem::path& out, const Scenario& scenario,
                     const BootstrapResult& result);

}  // namespace autolabel
