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

#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "autolabel/config.hpp"
#include "autolabel/dataset_io.hpp"
#include "autolabel/evaluation.hpp"
#include "autolabel/guided_filter.hpp"
#include "autolabel/morphology.hpp"
#include "autolabel/pipeline.hpp"
#include "autolabel/synth_data.hpp"
#include "autolabel/thresholding.hpp"

namespace autolabel::cli {

namespace fs = std::filesystem;

namespace {

// Raised for bad flag combinations the parser cannot express.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// `--config <file>` plus one `--<key>` flag for every config key.
struct ConfigOptions {
    std::string file;
    std::map<std::string, std::string> flags;
};

void add_config_options(CLI::App* app, ConfigOptions& opts) {
    app->add_option("--config", opts.file, "key = value configuration file")
        ->check(CLI::ExistingFile);
    for (const auto& key : Config::keys()) {
        const std::string name = key.name;
        app->add_option_function<std::string>(
            "--" + name, [&opts, name](const std::string& v) { opts.flags[name] = v; },
            key.help + " (default: " + (key.default_value.empty() ? "none" : key.default_value) + ")");
    }
}

Config resolve(const ConfigOptions& opts) {
    Config config;
    config.apply_environment();
    if (!opts.file.empty()) config.load_file(opts.file);
    for (const auto& [key, value] : opts.flags) config.set_flag(key, value);
    return config;
}

Image load_image(const fs::path& path) {
    auto content = load_pnm(path);
    if (auto* plane = std::get_if<Plane>(&content)) return Image({*plane, *plane, *plane});
    return std::get<Image>(std::move(content));
}

void ensure_parent(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

// Masks keyed by file stem: from a dataset manifest when present, otherwise
// every .pgm file in the directory.
std::map<std::string, Mask> collect_masks(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::map<std::string, Mask> out;
    if (fs::exists(dir / "manifest.txt")) {
        for (const auto& e : read_manifest(dir / "manifest.txt")) {
            if (e.mask == "-") continue;
            out.emplace(fs::path(e.image).stem().string(), load_mask(dir / e.mask));
        }
        return out;
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
            out.emplace(entry.path().stem().string(), load_mask(entry.path()));
        }
    }
    return out;
}

void print_report(const MiouReport& report) { std::cout << report.format(); }

// ---------------------------------------------------------------------------

struct GenOptions {
    std::string mode = "simple";
    int n = 0;
    std::string out;
    ConfigOptions config;
};

void cmd_gen(const GenOptions& o) {
    const Config config = resolve(o.config);
    const bool simple = o.mode == "simple";
    const auto samples = simple ? gen_simple(simple_scene(config), o.n)
                                : gen_complex(complex_scene(config), o.n);
    write_dataset(o.out, samples, o.mode, true);
    std::cout << "wrote " << samples.size() << " " << o.mode << " images to " << o.out << "\n";
}

struct OtsuOptions {
    std::string in, out, polarity = "auto";
};

void cmd_otsu(const OtsuOptions& o) {
    const Image img = load_image(o.in);
    const Polarity polarity = o.polarity == "bright" ? Polarity::ForegroundBright
                              : o.polarity == "dark" ? Polarity::ForegroundDark
                                                     : Polarity::Auto;
    const Mask mask = otsu_mask(img, polarity);
    ensure_parent(o.out);
    save_mask(mask, o.out);
    std::cout << "threshold=" << static_cast<int>(otsu_threshold(histogram(to_grayscale(img))))
              << " foreground=" << area_ratio(mask) << "\n";
}

struct BoundaryOptions {
    std::string in, out;
    int kernel = 3;
};

void cmd_boundary(const BoundaryOptions& o) {
    const Plane edges = boundary_extract(to_grayscale(load_image(o.in)), PoolSpec::same_size(o.kernel));
    ensure_parent(o.out);
    save_pnm(edges, o.out);
}

struct GuideOptions {
    std::string image;
    std::vector<std::string> prob, out;
    int r = 2;
    double eps = 1e-2;
};

void cmd_guide(const GuideOptions& o) {
    if (o.prob.size() != o.out.size()) {
        throw UsageError("guide: --prob and --out need the same number of planes");
    }
    const Plane guide = to_grayscale(load_image(o.image));
    const GuidedFilterParams params{o.r, o.eps};
    params.validate();
    std::vector<Plane> result;
    if (o.prob.size() == 1) {
        result.push_back(guided_filter_fast(guide, load_pgm(o.prob[0]), params));
    } else {
        ProbMap pm;
        for (const auto& p : o.prob) pm.channels.push_back(load_pgm(p));
        result = refine_probmap(guide, pm, params).channels;
    }
    for (std::size_t c = 0; c < result.size(); ++c) {
        ensure_parent(o.out[c]);
        save_pnm(result[c], o.out[c]);
    }
}

struct PipelineOptions {
    std::string out;
    ConfigOptions config;
};

void cmd_bootstrap(const PipelineOptions& o) {
    const Config config = resolve(o.config);
    const std::string strategy = config.get("strategy");
    const Scenario scenario = build_scenario(config, strategy);
    PipelineConfig cfg = pipeline_config(config);
    cfg.classes = pixel_classes(scenario, strategy, cfg.classes);
    const BootstrapResult result = run_bootstrap(scenario, strategy, cfg);
    write_bootstrap(o.out, scenario, result);

    std::vector<Mask> preds;
    for (auto idx : scenario.validation.indices) preds.push_back(result.masks[idx]);
    print_report(miou_report(preds, scenario.validation.ground_truth, cfg.classes));
}

void cmd_iterate(const PipelineOptions& o) {
    const Config config = resolve(o.config);
    const PipelineRun run = run_pipeline(config);
    write_pipeline(o.out, run);
    const auto& it = run.iteration;
    std::cout << format_reports(it.reports);
    char line[128];
    std::snprintf(line, sizeof line, "best_round=%d best_miou=%.6f stop=%s\n", it.best_round,
                  it.best_miou,
                  it.starved ? "starved" : it.stopped_early ? "no-growth" : "max-rounds");
    std::cout << line;
}

struct EvalOptions {
    std::string pred, gt;
    int classes = 2;
};

void cmd_eval(const EvalOptions& o) {
    const auto preds = collect_masks(o.pred);
    const auto gts = collect_masks(o.gt);
    if (preds.empty()) throw UsageError("eval: no masks found in " + o.pred);
    std::vector<Mask> p, g;
    for (const auto& [name, mask] : preds) {
        const auto it = gts.find(name);
        if (it == gts.end()) throw UsageError("eval: no ground truth for '" + name + "'");
        p.push_back(mask);
        g.push_back(it->second);
    }
    print_report(miou_report(p, g, o.classes));
}

struct SweepOptions {
    std::vector<int> radii;
    std::vector<double> epsilons;
    ConfigOptions config;
};

void cmd_sweep(const SweepOptions& o) {
    const Config config = resolve(o.config);
    const std::string strategy = config.get("strategy");
    const Scenario scenario = build_scenario(config, strategy);
    PipelineConfig cfg = pipeline_config(config);
    cfg.classes = pixel_classes(scenario, strategy, cfg.classes);
    const BootstrapResult boot = run_bootstrap(scenario, strategy, cfg);

    std::vector<Image> images;
    for (auto idx : scenario.validation.indices) images.push_back(scenario.targets[idx]);
    const auto points =
        grid_search_gf(boot.model, images, scenario.validation.ground_truth, o.radii, o.epsilons, cfg);
    char line[128];
    for (const auto& p : points) {
        std::snprintf(line, sizeof line, "r=%d eps=%g miou=%.6f\n", p.radius, p.epsilon, p.miou);
        std::cout << line;
    }
    const SweepPoint& best = best_point(points);
    std::snprintf(line, sizeof line, "best r=%d eps=%g miou=%.6f\n", best.radius, best.epsilon, best.miou);
    std::cout << line;
}

struct OverlayOptions {
    std::string image, mask, out;
    double alpha = 0.5;
};

void cmd_overlay(const OverlayOptions& o) {
    static constexpr Rgb kPalette[] = {{1.0, 0.0, 0.0}, {0.0, 0.8, 0.0}, {0.1, 0.3, 1.0},
                                       {1.0, 0.9, 0.0}, {0.9, 0.0, 0.9}, {0.0, 0.9, 0.9}};
    if (!(o.alpha >= 0.0 && o.alpha <= 1.0)) throw UsageError("overlay: --alpha must be in [0,1]");
    Image img = load_image(o.image);
    const Mask mask = load_mask(o.mask);
    if (mask.height() != img.height() || mask.width() != img.width()) {
        throw DimensionMismatch("overlay: image and mask sizes differ");
    }
    for (int i = 0; i < img.height(); ++i) {
        for (int j = 0; j < img.width(); ++j) {
            if (mask(i, j) == 0) continue;
            const Rgb& c = kPalette[(mask(i, j) - 1) % std::size(kPalette)];
            double v[3];
            for (int k = 0; k < 3; ++k) v[k] = (1.0 - o.alpha) * img.channel(k)(i, j) + o.alpha * c[k];
            img.set_pixel(i, j, v[0], v[1], v[2]);
        }
    }
    ensure_parent(o.out);
    save_pnm(img, o.out);
}

std::string one_line(std::string msg) {
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    return msg;
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Automatic pixel-level labelling with guided filtering and self-training", "autolabel"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* g = app.add_subcommand("gen", "generate a synthetic dataset with manifest");
    g->add_option("--mode", gen.mode, "scene family")->check(CLI::IsMember({"simple", "complex"}));
    g->add_option("--n", gen.n, "number of images")->required()->check(CLI::NonNegativeNumber);
    g->add_option("--out", gen.out, "output directory")->required();
    add_config_options(g, gen.config);

    OtsuOptions otsu;
    auto* o = app.add_subcommand("otsu", "binarize an image with Otsu's threshold");
    o->add_option("--in", otsu.in, "input PGM/PPM")->required()->check(CLI::ExistingFile);
    o->add_option("--out", otsu.out, "output mask PGM")->required();
    o->add_option("--polarity", otsu.polarity, "foreground side")
        ->check(CLI::IsMember({"auto", "bright", "dark"}));

    BoundaryOptions boundary;
    auto* b = app.add_subcommand("boundary", "max-pool minus min-pool edge map");
    b->add_option("--in", boundary.in, "input PGM/PPM")->required()->check(CLI::ExistingFile);
    b->add_option("--kernel", boundary.kernel, "odd window size");
    b->add_option("--out", boundary.out, "output PGM")->required();

    GuideOptions guide;
    auto* gd = app.add_subcommand("guide", "guided-filter probability planes");
    gd->add_option("--image", guide.image, "guidance image")->required()->check(CLI::ExistingFile);
    gd->add_option("--prob", guide.prob, "probability plane PGMs, one per class")
        ->required()
        ->check(CLI::ExistingFile);
    gd->add_option("--r", guide.r, "window radius");
    gd->add_option("--eps", guide.eps, "regularization");
    gd->add_option("--out", guide.out, "output plane PGMs")->required();

    PipelineOptions boot;
    auto* bs = app.add_subcommand("bootstrap", "produce initial masks for the target images");
    bs->add_option("--out", boot.out, "output directory")->required();
    add_config_options(bs, boot.config);

    PipelineOptions iter;
    auto* it = app.add_subcommand("iterate", "bootstrap, then self-train until mIoU stops growing");
    it->add_option("--out", iter.out, "output directory")->required();
    add_config_options(it, iter.config);

    EvalOptions eval;
    auto* ev = app.add_subcommand("eval", "mIoU of predicted masks against ground truth");
    ev->add_option("--pred", eval.pred, "directory of predicted masks")->required();
    ev->add_option("--gt", eval.gt, "directory of ground-truth masks or a dataset")->required();
    ev->add_option("--classes", eval.classes, "number of classes")->check(CLI::Range(1, 255));

    SweepOptions sweep;
    auto* sw = app.add_subcommand("sweep", "grid search guided-filter parameters on the validation split");
    sw->add_option("--r-list", sweep.radii, "radii")->required()->delimiter(',');
    sw->add_option("--eps-list", sweep.epsilons, "epsilons")->required()->delimiter(',');
    add_config_options(sw, sweep.config);

    OverlayOptions overlay;
    auto* ov = app.add_subcommand("overlay", "blend a mask over an image for inspection");
    ov->add_option("--image", overlay.image, "input PGM/PPM")->required()->check(CLI::ExistingFile);
    ov->add_option("--mask", overlay.mask, "mask PGM")->required()->check(CLI::ExistingFile);
    ov->add_option("--out", overlay.out, "output PPM")->required();
    ov->add_option("--alpha", overlay.alpha, "mask opacity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "autolabel: " << one_line(e.what()) << "\n";
        return kUsage;
    }

    try {
        if (*g) cmd_gen(gen);
        else if (*o) cmd_otsu(otsu);
        else if (*b) cmd_boundary(boundary);
        else if (*gd) cmd_guide(guide);
        else if (*bs) cmd_bootstrap(boot);
        else if (*it) cmd_iterate(iter);
        else if (*ev) cmd_eval(eval);
        else if (*sw) cmd_sweep(sweep);
        else if (*ov) cmd_overlay(overlay);
    } catch (const UsageError& e) {
        std::cerr << "autolabel: " << one_line(e.what()) << "\n";
        return kUsage;
    } catch (const InvalidArgument& e) {
        std::cerr << "autolabel: " << one_line(e.what()) << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "autolabel: " << one_line(e.what()) << "\n";
        return kRuntime;
    }
    return kOk;
}

}  // namespace autolabel::cli
