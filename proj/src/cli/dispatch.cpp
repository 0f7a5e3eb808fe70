#include "thermopan/cli.hpp"

#include <algorithm>
#include <exception>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "thermopan/parallel.hpp"

namespace thermopan::cli {

namespace {

void add_kernel_flags(CLI::App* cmd, frequency::KernelSpec& k) {
    cmd->add_option("--kernel-size", k.size, "Gaussian kernel side (odd)")->capture_default_str();
    cmd->add_option("--sigma", k.sigma, "Gaussian standard deviation in pixels")->capture_default_str();
}

void add_preprocess_flags(CLI::App* cmd, preprocess::PreprocessConfig& p) {
    cmd->add_flag("!--no-despike", p.despike, "Skip the median/std spike filter");
    cmd->add_flag("!--no-invert", p.invert, "Keep hot = bright instead of inverting");
    cmd->add_option("--despike-window", p.despike_config.window, "Despike window side (odd)")->capture_default_str();
    cmd->add_option("--despike-k", p.despike_config.k, "Despike threshold in local standard deviations")
        ->capture_default_str();
}

void add_fusion_flags(CLI::App* cmd, pansharpen::FusionConfig& f, std::string& mode) {
    cmd->add_option("--lambda", f.lambda, "High-frequency injection weight")->capture_default_str();
    cmd->add_option("--out-of-band", mode, "clip | renormalize")
        ->check(CLI::IsMember({"clip", "renormalize"}))
        ->capture_default_str();
}

/// Long option names of a subcommand, without the dashes.
std::vector<std::string> long_options(const CLI::App* cmd) {
    std::vector<std::string> names;
    for (const CLI::Option* opt : cmd->get_options())
        for (const auto& n : opt->get_lnames()) names.push_back(n);
    return names;
}

std::string flag_hint(const CLI::App& app, const std::vector<std::string>& args) {
    const CLI::App* active = nullptr;
    for (const CLI::App* sub : app.get_subcommands())
        if (sub->parsed()) active = sub;
    if (!active) return {};
    for (const auto& a : args) {
        if (a.rfind("--", 0) != 0) continue;
        const std::string name = a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2);
        const auto names = long_options(active);
        if (std::find(names.begin(), names.end(), name) != names.end()) continue;
        if (const auto s = suggest(name, names); !s.empty()) return fmt::format("did you mean '--{}'?", s);
    }
    return {};
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names{"preprocess", "decompose", "fuse",     "sweep-lambda",
                                                "train",      "colorize",  "evaluate", "gen-synthetic"};
    return names;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

std::string suggest(std::string_view word, const std::vector<std::string>& candidates) {
    std::string best;
    std::size_t best_d = std::string::npos;
    for (const auto& c : candidates) {
        const std::size_t d = edit_distance(word, c);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    // allow roughly one typo per three characters
    if (best_d != std::string::npos && best_d <= std::max<std::size_t>(2, word.size() / 3)) return best;
    std::vector<std::string> prefixed;
    for (const auto& c : candidates)
        if (word.size() >= 3 && c.starts_with(word)) prefixed.push_back(c);
    return prefixed.size() == 1 ? prefixed.front() : std::string{};
}

int dispatch(const std::vector<std::string>& args) {
    configure_threads_from_env();

    CLI::App app{"Thermal-to-visible colorization: preprocessing, frequency split, fusion, training, evaluation",
                 "thermopan"};
    app.require_subcommand(1);
    app.fallthrough(false);

    PreprocessArgs pre;
    auto* c_pre = app.add_subcommand("preprocess", "Despike, normalize and invert a raw thermal frame");
    c_pre->add_option("--in", pre.in, "Raw thermal TIFF/PNG")->required()->check(CLI::ExistingFile);
    c_pre->add_option("--out", pre.out, "Output file (16-bit, normalized)")->required();
    add_preprocess_flags(c_pre, pre.config);

    DecomposeArgs dec;
    auto* c_dec = app.add_subcommand("decompose", "Split an image into low- and high-frequency bands");
    c_dec->add_option("--in", dec.in, "Input image")->required()->check(CLI::ExistingFile);
    c_dec->add_option("--lf", dec.lf, "Low-frequency output")->required();
    c_dec->add_option("--hf", dec.hf, "High-frequency output (16-bit, offset encoded)")->required();
    c_dec->add_option("--depth", dec.depth, "Bit depth of the low-frequency output")
        ->check(CLI::IsMember({8, 16}))
        ->capture_default_str();
    c_dec->add_flag("--thermal", dec.thermal, "Treat the input as a raw thermal frame and preprocess it first");
    add_kernel_flags(c_dec, dec.kernel);
    add_preprocess_flags(c_dec, dec.preprocess);

    FuseArgs fus;
    std::string fuse_mode = "clip";
    auto* c_fus = app.add_subcommand("fuse", "Inject a high-frequency band into a low-frequency image");
    c_fus->add_option("--lf", fus.lf, "Low-frequency image (output keeps its depth and channels)")
        ->required()
        ->check(CLI::ExistingFile);
    c_fus->add_option("--hf", fus.hf, "High-frequency band written by decompose")->required()->check(CLI::ExistingFile);
    c_fus->add_option("--out", fus.out, "Fused image")->required();
    add_fusion_flags(c_fus, fus.fusion, fuse_mode);

    SweepArgs swp;
    std::string sweep_mode = "clip";
    auto* c_swp = app.add_subcommand("sweep-lambda", "Oracle-fusion PSNR statistics across lambda values");
    c_swp->add_option("--dataset", swp.dataset, "Dataset root with thermal/ and visible/")
        ->required()
        ->check(CLI::ExistingDirectory);
    c_swp->add_option("--lambdas", swp.lambdas, "Comma-separated lambda values")->delimiter(',')->capture_default_str();
    c_swp->add_option("--out", swp.out, "CSV output (default stdout)");
    c_swp->add_option("--out-of-band", sweep_mode, "clip | renormalize | none")
        ->check(CLI::IsMember({"clip", "renormalize", "none"}))
        ->capture_default_str();
    add_kernel_flags(c_swp, swp.kernel);

    TrainArgs trn;
    auto* c_trn = app.add_subcommand("train", "Train the colorizer on a paired dataset");
    c_trn->add_option("--dataset", trn.dataset, "Dataset root with thermal/ and visible/")
        ->required()
        ->check(CLI::ExistingDirectory);
    c_trn->add_option("--config", trn.config, "key = value training config")->check(CLI::ExistingFile);
    c_trn->add_option("--set", trn.overrides, "Override one config key (key=value, repeatable)");
    c_trn->add_option("--out", trn.out, "Parameter file to write")->required();
    c_trn->add_option("--history", trn.history, "Per-epoch loss CSV");

    ColorizeArgs col;
    std::string col_mode = "clip";
    auto* c_col = app.add_subcommand("colorize", "Colorize thermal frames with a trained model");
    c_col->add_option("--params", col.params, "Parameter file from train")->required()->check(CLI::ExistingFile);
    c_col->add_option("--in", col.in, "Thermal frame, or a directory of frames")->required()->check(CLI::ExistingPath);
    c_col->add_option("--out", col.out, "Output image, or a directory when --in is one")->required();
    c_col->add_option("--depth", col.depth, "Output bit depth")->check(CLI::IsMember({8, 16}))->capture_default_str();
    add_fusion_flags(c_col, col.fusion, col_mode);
    add_kernel_flags(c_col, col.kernel);
    add_preprocess_flags(c_col, col.preprocess);

    EvaluateArgs evl;
    auto* c_evl = app.add_subcommand("evaluate", "PSNR/SSIM/RMSE of predictions against ground truth");
    c_evl->add_option("--pred", evl.pred, "Directory of predicted images")->required()->check(CLI::ExistingDirectory);
    c_evl->add_option("--truth", evl.truth, "Directory of ground-truth images (matched by stem)")
        ->required()
        ->check(CLI::ExistingDirectory);
    c_evl->add_option("--out", evl.out, "CSV output (default stdout)");

    GenSyntheticArgs gen;
    auto* c_gen = app.add_subcommand("gen-synthetic", "Write a paired synthetic dataset");
    c_gen->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
    c_gen->add_option("-n,--count", gen.n, "Number of scenes")->check(CLI::PositiveNumber)->capture_default_str();
    c_gen->add_option("--size", gen.size, "Square scene side")->check(CLI::Range(32, 8192))->capture_default_str();
    c_gen->add_option("--height", gen.height, "Scene height (overrides --size)")->check(CLI::Range(32, 8192));
    c_gen->add_option("--width", gen.width, "Scene width (overrides --size)")->check(CLI::Range(32, 8192));
    c_gen->add_option("--spike-prob", gen.spike_probability, "Per-pixel dead/hot pixel probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    c_gen->add_option("--out", gen.out, "Dataset root")->required();

    // unknown subcommand: answer before CLI11 reports a generic extras error
    if (!args.empty() && !args.front().empty() && args.front().front() != '-') {
        const auto& names = subcommand_names();
        if (std::find(names.begin(), names.end(), args.front()) == names.end()) {
            std::cerr << "thermopan: unknown subcommand '" << args.front() << "'";
            if (const auto s = suggest(args.front(), names); !s.empty()) std::cerr << "; did you mean '" << s << "'?";
            std::cerr << "\nRun 'thermopan --help' for the list of subcommands.\n";
            return kExitUsage;
        }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, std::cout, std::cerr);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, std::cout, std::cerr);
    } catch (const CLI::ParseError& e) {
        std::cerr << "thermopan: " << e.what() << "\n";
        if (const auto hint = flag_hint(app, args); !hint.empty()) std::cerr << hint << "\n";
        std::cerr << "Run 'thermopan <subcommand> --help' for usage.\n";
        return kExitUsage;
    }

    try {
        if (c_pre->parsed()) run_preprocess(pre);
        else if (c_dec->parsed()) run_decompose(dec);
        else if (c_fus->parsed()) {
            fus.fusion.out_of_band = pansharpen::parse_out_of_band(fuse_mode);
            run_fuse(fus);
        } else if (c_swp->parsed()) {
            swp.mode = pansharpen::parse_out_of_band(sweep_mode);
            run_sweep(swp);
        } else if (c_trn->parsed()) run_train(trn);
        else if (c_col->parsed()) {
            col.fusion.out_of_band = pansharpen::parse_out_of_band(col_mode);
            run_colorize(col);
        } else if (c_evl->parsed()) run_evaluate(evl);
        else if (c_gen->parsed()) run_gen_synthetic(gen);
    } catch (const std::exception& e) {
        std::cerr << "thermopan: error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int dispatch(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args);
}

}  // namespace thermopan::cli
