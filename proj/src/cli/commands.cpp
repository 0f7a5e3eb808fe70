#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "thermopan/imgio.hpp"
#include "thermopan/metrics.hpp"
#include "thermopan/model/colorize.hpp"
#include "thermopan/model/config.hpp"
#include "thermopan/model/params_io.hpp"
#include "thermopan/model/train.hpp"
#include "thermopan/parallel.hpp"
#include "thermopan/synthetic.hpp"

namespace fs = std::filesystem;

namespace thermopan::cli {

namespace {

using Settings = std::vector<std::pair<std::string, std::string>>;

void log_config(std::string_view command, const Settings& settings) {
    fmt::print(stderr, "thermopan {} (threads={})\n", command, max_threads());
    for (const auto& [k, v] : settings) fmt::print(stderr, "  {} = {}\n", k, v);
}

std::string kernel_string(const frequency::KernelSpec& k) { return fmt::format("{}x{} sigma={}", k.size, k.size, k.sigma); }

void add_preprocess(Settings& s, const preprocess::PreprocessConfig& p) {
    s.emplace_back("despike", p.despike ? fmt::format("window={} k={}", p.despike_config.window, p.despike_config.k)
                                        : "off");
    s.emplace_back("invert", p.invert ? "true" : "false");
}

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    return os;
}

void ensure_parent(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".tif" || ext == ".tiff";
}

/// Image files of a directory keyed by stem.
std::map<std::string, fs::path> images_by_stem(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("'" + dir.string() + "' is not a directory");
    std::map<std::string, fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || !is_image_file(entry.path())) continue;
        const auto stem = entry.path().stem().string();
        if (!out.emplace(stem, entry.path()).second)
            throw std::runtime_error("'" + dir.string() + "' holds two images with stem '" + stem + "'");
    }
    return out;
}

std::vector<PairedSample> load_preprocessed(const std::string& root, const preprocess::PreprocessConfig& pcfg = {}) {
    auto pairing = io::load_dataset(root);
    for (const auto& w : pairing.warnings) fmt::print(stderr, "warning: {}\n", w);
    if (pairing.samples.empty()) throw std::runtime_error("no paired samples found under '" + root + "'");
    for (auto& s : pairing.samples) s.thermal = preprocess::preprocess(s.thermal, pcfg);
    return std::move(pairing.samples);
}

}  // namespace

void run_preprocess(const PreprocessArgs& a) {
    Settings s{{"in", a.in}, {"out", a.out}};
    add_preprocess(s, a.config);
    log_config("preprocess", s);
    const ThermalFrame frame = io::load_thermal(a.in);
    ensure_parent(a.out);
    io::save_thermal(preprocess::preprocess(frame, a.config), a.out);
}

void run_decompose(const DecomposeArgs& a) {
    a.kernel.validate();
    Settings s{{"in", a.in}, {"lf", a.lf}, {"hf", a.hf}, {"kernel", kernel_string(a.kernel)},
               {"thermal", a.thermal ? "true" : "false"}, {"lf_depth", std::to_string(a.depth)}};
    if (a.thermal) add_preprocess(s, a.preprocess);
    log_config("decompose", s);

    const ImageF32 src =
        a.thermal ? preprocess::preprocess(io::load_thermal(a.in), a.preprocess).pixels : io::load_image(a.in);
    const auto bands = frequency::decompose(src, a.kernel);
    ensure_parent(a.lf);
    ensure_parent(a.hf);
    // a Gaussian average of [0,1] data stays in [0,1] up to rounding
    ImageF32 lf = bands.lf;
    for (float& v : lf.pixels()) v = std::clamp(v, 0.0f, 1.0f);
    io::save_image(lf, a.lf, a.depth);
    io::save_image(io::encode_signed(bands.hf), a.hf, 16);
}

void run_fuse(const FuseArgs& a) {
    a.fusion.validate();
    if (a.fusion.out_of_band == pansharpen::OutOfBand::none)
        throw std::invalid_argument("--out-of-band none cannot be written to an image file");
    log_config("fuse", {{"lf", a.lf},
                        {"hf", a.hf},
                        {"out", a.out},
                        {"lambda", fmt::format("{}", a.fusion.lambda)},
                        {"out_of_band", std::string(pansharpen::to_string(a.fusion.out_of_band))}});
    const auto lf = io::read_image(a.lf);
    const ImageF32 hf = io::decode_signed(io::load_image(a.hf));
    const bool gray = lf.image.channels() == 1;
    ImageF32 fused = pansharpen::fuse(gray ? frequency::replicate3(lf.image) : lf.image, hf, a.fusion);
    if (gray) {
        // identical planes; keep the input's channel count
        const auto p = fused.plane(0);
        fused = ImageF32(fused.height(), fused.width(), 1, std::vector<float>(p.begin(), p.end()));
    }
    ensure_parent(a.out);
    // same depth as the low-frequency input, so lambda = 0 reproduces it byte for byte
    io::save_image(fused, a.out, lf.bit_depth);
}

void run_sweep(const SweepArgs& a) {
    a.kernel.validate();
    std::string lambdas;
    for (double l : a.lambdas) lambdas += (lambdas.empty() ? "" : ",") + fmt::format("{}", l);
    log_config("sweep-lambda", {{"dataset", a.dataset},
                                {"out", a.out},
                                {"lambdas", lambdas},
                                {"kernel", kernel_string(a.kernel)},
                                {"out_of_band", std::string(pansharpen::to_string(a.mode))}});
    const auto samples = load_preprocessed(a.dataset);
    const auto report = pansharpen::lambda_sweep(samples, a.lambdas, a.kernel, a.mode);
    if (a.out.empty() || a.out == "-") {
        report.write_csv(std::cout);
    } else {
        ensure_parent(a.out);
        auto os = open_output(a.out);
        report.write_csv(os);
    }
}

void run_train(const TrainArgs& a) {
    model::TrainingSetup setup = a.config.empty() ? model::TrainingSetup{} : model::load_config(a.config);
    for (const auto& kv : a.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        model::set_config_value(setup, kv.substr(0, eq), kv.substr(eq + 1));
    }
    setup.train.validate();
    setup.loss.validate();

    Settings s{{"dataset", a.dataset}, {"config", a.config.empty() ? "(defaults)" : a.config}, {"out", a.out},
               {"history", a.history.empty() ? "(none)" : a.history}};
    std::istringstream resolved(model::format_config(setup));
    for (std::string line; std::getline(resolved, line);) {
        const auto eq = line.find(" = ");
        s.emplace_back(line.substr(0, eq), line.substr(eq + 3));
    }
    log_config("train", s);

    const auto samples = load_preprocessed(a.dataset);
    const int every = std::max(1, setup.train.epochs / 20);
    const auto result = model::train(samples, setup.train, setup.loss, [&](const model::EpochRecord& r) {
        if (r.epoch % every == 0 || r.epoch + 1 == setup.train.epochs)
            fmt::print(stderr, "epoch {:5d}  lr {:.3e}  loss {:.6f}  (content {:.6f}, lf {:.6f})\n", r.epoch, r.lr,
                       r.loss, r.content, r.lf);
    });
    ensure_parent(a.out);
    model::save_params(result.params, a.out);
    if (!a.history.empty()) {
        ensure_parent(a.history);
        auto os = open_output(a.history);
        model::write_history_csv(result.history, os);
    }
    fmt::print(stderr, "trained {} iterations, {} parameters -> {}\n", result.iterations,
               result.params.parameter_count(), a.out);
}

void run_colorize(const ColorizeArgs& a) {
    a.fusion.validate();
    a.kernel.validate();
    if (a.fusion.out_of_band == pansharpen::OutOfBand::none)
        throw std::invalid_argument("--out-of-band none cannot be written to an image file");
    Settings s{{"params", a.params},
               {"in", a.in},
               {"out", a.out},
               {"lambda", fmt::format("{}", a.fusion.lambda)},
               {"out_of_band", std::string(pansharpen::to_string(a.fusion.out_of_band))},
               {"kernel", kernel_string(a.kernel)},
               {"depth", std::to_string(a.depth)}};
    add_preprocess(s, a.preprocess);
    log_config("colorize", s);

    const auto params = model::load_params(a.params);
    auto one = [&](const fs::path& in, const fs::path& out) {
        const ThermalFrame frame = io::load_thermal(in);
        ensure_parent(out);
        io::save_image(model::colorize(params, frame, a.fusion, a.kernel, a.preprocess), out, a.depth);
    };
    if (!fs::is_directory(a.in)) {
        one(a.in, a.out);
        return;
    }
    fs::create_directories(a.out);
    const auto inputs = images_by_stem(a.in);
    if (inputs.empty()) throw std::runtime_error("no thermal images in '" + a.in + "'");
    for (const auto& [stem, path] : inputs) one(path, fs::path(a.out) / (stem + ".png"));
    fmt::print(stderr, "colorized {} frames into {}\n", inputs.size(), a.out);
}

void run_evaluate(const EvaluateArgs& a) {
    log_config("evaluate", {{"pred", a.pred}, {"truth", a.truth}, {"out", a.out.empty() ? "-" : a.out}});
    const auto preds = images_by_stem(a.pred);
    const auto truths = images_by_stem(a.truth);
    std::vector<metrics::EvalPair> pairs;
    for (const auto& [stem, path] : preds) {
        const auto it = truths.find(stem);
        if (it == truths.end()) {
            fmt::print(stderr, "warning: prediction '{}' has no ground truth\n", stem);
            continue;
        }
        pairs.push_back({stem, io::load_image(path), io::load_image(it->second)});
    }
    for (const auto& [stem, path] : truths)
        if (!preds.contains(stem)) fmt::print(stderr, "warning: ground truth '{}' has no prediction\n", stem);
    if (pairs.empty()) throw std::runtime_error("no prediction/ground-truth pairs to evaluate");

    const auto report = metrics::evaluate_set(pairs);
    if (a.out.empty() || a.out == "-") {
        report.write_csv(std::cout);
    } else {
        ensure_parent(a.out);
        auto os = open_output(a.out);
        report.write_csv(os);
    }
    fmt::print(stderr, "{} pairs: mean PSNR {:.3f} dB, SSIM {:.4f}, RMSE {:.5f}\n", pairs.size(), report.mean.psnr,
               report.mean.ssim, report.mean.rmse);
}

void run_gen_synthetic(const GenSyntheticArgs& a) {
    const int h = a.height > 0 ? a.height : a.size;
    const int w = a.width > 0 ? a.width : a.size;
    log_config("gen-synthetic", {{"seed", std::to_string(a.seed)},
                                 {"n", std::to_string(a.n)},
                                 {"height", std::to_string(h)},
                                 {"width", std::to_string(w)},
                                 {"spike_probability", fmt::format("{}", a.spike_probability)},
                                 {"out", a.out}});
    io::SyntheticOptions opts;
    opts.spike_probability = a.spike_probability;
    io::write_dataset(io::gen_synthetic_dataset(a.seed, a.n, h, w, opts), a.out);
}

}  // namespace thermopan::cli
