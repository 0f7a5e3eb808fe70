#include "thermopan/model/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <stdexcept>

#include <fmt/format.h>

namespace thermopan::model {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename N>
N parse_number(const std::string& key, const std::string& value) {
    N out{};
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
        throw std::invalid_argument("config: '" + key + "' expects a number, got '" + value + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw std::invalid_argument("config: '" + key + "' expects true/false, got '" + value + "'");
}

}  // namespace

void set_config_value(TrainingSetup& s, const std::string& key, const std::string& value) {
    TrainConfig& t = s.train;
    auto i = [&] { return parse_number<int>(key, value); };
    auto d = [&] { return parse_number<double>(key, value); };
    auto b = [&] { return parse_bool(key, value); };

    if (key == "preset") {
        if (value == "paper")
            s = TrainingSetup{};
        else if (value == "desk")
            s = TrainingSetup{TrainConfig::desk_scale(), LossConfig{}};
        else
            throw std::invalid_argument("config: unknown preset '" + value + "' (paper, desk)");
    } else if (key == "epochs") t.epochs = i();
    else if (key == "lr") t.lr = d();
    else if (key == "decay_start_epoch") t.decay_start_epoch = i();
    else if (key == "final_lr_fraction") t.final_lr_fraction = d();
    else if (key == "batch_size") t.batch_size = i();
    else if (key == "iterations_per_epoch") t.iterations_per_epoch = i();
    else if (key == "seed") t.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "crop") t.augment.crop = i();
    else if (key == "random_crop") t.augment.random_crop = b();
    else if (key == "hflip") t.augment.hflip = b();
    else if (key == "vflip") t.augment.vflip = b();
    else if (key == "rotate") t.augment.rotate = b();
    else if (key == "base_width") t.arch.base_width = i();
    else if (key == "max_width") t.arch.max_width = i();
    else if (key == "depth") t.arch.depth = i();
    else if (key == "leaky_slope") t.arch.leaky_slope = d();
    else if (key == "dropout") t.arch.dropout = d();
    else if (key == "alpha") s.loss.alpha = d();
    else if (key == "kernel_size") s.loss.kernel.size = i();
    else if (key == "kernel_sigma") s.loss.kernel.sigma = d();
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

TrainingSetup parse_config(std::istream& is, TrainingSetup base) {
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        try {
            set_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    base.train.validate();
    base.loss.validate();
    return base;
}

TrainingSetup load_config(const std::string& path, TrainingSetup base) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config '" + path + "'");
    return parse_config(is, std::move(base));
}

std::string format_config(const TrainingSetup& s) {
    const TrainConfig& t = s.train;
    std::string out;
    auto add = [&](std::string_view k, const auto& v) { out += fmt::format("{} = {}\n", k, v); };
    add("epochs", t.epochs);
    add("lr", t.lr);
    add("decay_start_epoch", t.decay_start_epoch);
    add("final_lr_fraction", t.final_lr_fraction);
    add("batch_size", t.batch_size);
    add("iterations_per_epoch", t.iterations_per_epoch);
    add("seed", t.seed);
    add("crop", t.augment.crop);
    add("random_crop", t.augment.random_crop);
    add("hflip", t.augment.hflip);
    add("vflip", t.augment.vflip);
    add("rotate", t.augment.rotate);
    add("base_width", t.arch.base_width);
    add("max_width", t.arch.max_width);
    add("depth", t.arch.depth);
    add("leaky_slope", t.arch.leaky_slope);
    add("dropout", t.arch.dropout);
    add("alpha", s.loss.alpha);
    add("kernel_size", s.loss.kernel.size);
    add("kernel_sigma", s.loss.kernel.sigma);
    return out;
}

}  // namespace thermopan::model
