#include "thermopan/synthetic.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

namespace thermopan::io {

namespace {

struct RegionStyle {
    double thermal_level;  // raw counts
    std::array<double, 3> rgb;
};

// Daytime scene: overcast sky is cold, foliage stays cool, sun-baked ground
// is warm, hot objects (people, engines) hottest. Visible brightness does not
// follow the thermal order, as in real pairs.
constexpr std::array<RegionStyle, 4> kStyles{{
    {21000.0, {0.55, 0.62, 0.72}},
    {27000.0, {0.24, 0.42, 0.20}},
    {34000.0, {0.50, 0.46, 0.42}},
    {45000.0, {0.62, 0.62, 0.62}},
}};

constexpr double kRippleCounts = 600.0;

struct Ellipse {
    double cy, cx, ry, rx;
};
struct Box {
    int y0, x0, y1, x1;
};

struct SceneLayout {
    double horizon;
    double wave_amp;
    double wave_freq;
    double wave_phase;
    std::vector<Ellipse> trees;
    std::vector<Box> hot;
};

std::mt19937_64 scene_engine(std::uint64_t seed, int index, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

SceneLayout make_layout(std::mt19937_64& rng, int height, int width) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SceneLayout layout;
    layout.horizon = height * (0.30 + 0.12 * u(rng));
    layout.wave_amp = height * 0.04 * u(rng);
    layout.wave_freq = 1.0 + 2.0 * u(rng);
    layout.wave_phase = 2.0 * std::numbers::pi * u(rng);

    const int n_trees = 1 + static_cast<int>(u(rng) * 3.0);
    for (int t = 0; t < n_trees; ++t) {
        Ellipse e;
        e.ry = height * (0.10 + 0.10 * u(rng));
        e.rx = width * (0.08 + 0.10 * u(rng));
        e.cy = layout.horizon + height * (0.05 * u(rng) - 0.02);
        e.cx = width * u(rng);
        layout.trees.push_back(e);
    }
    const int n_hot = 1 + static_cast<int>(u(rng) * 2.0);
    for (int k = 0; k < n_hot; ++k) {
        const int bh = std::max(6, static_cast<int>(height * (0.12 + 0.12 * u(rng))));
        const int bw = std::max(6, static_cast<int>(width * (0.08 + 0.15 * u(rng))));
        const int y0 = static_cast<int>(layout.horizon + (height - layout.horizon - bh) * (0.3 + 0.6 * u(rng)));
        const int x0 = static_cast<int>((width - bw) * u(rng));
        layout.hot.push_back({y0, x0, std::min(height, y0 + bh), std::min(width, x0 + bw)});
    }
    return layout;
}

Region label_at(const SceneLayout& layout, int y, int x, int width) {
    for (const Box& b : layout.hot)
        if (y >= b.y0 && y < b.y1 && x >= b.x0 && x < b.x1) return Region::hot;
    for (const Ellipse& e : layout.trees) {
        const double dy = (y - e.cy) / e.ry;
        const double dx = (x - e.cx) / e.rx;
        if (dy * dy + dx * dx <= 1.0) return Region::foliage;
    }
    const double horizon =
        layout.horizon +
        layout.wave_amp * std::sin(2.0 * std::numbers::pi * layout.wave_freq * x / width + layout.wave_phase);
    return y < horizon ? Region::sky : Region::ground;
}

std::vector<Region> label_map(const SceneLayout& layout, int height, int width) {
    std::vector<Region> labels(static_cast<std::size_t>(height) * width);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) labels[static_cast<std::size_t>(y) * width + x] = label_at(layout, y, x, width);
    return labels;
}

void check_args(int n, int height, int width) {
    if (n < 1) throw std::invalid_argument("synthetic dataset needs n >= 1");
    if (height < 32 || width < 32) throw std::invalid_argument("synthetic scenes must be at least 32x32");
}

}  // namespace

std::vector<Region> synthetic_labels(std::uint64_t seed, int index, int height, int width) {
    check_args(1, height, width);
    auto rng = scene_engine(seed, index, 0);
    return label_map(make_layout(rng, height, width), height, width);
}

std::vector<PairedSample> gen_synthetic_dataset(std::uint64_t seed, int n, int height, int width,
                                                const SyntheticOptions& options) {
    check_args(n, height, width);
    std::vector<PairedSample> samples;
    samples.reserve(static_cast<std::size_t>(n));

    for (int i = 0; i < n; ++i) {
        auto layout_rng = scene_engine(seed, i, 0);
        auto texture_rng = scene_engine(seed, i, 1);
        auto spike_rng = scene_engine(seed, i, 2);
        const SceneLayout layout = make_layout(layout_rng, height, width);
        const auto labels = label_map(layout, height, width);

        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::normal_distribution<double> thermal_noise(0.0, 120.0);
        std::normal_distribution<double> visible_noise(0.0, 0.01);
        std::bernoulli_distribution spike(options.spike_probability);
        std::bernoulli_distribution spike_high(0.5);

        std::array<double, 4> jitter{};
        for (double& j : jitter) j = 1000.0 * (u(texture_rng) - 0.5);
        const double ripple_phase = 2.0 * std::numbers::pi * u(texture_rng);

        ImageF32 counts(height, width, 1);
        ImageF32 visible(height, width, 3);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const auto region = static_cast<std::size_t>(labels[static_cast<std::size_t>(y) * width + x]);
                const RegionStyle& style = kStyles[region];

                const double ripple = kRippleCounts * std::sin(0.35 * x + 0.21 * y + ripple_phase);
                double t = style.thermal_level + jitter[region] + ripple + thermal_noise(texture_rng);
                t = std::clamp(std::round(t), 5000.0, 60000.0);
                if (spike(spike_rng)) t = spike_high(spike_rng) ? options.spike_high : options.spike_low;
                counts.at(0, y, x) = static_cast<float>(t);

                const double shade = visible_noise(texture_rng);
                for (int c = 0; c < 3; ++c) {
                    const double v = std::clamp(style.rgb[c] + shade, 0.0, 1.0);
                    visible.at(c, y, x) = static_cast<float>(std::round(v * 255.0) / 255.0);
                }
            }
        }

        char id[32];
        std::snprintf(id, sizeof id, "s%04d", i);
        samples.push_back({ThermalFrame::raw(std::move(counts), 16), std::move(visible), id});
    }
    return samples;
}

}  // namespace thermopan::io
