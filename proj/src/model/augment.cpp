#include "thermopan/model/augment.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace thermopan::model {

void AugmentConfig::validate() const {
    if (crop < 1) throw std::invalid_argument("augment: crop must be positive");
}

ImageF32 crop(const ImageF32& img, int y0, int x0, int height, int width) {
    if (y0 < 0 || x0 < 0 || height < 1 || width < 1 || y0 + height > img.height() || x0 + width > img.width())
        throw std::invalid_argument("crop window outside the image");
    ImageF32 out(height, width, img.channels());
    for (int c = 0; c < img.channels(); ++c)
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) out.at(c, y, x) = img.at(c, y0 + y, x0 + x);
    return out;
}

ImageF32 flip_horizontal(const ImageF32& img) {
    ImageF32 out(img.height(), img.width(), img.channels());
    const int w = img.width();
    for (int c = 0; c < img.channels(); ++c)
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < w; ++x) out.at(c, y, x) = img.at(c, y, w - 1 - x);
    return out;
}

ImageF32 flip_vertical(const ImageF32& img) {
    ImageF32 out(img.height(), img.width(), img.channels());
    const int h = img.height();
    for (int c = 0; c < img.channels(); ++c)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < img.width(); ++x) out.at(c, y, x) = img.at(c, h - 1 - y, x);
    return out;
}

ImageF32 rotate90(const ImageF32& img, int k) {
    k = ((k % 4) + 4) % 4;
    if (k == 0) return img;
    const int h = img.height();
    const int w = img.width();
    const bool swap = k % 2 == 1;
    ImageF32 out(swap ? w : h, swap ? h : w, img.channels());
    for (int c = 0; c < img.channels(); ++c)
        for (int y = 0; y < out.height(); ++y)
            for (int x = 0; x < out.width(); ++x) {
                // source coordinates for a counter-clockwise turn
                int sy = 0;
                int sx = 0;
                if (k == 1) {
                    sy = x;
                    sx = w - 1 - y;
                } else if (k == 2) {
                    sy = h - 1 - y;
                    sx = w - 1 - x;
                } else {
                    sy = h - 1 - x;
                    sx = y;
                }
                out.at(c, y, x) = img.at(c, sy, sx);
            }
    return out;
}

PairedSample augment(const PairedSample& sample, const AugmentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    validate_pair(sample);
    const int h = sample.visible.height();
    const int w = sample.visible.width();
    if (h < cfg.crop || w < cfg.crop)
        throw std::invalid_argument("sample '" + sample.id + "' (" + std::to_string(h) + "x" + std::to_string(w) +
                                    ") is smaller than the " + std::to_string(cfg.crop) + " crop");

    std::mt19937_64 rng(seed);
    int y0 = (h - cfg.crop) / 2;
    int x0 = (w - cfg.crop) / 2;
    if (cfg.random_crop) {
        y0 = std::uniform_int_distribution<int>(0, h - cfg.crop)(rng);
        x0 = std::uniform_int_distribution<int>(0, w - cfg.crop)(rng);
    }
    const bool hf = cfg.hflip && std::bernoulli_distribution(0.5)(rng);
    const bool vf = cfg.vflip && std::bernoulli_distribution(0.5)(rng);
    const int k = cfg.rotate ? std::uniform_int_distribution<int>(-1, 1)(rng) : 0;

    auto apply = [&](const ImageF32& img) {
        ImageF32 out = crop(img, y0, x0, cfg.crop, cfg.crop);
        if (hf) out = flip_horizontal(out);
        if (vf) out = flip_vertical(out);
        return rotate90(out, k);
    };

    PairedSample out = sample;
    out.thermal.pixels = apply(sample.thermal.pixels);
    out.visible = apply(sample.visible);
    return out;
}

}  // namespace thermopan::model
