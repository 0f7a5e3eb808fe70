#pragma once

#include <cstdint>

#include "thermopan/image.hpp"

namespace thermopan::model {

struct AugmentConfig {
    int crop = 160;  ///< square crop side
    bool random_crop = true;
    bool hflip = true;
    bool vflip = true;
    bool rotate = true;  ///< k * 90 degrees, k in {-1, 0, 1}

    void validate() const;
};

/// Draws one geometric transform from `seed` and applies it to both
/// modalities. With every toggle off this is a centered crop.
PairedSample augment(const PairedSample& sample, const AugmentConfig& cfg, std::uint64_t seed);

ImageF32 crop(const ImageF32& img, int y0, int x0, int height, int width);
ImageF32 flip_horizontal(const ImageF32& img);
ImageF32 flip_vertical(const ImageF32& img);
/// Counter-clockwise rotation by k quarter turns (any integer k).
ImageF32 rotate90(const ImageF32& img, int k);

}  // namespace thermopan::model
