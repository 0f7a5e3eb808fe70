#pragma once

#include <cstdint>
#include <vector>

#include "thermopan/image.hpp"

namespace thermopan::io {

/// Region labels of a synthetic scene. Each label has a fixed thermal level
/// and a fixed visible colour, so a thermal -> low-frequency colour mapping
/// exists by construction.
enum class Region : std::uint8_t { sky = 0, foliage = 1, ground = 2, hot = 3 };

struct SyntheticOptions {
    double spike_probability = 0.001;
    /// Raw count written at spike sites (half of them low, half high).
    std::uint16_t spike_low = 0;
    std::uint16_t spike_high = 65535;
};

/// Deterministic in (seed, n, height, width). Thermal frames hold raw 16-bit
/// counts, visible images are quantized to 8-bit levels so they survive a
/// PNG round trip unchanged.
std::vector<PairedSample> gen_synthetic_dataset(std::uint64_t seed, int n, int height, int width,
                                                const SyntheticOptions& options = {});

/// Label map of scene `index` of the dataset generated with `seed`.
std::vector<Region> synthetic_labels(std::uint64_t seed, int index, int height, int width);

}  // namespace thermopan::io
