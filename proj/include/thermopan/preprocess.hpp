#pragma once

#include "thermopan/image.hpp"

namespace thermopan::preprocess {

/// Per-frame min-max scaling to [0, 1]. Constant frames map to 0.5.
ThermalFrame instance_normalize(const ThermalFrame& frame);

/// p -> 1 - p. Requires a normalized frame.
ThermalFrame invert(const ThermalFrame& frame);

struct DespikeConfig {
    int window = 5;
    double k = 3.0;
};

/// Replaces a pixel by the median of its window x window neighbourhood when
/// |p - median| > k * std of that neighbourhood (population std, reflect
/// padded). One pass over the input values; untouched pixels are copied
/// bit-exactly.
ThermalFrame despike(const ThermalFrame& frame, const DespikeConfig& config = {});

struct PreprocessConfig {
    bool despike = true;
    bool invert = true;
    DespikeConfig despike_config;
};

/// despike (raw counts) -> instance_normalize -> invert, each stage optional
/// except normalization. A frame that is already normalized is treated as
/// preprocessed and returned unchanged.
ThermalFrame preprocess(const ThermalFrame& frame, const PreprocessConfig& config = {});

}  // namespace thermopan::preprocess
