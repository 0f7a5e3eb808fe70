#include "thermopan/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thermopan {

namespace {

void check_dims(int height, int width, int channels) {
    if (height < 0 || width < 0) throw std::invalid_argument("image dimensions must be non-negative");
    if (channels != 1 && channels != 3) throw std::invalid_argument("image must have 1 or 3 channels");
}

}  // namespace

ImageF32::ImageF32(int height, int width, int channels, float fill)
    : height_(height), width_(width), channels_(channels) {
    check_dims(height, width, channels);
    data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

ImageF32::ImageF32(int height, int width, int channels, std::vector<float> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
    check_dims(height, width, channels);
    if (data_.size() != static_cast<std::size_t>(height) * width * channels)
        throw std::invalid_argument("pixel buffer size does not match image dimensions");
}

bool ImageF32::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

bool ImageF32::in_unit_range() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](float v) { return v >= 0.0f && v <= 1.0f; });
}

ThermalFrame ThermalFrame::raw(ImageF32 counts, int bit_depth) {
    if (counts.channels() != 1) throw std::invalid_argument("thermal input must be single-channel");
    if (bit_depth != 8 && bit_depth != 16) throw std::invalid_argument("thermal bit depth must be 8 or 16");
    ThermalFrame frame;
    frame.bit_depth = bit_depth;
    frame.normalized = false;
    if (!counts.empty()) {
        auto [lo, hi] = std::minmax_element(counts.pixels().begin(), counts.pixels().end());
        frame.min_raw = *lo;
        frame.max_raw = *hi;
    }
    frame.pixels = std::move(counts);
    return frame;
}

void validate_pair(const PairedSample& sample) {
    if (sample.visible.channels() != 3)
        throw std::invalid_argument("pair '" + sample.id + "': visible image must have 3 channels");
    if (sample.thermal.pixels.channels() != 1)
        throw std::invalid_argument("pair '" + sample.id + "': thermal input must be single-channel");
    if (!sample.thermal.pixels.same_extent(sample.visible))
        throw std::invalid_argument("pair '" + sample.id + "': thermal " +
                                    std::to_string(sample.thermal.height()) + "x" +
                                    std::to_string(sample.thermal.width()) + " vs visible " +
                                    std::to_string(sample.visible.height()) + "x" +
                                    std::to_string(sample.visible.width()));
}

}  // namespace thermopan
