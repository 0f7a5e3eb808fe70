#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace thermopan {

/// Planar float raster, channel-major: data[(c * height + y) * width + x].
///
/// Pipeline-facing images hold unit-interval intensities. High-frequency
/// bands and unclipped fusion results reuse the same type with signed values.
class ImageF32 {
public:
    ImageF32() = default;
    ImageF32(int height, int width, int channels, float fill = 0.0f);
    ImageF32(int height, int width, int channels, std::vector<float> data);

    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int channels() const noexcept { return channels_; }
    [[nodiscard]] std::size_t plane_size() const noexcept {
        return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
    }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    [[nodiscard]] float& at(int c, int y, int x) noexcept {
        return data_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
    }
    [[nodiscard]] float at(int c, int y, int x) const noexcept {
        return data_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
    }

    [[nodiscard]] std::span<float> plane(int c) noexcept {
        return {data_.data() + static_cast<std::size_t>(c) * plane_size(), plane_size()};
    }
    [[nodiscard]] std::span<const float> plane(int c) const noexcept {
        return {data_.data() + static_cast<std::size_t>(c) * plane_size(), plane_size()};
    }

    [[nodiscard]] std::span<float> pixels() noexcept { return data_; }
    [[nodiscard]] std::span<const float> pixels() const noexcept { return data_; }

    [[nodiscard]] bool same_shape(const ImageF32& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
    }
    [[nodiscard]] bool same_extent(const ImageF32& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_;
    }

    [[nodiscard]] bool all_finite() const noexcept;
    [[nodiscard]] bool in_unit_range() const noexcept;

    friend bool operator==(const ImageF32&, const ImageF32&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    std::vector<float> data_;
};

/// Single-channel thermal raster. Raw frames carry sensor counts; once
/// normalized the pixels live in [0, 1] and min_raw/max_raw remember the
/// original range.
struct ThermalFrame {
    ImageF32 pixels;
    int bit_depth = 16;
    bool normalized = false;
    double min_raw = 0.0;
    double max_raw = 0.0;

    [[nodiscard]] int height() const noexcept { return pixels.height(); }
    [[nodiscard]] int width() const noexcept { return pixels.width(); }

    static ThermalFrame raw(ImageF32 counts, int bit_depth);
};

struct PairedSample {
    ThermalFrame thermal;
    ImageF32 visible;
    std::string id;
};

/// Throws std::invalid_argument when the pair violates the shared-extent rule.
void validate_pair(const PairedSample& sample);

}  // namespace thermopan
