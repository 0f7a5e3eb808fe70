#pragma once

#include <span>
#include <vector>

#include "thermopan/image.hpp"

namespace thermopan::frequency {

struct KernelSpec {
    int size = 25;
    double sigma = 12.0;

    /// Throws std::invalid_argument for even/non-positive sizes or sigma <= 0.
    void validate() const;
};

/// Normalized, truncated Gaussian. `weights` is the size x size grid built
/// from the 2-D formula; `taps` is the normalized 1-D profile whose outer
/// product equals `weights`.
struct Kernel {
    KernelSpec spec;
    std::vector<double> weights;
    std::vector<double> taps;

    [[nodiscard]] int size() const noexcept { return spec.size; }
    [[nodiscard]] int radius() const noexcept { return spec.size / 2; }
    [[nodiscard]] double weight(int i, int j) const noexcept {
        return weights[static_cast<std::size_t>(i) * spec.size + j];
    }
};

Kernel gaussian_kernel(const KernelSpec& spec);

/// Same-size Gaussian filtering of one plane, reflect-101 borders, done as a
/// horizontal then a vertical pass with double accumulation. Rows are split
/// across OpenMP threads; inside an outer parallel region it runs serially.
template <typename T>
void blur_plane(std::span<const T> src, std::span<T> dst, int height, int width, std::span<const double> taps);

/// Exact adjoint of blur_plane (including the reflected borders), used to
/// back-propagate through the Gaussian layer.
template <typename T>
void blur_plane_adjoint(std::span<const T> grad_out, std::span<T> grad_in, int height, int width,
                        std::span<const double> taps);

/// Channels are filtered independently.
ImageF32 convolve(const ImageF32& img, const Kernel& kernel);

struct FrequencyPair {
    ImageF32 lf;
    /// Signed; lf + hf reproduces the source.
    ImageF32 hf;
};

FrequencyPair decompose(const ImageF32& img, const KernelSpec& spec);
FrequencyPair decompose(const ImageF32& img, const Kernel& kernel);

/// Gray -> three identical channels.
ImageF32 replicate3(const ImageF32& img);

}  // namespace thermopan::frequency
