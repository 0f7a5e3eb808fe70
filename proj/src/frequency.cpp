#include "thermopan/frequency.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "thermopan/border.hpp"

namespace thermopan::frequency {

void KernelSpec::validate() const {
    if (size < 1 || size % 2 == 0)
        throw std::invalid_argument("Gaussian kernel size must be a positive odd integer, got " + std::to_string(size));
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("Gaussian sigma must be positive and finite");
}

Kernel gaussian_kernel(const KernelSpec& spec) {
    spec.validate();
    Kernel k;
    k.spec = spec;
    const int r = spec.size / 2;
    const double denom = 2.0 * spec.sigma * spec.sigma;

    k.taps.resize(static_cast<std::size_t>(spec.size));
    double tap_sum = 0.0;
    for (int i = -r; i <= r; ++i) tap_sum += k.taps[static_cast<std::size_t>(i + r)] = std::exp(-(i * i) / denom);
    for (double& t : k.taps) t /= tap_sum;

    k.weights.resize(static_cast<std::size_t>(spec.size) * spec.size);
    double sum = 0.0;
    for (int i = -r; i <= r; ++i)
        for (int j = -r; j <= r; ++j)
            sum += k.weights[static_cast<std::size_t>(i + r) * spec.size + (j + r)] =
                std::exp(-(i * i + j * j) / denom);
    for (double& w : k.weights) w /= sum;
    return k;
}

template <typename T>
void blur_plane(std::span<const T> src, std::span<T> dst, int height, int width, std::span<const double> taps) {
    const int r = static_cast<int>(taps.size()) / 2;
    const int n = static_cast<int>(taps.size());
    std::vector<double> tmp(static_cast<std::size_t>(height) * width);

#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y) {
        const T* row = src.data() + static_cast<std::size_t>(y) * width;
        double* out = tmp.data() + static_cast<std::size_t>(y) * width;
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            if (x - r >= 0 && x + r < width) {
                const T* base = row + (x - r);
                for (int k = 0; k < n; ++k) acc += taps[k] * static_cast<double>(base[k]);
            } else {
                for (int k = 0; k < n; ++k) acc += taps[k] * static_cast<double>(row[reflect_index(x + k - r, width)]);
            }
            out[x] = acc;
        }
    }

#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y) {
        std::vector<double> acc(static_cast<std::size_t>(width), 0.0);
        for (int k = 0; k < n; ++k) {
            const double t = taps[k];
            const double* row = tmp.data() + static_cast<std::size_t>(reflect_index(y + k - r, height)) * width;
            for (int x = 0; x < width; ++x) acc[x] += t * row[x];
        }
        T* out = dst.data() + static_cast<std::size_t>(y) * width;
        for (int x = 0; x < width; ++x) out[x] = static_cast<T>(acc[x]);
    }
}

template <typename T>
void blur_plane_adjoint(std::span<const T> grad_out, std::span<T> grad_in, int height, int width,
                        std::span<const double> taps) {
    const int r = static_cast<int>(taps.size()) / 2;
    const int n = static_cast<int>(taps.size());
    const std::size_t count = static_cast<std::size_t>(height) * width;

    // transpose of the vertical pass
    std::vector<double> tmp(count, 0.0);
    for (int y = 0; y < height; ++y) {
        const T* g = grad_out.data() + static_cast<std::size_t>(y) * width;
        for (int k = 0; k < n; ++k) {
            const double t = taps[k];
            double* row = tmp.data() + static_cast<std::size_t>(reflect_index(y + k - r, height)) * width;
            for (int x = 0; x < width; ++x) row[x] += t * static_cast<double>(g[x]);
        }
    }

    // transpose of the horizontal pass
    std::vector<double> acc(static_cast<std::size_t>(width));
    for (int y = 0; y < height; ++y) {
        const double* g = tmp.data() + static_cast<std::size_t>(y) * width;
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int x = 0; x < width; ++x)
            for (int k = 0; k < n; ++k) acc[reflect_index(x + k - r, width)] += taps[k] * g[x];
        T* out = grad_in.data() + static_cast<std::size_t>(y) * width;
        for (int x = 0; x < width; ++x) out[x] = static_cast<T>(acc[x]);
    }
}

template void blur_plane<float>(std::span<const float>, std::span<float>, int, int, std::span<const double>);
template void blur_plane<double>(std::span<const double>, std::span<double>, int, int, std::span<const double>);
template void blur_plane_adjoint<float>(std::span<const float>, std::span<float>, int, int,
                                        std::span<const double>);
template void blur_plane_adjoint<double>(std::span<const double>, std::span<double>, int, int,
                                         std::span<const double>);

ImageF32 convolve(const ImageF32& img, const Kernel& kernel) {
    ImageF32 out(img.height(), img.width(), img.channels());
    for (int c = 0; c < img.channels(); ++c)
        blur_plane<float>(img.plane(c), out.plane(c), img.height(), img.width(), kernel.taps);
    return out;
}

FrequencyPair decompose(const ImageF32& img, const Kernel& kernel) {
    if (!img.all_finite()) throw std::invalid_argument("decompose: image contains non-finite values");
    FrequencyPair pair{convolve(img, kernel), ImageF32(img.height(), img.width(), img.channels())};
    const auto src = img.pixels();
    const auto lf = pair.lf.pixels();
    auto hf = pair.hf.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) hf[i] = src[i] - lf[i];
    return pair;
}

FrequencyPair decompose(const ImageF32& img, const KernelSpec& spec) { return decompose(img, gaussian_kernel(spec)); }

ImageF32 replicate3(const ImageF32& img) {
    if (img.channels() != 1) throw std::invalid_argument("replicate3 expects a single-channel image");
    ImageF32 out(img.height(), img.width(), 3);
    for (int c = 0; c < 3; ++c) std::copy(img.plane(0).begin(), img.plane(0).end(), out.plane(c).begin());
    return out;
}

}  // namespace thermopan::frequency
