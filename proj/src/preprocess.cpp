#include "thermopan/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "thermopan/border.hpp"

namespace thermopan::preprocess {

ThermalFrame instance_normalize(const ThermalFrame& frame) {
    if (frame.normalized) throw std::invalid_argument("instance_normalize: frame is already normalized");
    ThermalFrame out = frame;
    out.normalized = true;
    if (frame.pixels.empty()) return out;

    const auto src = frame.pixels.pixels();
    const auto [lo_it, hi_it] = std::minmax_element(src.begin(), src.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    out.min_raw = lo;
    out.max_raw = hi;

    auto dst = out.pixels.pixels();
    if (hi == lo) {
        std::fill(dst.begin(), dst.end(), 0.5f);
        return out;
    }
    const double range = hi - lo;
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<float>((src[i] - lo) / range);
    return out;
}

ThermalFrame invert(const ThermalFrame& frame) {
    if (!frame.normalized) throw std::invalid_argument("invert: frame must be normalized first");
    ThermalFrame out = frame;
    for (float& p : out.pixels.pixels()) p = 1.0f - p;
    return out;
}

ThermalFrame despike(const ThermalFrame& frame, const DespikeConfig& config) {
    if (config.window < 3 || config.window % 2 == 0)
        throw std::invalid_argument("despike window must be odd and >= 3");
    if (config.k < 0.0) throw std::invalid_argument("despike multiplier must be non-negative");

    ThermalFrame out = frame;
    const int h = frame.height();
    const int w = frame.width();
    const int r = config.window / 2;
    const std::size_t cells = static_cast<std::size_t>(config.window) * config.window;
    const ImageF32& src = frame.pixels;
    ImageF32& dst = out.pixels;

#pragma omp parallel
    {
        std::vector<float> window(cells);
        std::vector<float> scratch(cells);
#pragma omp for schedule(static)
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                std::size_t n = 0;
                double sum = 0.0;
                for (int dy = -r; dy <= r; ++dy) {
                    const int sy = reflect_index(y + dy, h);
                    for (int dx = -r; dx <= r; ++dx) {
                        const float v = src.at(0, sy, reflect_index(x + dx, w));
                        window[n++] = v;
                        sum += v;
                    }
                }
                const double mean = sum / static_cast<double>(cells);
                double sq = 0.0;
                for (float v : window) sq += (v - mean) * (v - mean);
                const double stddev = std::sqrt(sq / static_cast<double>(cells));

                std::copy(window.begin(), window.end(), scratch.begin());
                auto mid = scratch.begin() + static_cast<std::ptrdiff_t>(cells / 2);
                std::nth_element(scratch.begin(), mid, scratch.end());
                const float median = *mid;

                const float p = src.at(0, y, x);
                if (std::abs(static_cast<double>(p) - median) > config.k * stddev) dst.at(0, y, x) = median;
            }
        }
    }
    return out;
}

ThermalFrame preprocess(const ThermalFrame& frame, const PreprocessConfig& config) {
    if (frame.normalized) return frame;
    ThermalFrame out = config.despike ? despike(frame, config.despike_config) : frame;
    out = instance_normalize(out);
    if (config.invert) out = invert(out);
    return out;
}

}  // namespace thermopan::preprocess
