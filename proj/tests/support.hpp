#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "thermopan/image.hpp"
#include "thermopan/model/tensor.hpp"

namespace testsupport {

inline thermopan::ImageF32 random_image(std::uint64_t seed, int h, int w, int c, float lo = 0.0f, float hi = 1.0f) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> u(lo, hi);
    thermopan::ImageF32 img(h, w, c);
    for (float& v : img.pixels()) v = u(rng);
    return img;
}

template <typename T>
thermopan::model::Tensor<T> random_tensor(std::uint64_t seed, std::vector<int> shape, double lo = -1.0,
                                          double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    thermopan::model::Tensor<T> t(std::move(shape));
    for (T& v : t.values()) v = static_cast<T>(u(rng));
    return t;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("thermopan_" + tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// Central differences of a scalar function with respect to every element of
/// `x`, compared with `analytic`. Returns max|analytic - numeric| / max|numeric|.
template <typename T>
double gradient_relative_error(thermopan::model::Tensor<T>& x, const thermopan::model::Tensor<T>& analytic,
                               const std::function<double()>& f, double h = 1e-3) {
    double max_diff = 0.0;
    double max_num = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const T saved = x[i];
        x[i] = static_cast<T>(saved + h);
        const double up = f();
        x[i] = static_cast<T>(saved - h);
        const double down = f();
        x[i] = saved;
        const double numeric = (up - down) / (2.0 * h);
        max_diff = std::max(max_diff, std::abs(numeric - static_cast<double>(analytic[i])));
        max_num = std::max(max_num, std::abs(numeric));
    }
    return max_diff / std::max(max_num, 1e-12);
}

}  // namespace testsupport
