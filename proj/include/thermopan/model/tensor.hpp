#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace thermopan::model {

/// Dense row-major tensor. Activations are rank 4 (batch, channel, row, col);
/// parameters use whatever rank fits (conv weights are out x in x k x k).
template <typename T>
class Tensor {
public:
    using value_type = T;

    Tensor() = default;
    explicit Tensor(std::vector<int> shape, T fill = T{}) : shape_(std::move(shape)) {
        for (int d : shape_)
            if (d < 0) throw std::invalid_argument("tensor dimensions must be non-negative");
        data_.assign(count(shape_), fill);
    }
    Tensor(std::vector<int> shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
        if (data_.size() != count(shape_)) throw std::invalid_argument("tensor data does not match shape");
    }

    static Tensor nchw(int n, int c, int h, int w, T fill = T{}) { return Tensor({n, c, h, w}, fill); }

    [[nodiscard]] const std::vector<int>& shape() const noexcept { return shape_; }
    [[nodiscard]] int rank() const noexcept { return static_cast<int>(shape_.size()); }
    [[nodiscard]] int dim(int i) const { return shape_.at(static_cast<std::size_t>(i)); }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    // rank-4 accessors
    [[nodiscard]] int n() const { return dim(0); }
    [[nodiscard]] int c() const { return dim(1); }
    [[nodiscard]] int h() const { return dim(2); }
    [[nodiscard]] int w() const { return dim(3); }
    [[nodiscard]] std::size_t plane_size() const { return static_cast<std::size_t>(h()) * w(); }

    [[nodiscard]] T* plane(int n_idx, int c_idx) {
        return data_.data() + (static_cast<std::size_t>(n_idx) * c() + c_idx) * plane_size();
    }
    [[nodiscard]] const T* plane(int n_idx, int c_idx) const {
        return data_.data() + (static_cast<std::size_t>(n_idx) * c() + c_idx) * plane_size();
    }
    [[nodiscard]] T& at(int n_idx, int c_idx, int y, int x) {
        return plane(n_idx, c_idx)[static_cast<std::size_t>(y) * w() + x];
    }
    [[nodiscard]] T at(int n_idx, int c_idx, int y, int x) const {
        return plane(n_idx, c_idx)[static_cast<std::size_t>(y) * w() + x];
    }

    [[nodiscard]] T* data() noexcept { return data_.data(); }
    [[nodiscard]] const T* data() const noexcept { return data_.data(); }
    [[nodiscard]] std::span<T> values() noexcept { return data_; }
    [[nodiscard]] std::span<const T> values() const noexcept { return data_; }
    [[nodiscard]] T& operator[](std::size_t i) noexcept { return data_[i]; }
    [[nodiscard]] T operator[](std::size_t i) const noexcept { return data_[i]; }

    void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

    [[nodiscard]] bool same_shape(const Tensor& o) const noexcept { return shape_ == o.shape_; }

    template <typename U>
    [[nodiscard]] Tensor<U> cast() const {
        return Tensor<U>(shape_, std::vector<U>(data_.begin(), data_.end()));
    }

    friend bool operator==(const Tensor&, const Tensor&) = default;

    static std::size_t count(const std::vector<int>& shape) {
        return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                               [](std::size_t a, int d) { return a * static_cast<std::size_t>(d); });
    }

private:
    std::vector<int> shape_;
    std::vector<T> data_;
};

std::string shape_string(const std::vector<int>& shape);

}  // namespace thermopan::model
