#pragma once

#include <cstdint>
#include <vector>

#include "thermopan/model/tensor.hpp"

namespace thermopan::model {

/// PyTorch defaults.
struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

template <typename T>
struct AdamState {
    std::vector<Tensor<T>> m;
    std::vector<Tensor<T>> v;
    std::int64_t t = 0;  ///< steps taken so far

    /// Zero moments shaped like `params`.
    static AdamState zeros_like(const std::vector<Tensor<T>>& params);
};

/// One bias-corrected update:
///   m = b1 m + (1-b1) g,  v = b2 v + (1-b2) g^2,
///   p -= lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
/// An empty state is initialized on first use.
template <typename T>
void adam_step(std::vector<Tensor<T>>& params, const std::vector<Tensor<T>>& grads, AdamState<T>& state, double lr,
               const AdamConfig& cfg = {});

}  // namespace thermopan::model
