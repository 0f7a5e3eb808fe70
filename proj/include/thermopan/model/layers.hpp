#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "thermopan/model/tensor.hpp"

namespace thermopan::model {

// Every forward op has a matching backward that returns exact gradients of a
// scalar loss given the upstream gradient. Kernels are OpenMP-parallel over
// independent output planes, so results do not depend on the thread count.

/// Cross-correlation with zero padding. x: N x Cin x H x W, w: Cout x Cin x K x K,
/// bias: Cout values or empty.
template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& x, const Tensor<T>& w, std::span<const T> bias, int stride, int pad);

template <typename T>
struct Conv2dGrads {
    Tensor<T> grad_x;
    Tensor<T> grad_w;
    std::vector<T> grad_b;
};

template <typename T>
Conv2dGrads<T> conv2d_backward(const Tensor<T>& grad_y, const Tensor<T>& x, const Tensor<T>& w, int stride, int pad,
                               bool need_grad_x = true);

[[nodiscard]] int conv_output_size(int input, int kernel, int stride, int pad);

template <typename T>
Tensor<T> leaky_relu_forward(const Tensor<T>& x, T slope);
template <typename T>
Tensor<T> leaky_relu_backward(const Tensor<T>& grad_y, const Tensor<T>& x, T slope);

inline constexpr double kInstanceNormEps = 1e-5;

template <typename T>
struct InstanceNormCache {
    Tensor<T> x_hat;
    std::vector<T> inv_std;  // per (n, c)
};

/// Per image, per channel standardization (biased variance, eps 1e-5)
/// followed by the affine scale/shift of each channel.
template <typename T>
Tensor<T> instance_norm_forward(const Tensor<T>& x, std::span<const T> scale, std::span<const T> shift,
                                InstanceNormCache<T>* cache = nullptr);

template <typename T>
struct InstanceNormGrads {
    Tensor<T> grad_x;
    std::vector<T> grad_scale;
    std::vector<T> grad_shift;
};

template <typename T>
InstanceNormGrads<T> instance_norm_backward(const Tensor<T>& grad_y, const InstanceNormCache<T>& cache,
                                            std::span<const T> scale);

/// Inverted dropout: kept units are scaled by 1/(1-p). In eval mode the
/// input is returned unchanged and the mask is all ones.
template <typename T>
Tensor<T> dropout_forward(const Tensor<T>& x, double p, bool train, std::uint64_t seed, Tensor<T>* mask = nullptr);
template <typename T>
Tensor<T> dropout_backward(const Tensor<T>& grad_y, const Tensor<T>& mask);

template <typename T>
Tensor<T> sigmoid_forward(const Tensor<T>& x);
/// Takes the forward output y, not the input.
template <typename T>
Tensor<T> sigmoid_backward(const Tensor<T>& grad_y, const Tensor<T>& y);

/// Nearest-neighbour 2x upsampling and its adjoint (2x2 block sums).
template <typename T>
Tensor<T> upsample2x_forward(const Tensor<T>& x);
template <typename T>
Tensor<T> upsample2x_backward(const Tensor<T>& grad_y);

/// Channel concatenation [a, b] and its split.
template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
void split_channels(const Tensor<T>& grad, int channels_a, Tensor<T>& grad_a, Tensor<T>& grad_b);

}  // namespace thermopan::model
