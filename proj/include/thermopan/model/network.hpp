#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thermopan/model/layers.hpp"
#include "thermopan/model/tensor.hpp"

namespace thermopan::model {

/// Encoder-decoder colorizer layout.
///
/// `depth` stride-2 blocks (conv 3x3 -> instance norm -> leaky ReLU) halve the
/// resolution while widths grow as base_width * 2^i (capped at max_width).
/// Dropout follows the bottleneck. `depth` decoder blocks each upsample 2x
/// (nearest), concatenate the matching encoder output (or the input image at
/// full resolution) and run conv 3x3 -> instance norm -> leaky ReLU. A final
/// conv 3x3 + sigmoid produces the colour channels.
struct Architecture {
    int in_channels = 1;
    int out_channels = 3;
    int base_width = 32;
    int depth = 4;
    int max_width = 256;
    int kernel_size = 3;
    double leaky_slope = 0.2;
    double dropout = 0.5;

    void validate() const;
    [[nodiscard]] int width(int level) const;
    [[nodiscard]] int downsampling_factor() const { return 1 << depth; }
    [[nodiscard]] std::size_t tensor_count() const { return static_cast<std::size_t>(8 * depth + 2); }

    friend bool operator==(const Architecture&, const Architecture&) = default;
};

/// Learnable tensors in a fixed order. Per block: conv weight, conv bias,
/// norm scale, norm shift; encoder blocks first, then decoder blocks from
/// the bottleneck outwards, then the output conv weight and bias.
template <typename T>
struct ModelParams {
    Architecture arch;
    std::vector<Tensor<T>> tensors;

    [[nodiscard]] std::size_t parameter_count() const;
    [[nodiscard]] bool all_finite() const;

    template <typename U>
    [[nodiscard]] ModelParams<U> cast() const {
        ModelParams<U> out{arch, {}};
        for (const auto& t : tensors) out.tensors.push_back(t.template cast<U>());
        return out;
    }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Shapes of every tensor, in parameter order.
std::vector<std::vector<int>> parameter_shapes(const Architecture& arch);

/// Normal(0, sqrt(2 / fan_in)) samples, fan_in = product of all but the first dimension.
Tensor<float> he_init(const std::vector<int>& shape, std::uint64_t seed);

/// He-initialized conv weights, zero biases, unit norm scales, zero shifts.
ModelParams<float> init_params(const Architecture& arch, std::uint64_t seed);

enum class Mode { train, eval };

/// Forward/backward driver. Keeps the activations of the last forward call.
template <typename T>
class Network {
public:
    explicit Network(const ModelParams<T>& params);

    /// x: N x in_channels x H x W with H, W divisible by the downsampling factor.
    Tensor<T> forward(const Tensor<T>& x, Mode mode, std::uint64_t dropout_seed = 0);

    /// Gradients for every parameter tensor of the last forward call.
    /// When `grad_input` is non-null it receives dL/dx as well.
    std::vector<Tensor<T>> backward(const Tensor<T>& grad_output, Tensor<T>* grad_input = nullptr);

private:
    struct Block {
        Tensor<T> input;
        InstanceNormCache<T> norm;
        Tensor<T> normed;
    };

    const ModelParams<T>& params_;
    Tensor<T> input_;
    std::vector<Block> encoder_;
    std::vector<Block> decoder_;
    std::vector<Tensor<T>> encoder_out_;
    Tensor<T> dropout_mask_;
    Tensor<T> head_input_;
    Tensor<T> output_;
    bool has_forward_ = false;
};

/// Eval-mode forward of a single image; tensor layout 1 x C x H x W.
template <typename T>
Tensor<T> predict(const ModelParams<T>& params, const Tensor<T>& x);

}  // namespace thermopan::model
