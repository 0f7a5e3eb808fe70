#pragma once

#include "thermopan/frequency.hpp"
#include "thermopan/image.hpp"
#include "thermopan/model/tensor.hpp"

namespace thermopan::model {

struct LossConfig {
    double alpha = 10.0;
    frequency::KernelSpec kernel;

    void validate() const;
};

template <typename T>
struct LossResult {
    double total = 0.0;
    double content = 0.0;  ///< mean |gx - y|
    double lf = 0.0;       ///< mean (blur(gx) - blur(y))^2
    Tensor<T> grad;        ///< d total / d gx
};

/// content + alpha * lf over every element of the batch. At gx == y the
/// subgradient of the L1 term is taken as zero.
template <typename T>
LossResult<T> loss_total(const Tensor<T>& gx, const Tensor<T>& y, const LossConfig& cfg);

template <typename T>
LossResult<T> loss_total(const Tensor<T>& gx, const Tensor<T>& y, const LossConfig& cfg,
                         const frequency::Kernel& kernel);

LossResult<float> loss_total(const ImageF32& gx, const ImageF32& y, const LossConfig& cfg);

}  // namespace thermopan::model
