#pragma once

#include <vector>

#include "thermopan/image.hpp"
#include "thermopan/model/tensor.hpp"

namespace thermopan::model {

/// 1 x C x H x W view of a planar image (same memory order, so a plain copy).
Tensor<float> to_tensor(const ImageF32& img);

/// Stacks equally sized images into N x C x H x W.
Tensor<float> stack(const std::vector<const ImageF32*>& images);

/// Image `n` of a batch.
ImageF32 to_image(const Tensor<float>& t, int n = 0);

}  // namespace thermopan::model
