#pragma once

#include "thermopan/frequency.hpp"
#include "thermopan/image.hpp"
#include "thermopan/model/network.hpp"
#include "thermopan/pansharpen.hpp"
#include "thermopan/preprocess.hpp"

namespace thermopan::model {

/// G(x) for one preprocessed single-channel image.
ImageF32 forward(const ModelParams<float>& params, const ImageF32& x);

/// fuse(LF of G(x), HF of x). Raw frames are preprocessed with `pcfg` first.
ImageF32 colorize(const ModelParams<float>& params, const ThermalFrame& frame, const pansharpen::FusionConfig& fcfg,
                  const frequency::KernelSpec& spec, const preprocess::PreprocessConfig& pcfg = {});

}  // namespace thermopan::model
