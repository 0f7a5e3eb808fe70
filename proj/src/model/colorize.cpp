#include "thermopan/model/colorize.hpp"

#include <stdexcept>

#include "thermopan/model/convert.hpp"

namespace thermopan::model {

ImageF32 forward(const ModelParams<float>& params, const ImageF32& x) {
    if (x.channels() != params.arch.in_channels)
        throw std::invalid_argument("forward: expected a " + std::to_string(params.arch.in_channels) +
                                    "-channel input");
    return to_image(predict(params, to_tensor(x)));
}

ImageF32 colorize(const ModelParams<float>& params, const ThermalFrame& frame, const pansharpen::FusionConfig& fcfg,
                  const frequency::KernelSpec& spec, const preprocess::PreprocessConfig& pcfg) {
    fcfg.validate();
    const ThermalFrame ready = frame.normalized ? frame : preprocess::preprocess(frame, pcfg);
    const frequency::Kernel kernel = frequency::gaussian_kernel(spec);
    const ImageF32 generated = forward(params, ready.pixels);
    const auto g = frequency::decompose(generated, kernel);
    const auto t = frequency::decompose(ready.pixels, kernel);
    return pansharpen::fuse(g.lf, t.hf, fcfg);
}

}  // namespace thermopan::model
