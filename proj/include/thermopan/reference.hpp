#pragma once

// Straightforward serial implementations used as test oracles and as the
// baseline in the benchmarks. They favour readability over speed and share
// no code with the production kernels.

#include <span>
#include <vector>

#include "thermopan/frequency.hpp"
#include "thermopan/image.hpp"
#include "thermopan/metrics.hpp"
#include "thermopan/model/tensor.hpp"
#include "thermopan/preprocess.hpp"

namespace thermopan::reference {

/// Direct 2-D Gaussian filtering with the size x size weight grid, reflect-101 borders.
ImageF32 convolve_direct(const ImageF32& img, const frequency::Kernel& kernel);

/// Direct Gaussian blur of a double plane.
std::vector<double> blur_direct(std::span<const double> src, int height, int width, const frequency::Kernel& kernel);

/// Median/std test evaluated pixel by pixel with explicit window copies.
ThermalFrame despike(const ThermalFrame& frame, const preprocess::DespikeConfig& cfg = {});

double rmse(const ImageF32& a, const ImageF32& b);
double psnr(const ImageF32& a, const ImageF32& b);
/// 2-D window weights, two-pass local variances.
double ssim(const ImageF32& a, const ImageF32& b, const metrics::SsimParams& params = {});

/// Zero-padded cross-correlation, seven nested loops.
model::Tensor<double> conv2d(const model::Tensor<double>& x, const model::Tensor<double>& w,
                             std::span<const double> bias, int stride, int pad);

}  // namespace thermopan::reference
