#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "thermopan/image.hpp"

namespace thermopan::metrics {

inline constexpr double kPsnrCapDb = 100.0;
inline constexpr double kPsnrCapRmse = 1e-5;

/// Root-mean-square error over every pixel and channel.
double rmse(const ImageF32& a, const ImageF32& b);

/// 20 log10(1 / rmse) with peak 1.0, capped at 100 dB below rmse 1e-5.
double psnr(const ImageF32& a, const ImageF32& b);
double psnr_from_rmse(double rmse_value);

struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 1.0;
};

/// Single-scale SSIM: Gaussian-weighted local statistics at every position
/// where the window fits entirely, averaged over positions, then channels.
double ssim(const ImageF32& a, const ImageF32& b, const SsimParams& params = {});

struct ImageMetrics {
    std::string id;
    double psnr = 0.0;
    double ssim = 0.0;
    double rmse = 0.0;
};

struct MetricReport {
    std::vector<ImageMetrics> per_image;
    /// Unweighted means; id is "MEAN".
    ImageMetrics mean;

    /// `id,psnr,ssim,rmse` rows followed by the MEAN row, 6 decimals.
    void write_csv(std::ostream& os) const;
};

struct EvalPair {
    std::string id;
    ImageF32 prediction;
    ImageF32 truth;
};

MetricReport evaluate_set(const std::vector<EvalPair>& pairs);

}  // namespace thermopan::metrics
