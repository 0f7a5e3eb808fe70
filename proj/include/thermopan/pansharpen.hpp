#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "thermopan/frequency.hpp"
#include "thermopan/image.hpp"

namespace thermopan::pansharpen {

enum class OutOfBand {
    clip,         ///< clamp every sample to [0, 1]
    renormalize,  ///< one affine map for the whole image, only when something is out of band
    none,         ///< leave values as computed (experiments only; not savable)
};

OutOfBand parse_out_of_band(std::string_view name);
std::string_view to_string(OutOfBand mode);

struct FusionConfig {
    double lambda = 3.0;
    OutOfBand out_of_band = OutOfBand::clip;

    void validate() const;
};

/// lf_rgb + lambda * hf, with the gray high-frequency band broadcast to all
/// three channels, followed by out-of-band handling.
ImageF32 fuse(const ImageF32& lf_rgb, const ImageF32& hf_thermal, const FusionConfig& cfg);

/// Fuses the visible image's own low-frequency band with the thermal
/// high-frequency band. Upper bound on what a perfect colorizer can score.
/// The thermal frame must already be preprocessed.
ImageF32 oracle_fuse(const PairedSample& pair, const frequency::KernelSpec& spec, const FusionConfig& cfg);

struct SweepRow {
    double lambda = 0.0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    /// psnr[l][i]: PSNR of pair i (input order) at lambdas[l].
    std::vector<std::vector<double>> psnr;

    /// `lambda,min,q1,median,q3,max,mean`, 6 decimals, one row per lambda.
    void write_csv(std::ostream& os) const;
};

/// Linear-interpolation quantile (the "type 7" rule) of a sample.
double quantile(std::vector<double> values, double q);

SweepReport lambda_sweep(const std::vector<PairedSample>& pairs, const std::vector<double>& lambdas,
                         const frequency::KernelSpec& spec, OutOfBand mode = OutOfBand::clip);

}  // namespace thermopan::pansharpen
