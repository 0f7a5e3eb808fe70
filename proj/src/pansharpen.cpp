#include "thermopan/pansharpen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "thermopan/metrics.hpp"

namespace thermopan::pansharpen {

OutOfBand parse_out_of_band(std::string_view name) {
    if (name == "clip") return OutOfBand::clip;
    if (name == "renormalize") return OutOfBand::renormalize;
    if (name == "none") return OutOfBand::none;
    throw std::invalid_argument("unknown out-of-band mode '" + std::string(name) + "' (clip|renormalize|none)");
}

std::string_view to_string(OutOfBand mode) {
    switch (mode) {
        case OutOfBand::clip: return "clip";
        case OutOfBand::renormalize: return "renormalize";
        case OutOfBand::none: return "none";
    }
    return "?";
}

void FusionConfig::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite and >= 0");
}

ImageF32 fuse(const ImageF32& lf_rgb, const ImageF32& hf_thermal, const FusionConfig& cfg) {
    cfg.validate();
    if (lf_rgb.channels() != 3) throw std::invalid_argument("fuse: low-frequency input must have 3 channels");
    if (hf_thermal.channels() != 1 && hf_thermal.channels() != 3)
        throw std::invalid_argument("fuse: high-frequency input must have 1 or 3 channels");
    if (!lf_rgb.same_extent(hf_thermal))
        throw std::invalid_argument(fmt::format("fuse: extent mismatch {}x{} vs {}x{}", lf_rgb.height(),
                                                lf_rgb.width(), hf_thermal.height(), hf_thermal.width()));

    ImageF32 out = lf_rgb;
    const float lambda = static_cast<float>(cfg.lambda);
    for (int c = 0; c < 3; ++c) {
        auto dst = out.plane(c);
        const auto hf = hf_thermal.plane(hf_thermal.channels() == 1 ? 0 : c);
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += lambda * hf[i];
    }

    switch (cfg.out_of_band) {
        case OutOfBand::clip:
            for (float& v : out.pixels()) v = std::clamp(v, 0.0f, 1.0f);
            break;
        case OutOfBand::renormalize: {
            const auto px = out.pixels();
            const auto [lo_it, hi_it] = std::minmax_element(px.begin(), px.end());
            if (*lo_it < 0.0f || *hi_it > 1.0f) {
                // joint range over all channels keeps hue ratios intact
                const double lo = std::min(0.0, static_cast<double>(*lo_it));
                const double hi = std::max(1.0, static_cast<double>(*hi_it));
                for (float& v : out.pixels())
                    v = std::clamp(static_cast<float>((v - lo) / (hi - lo)), 0.0f, 1.0f);
            }
            break;
        }
        case OutOfBand::none: break;
    }
    return out;
}

ImageF32 oracle_fuse(const PairedSample& pair, const frequency::KernelSpec& spec, const FusionConfig& cfg) {
    validate_pair(pair);
    if (!pair.thermal.normalized) throw std::invalid_argument("oracle_fuse: thermal frame must be preprocessed");
    const auto kernel = frequency::gaussian_kernel(spec);
    const auto visible = frequency::decompose(pair.visible, kernel);
    const auto thermal = frequency::decompose(pair.thermal.pixels, kernel);
    return fuse(visible.lf, thermal.hf, cfg);
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

void SweepReport::write_csv(std::ostream& os) const {
    os << "lambda,min,q1,median,q3,max,mean\n";
    for (const auto& r : rows)
        fmt::print(os, "{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.lambda, r.min, r.q1, r.median, r.q3,
                   r.max, r.mean);
}

SweepReport lambda_sweep(const std::vector<PairedSample>& pairs, const std::vector<double>& lambdas,
                         const frequency::KernelSpec& spec, OutOfBand mode) {
    if (pairs.empty()) throw std::invalid_argument("lambda_sweep: empty pair list");
    if (lambdas.empty()) throw std::invalid_argument("lambda_sweep: empty lambda list");
    for (double l : lambdas) FusionConfig{l, mode}.validate();
    for (const auto& p : pairs) {
        validate_pair(p);
        if (!p.thermal.normalized)
            throw std::invalid_argument("lambda_sweep: pair '" + p.id + "' has an unpreprocessed thermal frame");
    }

    const auto kernel = frequency::gaussian_kernel(spec);
    SweepReport report;
    report.psnr.assign(lambdas.size(), std::vector<double>(pairs.size()));

#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto visible = frequency::decompose(pairs[i].visible, kernel);
        const auto thermal = frequency::decompose(pairs[i].thermal.pixels, kernel);
        for (std::size_t l = 0; l < lambdas.size(); ++l)
            report.psnr[l][i] = metrics::psnr(fuse(visible.lf, thermal.hf, {lambdas[l], mode}), pairs[i].visible);
    }

    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        const auto& v = report.psnr[l];
        SweepRow row;
        row.lambda = lambdas[l];
        row.min = *std::min_element(v.begin(), v.end());
        row.max = *std::max_element(v.begin(), v.end());
        row.q1 = quantile(v, 0.25);
        row.median = quantile(v, 0.5);
        row.q3 = quantile(v, 0.75);
        row.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace thermopan::pansharpen
