#include "thermopan/metrics.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace thermopan::metrics {

namespace {

void require_same_shape(const ImageF32& a, const ImageF32& b, const char* what) {
    if (!a.same_shape(b))
        throw std::invalid_argument(fmt::format("{}: shape mismatch {}x{}x{} vs {}x{}x{}", what, a.height(), a.width(),
                                                a.channels(), b.height(), b.width(), b.channels()));
    if (a.empty()) throw std::invalid_argument(fmt::format("{}: empty images", what));
}

std::vector<double> gaussian_taps(int size, double sigma) {
    std::vector<double> taps(static_cast<std::size_t>(size));
    const int r = size / 2;
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) sum += taps[static_cast<std::size_t>(i + r)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    for (double& t : taps) t /= sum;
    return taps;
}

/// Mean SSIM of one channel over all valid window positions.
double ssim_plane(std::span<const float> a, std::span<const float> b, int height, int width,
                  const std::vector<double>& taps, double c1, double c2) {
    const int n = static_cast<int>(taps.size());
    const int out_w = width - n + 1;
    const int out_h = height - n + 1;

    // horizontal valid pass over five moment planes
    const std::size_t hsize = static_cast<std::size_t>(height) * out_w;
    std::vector<double> ha(hsize), hb(hsize), haa(hsize), hbb(hsize), hab(hsize);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y) {
        const float* ra = a.data() + static_cast<std::size_t>(y) * width;
        const float* rb = b.data() + static_cast<std::size_t>(y) * width;
        for (int x = 0; x < out_w; ++x) {
            double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
            for (int k = 0; k < n; ++k) {
                const double va = ra[x + k];
                const double vb = rb[x + k];
                const double t = taps[static_cast<std::size_t>(k)];
                sa += t * va;
                sb += t * vb;
                saa += t * va * va;
                sbb += t * vb * vb;
                sab += t * va * vb;
            }
            const std::size_t o = static_cast<std::size_t>(y) * out_w + x;
            ha[o] = sa;
            hb[o] = sb;
            haa[o] = saa;
            hbb[o] = sbb;
            hab[o] = sab;
        }
    }

    std::vector<double> row_sums(static_cast<std::size_t>(out_h), 0.0);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < out_h; ++y) {
        double row_sum = 0.0;
        for (int x = 0; x < out_w; ++x) {
            double mu_a = 0, mu_b = 0, e_aa = 0, e_bb = 0, e_ab = 0;
            for (int k = 0; k < n; ++k) {
                const std::size_t o = static_cast<std::size_t>(y + k) * out_w + x;
                const double t = taps[static_cast<std::size_t>(k)];
                mu_a += t * ha[o];
                mu_b += t * hb[o];
                e_aa += t * haa[o];
                e_bb += t * hbb[o];
                e_ab += t * hab[o];
            }
            const double var_a = e_aa - mu_a * mu_a;
            const double var_b = e_bb - mu_b * mu_b;
            const double cov = e_ab - mu_a * mu_b;
            const double num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
            const double den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
            row_sum += num / den;
        }
        row_sums[static_cast<std::size_t>(y)] = row_sum;
    }
    double total = 0.0;
    for (double s : row_sums) total += s;
    return total / (static_cast<double>(out_h) * out_w);
}

}  // namespace

double rmse(const ImageF32& a, const ImageF32& b) {
    require_same_shape(a, b, "rmse");
    const auto pa = a.pixels();
    const auto pb = b.pixels();
    double sum = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double d = static_cast<double>(pa[i]) - pb[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(pa.size()));
}

double psnr_from_rmse(double rmse_value) {
    if (rmse_value < kPsnrCapRmse) return kPsnrCapDb;
    return std::min(kPsnrCapDb, 20.0 * std::log10(1.0 / rmse_value));
}

double psnr(const ImageF32& a, const ImageF32& b) { return psnr_from_rmse(rmse(a, b)); }

double ssim(const ImageF32& a, const ImageF32& b, const SsimParams& params) {
    require_same_shape(a, b, "ssim");
    if (params.window < 1 || params.window % 2 == 0) throw std::invalid_argument("ssim window must be odd");
    if (a.height() < params.window || a.width() < params.window)
        throw std::invalid_argument(fmt::format("ssim: image {}x{} is smaller than the {}x{} window", a.height(),
                                                a.width(), params.window, params.window));
    const auto taps = gaussian_taps(params.window, params.sigma);
    const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
    const double c2 = std::pow(params.k2 * params.dynamic_range, 2);
    double total = 0.0;
    for (int c = 0; c < a.channels(); ++c)
        total += ssim_plane(a.plane(c), b.plane(c), a.height(), a.width(), taps, c1, c2);
    return total / a.channels();
}

void MetricReport::write_csv(std::ostream& os) const {
    os << "id,psnr,ssim,rmse\n";
    for (const auto& m : per_image) fmt::print(os, "{},{:.6f},{:.6f},{:.6f}\n", m.id, m.psnr, m.ssim, m.rmse);
    fmt::print(os, "MEAN,{:.6f},{:.6f},{:.6f}\n", mean.psnr, mean.ssim, mean.rmse);
}

MetricReport evaluate_set(const std::vector<EvalPair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("evaluate_set: no image pairs");
    MetricReport report;
    report.per_image.resize(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        require_same_shape(pairs[i].prediction, pairs[i].truth, pairs[i].id.c_str());

#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& p = pairs[i];
        const double e = rmse(p.prediction, p.truth);
        report.per_image[i] = {p.id, psnr_from_rmse(e), ssim(p.prediction, p.truth), e};
    }

    report.mean.id = "MEAN";
    for (const auto& m : report.per_image) {
        report.mean.psnr += m.psnr;
        report.mean.ssim += m.ssim;
        report.mean.rmse += m.rmse;
    }
    const double n = static_cast<double>(report.per_image.size());
    report.mean.psnr /= n;
    report.mean.ssim /= n;
    report.mean.rmse /= n;
    return report;
}

}  // namespace thermopan::metrics
