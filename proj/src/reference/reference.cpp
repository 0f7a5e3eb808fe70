#include "thermopan/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thermopan::reference {

namespace {

int reflect(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * (n - 1);
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

}  // namespace

ImageF32 convolve_direct(const ImageF32& img, const frequency::Kernel& kernel) {
    const int r = kernel.radius();
    ImageF32 out(img.height(), img.width(), img.channels());
    for (int c = 0; c < img.channels(); ++c)
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < img.width(); ++x) {
                double acc = 0.0;
                for (int i = -r; i <= r; ++i)
                    for (int j = -r; j <= r; ++j)
                        acc += kernel.weight(i + r, j + r) *
                               img.at(c, reflect(y + i, img.height()), reflect(x + j, img.width()));
                out.at(c, y, x) = static_cast<float>(acc);
            }
    return out;
}

std::vector<double> blur_direct(std::span<const double> src, int height, int width, const frequency::Kernel& kernel) {
    const int r = kernel.radius();
    std::vector<double> out(src.size());
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i)
                for (int j = -r; j <= r; ++j)
                    acc += kernel.weight(i + r, j + r) *
                           src[static_cast<std::size_t>(reflect(y + i, height)) * width + reflect(x + j, width)];
            out[static_cast<std::size_t>(y) * width + x] = acc;
        }
    return out;
}

ThermalFrame despike(const ThermalFrame& frame, const preprocess::DespikeConfig& cfg) {
    const ImageF32& src = frame.pixels;
    const int r = cfg.window / 2;
    ThermalFrame out = frame;
    for (int y = 0; y < src.height(); ++y)
        for (int x = 0; x < src.width(); ++x) {
            std::vector<double> win;
            for (int i = -r; i <= r; ++i)
                for (int j = -r; j <= r; ++j)
                    win.push_back(src.at(0, reflect(y + i, src.height()), reflect(x + j, src.width())));
            double mean = 0.0;
            for (double v : win) mean += v;
            mean /= static_cast<double>(win.size());
            double var = 0.0;
            for (double v : win) var += (v - mean) * (v - mean);
            const double sd = std::sqrt(var / static_cast<double>(win.size()));
            std::sort(win.begin(), win.end());
            const double med = win[win.size() / 2];
            if (std::abs(src.at(0, y, x) - med) > cfg.k * sd) out.pixels.at(0, y, x) = static_cast<float>(med);
        }
    return out;
}

double rmse(const ImageF32& a, const ImageF32& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("reference::rmse: shape mismatch");
    double s = 0.0;
    for (int c = 0; c < a.channels(); ++c)
        for (int y = 0; y < a.height(); ++y)
            for (int x = 0; x < a.width(); ++x) {
                const double d = static_cast<double>(a.at(c, y, x)) - b.at(c, y, x);
                s += d * d;
            }
    return std::sqrt(s / static_cast<double>(a.size()));
}

double psnr(const ImageF32& a, const ImageF32& b) {
    const double e = rmse(a, b);
    if (e < 1e-5) return 100.0;
    return 10.0 * std::log10(1.0 / (e * e));
}

double ssim(const ImageF32& a, const ImageF32& b, const metrics::SsimParams& p) {
    if (!a.same_shape(b)) throw std::invalid_argument("reference::ssim: shape mismatch");
    const int n = p.window;
    const int r = n / 2;
    std::vector<double> w(static_cast<std::size_t>(n) * n);
    double wsum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = std::exp(-((i - r) * (i - r) + (j - r) * (j - r)) / (2.0 * p.sigma * p.sigma));
            w[static_cast<std::size_t>(i) * n + j] = v;
            wsum += v;
        }
    for (double& v : w) v /= wsum;

    const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
    const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
    double per_channel = 0.0;
    for (int c = 0; c < a.channels(); ++c) {
        double sum = 0.0;
        int count = 0;
        for (int y0 = 0; y0 + n <= a.height(); ++y0)
            for (int x0 = 0; x0 + n <= a.width(); ++x0) {
                double ma = 0.0, mb = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const double wt = w[static_cast<std::size_t>(i) * n + j];
                        ma += wt * a.at(c, y0 + i, x0 + j);
                        mb += wt * b.at(c, y0 + i, x0 + j);
                    }
                double va = 0.0, vb = 0.0, cov = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const double wt = w[static_cast<std::size_t>(i) * n + j];
                        const double da = a.at(c, y0 + i, x0 + j) - ma;
                        const double db = b.at(c, y0 + i, x0 + j) - mb;
                        va += wt * da * da;
                        vb += wt * db * db;
                        cov += wt * da * db;
                    }
                sum += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
                ++count;
            }
        per_channel += sum / count;
    }
    return per_channel / a.channels();
}

model::Tensor<double> conv2d(const model::Tensor<double>& x, const model::Tensor<double>& w,
                             std::span<const double> bias, int stride, int pad) {
    const int k = w.dim(2);
    const int oh = (x.h() + 2 * pad - k) / stride + 1;
    const int ow = (x.w() + 2 * pad - k) / stride + 1;
    auto y = model::Tensor<double>::nchw(x.n(), w.dim(0), oh, ow);
    for (int n = 0; n < x.n(); ++n)
        for (int o = 0; o < w.dim(0); ++o)
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox) {
                    double acc = bias.empty() ? 0.0 : bias[static_cast<std::size_t>(o)];
                    for (int i = 0; i < x.c(); ++i)
                        for (int ky = 0; ky < k; ++ky)
                            for (int kx = 0; kx < k; ++kx) {
                                const int iy = oy * stride + ky - pad;
                                const int ix = ox * stride + kx - pad;
                                if (iy < 0 || ix < 0 || iy >= x.h() || ix >= x.w()) continue;
                                acc += w[((static_cast<std::size_t>(o) * x.c() + i) * k + ky) * k + kx] *
                                       x.at(n, i, iy, ix);
                            }
                    y.at(n, o, oy, ox) = acc;
                }
    return y;
}

}  // namespace thermopan::reference
