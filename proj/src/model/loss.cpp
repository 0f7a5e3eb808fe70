#include "thermopan/model/loss.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "thermopan/model/convert.hpp"

namespace thermopan::model {

void LossConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("loss alpha must be positive");
    kernel.validate();
}

template <typename T>
LossResult<T> loss_total(const Tensor<T>& gx, const Tensor<T>& y, const LossConfig& cfg,
                         const frequency::Kernel& kernel) {
    cfg.validate();
    if (!gx.same_shape(y))
        throw std::invalid_argument("loss: prediction " + shape_string(gx.shape()) + " vs target " +
                                    shape_string(y.shape()));
    if (gx.rank() != 4 || gx.size() == 0) throw std::invalid_argument("loss: expected a non-empty N x C x H x W tensor");

    const int height = gx.h();
    const int width = gx.w();
    const std::size_t plane = gx.plane_size();
    const std::size_t planes = gx.size() / plane;
    const double inv_n = 1.0 / static_cast<double>(gx.size());

    LossResult<T> r;
    r.grad = Tensor<T>(gx.shape());

    // blur is linear, so blur(gx) - blur(y) = blur(gx - y)
    std::vector<double> diff(gx.size());
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = static_cast<double>(gx[i]) - static_cast<double>(y[i]);
        abs_sum += std::abs(diff[i]);
    }
    std::vector<double> blurred(diff.size());
    std::vector<double> back(diff.size());
    double sq_sum = 0.0;
    for (std::size_t p = 0; p < planes; ++p) {
        const std::span<const double> d(diff.data() + p * plane, plane);
        const std::span<double> b(blurred.data() + p * plane, plane);
        frequency::blur_plane<double>(d, b, height, width, kernel.taps);
        for (double v : b) sq_sum += v * v;
        frequency::blur_plane_adjoint<double>(b, std::span<double>(back.data() + p * plane, plane), height, width,
                                              kernel.taps);
    }

    r.content = abs_sum * inv_n;
    r.lf = sq_sum * inv_n;
    r.total = r.content + cfg.alpha * r.lf;

    const double lf_scale = cfg.alpha * 2.0 * inv_n;
    for (std::size_t i = 0; i < diff.size(); ++i) {
        const double sign = diff[i] > 0.0 ? 1.0 : (diff[i] < 0.0 ? -1.0 : 0.0);
        r.grad[i] = static_cast<T>(sign * inv_n + lf_scale * back[i]);
    }
    return r;
}

template <typename T>
LossResult<T> loss_total(const Tensor<T>& gx, const Tensor<T>& y, const LossConfig& cfg) {
    cfg.validate();
    return loss_total(gx, y, cfg, frequency::gaussian_kernel(cfg.kernel));
}

LossResult<float> loss_total(const ImageF32& gx, const ImageF32& y, const LossConfig& cfg) {
    if (!gx.same_shape(y)) throw std::invalid_argument("loss: image shapes differ");
    return loss_total(to_tensor(gx), to_tensor(y), cfg);
}

template LossResult<float> loss_total(const Tensor<float>&, const Tensor<float>&, const LossConfig&);
template LossResult<double> loss_total(const Tensor<double>&, const Tensor<double>&, const LossConfig&);
template LossResult<float> loss_total(const Tensor<float>&, const Tensor<float>&, const LossConfig&,
                                      const frequency::Kernel&);
template LossResult<double> loss_total(const Tensor<double>&, const Tensor<double>&, const LossConfig&,
                                       const frequency::Kernel&);

}  // namespace thermopan::model
