#include "thermopan/model/layers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace thermopan::model {

std::string shape_string(const std::vector<int>& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) s += (i ? "x" : "") + std::to_string(shape[i]);
    return s + "]";
}

int conv_output_size(int input, int kernel, int stride, int pad) {
    if (stride < 1) throw std::invalid_argument("conv stride must be >= 1");
    const int span = input + 2 * pad - kernel;
    if (span < 0) throw std::invalid_argument("conv kernel larger than padded input");
    return span / stride + 1;
}

namespace {

void require_rank4(const auto& t, const char* what) {
    if (t.rank() != 4) throw std::invalid_argument(std::string(what) + ": expected a rank-4 tensor, got " +
                                                   shape_string(t.shape()));
}

/// Output columns [lo, hi] whose input column ox*stride + kx - pad lies inside [0, width).
struct ColumnRange {
    int lo;
    int hi;
};

ColumnRange valid_columns(int out_w, int in_w, int kx, int stride, int pad) {
    // ox*stride >= pad - kx  and  ox*stride <= in_w - 1 + pad - kx
    const int a = pad - kx;
    int lo = a <= 0 ? 0 : (a + stride - 1) / stride;
    const int b = in_w - 1 + pad - kx;
    int hi = b < 0 ? -1 : std::min(out_w - 1, b / stride);
    return {lo, hi};
}

}  // namespace

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& x, const Tensor<T>& w, std::span<const T> bias, int stride, int pad) {
    require_rank4(x, "conv2d_forward input");
    require_rank4(w, "conv2d_forward weight");
    if (w.dim(1) != x.c() || w.dim(2) != w.dim(3))
        throw std::invalid_argument("conv2d_forward: weight " + shape_string(w.shape()) + " incompatible with input " +
                                    shape_string(x.shape()));
    if (!bias.empty() && bias.size() != static_cast<std::size_t>(w.dim(0)))
        throw std::invalid_argument("conv2d_forward: bias size does not match output channels");

    const int n = x.n(), cin = x.c(), h = x.h(), wd = x.w();
    const int cout = w.dim(0), k = w.dim(2);
    const int ho = conv_output_size(h, k, stride, pad);
    const int wo = conv_output_size(wd, k, stride, pad);
    auto y = Tensor<T>::nchw(n, cout, ho, wo);

#pragma omp parallel for schedule(static)
    for (int job = 0; job < n * cout; ++job) {
        const int b = job / cout;
        const int oc = job % cout;
        T* out = y.plane(b, oc);
        std::fill(out, out + static_cast<std::size_t>(ho) * wo, bias.empty() ? T{} : bias[oc]);
        for (int ic = 0; ic < cin; ++ic) {
            const T* in = x.plane(b, ic);
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    const T wv = w.at(oc, ic, ky, kx);
                    const auto cols = valid_columns(wo, wd, kx, stride, pad);
                    for (int oy = 0; oy < ho; ++oy) {
                        const int iy = oy * stride + ky - pad;
                        if (iy < 0 || iy >= h) continue;
                        const T* irow = in + static_cast<std::size_t>(iy) * wd + (kx - pad);
                        T* orow = out + static_cast<std::size_t>(oy) * wo;
                        if (stride == 1) {
#pragma omp simd
                            for (int ox = cols.lo; ox <= cols.hi; ++ox) orow[ox] += wv * irow[ox];
                        } else {
                            for (int ox = cols.lo; ox <= cols.hi; ++ox) orow[ox] += wv * irow[ox * stride];
                        }
                    }
                }
            }
        }
    }
    return y;
}

template <typename T>
Conv2dGrads<T> conv2d_backward(const Tensor<T>& grad_y, const Tensor<T>& x, const Tensor<T>& w, int stride, int pad,
                               bool need_grad_x) {
    require_rank4(grad_y, "conv2d_backward grad");
    const int n = x.n(), cin = x.c(), h = x.h(), wd = x.w();
    const int cout = w.dim(0), k = w.dim(2);
    const int ho = conv_output_size(h, k, stride, pad);
    const int wo = conv_output_size(wd, k, stride, pad);
    if (grad_y.n() != n || grad_y.c() != cout || grad_y.h() != ho || grad_y.w() != wo)
        throw std::invalid_argument("conv2d_backward: upstream gradient " + shape_string(grad_y.shape()) +
                                    " does not match forward output");

    Conv2dGrads<T> g;
    g.grad_w = Tensor<T>(w.shape());
    g.grad_b.assign(static_cast<std::size_t>(cout), T{});

    if (need_grad_x) {
        g.grad_x = Tensor<T>(x.shape());
#pragma omp parallel for schedule(static)
        for (int job = 0; job < n * cin; ++job) {
            const int b = job / cin;
            const int ic = job % cin;
            T* gin = g.grad_x.plane(b, ic);
            for (int oc = 0; oc < cout; ++oc) {
                const T* gout = grad_y.plane(b, oc);
                for (int ky = 0; ky < k; ++ky) {
                    for (int kx = 0; kx < k; ++kx) {
                        const T wv = w.at(oc, ic, ky, kx);
                        const auto cols = valid_columns(wo, wd, kx, stride, pad);
                        for (int oy = 0; oy < ho; ++oy) {
                            const int iy = oy * stride + ky - pad;
                            if (iy < 0 || iy >= h) continue;
                            T* irow = gin + static_cast<std::size_t>(iy) * wd + (kx - pad);
                            const T* orow = gout + static_cast<std::size_t>(oy) * wo;
                            if (stride == 1) {
#pragma omp simd
                                for (int ox = cols.lo; ox <= cols.hi; ++ox) irow[ox] += wv * orow[ox];
                            } else {
                                for (int ox = cols.lo; ox <= cols.hi; ++ox) irow[ox * stride] += wv * orow[ox];
                            }
                        }
                    }
                }
            }
        }
    }

#pragma omp parallel for schedule(static)
    for (int job = 0; job < cout * cin; ++job) {
        const int oc = job / cin;
        const int ic = job % cin;
        for (int ky = 0; ky < k; ++ky) {
            for (int kx = 0; kx < k; ++kx) {
                const auto cols = valid_columns(wo, wd, kx, stride, pad);
                double acc = 0.0;
                for (int b = 0; b < n; ++b) {
                    const T* in = x.plane(b, ic);
                    const T* gout = grad_y.plane(b, oc);
                    for (int oy = 0; oy < ho; ++oy) {
                        const int iy = oy * stride + ky - pad;
                        if (iy < 0 || iy >= h) continue;
                        const T* irow = in + static_cast<std::size_t>(iy) * wd + (kx - pad);
                        const T* orow = gout + static_cast<std::size_t>(oy) * wo;
                        double row_acc = 0.0;
                        if (stride == 1) {
#pragma omp simd reduction(+ : row_acc)
                            for (int ox = cols.lo; ox <= cols.hi; ++ox)
                                row_acc += static_cast<double>(orow[ox]) * irow[ox];
                        } else {
                            for (int ox = cols.lo; ox <= cols.hi; ++ox)
                                row_acc += static_cast<double>(orow[ox]) * irow[ox * stride];
                        }
                        acc += row_acc;
                    }
                }
                g.grad_w.at(oc, ic, ky, kx) = static_cast<T>(acc);
            }
        }
    }

    for (int oc = 0; oc < cout; ++oc) {
        double acc = 0.0;
        for (int b = 0; b < n; ++b) {
            const T* gout = grad_y.plane(b, oc);
            for (std::size_t i = 0; i < static_cast<std::size_t>(ho) * wo; ++i) acc += gout[i];
        }
        g.grad_b[static_cast<std::size_t>(oc)] = static_cast<T>(acc);
    }
    return g;
}

template <typename T>
Tensor<T> leaky_relu_forward(const Tensor<T>& x, T slope) {
    Tensor<T> y(x.shape());
    const std::size_t count = x.size();
#pragma omp parallel for simd schedule(static)
    for (std::size_t i = 0; i < count; ++i) y[i] = x[i] > T{} ? x[i] : slope * x[i];
    return y;
}

template <typename T>
Tensor<T> leaky_relu_backward(const Tensor<T>& grad_y, const Tensor<T>& x, T slope) {
    Tensor<T> g(x.shape());
    const std::size_t count = x.size();
#pragma omp parallel for simd schedule(static)
    for (std::size_t i = 0; i < count; ++i) g[i] = x[i] > T{} ? grad_y[i] : slope * grad_y[i];
    return g;
}

template <typename T>
Tensor<T> instance_norm_forward(const Tensor<T>& x, std::span<const T> scale, std::span<const T> shift,
                                InstanceNormCache<T>* cache) {
    require_rank4(x, "instance_norm_forward");
    if (scale.size() != static_cast<std::size_t>(x.c()) || shift.size() != static_cast<std::size_t>(x.c()))
        throw std::invalid_argument("instance_norm_forward: affine parameters do not match channel count");
    const int n = x.n(), c = x.c();
    const std::size_t m = x.plane_size();
    Tensor<T> y(x.shape());
    if (cache) {
        cache->x_hat = Tensor<T>(x.shape());
        cache->inv_std.assign(static_cast<std::size_t>(n) * c, T{});
    }

#pragma omp parallel for schedule(static)
    for (int job = 0; job < n * c; ++job) {
        const int b = job / c;
        const int ch = job % c;
        const T* in = x.plane(b, ch);
        double mean = 0.0;
        for (std::size_t i = 0; i < m; ++i) mean += in[i];
        mean /= static_cast<double>(m);
        double var = 0.0;
        for (std::size_t i = 0; i < m; ++i) var += (in[i] - mean) * (in[i] - mean);
        var /= static_cast<double>(m);
        const double inv_std = 1.0 / std::sqrt(var + kInstanceNormEps);
        T* out = y.plane(b, ch);
        T* xh = cache ? cache->x_hat.plane(b, ch) : nullptr;
        for (std::size_t i = 0; i < m; ++i) {
            const T v = static_cast<T>((in[i] - mean) * inv_std);
            if (xh) xh[i] = v;
            out[i] = scale[ch] * v + shift[ch];
        }
        if (cache) cache->inv_std[static_cast<std::size_t>(job)] = static_cast<T>(inv_std);
    }
    return y;
}

template <typename T>
InstanceNormGrads<T> instance_norm_backward(const Tensor<T>& grad_y, const InstanceNormCache<T>& cache,
                                            std::span<const T> scale) {
    const Tensor<T>& xh = cache.x_hat;
    if (!grad_y.same_shape(xh)) throw std::invalid_argument("instance_norm_backward: shape mismatch");
    const int n = xh.n(), c = xh.c();
    const std::size_t m = xh.plane_size();
    InstanceNormGrads<T> g;
    g.grad_x = Tensor<T>(xh.shape());
    g.grad_scale.assign(static_cast<std::size_t>(c), T{});
    g.grad_shift.assign(static_cast<std::size_t>(c), T{});

    std::vector<double> sum_g(static_cast<std::size_t>(n) * c), sum_gx(static_cast<std::size_t>(n) * c);
#pragma omp parallel for schedule(static)
    for (int job = 0; job < n * c; ++job) {
        const int b = job / c;
        const int ch = job % c;
        const T* gy = grad_y.plane(b, ch);
        const T* xp = xh.plane(b, ch);
        double sg = 0.0, sgx = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            sg += gy[i];
            sgx += static_cast<double>(gy[i]) * xp[i];
        }
        sum_g[static_cast<std::size_t>(job)] = sg;
        sum_gx[static_cast<std::size_t>(job)] = sgx;

        // dL/dx = gamma * inv_std / m * (m*g - sum g - x_hat * sum(g*x_hat))
        const double k = scale[ch] * static_cast<double>(cache.inv_std[static_cast<std::size_t>(job)]) /
                         static_cast<double>(m);
        T* gx = g.grad_x.plane(b, ch);
        for (std::size_t i = 0; i < m; ++i)
            gx[i] = static_cast<T>(k * (static_cast<double>(m) * gy[i] - sg - xp[i] * sgx));
    }
    for (int ch = 0; ch < c; ++ch) {
        double gs = 0.0, gb = 0.0;
        for (int b = 0; b < n; ++b) {
            gs += sum_gx[static_cast<std::size_t>(b) * c + ch];
            gb += sum_g[static_cast<std::size_t>(b) * c + ch];
        }
        g.grad_scale[static_cast<std::size_t>(ch)] = static_cast<T>(gs);
        g.grad_shift[static_cast<std::size_t>(ch)] = static_cast<T>(gb);
    }
    return g;
}

template <typename T>
Tensor<T> dropout_forward(const Tensor<T>& x, double p, bool train, std::uint64_t seed, Tensor<T>* mask) {
    if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("dropout rate must be in [0, 1)");
    if (!train || p == 0.0) {
        if (mask) *mask = Tensor<T>(x.shape(), T{1});
        return x;
    }
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution keep(1.0 - p);
    const T scale = static_cast<T>(1.0 / (1.0 - p));
    Tensor<T> m(x.shape());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = keep(rng) ? scale : T{};
    Tensor<T> y(x.shape());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] * m[i];
    if (mask) *mask = std::move(m);
    return y;
}

template <typename T>
Tensor<T> dropout_backward(const Tensor<T>& grad_y, const Tensor<T>& mask) {
    if (!grad_y.same_shape(mask)) throw std::invalid_argument("dropout_backward: shape mismatch");
    Tensor<T> g(grad_y.shape());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = grad_y[i] * mask[i];
    return g;
}

template <typename T>
Tensor<T> sigmoid_forward(const Tensor<T>& x) {
    Tensor<T> y(x.shape());
    const std::size_t count = x.size();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < count; ++i) y[i] = static_cast<T>(1.0 / (1.0 + std::exp(-static_cast<double>(x[i]))));
    return y;
}

template <typename T>
Tensor<T> sigmoid_backward(const Tensor<T>& grad_y, const Tensor<T>& y) {
    Tensor<T> g(y.shape());
    const std::size_t count = y.size();
#pragma omp parallel for simd schedule(static)
    for (std::size_t i = 0; i < count; ++i) g[i] = grad_y[i] * y[i] * (T{1} - y[i]);
    return g;
}

template <typename T>
Tensor<T> upsample2x_forward(const Tensor<T>& x) {
    require_rank4(x, "upsample2x_forward");
    const int h = x.h(), w = x.w();
    auto y = Tensor<T>::nchw(x.n(), x.c(), 2 * h, 2 * w);
#pragma omp parallel for schedule(static)
    for (int job = 0; job < x.n() * x.c(); ++job) {
        const T* in = x.plane(job / x.c(), job % x.c());
        T* out = y.plane(job / x.c(), job % x.c());
        for (int oy = 0; oy < 2 * h; ++oy)
            for (int ox = 0; ox < 2 * w; ++ox)
                out[static_cast<std::size_t>(oy) * 2 * w + ox] = in[static_cast<std::size_t>(oy / 2) * w + ox / 2];
    }
    return y;
}

template <typename T>
Tensor<T> upsample2x_backward(const Tensor<T>& grad_y) {
    require_rank4(grad_y, "upsample2x_backward");
    if (grad_y.h() % 2 || grad_y.w() % 2) throw std::invalid_argument("upsample2x_backward: odd gradient extent");
    const int h = grad_y.h() / 2, w = grad_y.w() / 2;
    auto g = Tensor<T>::nchw(grad_y.n(), grad_y.c(), h, w);
#pragma omp parallel for schedule(static)
    for (int job = 0; job < grad_y.n() * grad_y.c(); ++job) {
        const T* in = grad_y.plane(job / grad_y.c(), job % grad_y.c());
        T* out = g.plane(job / grad_y.c(), job % grad_y.c());
        const std::size_t w2 = static_cast<std::size_t>(2 * w);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const std::size_t o = static_cast<std::size_t>(2 * y) * w2 + 2 * x;
                out[static_cast<std::size_t>(y) * w + x] = in[o] + in[o + 1] + in[o + w2] + in[o + w2 + 1];
            }
    }
    return g;
}

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
    require_rank4(a, "concat_channels");
    require_rank4(b, "concat_channels");
    if (a.n() != b.n() || a.h() != b.h() || a.w() != b.w())
        throw std::invalid_argument("concat_channels: " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
    auto y = Tensor<T>::nchw(a.n(), a.c() + b.c(), a.h(), a.w());
    const std::size_t m = a.plane_size();
    for (int n = 0; n < a.n(); ++n) {
        std::copy_n(a.plane(n, 0), m * a.c(), y.plane(n, 0));
        std::copy_n(b.plane(n, 0), m * b.c(), y.plane(n, a.c()));
    }
    return y;
}

template <typename T>
void split_channels(const Tensor<T>& grad, int channels_a, Tensor<T>& grad_a, Tensor<T>& grad_b) {
    const int cb = grad.c() - channels_a;
    grad_a = Tensor<T>::nchw(grad.n(), channels_a, grad.h(), grad.w());
    grad_b = Tensor<T>::nchw(grad.n(), cb, grad.h(), grad.w());
    const std::size_t m = grad.plane_size();
    for (int n = 0; n < grad.n(); ++n) {
        std::copy_n(grad.plane(n, 0), m * channels_a, grad_a.plane(n, 0));
        std::copy_n(grad.plane(n, channels_a), m * cb, grad_b.plane(n, 0));
    }
}

#define THERMOPAN_INSTANTIATE_LAYERS(T)                                                                          \
    template Tensor<T> conv2d_forward<T>(const Tensor<T>&, const Tensor<T>&, std::span<const T>, int, int);     \
    template Conv2dGrads<T> conv2d_backward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, int, int,  \
                                               bool);                                                           \
    template Tensor<T> leaky_relu_forward<T>(const Tensor<T>&, T);                                              \
    template Tensor<T> leaky_relu_backward<T>(const Tensor<T>&, const Tensor<T>&, T);                           \
    template Tensor<T> instance_norm_forward<T>(const Tensor<T>&, std::span<const T>, std::span<const T>,       \
                                                InstanceNormCache<T>*);                                         \
    template InstanceNormGrads<T> instance_norm_backward<T>(const Tensor<T>&, const InstanceNormCache<T>&,      \
                                                            std::span<const T>);                                \
    template Tensor<T> dropout_forward<T>(const Tensor<T>&, double, bool, std::uint64_t, Tensor<T>*);           \
    template Tensor<T> dropout_backward<T>(const Tensor<T>&, const Tensor<T>&);                                 \
    template Tensor<T> sigmoid_forward<T>(const Tensor<T>&);                                                    \
    template Tensor<T> sigmoid_backward<T>(const Tensor<T>&, const Tensor<T>&);                                 \
    template Tensor<T> upsample2x_forward<T>(const Tensor<T>&);                                                 \
    template Tensor<T> upsample2x_backward<T>(const Tensor<T>&);                                                \
    template Tensor<T> concat_channels<T>(const Tensor<T>&, const Tensor<T>&);                                  \
    template void split_channels<T>(const Tensor<T>&, int, Tensor<T>&, Tensor<T>&);

THERMOPAN_INSTANTIATE_LAYERS(float)
THERMOPAN_INSTANTIATE_LAYERS(double)

#undef THERMOPAN_INSTANTIATE_LAYERS

}  // namespace thermopan::model
