#include "thermopan/model/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace thermopan::model {

void Architecture::validate() const {
    if (in_channels < 1 || out_channels < 1) throw std::invalid_argument("architecture: channel counts must be >= 1");
    if (base_width < 1 || max_width < base_width) throw std::invalid_argument("architecture: invalid widths");
    if (depth < 1 || depth > 8) throw std::invalid_argument("architecture: depth must be in [1, 8]");
    if (kernel_size < 1 || kernel_size % 2 == 0) throw std::invalid_argument("architecture: kernel size must be odd");
    if (!(leaky_slope >= 0.0)) throw std::invalid_argument("architecture: leaky slope must be >= 0");
    if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("architecture: dropout must be in [0, 1)");
}

int Architecture::width(int level) const { return std::min(max_width, base_width << level); }

std::vector<std::vector<int>> parameter_shapes(const Architecture& arch) {
    arch.validate();
    const int k = arch.kernel_size;
    std::vector<std::vector<int>> shapes;
    auto block = [&](int cin, int cout) {
        shapes.push_back({cout, cin, k, k});
        shapes.push_back({cout});
        shapes.push_back({cout});
        shapes.push_back({cout});
    };
    for (int i = 0; i < arch.depth; ++i) block(i == 0 ? arch.in_channels : arch.width(i - 1), arch.width(i));
    int prev = arch.width(arch.depth - 1);
    for (int lvl = arch.depth - 2; lvl >= -1; --lvl) {
        const int skip = lvl >= 0 ? arch.width(lvl) : arch.in_channels;
        const int out = lvl >= 0 ? arch.width(lvl) : arch.base_width;
        block(prev + skip, out);
        prev = out;
    }
    shapes.push_back({arch.out_channels, prev, k, k});
    shapes.push_back({arch.out_channels});
    return shapes;
}

template <typename T>
std::size_t ModelParams<T>::parameter_count() const {
    std::size_t n = 0;
    for (const auto& t : tensors) n += t.size();
    return n;
}

template <typename T>
bool ModelParams<T>::all_finite() const {
    for (const auto& t : tensors)
        for (T v : t.values())
            if (!std::isfinite(v)) return false;
    return true;
}

template struct ModelParams<float>;
template struct ModelParams<double>;

Tensor<float> he_init(const std::vector<int>& shape, std::uint64_t seed) {
    if (shape.size() < 2) throw std::invalid_argument("he_init needs at least two dimensions to derive fan-in");
    std::size_t fan_in = 1;
    for (std::size_t i = 1; i < shape.size(); ++i) fan_in *= static_cast<std::size_t>(shape[i]);
    if (fan_in == 0) throw std::invalid_argument("he_init: zero fan-in");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / static_cast<double>(fan_in)));
    Tensor<float> t(shape);
    for (float& v : t.values()) v = static_cast<float>(normal(rng));
    return t;
}

ModelParams<float> init_params(const Architecture& arch, std::uint64_t seed) {
    ModelParams<float> p{arch, {}};
    const auto shapes = parameter_shapes(arch);
    for (std::size_t i = 0; i < shapes.size(); ++i) {
        const bool is_weight = shapes[i].size() == 4;
        if (is_weight) {
            p.tensors.push_back(he_init(shapes[i], seed * 1000003ULL + i));
            continue;
        }
        // within a block: bias, scale, shift follow the weight
        const bool is_scale = i < 8 * static_cast<std::size_t>(arch.depth) && i % 4 == 2;
        p.tensors.emplace_back(shapes[i], is_scale ? 1.0f : 0.0f);
    }
    return p;
}

template <typename T>
Network<T>::Network(const ModelParams<T>& params) : params_(params) {
    params.arch.validate();
    const auto shapes = parameter_shapes(params.arch);
    if (params.tensors.size() != shapes.size())
        throw std::invalid_argument("model parameters do not match the architecture (" +
                                    std::to_string(params.tensors.size()) + " tensors, expected " +
                                    std::to_string(shapes.size()) + ")");
    for (std::size_t i = 0; i < shapes.size(); ++i)
        if (params.tensors[i].shape() != shapes[i])
            throw std::invalid_argument("parameter " + std::to_string(i) + " has shape " +
                                        shape_string(params.tensors[i].shape()) + ", expected " +
                                        shape_string(shapes[i]));
}

template <typename T>
Tensor<T> Network<T>::forward(const Tensor<T>& x, Mode mode, std::uint64_t dropout_seed) {
    const Architecture& a = params_.arch;
    const int factor = a.downsampling_factor();
    if (x.rank() != 4 || x.c() != a.in_channels)
        throw std::invalid_argument("network input must be N x " + std::to_string(a.in_channels) + " x H x W, got " +
                                    shape_string(x.shape()));
    if (x.h() % factor != 0 || x.w() % factor != 0 || x.h() == 0 || x.w() == 0)
        throw std::invalid_argument("input " + std::to_string(x.h()) + "x" + std::to_string(x.w()) +
                                    " is not divisible by the downsampling factor " + std::to_string(factor));

    const auto& P = params_.tensors;
    const T slope = static_cast<T>(a.leaky_slope);
    const int pad = a.kernel_size / 2;
    auto run_block = [&](Block& blk, const Tensor<T>& in, std::size_t p, int stride) {
        blk.input = in;
        const auto conv = conv2d_forward(in, P[p], P[p + 1].values(), stride, pad);
        blk.normed = instance_norm_forward(conv, P[p + 2].values(), P[p + 3].values(), &blk.norm);
        return leaky_relu_forward(blk.normed, slope);
    };

    input_ = x;
    encoder_.assign(static_cast<std::size_t>(a.depth), Block{});
    decoder_.assign(static_cast<std::size_t>(a.depth), Block{});
    encoder_out_.assign(static_cast<std::size_t>(a.depth), Tensor<T>{});

    Tensor<T> cur = x;
    for (int i = 0; i < a.depth; ++i) {
        cur = run_block(encoder_[i], cur, 4 * static_cast<std::size_t>(i), 2);
        encoder_out_[i] = cur;
    }
    cur = dropout_forward(cur, a.dropout, mode == Mode::train, dropout_seed, &dropout_mask_);

    std::size_t p = 4 * static_cast<std::size_t>(a.depth);
    int step = 0;
    for (int lvl = a.depth - 2; lvl >= -1; --lvl, ++step, p += 4) {
        const Tensor<T>& skip = lvl >= 0 ? encoder_out_[lvl] : x;
        cur = run_block(decoder_[step], concat_channels(upsample2x_forward(cur), skip), p, 1);
    }
    head_input_ = cur;
    output_ = sigmoid_forward(conv2d_forward(cur, P[p], P[p + 1].values(), 1, pad));
    has_forward_ = true;
    return output_;
}

template <typename T>
std::vector<Tensor<T>> Network<T>::backward(const Tensor<T>& grad_output, Tensor<T>* grad_input) {
    if (!has_forward_) throw std::logic_error("Network::backward called before forward");
    if (!grad_output.same_shape(output_)) throw std::invalid_argument("backward: gradient shape mismatch");

    const Architecture& a = params_.arch;
    const auto& P = params_.tensors;
    const T slope = static_cast<T>(a.leaky_slope);
    const int pad = a.kernel_size / 2;
    std::vector<Tensor<T>> grads(P.size());

    auto store_block = [&](std::size_t p, Conv2dGrads<T>& cg, InstanceNormGrads<T>& ng) {
        grads[p] = std::move(cg.grad_w);
        grads[p + 1] = Tensor<T>(P[p + 1].shape(), std::move(cg.grad_b));
        grads[p + 2] = Tensor<T>(P[p + 2].shape(), std::move(ng.grad_scale));
        grads[p + 3] = Tensor<T>(P[p + 3].shape(), std::move(ng.grad_shift));
    };
    auto back_block = [&](const Block& blk, const Tensor<T>& g_out, std::size_t p, int stride, bool need_x) {
        const auto g_norm_out = leaky_relu_backward(g_out, blk.normed, slope);
        auto ng = instance_norm_backward(g_norm_out, blk.norm, P[p + 2].values());
        auto cg = conv2d_backward(ng.grad_x, blk.input, P[p], stride, pad, need_x);
        Tensor<T> g_in = std::move(cg.grad_x);
        store_block(p, cg, ng);
        return g_in;
    };

    std::size_t p = 8 * static_cast<std::size_t>(a.depth);
    const auto g_logits = sigmoid_backward(grad_output, output_);
    auto head = conv2d_backward(g_logits, head_input_, P[p], 1, pad);
    grads[p] = std::move(head.grad_w);
    grads[p + 1] = Tensor<T>(P[p + 1].shape(), std::move(head.grad_b));

    std::vector<Tensor<T>> g_skip(static_cast<std::size_t>(a.depth));
    Tensor<T> g_input_skip;
    Tensor<T> g = std::move(head.grad_x);
    for (int step = a.depth - 1; step >= 0; --step) {
        p -= 4;
        const int lvl = a.depth - 2 - step;
        const auto g_cat = back_block(decoder_[step], g, p, 1, true);
        Tensor<T> g_up, g_sk;
        const int skip_channels = lvl >= 0 ? encoder_out_[lvl].c() : input_.c();
        split_channels(g_cat, g_cat.c() - skip_channels, g_up, g_sk);
        if (lvl >= 0)
            g_skip[lvl] = std::move(g_sk);
        else
            g_input_skip = std::move(g_sk);
        g = upsample2x_backward(g_up);
    }

    g = dropout_backward(g, dropout_mask_);
    for (int i = a.depth - 1; i >= 0; --i) {
        if (i < a.depth - 1)
            for (std::size_t j = 0; j < g.size(); ++j) g[j] += g_skip[i][j];
        const bool need_x = i > 0 || grad_input != nullptr;
        g = back_block(encoder_[i], g, 4 * static_cast<std::size_t>(i), 2, need_x);
    }
    if (grad_input) {
        for (std::size_t j = 0; j < g.size(); ++j) g[j] += g_input_skip[j];
        *grad_input = std::move(g);
    }
    return grads;
}

template class Network<float>;
template class Network<double>;

template <typename T>
Tensor<T> predict(const ModelParams<T>& params, const Tensor<T>& x) {
    Network<T> net(params);
    return net.forward(x, Mode::eval);
}

template Tensor<float> predict<float>(const ModelParams<float>&, const Tensor<float>&);
template Tensor<double> predict<double>(const ModelParams<double>&, const Tensor<double>&);

}  // namespace thermopan::model
