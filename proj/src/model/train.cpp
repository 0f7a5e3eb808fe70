#include "thermopan/model/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "thermopan/model/adam.hpp"
#include "thermopan/model/convert.hpp"

namespace thermopan::model {

namespace {

std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
    return mix(mix(mix(mix(seed) ^ a) ^ b) ^ c);
}

void check_dataset(const std::vector<PairedSample>& dataset, const TrainConfig& tcfg) {
    if (dataset.empty()) throw std::invalid_argument("training dataset is empty");
    for (const auto& s : dataset) {
        validate_pair(s);
        if (!s.thermal.normalized)
            throw std::invalid_argument("sample '" + s.id + "': thermal frame is not preprocessed");
        if (s.visible.channels() != tcfg.arch.out_channels)
            throw std::invalid_argument("sample '" + s.id + "': visible channel count does not match the model");
        if (s.visible.height() < tcfg.augment.crop || s.visible.width() < tcfg.augment.crop)
            throw std::invalid_argument("sample '" + s.id + "' is smaller than the training crop");
    }
}

}  // namespace

void TrainConfig::validate() const {
    if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
    if (!(lr > 0.0) || !std::isfinite(lr)) throw std::invalid_argument("lr must be positive");
    if (decay_start_epoch < 0) throw std::invalid_argument("decay_start_epoch must be >= 0");
    if (!(final_lr_fraction > 0.0 && final_lr_fraction <= 1.0))
        throw std::invalid_argument("final_lr_fraction must be in (0, 1]");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (iterations_per_epoch < 0) throw std::invalid_argument("iterations_per_epoch must be >= 0");
    arch.validate();
    augment.validate();
    if (augment.crop % arch.downsampling_factor() != 0)
        throw std::invalid_argument("crop " + std::to_string(augment.crop) + " is not divisible by the downsampling factor " +
                                    std::to_string(arch.downsampling_factor()));
}

TrainConfig TrainConfig::desk_scale() {
    TrainConfig cfg;
    cfg.arch.base_width = 8;
    cfg.augment.crop = 64;
    cfg.batch_size = 4;
    cfg.epochs = 500;
    cfg.decay_start_epoch = 200;
    cfg.lr = 2e-3;
    return cfg;
}

double learning_rate(const TrainConfig& cfg, int epoch) {
    if (epoch < cfg.decay_start_epoch) return cfg.lr;
    const double span = std::max(1, cfg.epochs - 1 - cfg.decay_start_epoch);
    const double t = std::min(1.0, static_cast<double>(epoch - cfg.decay_start_epoch) / span);
    return cfg.lr * (1.0 - (1.0 - cfg.final_lr_fraction) * t);
}

void write_history_csv(const std::vector<EpochRecord>& history, std::ostream& os) {
    os << "epoch,lr,loss,content,lf\n";
    for (const auto& r : history)
        fmt::print(os, "{},{:.9g},{:.9g},{:.9g},{:.9g}\n", r.epoch, r.lr, r.loss, r.content, r.lf);
}

TrainResult train(const std::vector<PairedSample>& dataset, const TrainConfig& tcfg, const LossConfig& lcfg,
                  const EpochCallback& on_epoch) {
    tcfg.validate();
    return train_from(init_params(tcfg.arch, tcfg.seed), dataset, tcfg, lcfg, on_epoch);
}

TrainResult train_from(ModelParams<float> init, const std::vector<PairedSample>& dataset, const TrainConfig& tcfg,
                       const LossConfig& lcfg, const EpochCallback& on_epoch) {
    tcfg.validate();
    lcfg.validate();
    if (!(init.arch == tcfg.arch)) throw std::invalid_argument("initial parameters do not match the configured architecture");
    check_dataset(dataset, tcfg);

    TrainResult result{std::move(init), {}, 0};
    if (tcfg.epochs == 0) return result;

    const frequency::Kernel kernel = frequency::gaussian_kernel(lcfg.kernel);
    const int n = static_cast<int>(dataset.size());
    const int batch = std::min(tcfg.batch_size, n);
    const int iters = tcfg.iterations_per_epoch > 0 ? tcfg.iterations_per_epoch : (n + batch - 1) / batch;

    AdamState<float> state = AdamState<float>::zeros_like(result.params.tensors);
    std::vector<int> order(static_cast<std::size_t>(n));

    for (int epoch = 0; epoch < tcfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), 0);
        std::mt19937_64 shuffle_rng(derive(tcfg.seed, 1, static_cast<std::uint64_t>(epoch)));
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        const double lr = learning_rate(tcfg, epoch);
        EpochRecord rec{epoch, lr, 0.0, 0.0, 0.0};
        for (int it = 0; it < iters; ++it) {
            std::vector<PairedSample> crops;
            crops.reserve(static_cast<std::size_t>(batch));
            for (int j = 0; j < batch; ++j) {
                const int idx = order[static_cast<std::size_t>((it * batch + j) % n)];
                crops.push_back(augment(dataset[static_cast<std::size_t>(idx)], tcfg.augment,
                                        derive(tcfg.seed, 2, static_cast<std::uint64_t>(epoch) << 32 | it,
                                               static_cast<std::uint64_t>(j))));
            }
            std::vector<const ImageF32*> xs;
            std::vector<const ImageF32*> ys;
            for (const auto& s : crops) {
                xs.push_back(&s.thermal.pixels);
                ys.push_back(&s.visible);
            }
            const Tensor<float> x = stack(xs);
            const Tensor<float> y = stack(ys);

            Network<float> net(result.params);
            const Tensor<float> out =
                net.forward(x, Mode::train, derive(tcfg.seed, 3, static_cast<std::uint64_t>(epoch), it));
            const LossResult<float> loss = loss_total(out, y, lcfg, kernel);
            if (!std::isfinite(loss.total))
                throw std::runtime_error(fmt::format("training diverged: non-finite loss at epoch {} iteration {} (lr {})",
                                                     epoch, it, lr));
            const auto grads = net.backward(loss.grad);
            adam_step(result.params.tensors, grads, state, lr);
            ++result.iterations;

            rec.loss += loss.total;
            rec.content += loss.content;
            rec.lf += loss.lf;
        }
        rec.loss /= iters;
        rec.content /= iters;
        rec.lf /= iters;
        result.history.push_back(rec);
        if (on_epoch) on_epoch(rec);
    }
    if (!result.params.all_finite()) throw std::runtime_error("training produced non-finite parameters");
    return result;
}

LossResult<float> evaluate_loss(const ModelParams<float>& params, const std::vector<PairedSample>& samples,
                                const LossConfig& lcfg) {
    if (samples.empty()) throw std::invalid_argument("evaluate_loss: no samples");
    const frequency::Kernel kernel = frequency::gaussian_kernel(lcfg.kernel);
    LossResult<float> acc;
    Network<float> net(params);
    for (const auto& s : samples) {
        validate_pair(s);
        const auto out = net.forward(to_tensor(s.thermal.pixels), Mode::eval);
        const auto l = loss_total(out, to_tensor(s.visible), lcfg, kernel);
        acc.total += l.total;
        acc.content += l.content;
        acc.lf += l.lf;
    }
    const double k = static_cast<double>(samples.size());
    acc.total /= k;
    acc.content /= k;
    acc.lf /= k;
    return acc;
}

}  // namespace thermopan::model
