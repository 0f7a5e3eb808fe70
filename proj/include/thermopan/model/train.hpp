#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "thermopan/image.hpp"
#include "thermopan/model/augment.hpp"
#include "thermopan/model/loss.hpp"
#include "thermopan/model/network.hpp"

namespace thermopan::model {

struct TrainConfig {
    int epochs = 1000;
    double lr = 8e-4;
    int decay_start_epoch = 400;
    double final_lr_fraction = 0.1;  ///< lr reached (linearly) at the last epoch
    int batch_size = 32;
    /// Optimizer steps per epoch; 0 means one pass over the dataset.
    int iterations_per_epoch = 0;
    std::uint64_t seed = 0;
    Architecture arch;
    AugmentConfig augment;

    void validate() const;

    /// 64x64 crops, width 8.
    static TrainConfig desk_scale();
};

struct EpochRecord {
    int epoch = 0;
    double lr = 0.0;
    double loss = 0.0;  ///< mean over the epoch's iterations
    double content = 0.0;
    double lf = 0.0;
};

struct TrainResult {
    ModelParams<float> params;
    std::vector<EpochRecord> history;
    std::int64_t iterations = 0;
};

/// `epoch,lr,loss,content,lf`
void write_history_csv(const std::vector<EpochRecord>& history, std::ostream& os);

/// Constant, then linear decay from decay_start_epoch to final_lr_fraction * lr at the last epoch.
double learning_rate(const TrainConfig& cfg, int epoch);

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Mini-batch ADAM training from a He-initialized start. Thermal frames
/// must be preprocessed. Throws std::runtime_error if the loss turns
/// non-finite.
TrainResult train(const std::vector<PairedSample>& dataset, const TrainConfig& tcfg, const LossConfig& lcfg,
                  const EpochCallback& on_epoch = {});

/// Same, but continues from `init` instead of a fresh initialization.
TrainResult train_from(ModelParams<float> init, const std::vector<PairedSample>& dataset, const TrainConfig& tcfg,
                       const LossConfig& lcfg, const EpochCallback& on_epoch = {});

/// Mean eval-mode loss over full, unaugmented samples.
LossResult<float> evaluate_loss(const ModelParams<float>& params, const std::vector<PairedSample>& samples,
                                const LossConfig& lcfg);

}  // namespace thermopan::model
