#pragma once

#include <iosfwd>
#include <string>

#include "thermopan/model/loss.hpp"
#include "thermopan/model/train.hpp"

namespace thermopan::model {

struct TrainingSetup {
    TrainConfig train;
    LossConfig loss;
};

/// Plain-text `key = value` lines; `#` starts a comment. A `preset = paper`
/// or `preset = desk` line resets every field to that preset, so it must come
/// first. Unknown keys and malformed values throw std::invalid_argument with
/// the offending line number.
TrainingSetup parse_config(std::istream& is, TrainingSetup base = {});
TrainingSetup load_config(const std::string& path, TrainingSetup base = {});

/// Applies one key/value pair.
void set_config_value(TrainingSetup& setup, const std::string& key, const std::string& value);

/// Every field as `key = value` lines, in a form parse_config accepts.
std::string format_config(const TrainingSetup& setup);

}  // namespace thermopan::model
