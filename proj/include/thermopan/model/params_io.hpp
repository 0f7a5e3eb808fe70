#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "thermopan/model/network.hpp"

namespace thermopan::model {

/// Binary layout, all integers uint32 little-endian:
///   "TPANPARM" | version | in, out, base_width, depth, max_width, kernel_size |
///   leaky_slope, dropout (float64) | tensor count | per tensor: rank, dims..., float32 data
inline constexpr char kParamsMagic[8] = {'T', 'P', 'A', 'N', 'P', 'A', 'R', 'M'};
inline constexpr std::uint32_t kParamsVersion = 1;

void write_params(const ModelParams<float>& params, std::ostream& os);
ModelParams<float> read_params(std::istream& is);

void save_params(const ModelParams<float>& params, const std::string& path);
ModelParams<float> load_params(const std::string& path);

}  // namespace thermopan::model
