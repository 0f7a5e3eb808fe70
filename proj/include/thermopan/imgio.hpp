#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "thermopan/image.hpp"

namespace thermopan::io {

/// Image file decoded to unit-interval floats, together with the stored depth.
struct DecodedImage {
    ImageF32 image;
    int bit_depth = 8;
};

/// Reads a PNG or TIFF (8/16-bit, gray or RGB) and scales samples by the
/// depth maximum so that values land in [0, 1].
DecodedImage read_image(const std::filesystem::path& path);
inline ImageF32 load_image(const std::filesystem::path& path) { return read_image(path).image; }

/// Loads a single-channel 8/16-bit raster without rescaling: pixel values are
/// the stored integer counts.
ThermalFrame load_thermal(const std::filesystem::path& path);

/// Writes `img` (values in [0, 1]) at `depth` bits. Format follows the file
/// extension (.png, .tif/.tiff). Each sample is stored as round(v * maxval).
void save_image(const ImageF32& img, const std::filesystem::path& path, int depth);

/// Writes the raw counts of an unnormalized frame at its own bit depth, or a
/// normalized frame through save_image at 16 bits.
void save_thermal(const ThermalFrame& frame, const std::filesystem::path& path);

/// Sample quantization shared by every writer.
[[nodiscard]] std::uint16_t quantize(float value, int depth);

/// Offset encoding used for signed high-frequency bands in 16-bit files:
/// stored = round((hf + 1) / 2 * 65535).
[[nodiscard]] ImageF32 encode_signed(const ImageF32& hf);
[[nodiscard]] ImageF32 decode_signed(const ImageF32& encoded);

struct DatasetPairing {
    std::vector<PairedSample> samples;
    /// Unmatched files and rejected pairs, one human-readable line each.
    std::vector<std::string> warnings;
};

/// Matches thermal and visible files by stem. Samples are sorted by id.
DatasetPairing pair_dataset(const std::filesystem::path& thermal_dir,
                            const std::filesystem::path& visible_dir);

/// Convenience for the `<root>/thermal`, `<root>/visible` layout.
DatasetPairing load_dataset(const std::filesystem::path& root);

/// Writes samples into `<root>/thermal/<id>.tif` and `<root>/visible/<id>.png`.
void write_dataset(const std::vector<PairedSample>& samples, const std::filesystem::path& root);

}  // namespace thermopan::io
