#include "thermopan/imgio.hpp"

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <memory>
#include <map>
#include <stdexcept>

#include <png.h>
#include <tiffio.h>

namespace fs = std::filesystem;

namespace thermopan::io {

namespace {

enum class Format { png, tiff };

std::string lower_extension(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

Format format_of(const fs::path& path) {
    const std::string ext = lower_extension(path);
    if (ext == ".png") return Format::png;
    if (ext == ".tif" || ext == ".tiff") return Format::tiff;
    throw std::invalid_argument("unsupported image format '" + ext + "' for " + path.string());
}

bool is_image_file(const fs::path& path) {
    const std::string ext = lower_extension(path);
    return ext == ".png" || ext == ".tif" || ext == ".tiff";
}

/// Raw integer samples as stored on disk, interleaved.
struct RawRaster {
    int height = 0;
    int width = 0;
    int channels = 0;
    int bit_depth = 0;
    std::vector<std::uint16_t> samples;
};

ImageF32 planar_from_interleaved(const RawRaster& raw, double divisor) {
    ImageF32 img(raw.height, raw.width, raw.channels);
    for (int y = 0; y < raw.height; ++y)
        for (int x = 0; x < raw.width; ++x)
            for (int c = 0; c < raw.channels; ++c) {
                const std::size_t idx = (static_cast<std::size_t>(y) * raw.width + x) * raw.channels + c;
                img.at(c, y, x) = static_cast<float>(raw.samples[idx] / divisor);
            }
    return img;
}

// ---------------------------------------------------------------------------
// TIFF

thread_local std::string tiff_last_error;

void tiff_error_handler(const char* module, const char* fmt, va_list args) {
    char buffer[512];
    std::vsnprintf(buffer, sizeof buffer, fmt, args);
    tiff_last_error = (module ? std::string(module) + ": " : std::string()) + buffer;
}

void install_tiff_handlers() {
    static const bool installed = [] {
        TIFFSetErrorHandler(tiff_error_handler);
        TIFFSetWarningHandler(nullptr);
        return true;
    }();
    (void)installed;
}

struct TiffCloser {
    void operator()(TIFF* tif) const noexcept { TIFFClose(tif); }
};
using TiffHandle = std::unique_ptr<TIFF, TiffCloser>;

RawRaster read_tiff(const fs::path& path) {
    install_tiff_handlers();
    tiff_last_error.clear();
    TiffHandle tif(TIFFOpen(path.c_str(), "r"));
    if (!tif) throw std::runtime_error("cannot open TIFF " + path.string() + ": " + tiff_last_error);

    std::uint32_t width = 0, height = 0;
    std::uint16_t bps = 0, spp = 1, planar = PLANARCONFIG_CONTIG, sample_format = SAMPLEFORMAT_UINT;
    TIFFGetField(tif.get(), TIFFTAG_IMAGEWIDTH, &width);
    TIFFGetField(tif.get(), TIFFTAG_IMAGELENGTH, &height);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_BITSPERSAMPLE, &bps);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLESPERPIXEL, &spp);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_PLANARCONFIG, &planar);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLEFORMAT, &sample_format);

    if (bps != 8 && bps != 16)
        throw std::runtime_error(path.string() + ": unsupported TIFF bit depth " + std::to_string(bps));
    if (spp != 1 && spp != 3)
        throw std::runtime_error(path.string() + ": unsupported TIFF samples per pixel " + std::to_string(spp));
    if (sample_format != SAMPLEFORMAT_UINT)
        throw std::runtime_error(path.string() + ": only unsigned integer TIFF samples are supported");
    if (TIFFIsTiled(tif.get())) throw std::runtime_error(path.string() + ": tiled TIFF is not supported");
    if (spp > 1 && planar != PLANARCONFIG_CONTIG)
        throw std::runtime_error(path.string() + ": planar-separated TIFF is not supported");

    RawRaster raw;
    raw.height = static_cast<int>(height);
    raw.width = static_cast<int>(width);
    raw.channels = spp;
    raw.bit_depth = bps;
    raw.samples.resize(static_cast<std::size_t>(width) * height * spp);

    std::vector<std::uint8_t> line(static_cast<std::size_t>(TIFFScanlineSize(tif.get())));
    for (std::uint32_t y = 0; y < height; ++y) {
        if (TIFFReadScanline(tif.get(), line.data(), y, 0) < 0)
            throw std::runtime_error(path.string() + ": TIFF read failed at row " + std::to_string(y) + ": " +
                                     tiff_last_error);
        std::uint16_t* dst = raw.samples.data() + static_cast<std::size_t>(y) * width * spp;
        const std::size_t count = static_cast<std::size_t>(width) * spp;
        if (bps == 8) {
            std::copy_n(line.data(), count, dst);
        } else {
            // libtiff hands back native-endian samples
            std::memcpy(dst, line.data(), count * sizeof(std::uint16_t));
        }
    }
    return raw;
}

void write_tiff(const RawRaster& raw, const fs::path& path) {
    install_tiff_handlers();
    tiff_last_error.clear();
    TiffHandle tif(TIFFOpen(path.c_str(), "w"));
    if (!tif) throw std::runtime_error("cannot create TIFF " + path.string() + ": " + tiff_last_error);

    TIFFSetField(tif.get(), TIFFTAG_IMAGEWIDTH, static_cast<std::uint32_t>(raw.width));
    TIFFSetField(tif.get(), TIFFTAG_IMAGELENGTH, static_cast<std::uint32_t>(raw.height));
    TIFFSetField(tif.get(), TIFFTAG_BITSPERSAMPLE, static_cast<std::uint16_t>(raw.bit_depth));
    TIFFSetField(tif.get(), TIFFTAG_SAMPLESPERPIXEL, static_cast<std::uint16_t>(raw.channels));
    TIFFSetField(tif.get(), TIFFTAG_SAMPLEFORMAT, SAMPLEFORMAT_UINT);
    TIFFSetField(tif.get(), TIFFTAG_PHOTOMETRIC, raw.channels == 1 ? PHOTOMETRIC_MINISBLACK : PHOTOMETRIC_RGB);
    TIFFSetField(tif.get(), TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
    TIFFSetField(tif.get(), TIFFTAG_COMPRESSION, COMPRESSION_NONE);
    TIFFSetField(tif.get(), TIFFTAG_ROWSPERSTRIP, static_cast<std::uint32_t>(raw.height));

    const std::size_t count = raw.samples.size();
    tmsize_t written = 0;
    if (raw.bit_depth == 8) {
        std::vector<std::uint8_t> bytes(count);
        std::transform(raw.samples.begin(), raw.samples.end(), bytes.begin(),
                       [](std::uint16_t v) { return static_cast<std::uint8_t>(v); });
        written = TIFFWriteEncodedStrip(tif.get(), 0, bytes.data(), static_cast<tmsize_t>(count));
    } else {
        std::vector<std::uint16_t> words(raw.samples);
        written = TIFFWriteEncodedStrip(tif.get(), 0, words.data(), static_cast<tmsize_t>(count * 2));
    }
    if (written < 0) throw std::runtime_error("TIFF write failed for " + path.string() + ": " + tiff_last_error);
}

// ---------------------------------------------------------------------------
// PNG

struct FileCloser {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FileHandle = std::unique_ptr<std::FILE, FileCloser>;

struct PngErrorState {
    std::jmp_buf jump;
    char message[256] = {};
};

void png_error_fn(png_structp png, png_const_charp msg) {
    auto* state = static_cast<PngErrorState*>(png_get_error_ptr(png));
    std::snprintf(state->message, sizeof state->message, "%s", msg);
    std::longjmp(state->jump, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

RawRaster read_png(const fs::path& path) {
    FileHandle file(std::fopen(path.c_str(), "rb"));
    if (!file) throw std::runtime_error("cannot open PNG " + path.string());

    RawRaster raw;
    std::vector<std::uint8_t> pixels;
    std::vector<png_bytep> rows;
    PngErrorState state;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &state, png_error_fn, png_warning_fn);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("libpng initialization failed");
    }
    if (setjmp(state.jump)) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error(path.string() + ": " + state.message);
    }

    png_init_io(png, file.get());
    png_read_info(png, info);
    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if ((color_type & PNG_COLOR_MASK_ALPHA) || png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    depth = png_get_bit_depth(png, info);
    const int channels = png_get_channels(png, info);
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    pixels.resize(rowbytes * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + y * rowbytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    if (channels != 1 && channels != 3)
        throw std::runtime_error(path.string() + ": unsupported PNG channel count " + std::to_string(channels));

    raw.height = static_cast<int>(height);
    raw.width = static_cast<int>(width);
    raw.channels = channels;
    raw.bit_depth = depth;
    raw.samples.resize(static_cast<std::size_t>(width) * height * channels);
    const std::size_t count = raw.samples.size();
    if (depth == 8) {
        for (png_uint_32 y = 0; y < height; ++y)
            std::copy_n(rows[y], static_cast<std::size_t>(width) * channels,
                        raw.samples.begin() + static_cast<std::ptrdiff_t>(y * width * channels));
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t y = i / (static_cast<std::size_t>(width) * channels);
            const std::size_t off = (i % (static_cast<std::size_t>(width) * channels)) * 2;
            raw.samples[i] = static_cast<std::uint16_t>((rows[y][off] << 8) | rows[y][off + 1]);
        }
    }
    return raw;
}

void write_png(const RawRaster& raw, const fs::path& path) {
    FileHandle file(std::fopen(path.c_str(), "wb"));
    if (!file) throw std::runtime_error("cannot create PNG " + path.string());

    const std::size_t row_samples = static_cast<std::size_t>(raw.width) * raw.channels;
    const std::size_t bytes_per_sample = raw.bit_depth == 16 ? 2 : 1;
    std::vector<std::uint8_t> bytes(row_samples * bytes_per_sample * raw.height);
    for (std::size_t i = 0; i < raw.samples.size(); ++i) {
        if (bytes_per_sample == 1) {
            bytes[i] = static_cast<std::uint8_t>(raw.samples[i]);
        } else {
            bytes[2 * i] = static_cast<std::uint8_t>(raw.samples[i] >> 8);
            bytes[2 * i + 1] = static_cast<std::uint8_t>(raw.samples[i] & 0xFF);
        }
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(raw.height));
    for (int y = 0; y < raw.height; ++y) rows[y] = bytes.data() + y * row_samples * bytes_per_sample;

    PngErrorState state;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &state, png_error_fn, png_warning_fn);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("libpng initialization failed");
    }
    if (setjmp(state.jump)) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error(path.string() + ": " + state.message);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(raw.width), static_cast<png_uint_32>(raw.height),
                 raw.bit_depth, raw.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

RawRaster read_raster(const fs::path& path) {
    if (!fs::exists(path)) throw std::runtime_error("no such file: " + path.string());
    return format_of(path) == Format::png ? read_png(path) : read_tiff(path);
}

void write_raster(const RawRaster& raw, const fs::path& path) {
    if (format_of(path) == Format::png)
        write_png(raw, path);
    else
        write_tiff(raw, path);
}

double depth_max(int depth) { return depth == 16 ? 65535.0 : 255.0; }

}  // namespace

std::uint16_t quantize(float value, int depth) {
    return static_cast<std::uint16_t>(std::lround(static_cast<double>(value) * depth_max(depth)));
}

DecodedImage read_image(const fs::path& path) {
    const RawRaster raw = read_raster(path);
    return {planar_from_interleaved(raw, depth_max(raw.bit_depth)), raw.bit_depth};
}

ThermalFrame load_thermal(const fs::path& path) {
    const RawRaster raw = read_raster(path);
    if (raw.channels != 1) throw std::invalid_argument("thermal input must be single-channel");
    return ThermalFrame::raw(planar_from_interleaved(raw, 1.0), raw.bit_depth);
}

void save_image(const ImageF32& img, const fs::path& path, int depth) {
    if (depth != 8 && depth != 16) throw std::invalid_argument("output depth must be 8 or 16");
    if (img.empty()) throw std::invalid_argument("cannot save an empty image");
    if (!img.in_unit_range())
        throw std::invalid_argument("image has pixels outside [0,1]; clip or renormalize before saving " +
                                    path.string());
    (void)format_of(path);

    RawRaster raw;
    raw.height = img.height();
    raw.width = img.width();
    raw.channels = img.channels();
    raw.bit_depth = depth;
    raw.samples.resize(img.size());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            for (int c = 0; c < img.channels(); ++c)
                raw.samples[(static_cast<std::size_t>(y) * img.width() + x) * img.channels() + c] =
                    quantize(img.at(c, y, x), depth);
    write_raster(raw, path);
}

void save_thermal(const ThermalFrame& frame, const fs::path& path) {
    if (frame.normalized) {
        save_image(frame.pixels, path, 16);
        return;
    }
    const double maxval = depth_max(frame.bit_depth);
    RawRaster raw;
    raw.height = frame.height();
    raw.width = frame.width();
    raw.channels = 1;
    raw.bit_depth = frame.bit_depth;
    raw.samples.resize(frame.pixels.size());
    const auto src = frame.pixels.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double v = src[i];
        if (!(v >= 0.0 && v <= maxval) || v != std::floor(v))
            throw std::invalid_argument("raw thermal count " + std::to_string(v) + " is not storable at " +
                                        std::to_string(frame.bit_depth) + " bits");
        raw.samples[i] = static_cast<std::uint16_t>(v);
    }
    write_raster(raw, path);
}

ImageF32 encode_signed(const ImageF32& hf) {
    ImageF32 out = hf;
    for (float& v : out.pixels()) v = (std::clamp(v, -1.0f, 1.0f) + 1.0f) * 0.5f;
    return out;
}

ImageF32 decode_signed(const ImageF32& encoded) {
    ImageF32 out = encoded;
    for (float& v : out.pixels()) v = v * 2.0f - 1.0f;
    return out;
}

DatasetPairing pair_dataset(const fs::path& thermal_dir, const fs::path& visible_dir) {
    for (const auto& dir : {thermal_dir, visible_dir})
        if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());

    auto index = [](const fs::path& dir) {
        std::map<std::string, fs::path> by_stem;
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.is_regular_file() && is_image_file(entry.path()))
                by_stem.emplace(entry.path().stem().string(), entry.path());
        return by_stem;
    };
    const auto thermal = index(thermal_dir);
    const auto visible = index(visible_dir);

    DatasetPairing result;
    for (const auto& [stem, tpath] : thermal) {
        auto it = visible.find(stem);
        if (it == visible.end()) {
            result.warnings.push_back("unmatched thermal file: " + tpath.string());
            continue;
        }
        PairedSample sample;
        sample.id = stem;
        sample.thermal = load_thermal(tpath);
        sample.visible = load_image(it->second);
        if (sample.visible.channels() != 3) {
            result.warnings.push_back("pair '" + stem + "' rejected: visible image is not RGB");
            continue;
        }
        if (!sample.thermal.pixels.same_extent(sample.visible)) {
            result.warnings.push_back("pair '" + stem + "' rejected: size mismatch thermal " +
                                      std::to_string(sample.thermal.height()) + "x" +
                                      std::to_string(sample.thermal.width()) + " vs visible " +
                                      std::to_string(sample.visible.height()) + "x" +
                                      std::to_string(sample.visible.width()));
            continue;
        }
        result.samples.push_back(std::move(sample));
    }
    for (const auto& [stem, vpath] : visible)
        if (!thermal.contains(stem)) result.warnings.push_back("unmatched visible file: " + vpath.string());
    return result;
}

DatasetPairing load_dataset(const fs::path& root) { return pair_dataset(root / "thermal", root / "visible"); }

void write_dataset(const std::vector<PairedSample>& samples, const fs::path& root) {
    fs::create_directories(root / "thermal");
    fs::create_directories(root / "visible");
    for (const auto& s : samples) {
        validate_pair(s);
        save_thermal(s.thermal, root / "thermal" / (s.id + ".tif"));
        save_image(s.visible, root / "visible" / (s.id + ".png"), 8);
    }
}

}  // namespace thermopan::io
