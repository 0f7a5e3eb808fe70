#include "thermopan/model/params_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace thermopan::model {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f32(std::ostream& os, float v) { put_u32(os, std::bit_cast<std::uint32_t>(v)); }

void put_f64(std::ostream& os, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    put_u32(os, static_cast<std::uint32_t>(bits));
    put_u32(os, static_cast<std::uint32_t>(bits >> 32));
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("parameter file is truncated");
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

float get_f32(std::istream& is) { return std::bit_cast<float>(get_u32(is)); }

double get_f64(std::istream& is) {
    const std::uint64_t lo = get_u32(is);
    const std::uint64_t hi = get_u32(is);
    return std::bit_cast<double>(lo | hi << 32);
}

int get_int(std::istream& is, std::uint32_t limit, const char* what) {
    const std::uint32_t v = get_u32(is);
    if (v > limit) throw std::runtime_error(std::string("parameter file: implausible ") + what);
    return static_cast<int>(v);
}

}  // namespace

void write_params(const ModelParams<float>& params, std::ostream& os) {
    const Architecture& a = params.arch;
    a.validate();
    os.write(kParamsMagic, sizeof kParamsMagic);
    put_u32(os, kParamsVersion);
    for (int v : {a.in_channels, a.out_channels, a.base_width, a.depth, a.max_width, a.kernel_size})
        put_u32(os, static_cast<std::uint32_t>(v));
    put_f64(os, a.leaky_slope);
    put_f64(os, a.dropout);
    put_u32(os, static_cast<std::uint32_t>(params.tensors.size()));
    for (const auto& t : params.tensors) {
        put_u32(os, static_cast<std::uint32_t>(t.rank()));
        for (int d : t.shape()) put_u32(os, static_cast<std::uint32_t>(d));
        for (float v : t.values()) put_f32(os, v);
    }
    if (!os) throw std::runtime_error("failed to write parameters");
}

ModelParams<float> read_params(std::istream& is) {
    char magic[sizeof kParamsMagic];
    if (!is.read(magic, sizeof magic) || std::memcmp(magic, kParamsMagic, sizeof magic) != 0)
        throw std::runtime_error("not a thermopan parameter file (bad magic)");
    const std::uint32_t version = get_u32(is);
    if (version != kParamsVersion)
        throw std::runtime_error("unsupported parameter file version " + std::to_string(version));

    ModelParams<float> p;
    Architecture& a = p.arch;
    a.in_channels = get_int(is, 1u << 16, "channel count");
    a.out_channels = get_int(is, 1u << 16, "channel count");
    a.base_width = get_int(is, 1u << 16, "width");
    a.depth = get_int(is, 64, "depth");
    a.max_width = get_int(is, 1u << 16, "width");
    a.kernel_size = get_int(is, 255, "kernel size");
    a.leaky_slope = get_f64(is);
    a.dropout = get_f64(is);
    a.validate();

    const auto expected = parameter_shapes(a);
    const std::uint32_t count = get_u32(is);
    if (count != expected.size())
        throw std::runtime_error("parameter file holds " + std::to_string(count) + " tensors, architecture needs " +
                                 std::to_string(expected.size()));
    for (std::uint32_t i = 0; i < count; ++i) {
        const int rank = get_int(is, 8, "tensor rank");
        std::vector<int> shape;
        for (int r = 0; r < rank; ++r) shape.push_back(get_int(is, 1u << 20, "tensor dimension"));
        if (shape != expected[i])
            throw std::runtime_error("tensor " + std::to_string(i) + " has shape " + shape_string(shape) +
                                     ", expected " + shape_string(expected[i]));
        Tensor<float> t(shape);
        for (float& v : t.values()) v = get_f32(is);
        p.tensors.push_back(std::move(t));
    }
    if (!p.all_finite()) throw std::runtime_error("parameter file contains non-finite values");
    return p;
}

void save_params(const ModelParams<float>& params, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_params(params, os);
    os.close();
    if (!os) throw std::runtime_error("failed to write '" + path + "'");
}

ModelParams<float> load_params(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    return read_params(is);
}

}  // namespace thermopan::model
