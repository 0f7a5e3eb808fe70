#include <doctest.h>

#include <cmath>
#include <numeric>

#include "support.hpp"
#include "thermopan/frequency.hpp"
#include "thermopan/reference.hpp"

using namespace thermopan;
using frequency::KernelSpec;

TEST_CASE("kernel weights follow the 2-D Gaussian and sum to one") {
    const auto k = frequency::gaussian_kernel({25, 12.0});
    REQUIRE(k.weights.size() == 625);
    REQUIRE(k.taps.size() == 25);
    const double sum = std::accumulate(k.weights.begin(), k.weights.end(), 0.0);
    CHECK(std::abs(sum - 1.0) < 1e-12);
    CHECK(std::abs(std::accumulate(k.taps.begin(), k.taps.end(), 0.0) - 1.0) < 1e-12);

    // independent: unnormalized exp(-(i^2 + j^2) / 2 sigma^2) ratios
    const double ratio = k.weight(12, 12 + 5) / k.weight(12, 12);
    CHECK(ratio == doctest::Approx(std::exp(-25.0 / 288.0)).epsilon(1e-12));
    CHECK(k.weight(0, 3) == doctest::Approx(k.weight(3, 0)).epsilon(1e-15));
    CHECK(k.weight(0, 0) == doctest::Approx(k.weight(24, 24)).epsilon(1e-15));
}

TEST_CASE("separable taps reproduce the 2-D grid") {
    const auto k = frequency::gaussian_kernel({7, 1.3});
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) CHECK(k.weight(i, j) == doctest::Approx(k.taps[i] * k.taps[j]).epsilon(1e-12));
}

TEST_CASE("kernel spec validation") {
    CHECK_THROWS_AS(frequency::gaussian_kernel({24, 12.0}), std::invalid_argument);
    CHECK_THROWS_AS(frequency::gaussian_kernel({0, 12.0}), std::invalid_argument);
    CHECK_THROWS_AS(frequency::gaussian_kernel({25, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(frequency::gaussian_kernel({25, -1.0}), std::invalid_argument);
    CHECK_NOTHROW(frequency::gaussian_kernel({1, 0.5}));
}

TEST_CASE("separable blur agrees with direct 2-D convolution") {
    const auto k = frequency::gaussian_kernel({25, 12.0});
    for (std::uint64_t seed : {11u, 12u}) {
        const auto img = testsupport::random_image(seed, 40, 33, 3);
        const auto fast = frequency::convolve(img, k);
        const auto slow = reference::convolve_direct(img, k);
        for (std::size_t i = 0; i < img.size(); ++i) CHECK(std::abs(fast.pixels()[i] - slow.pixels()[i]) < 1e-5);
    }
}

TEST_CASE("kernels larger than the image still use reflected borders") {
    const auto k = frequency::gaussian_kernel({25, 12.0});
    const auto img = testsupport::random_image(3, 5, 9, 1);
    const auto fast = frequency::convolve(img, k);
    const auto slow = reference::convolve_direct(img, k);
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(std::abs(fast.pixels()[i] - slow.pixels()[i]) < 1e-5);
}

TEST_CASE("blur preserves constants") {
    const ImageF32 flat(20, 20, 3, 0.37f);
    const auto b = frequency::decompose(flat, KernelSpec{});
    for (float v : b.lf.pixels()) CHECK(v == doctest::Approx(0.37f).epsilon(1e-6));
    for (float v : b.hf.pixels()) CHECK(std::abs(v) < 1e-6);
}

TEST_CASE("decompose reconstructs its input") {
    const auto img = testsupport::random_image(5, 31, 47, 3);
    const auto b = frequency::decompose(img, KernelSpec{});
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(std::abs(b.lf.pixels()[i] + b.hf.pixels()[i] - img.pixels()[i]) < 1e-6);
    CHECK_THROWS_AS(frequency::decompose(ImageF32(4, 4, 1, NAN), KernelSpec{}), std::invalid_argument);
}

TEST_CASE("blur adjoint satisfies <B x, y> = <x, B^T y>") {
    const auto k = frequency::gaussian_kernel({9, 2.0});
    const int h = 13, w = 10;
    const auto x = testsupport::random_tensor<double>(1, {h * w});
    const auto y = testsupport::random_tensor<double>(2, {h * w});
    std::vector<double> bx(h * w), bty(h * w);
    frequency::blur_plane<double>(x.values(), bx, h, w, k.taps);
    frequency::blur_plane_adjoint<double>(y.values(), bty, h, w, k.taps);
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < h * w; ++i) {
        lhs += bx[i] * y[i];
        rhs += x[i] * bty[i];
    }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("replicate3 copies the gray plane") {
    const auto g = testsupport::random_image(8, 4, 5, 1);
    const auto r = frequency::replicate3(g);
    REQUIRE(r.channels() == 3);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(r.plane(c)[i] == g.pixels()[i]);
    CHECK_THROWS_AS(frequency::replicate3(r), std::invalid_argument);
}
