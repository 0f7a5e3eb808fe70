#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "thermopan/metrics.hpp"
#include "thermopan/pansharpen.hpp"
#include "thermopan/preprocess.hpp"
#include "thermopan/synthetic.hpp"

using namespace thermopan;
using pansharpen::FusionConfig;
using pansharpen::OutOfBand;

TEST_CASE("lambda = 0 returns the low-frequency image bit for bit") {
    const auto lf = testsupport::random_image(1, 17, 19, 3);
    const auto hf = testsupport::random_image(2, 17, 19, 1, -1.0f, 1.0f);
    for (auto mode : {OutOfBand::clip, OutOfBand::renormalize, OutOfBand::none})
        CHECK(pansharpen::fuse(lf, hf, {0.0, mode}) == lf);
}

TEST_CASE("gray high frequencies are broadcast, colour ones used per channel") {
    const ImageF32 lf(2, 2, 3, 0.5f);
    const ImageF32 hf(2, 2, 1, 0.125f);
    const auto out = pansharpen::fuse(lf, hf, {2.0, OutOfBand::none});
    for (float v : out.pixels()) CHECK(v == 0.75f);

    ImageF32 hf3(2, 2, 3);
    hf3.plane(1)[0] = 0.25f;
    const auto out3 = pansharpen::fuse(lf, hf3, {1.0, OutOfBand::none});
    CHECK(out3.at(1, 0, 0) == 0.75f);
    CHECK(out3.at(0, 0, 0) == 0.5f);
}

TEST_CASE("pre-clip linearity with exact scalings") {
    const auto lf = testsupport::random_image(3, 16, 16, 3);
    const auto h = testsupport::random_image(4, 16, 16, 1, -0.5f, 0.5f);
    for (double a : {0.25, 0.5, 2.0, 4.0}) {
        ImageF32 ah = h;
        for (float& v : ah.pixels()) v *= static_cast<float>(a);
        for (double lambda : {0.5, 1.0, 3.0})
            CHECK(pansharpen::fuse(lf, ah, {lambda, OutOfBand::none}) ==
                  pansharpen::fuse(lf, h, {a * lambda, OutOfBand::none}));
    }
}

TEST_CASE("out-of-band handling") {
    ImageF32 lf(1, 2, 3, 0.5f);
    ImageF32 hf(1, 2, 1, std::vector<float>{1.0f, -0.25f});
    const auto clipped = pansharpen::fuse(lf, hf, {1.0, OutOfBand::clip});
    CHECK(clipped.at(0, 0, 0) == 1.0f);
    CHECK(clipped.at(0, 0, 1) == 0.25f);

    // range [0.25, 1.5] -> joint map from [0, 1.5]
    const auto renorm = pansharpen::fuse(lf, hf, {1.0, OutOfBand::renormalize});
    CHECK(renorm.at(2, 0, 0) == doctest::Approx(1.0));
    CHECK(renorm.at(2, 0, 1) == doctest::Approx(0.25 / 1.5));
    CHECK(renorm.in_unit_range());

    // in band: renormalize leaves values alone
    const auto tame = pansharpen::fuse(lf, ImageF32(1, 2, 1, 0.1f), {1.0, OutOfBand::renormalize});
    CHECK(tame.at(0, 0, 0) == doctest::Approx(0.6));
}

TEST_CASE("fusion preconditions") {
    CHECK_THROWS_AS(pansharpen::fuse(ImageF32(4, 4, 1), ImageF32(4, 4, 1), {}), std::invalid_argument);
    CHECK_THROWS_AS(pansharpen::fuse(ImageF32(4, 4, 3), ImageF32(4, 5, 1), {}), std::invalid_argument);
    CHECK_THROWS_AS(pansharpen::fuse(ImageF32(4, 4, 3), ImageF32(4, 4, 1), {-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(pansharpen::parse_out_of_band("wrap"), std::invalid_argument);
    CHECK(pansharpen::parse_out_of_band("renormalize") == OutOfBand::renormalize);
}

TEST_CASE("oracle fusion at lambda = 0 is the visible low band") {
    auto ds = io::gen_synthetic_dataset(6, 1, 48, 48);
    auto s = ds[0];
    CHECK_THROWS_AS(pansharpen::oracle_fuse(s, {}, {}), std::invalid_argument);
    s.thermal = preprocess::preprocess(s.thermal);
    const auto fused = pansharpen::oracle_fuse(s, {}, {0.0, OutOfBand::none});
    CHECK(fused == frequency::decompose(s.visible, frequency::KernelSpec{}).lf);
}

TEST_CASE("type-7 quantiles") {
    CHECK(pansharpen::quantile({4, 1, 3, 2}, 0.25) == doctest::Approx(1.75));
    CHECK(pansharpen::quantile({4, 1, 3, 2}, 0.5) == doctest::Approx(2.5));
    CHECK(pansharpen::quantile({4, 1, 3, 2}, 1.0) == 4.0);
    CHECK(pansharpen::quantile({7}, 0.3) == 7.0);
    CHECK_THROWS_AS(pansharpen::quantile({}, 0.5), std::invalid_argument);
}

TEST_CASE("lambda sweep statistics and CSV") {
    auto ds = io::gen_synthetic_dataset(8, 5, 48, 48);
    for (auto& s : ds) s.thermal = preprocess::preprocess(s.thermal);
    const auto report = pansharpen::lambda_sweep(ds, {0.0, 2.0}, {});
    REQUIRE(report.rows.size() == 2);
    REQUIRE(report.psnr[0].size() == 5);
    const auto fused = pansharpen::oracle_fuse(ds[3], {}, {2.0, OutOfBand::clip});
    CHECK(report.psnr[1][3] == doctest::Approx(metrics::psnr(fused, ds[3].visible)).epsilon(1e-12));
    const auto& r = report.rows[1];
    CHECK(r.min <= r.q1);
    CHECK(r.q1 <= r.median);
    CHECK(r.median <= r.q3);
    CHECK(r.q3 <= r.max);
    std::ostringstream os;
    report.write_csv(os);
    CHECK(os.str().rfind("lambda,min,q1,median,q3,max,mean\n0.000000,", 0) == 0);
    CHECK_THROWS_AS(pansharpen::lambda_sweep({}, {0.0}, {}), std::invalid_argument);
}
