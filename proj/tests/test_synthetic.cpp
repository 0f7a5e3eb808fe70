#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "thermopan/synthetic.hpp"

using namespace thermopan;

TEST_CASE("synthetic datasets are deterministic in the seed") {
    const auto a = io::gen_synthetic_dataset(9, 3, 48, 40);
    const auto b = io::gen_synthetic_dataset(9, 3, 48, 40);
    const auto c = io::gen_synthetic_dataset(10, 3, 48, 40);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].thermal.pixels == b[i].thermal.pixels);
        CHECK(a[i].visible == b[i].visible);
        CHECK(a[i].id == b[i].id);
    }
    CHECK_FALSE(a[0].visible == c[0].visible);
    CHECK(a[2].id == "s0002");
}

TEST_CASE("synthetic pairs are valid raw/visible pairs") {
    for (const auto& s : io::gen_synthetic_dataset(2, 4, 64, 64)) {
        CHECK_NOTHROW(validate_pair(s));
        CHECK_FALSE(s.thermal.normalized);
        CHECK(s.thermal.bit_depth == 16);
        CHECK(s.visible.channels() == 3);
        CHECK(s.visible.in_unit_range());
        for (float v : s.thermal.pixels.pixels()) {
            CHECK(v == std::floor(v));
            CHECK(v >= 0.0f);
            CHECK(v <= 65535.0f);
        }
        // visible values are exact 8-bit levels
        for (float v : s.visible.pixels()) CHECK(std::round(v * 255.0f) / 255.0f == v);
    }
}

TEST_CASE("every scene contains sky, ground and a hot object") {
    for (int i = 0; i < 8; ++i) {
        const auto labels = io::synthetic_labels(5, i, 64, 64);
        const std::set<io::Region> present(labels.begin(), labels.end());
        CHECK(present.contains(io::Region::sky));
        CHECK(present.contains(io::Region::ground));
        CHECK(present.contains(io::Region::hot));
    }
}

TEST_CASE("spike probability controls dead/hot pixels") {
    io::SyntheticOptions none;
    none.spike_probability = 0.0;
    io::SyntheticOptions all;
    all.spike_probability = 1.0;
    for (float v : io::gen_synthetic_dataset(1, 1, 32, 32, none)[0].thermal.pixels.pixels()) {
        CHECK(v > 0.0f);
        CHECK(v < 65535.0f);
    }
    for (float v : io::gen_synthetic_dataset(1, 1, 32, 32, all)[0].thermal.pixels.pixels())
        CHECK((v == 0.0f || v == 65535.0f));
    CHECK_THROWS_AS(io::gen_synthetic_dataset(1, 0, 32, 32), std::invalid_argument);
    CHECK_THROWS_AS(io::gen_synthetic_dataset(1, 1, 16, 32), std::invalid_argument);
}
