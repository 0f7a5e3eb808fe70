#include <doctest.h>

#include <fstream>
#include <iterator>

#include "support.hpp"
#include "thermopan/cli.hpp"
#include "thermopan/imgio.hpp"
#include "thermopan/synthetic.hpp"

using namespace thermopan;
using testsupport::TempDir;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("edit distance and suggestions") {
    CHECK(cli::edit_distance("", "abc") == 3);
    CHECK(cli::edit_distance("kitten", "sitting") == 3);
    CHECK(cli::edit_distance("fuse", "fuse") == 0);
    const auto& names = cli::subcommand_names();
    CHECK(names.size() == 8);
    CHECK(cli::suggest("fues", names) == "fuse");
    CHECK(cli::suggest("colourize", names) == "colorize");
    CHECK(cli::suggest("sweep", names) == "sweep-lambda");
    CHECK(cli::suggest("xyzzy", names).empty());
}

TEST_CASE("usage errors exit with 1") {
    CHECK(cli::dispatch(std::vector<std::string>{}) == cli::kExitUsage);
    CHECK(cli::dispatch({"fues"}) == cli::kExitUsage);
    CHECK(cli::dispatch({"fuse", "--lamda", "3"}) == cli::kExitUsage);
    CHECK(cli::dispatch({"preprocess", "--in", "/nonexistent/x.tif", "--out", "y.tif"}) == cli::kExitUsage);
    CHECK(cli::dispatch({"gen-synthetic", "--out", "x", "-n", "0"}) == cli::kExitUsage);
    CHECK(cli::dispatch({"fuse", "--help"}) == cli::kExitOk);
}

TEST_CASE("runtime failures exit with 2") {
    TempDir dir("cli_rt");
    std::ofstream(dir / "junk.tif") << "not a tiff";
    CHECK(cli::dispatch({"preprocess", "--in", (dir / "junk.tif").string(), "--out", (dir / "o.tif").string()}) ==
          cli::kExitRuntime);
    const auto empty = dir / "empty";
    std::filesystem::create_directories(empty);
    CHECK(cli::dispatch({"sweep-lambda", "--dataset", empty.string()}) == cli::kExitRuntime);
}

TEST_CASE("fuse at lambda 0 reproduces the low band file byte for byte") {
    TempDir dir("cli_fuse");
    const std::string d = dir.path().string();
    REQUIRE(cli::dispatch({"gen-synthetic", "--seed", "2", "-n", "1", "--size", "48", "--out", d + "/data"}) == 0);
    for (const char* depth : {"8", "16"}) {
        const std::string ext = std::string(depth) == "8" ? ".png" : ".tif";
        const std::string lf = d + "/lf" + depth + ext;
        REQUIRE(cli::dispatch({"decompose", "--in", d + "/data/visible/s0000.png", "--lf", lf, "--hf", d + "/hf.tif",
                               "--depth", depth}) == 0);
        const std::string out = d + "/fused" + depth + ext;
        REQUIRE(cli::dispatch({"fuse", "--lf", lf, "--hf", d + "/hf.tif", "--lambda", "0", "--out", out}) == 0);
        CHECK(slurp(out) == slurp(lf));
    }
}

TEST_CASE("repeated invocations write identical bytes") {
    TempDir dir("cli_det");
    const std::string d = dir.path().string();
    for (const char* run : {"a", "b"}) {
        const std::string r = d + "/" + run;
        REQUIRE(cli::dispatch({"gen-synthetic", "--seed", "9", "-n", "2", "--size", "40", "--out", r}) == 0);
        REQUIRE(cli::dispatch({"decompose", "--thermal", "--in", r + "/thermal/s0001.tif", "--lf", r + "/lf.tif", "--hf",
                               r + "/hf.tif", "--depth", "16"}) == 0);
    }
    for (const char* f : {"thermal/s0000.tif", "visible/s0001.png", "lf.tif", "hf.tif"})
        CHECK(slurp(d + "/a/" + f) == slurp(d + "/b/" + f));
}
