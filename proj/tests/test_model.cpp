#include <doctest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"
#include "thermopan/model/adam.hpp"
#include "thermopan/model/augment.hpp"
#include "thermopan/model/colorize.hpp"
#include "thermopan/model/config.hpp"
#include "thermopan/model/convert.hpp"
#include "thermopan/model/loss.hpp"
#include "thermopan/model/network.hpp"
#include "thermopan/model/params_io.hpp"
#include "thermopan/model/train.hpp"
#include "thermopan/preprocess.hpp"
#include "thermopan/reference.hpp"
#include "thermopan/synthetic.hpp"

using namespace thermopan;
using namespace thermopan::model;
using testsupport::random_tensor;

namespace {

double dot(const Tensor<double>& a, const Tensor<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Architecture tiny_arch() {
    Architecture a;
    a.base_width = 2;
    a.max_width = 4;
    a.depth = 2;
    return a;
}

std::vector<PairedSample> prepared(std::uint64_t seed, int n, int size) {
    auto ds = io::gen_synthetic_dataset(seed, n, size, size);
    for (auto& s : ds) s.thermal = preprocess::preprocess(s.thermal);
    return ds;
}

}  // namespace

// ---- loss

TEST_CASE("loss is zero exactly at the target") {
    const auto y = random_tensor<double>(1, {2, 3, 8, 8}, 0.0, 1.0);
    const auto r = loss_total(y, y, LossConfig{});
    CHECK(r.total == 0.0);
    for (double g : r.grad.values()) CHECK(g == 0.0);
}

TEST_CASE("constant offset: content c, lf c^2") {
    for (double c : {0.1, 0.2}) {
        const auto y = random_tensor<double>(2, {1, 3, 16, 12}, 0.0, 0.5);
        auto gx = y;
        for (double& v : gx.values()) v += c;
        const auto r = loss_total(gx, y, LossConfig{});
        CHECK(r.content == doctest::Approx(c).epsilon(1e-12));
        CHECK(r.lf == doctest::Approx(c * c).epsilon(1e-9));
        CHECK(r.total == doctest::Approx(c + 10 * c * c).epsilon(1e-9));
    }
}

TEST_CASE("total - content = alpha * lf") {
    LossConfig cfg;
    cfg.alpha = 3.5;
    const auto gx = random_tensor<double>(3, {2, 3, 10, 10}, 0.0, 1.0);
    const auto y = random_tensor<double>(4, {2, 3, 10, 10}, 0.0, 1.0);
    const auto r = loss_total(gx, y, cfg);
    CHECK(std::abs((r.total - r.content) - cfg.alpha * r.lf) < 1e-12);
    CHECK(r.total > 0.0);
}

TEST_CASE("lf term agrees with a direct 2-D blur") {
    const LossConfig cfg;
    const auto kernel = frequency::gaussian_kernel(cfg.kernel);
    const auto gx = random_tensor<double>(5, {1, 1, 9, 11}, 0.0, 1.0);
    const auto y = random_tensor<double>(6, {1, 1, 9, 11}, 0.0, 1.0);
    const auto bg = reference::blur_direct(gx.values(), 9, 11, kernel);
    const auto by = reference::blur_direct(y.values(), 9, 11, kernel);
    double s = 0.0;
    for (std::size_t i = 0; i < bg.size(); ++i) s += (bg[i] - by[i]) * (bg[i] - by[i]);
    CHECK(loss_total(gx, y, cfg).lf == doctest::Approx(s / 99.0).epsilon(1e-10));
}

TEST_CASE("loss gradient matches finite differences") {
    auto gx = random_tensor<double>(7, {1, 3, 8, 8}, 0.0, 1.0);
    auto y = random_tensor<double>(8, {1, 3, 8, 8}, 0.0, 1.0);
    // keep |gx - y| clear of the L1 kink
    for (std::size_t i = 0; i < gx.size(); ++i)
        if (std::abs(gx[i] - y[i]) < 0.01) gx[i] += 0.02;
    const LossConfig cfg;
    const auto r = loss_total(gx, y, cfg);
    CHECK(testsupport::gradient_relative_error(gx, r.grad, [&] { return loss_total(gx, y, cfg).total; }) < 1e-3);
}

TEST_CASE("loss preconditions") {
    CHECK_THROWS_AS(loss_total(Tensor<double>({1, 3, 4, 4}), Tensor<double>({1, 3, 4, 5}), LossConfig{}),
                    std::invalid_argument);
    LossConfig bad;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(loss_total(Tensor<double>({1, 3, 4, 4}), Tensor<double>({1, 3, 4, 4}), bad), std::invalid_argument);
    const auto img = loss_total(ImageF32(8, 8, 3, 0.3f), ImageF32(8, 8, 3, 0.2f), LossConfig{});
    CHECK(img.content == doctest::Approx(0.1).epsilon(1e-6));
}

// ---- adam

TEST_CASE("adam: zero gradients leave parameters alone") {
    std::vector<Tensor<double>> p{random_tensor<double>(9, {3, 4})};
    const auto before = p;
    AdamState<double> st;
    adam_step(p, {Tensor<double>({3, 4})}, st, 0.1);
    CHECK(p == before);
    CHECK(st.t == 1);
}

TEST_CASE("adam: first step moves by lr against the gradient sign") {
    std::vector<Tensor<double>> p{Tensor<double>({4}, std::vector<double>{1.0, -2.0, 0.5, 3.0})};
    const auto before = p;
    const Tensor<double> g({4}, std::vector<double>{0.3, -0.7, 5.0, -1e-3});
    AdamState<double> st;
    const double lr = 0.01;
    adam_step(p, {g}, st, lr);
    for (int i = 0; i < 4; ++i) {
        const double expect = -lr * (g[i] > 0 ? 1.0 : -1.0);
        CHECK(std::abs((p[0][i] - before[0][i]) - expect) < 1e-6);
    }
}

TEST_CASE("adam minimizes a parabola") {
    std::vector<Tensor<double>> p{Tensor<double>({1}, 1.0)};
    AdamState<double> st;
    std::vector<double> trace;
    for (int k = 0; k < 100; ++k) {
        adam_step(p, {Tensor<double>({1}, 2.0 * p[0][0])}, st, 0.1);
        trace.push_back(std::abs(p[0][0]));
    }
    CHECK(trace.back() < 0.5);
    CHECK(trace[50] < trace[0]);
    CHECK(trace.back() < trace[10]);
}

TEST_CASE("adam shape checks") {
    std::vector<Tensor<double>> p{Tensor<double>({2})};
    AdamState<double> st;
    CHECK_THROWS_AS(adam_step(p, {Tensor<double>({3})}, st, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(adam_step(p, {}, st, 0.1), std::invalid_argument);
}

// ---- augment

TEST_CASE("augment with everything off is a centered crop") {
    auto s = prepared(1, 1, 48)[0];
    AugmentConfig cfg;
    cfg.crop = 32;
    cfg.random_crop = cfg.hflip = cfg.vflip = cfg.rotate = false;
    const auto a = augment(s, cfg, 123);
    CHECK(a.visible == crop(s.visible, 8, 8, 32, 32));
    CHECK(a.thermal.pixels == crop(s.thermal.pixels, 8, 8, 32, 32));
    CHECK(a.thermal.normalized);
}

TEST_CASE("augment applies one transform to both modalities") {
    // visible channel 0 carries the thermal values, so alignment is checkable pixel by pixel
    auto s = prepared(2, 1, 40)[0];
    const auto& t = s.thermal.pixels;
    for (std::size_t i = 0; i < t.size(); ++i) s.visible.plane(0)[i] = t.pixels()[i];
    AugmentConfig cfg;
    cfg.crop = 24;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = augment(s, cfg, seed);
        const auto p0 = a.visible.plane(0);
        CHECK(std::equal(p0.begin(), p0.end(), a.thermal.pixels.pixels().begin()));
        CHECK(augment(s, cfg, seed).visible == a.visible);
    }
    cfg.crop = 41;
    CHECK_THROWS_AS(augment(s, cfg, 0), std::invalid_argument);
}

TEST_CASE("geometric helpers") {
    const auto img = testsupport::random_image(3, 5, 7, 3);
    CHECK(flip_horizontal(flip_horizontal(img)) == img);
    CHECK(flip_vertical(flip_vertical(img)) == img);
    CHECK(rotate90(rotate90(img, 1), -1) == img);
    CHECK(rotate90(img, 4) == img);
    CHECK(rotate90(rotate90(img, 1), 1) == rotate90(img, 2));
    const auto r = rotate90(img, 1);
    CHECK(r.height() == 7);
    CHECK(r.width() == 5);
    // counter-clockwise: the top-right corner moves to the top-left
    CHECK(r.at(1, 0, 0) == img.at(1, 0, 6));
    CHECK(rotate90(img, 2).at(0, 0, 0) == img.at(0, 4, 6));
}

// ---- network

TEST_CASE("parameter layout") {
    const Architecture a;
    const auto shapes = parameter_shapes(a);
    CHECK(shapes.size() == a.tensor_count());
    CHECK(shapes[0] == std::vector<int>{32, 1, 3, 3});
    CHECK(shapes[12] == std::vector<int>{256, 128, 3, 3});
    // first decoder block: bottleneck + skip of level 2
    CHECK(shapes[16] == std::vector<int>{128, 256 + 128, 3, 3});
    CHECK(shapes.back() == std::vector<int>{3});
    const auto p = init_params(a, 1);
    CHECK(p.tensors[2][0] == 1.0f);  // norm scale
    CHECK(p.tensors[3][0] == 0.0f);  // norm shift
}

TEST_CASE("forward: shape, range, determinism, divisibility") {
    Architecture a;
    a.base_width = 8;
    const auto p = init_params(a, 3);
    const auto x = random_tensor<float>(4, {2, 1, 32, 48}, 0.0, 1.0);
    Network<float> net(p);
    const auto y = net.forward(x, Mode::eval);
    CHECK(y.shape() == std::vector<int>{2, 3, 32, 48});
    for (float v : y.values()) {
        CHECK(v > 0.0f);
        CHECK(v < 1.0f);
    }
    CHECK(predict(p, x) == y);
    CHECK_THROWS_AS(net.forward(random_tensor<float>(4, {1, 1, 24, 32}), Mode::eval), std::invalid_argument);
    CHECK_THROWS_AS(net.forward(random_tensor<float>(4, {1, 3, 32, 32}), Mode::eval), std::invalid_argument);
}

TEST_CASE("network rejects mismatched parameters") {
    auto p = init_params(tiny_arch(), 1);
    p.tensors.pop_back();
    CHECK_THROWS_AS(Network<float>{p}, std::invalid_argument);
    auto q = init_params(tiny_arch(), 1);
    q.tensors[0] = Tensor<float>({1, 1, 3, 3});
    CHECK_THROWS_AS(Network<float>{q}, std::invalid_argument);
}

TEST_CASE("whole-network gradients match finite differences") {
    const auto p = init_params(tiny_arch(), 5).cast<double>();
    auto params = p;
    auto x = random_tensor<double>(6, {2, 1, 8, 8}, 0.0, 1.0);
    const auto r = random_tensor<double>(7, {2, 3, 8, 8});

    Network<double> net(params);
    net.forward(x, Mode::train, 99);
    Tensor<double> gx;
    const auto grads = net.backward(r, &gx);

    auto f = [&] {
        Network<double> n2(params);
        return dot(n2.forward(x, Mode::train, 99), r);
    };
    CHECK(testsupport::gradient_relative_error(x, gx, f, 1e-6) < 1e-3);
    const std::size_t normed = 8 * static_cast<std::size_t>(params.arch.depth);
    for (std::size_t i = 0; i < params.tensors.size(); ++i) {
        CAPTURE(i);
        if (i < normed && i % 4 == 1) {
            // a bias in front of instance norm is cancelled by the mean subtraction
            for (double g : grads[i].values()) CHECK(std::abs(g) < 1e-10);
            continue;
        }
        CHECK(testsupport::gradient_relative_error(params.tensors[i], grads[i], f, 1e-6) < 1e-3);
    }
}

// ---- training

TEST_CASE("training: zero epochs, determinism, history") {
    const auto ds = prepared(3, 2, 32);
    TrainConfig t = TrainConfig::desk_scale();
    t.arch = tiny_arch();
    t.augment.crop = 32;
    t.batch_size = 2;
    t.seed = 17;

    t.epochs = 0;
    const auto none = train(ds, t, {});
    CHECK(none.history.empty());
    CHECK(none.params == init_params(t.arch, 17));

    t.epochs = 3;
    const auto a = train(ds, t, {});
    const auto b = train(ds, t, {});
    CHECK(a.params == b.params);
    REQUIRE(a.history.size() == 3);
    CHECK(a.iterations == 3);
    std::ostringstream os;
    write_history_csv(a.history, os);
    CHECK(os.str().rfind("epoch,lr,loss,content,lf\n0,", 0) == 0);

    t.seed = 18;
    CHECK_FALSE(train(ds, t, {}).params == a.params);
}

TEST_CASE("training preconditions") {
    auto ds = prepared(4, 1, 32);
    TrainConfig t = TrainConfig::desk_scale();
    t.arch = tiny_arch();
    t.augment.crop = 32;
    t.epochs = 1;
    CHECK_THROWS_AS(train({}, t, {}), std::invalid_argument);
    auto raw = io::gen_synthetic_dataset(4, 1, 32, 32);
    CHECK_THROWS_AS(train(raw, t, {}), std::invalid_argument);
    t.augment.crop = 30;
    CHECK_THROWS_AS(train(ds, t, {}), std::invalid_argument);
    t.augment.crop = 64;
    t.arch.base_width = 8;
    CHECK_THROWS_AS(train(ds, t, {}), std::invalid_argument);
}

TEST_CASE("divergence guard") {
    const auto ds = prepared(5, 1, 32);
    TrainConfig t = TrainConfig::desk_scale();
    t.arch = tiny_arch();
    t.augment.crop = 32;
    t.epochs = 2;
    auto p = init_params(t.arch, 0);
    p.tensors.back()[0] = std::numeric_limits<float>::quiet_NaN();
    CHECK_THROWS_AS(train_from(p, ds, t, {}), std::runtime_error);
}

TEST_CASE("learning-rate schedule") {
    TrainConfig t;
    t.epochs = 1000;
    t.decay_start_epoch = 400;
    CHECK(learning_rate(t, 0) == t.lr);
    CHECK(learning_rate(t, 399) == t.lr);
    CHECK(learning_rate(t, 400) == t.lr);
    CHECK(learning_rate(t, 999) == doctest::Approx(0.1 * t.lr));
    CHECK(learning_rate(t, 700) == doctest::Approx(t.lr * (1.0 - 0.9 * 300.0 / 599.0)));
}

// ---- persistence and config

TEST_CASE("parameter files round-trip exactly") {
    Architecture a = tiny_arch();
    a.leaky_slope = 0.1;
    const auto p = init_params(a, 9);
    std::stringstream ss;
    write_params(p, ss);
    const std::string bytes = ss.str();
    CHECK(bytes.substr(0, 8) == "TPANPARM");
    CHECK(static_cast<unsigned char>(bytes[8]) == 1);  // little-endian version
    CHECK(read_params(ss) == p);

    std::istringstream truncated(bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(read_params(truncated), std::runtime_error);
    std::string bad = bytes;
    bad[0] = 'X';
    std::istringstream wrong(bad);
    CHECK_THROWS_AS(read_params(wrong), std::runtime_error);

    testsupport::TempDir dir("params");
    save_params(p, (dir / "p.bin").string());
    CHECK(load_params((dir / "p.bin").string()) == p);
    CHECK_THROWS_AS(load_params((dir / "missing.bin").string()), std::runtime_error);
}

TEST_CASE("config files") {
    std::istringstream is("# desk run\npreset = desk\nepochs = 12\nlr=0.005\nrotate = false\nalpha = 5\nseed = 42\n");
    const auto s = parse_config(is);
    CHECK(s.train.epochs == 12);
    CHECK(s.train.lr == 0.005);
    CHECK_FALSE(s.train.augment.rotate);
    CHECK(s.train.arch.base_width == 8);
    CHECK(s.loss.alpha == 5.0);
    CHECK(s.train.seed == 42);

    std::istringstream again(format_config(s));
    const auto t = parse_config(again);
    CHECK(format_config(t) == format_config(s));

    std::istringstream unknown("epoch = 3\n");
    CHECK_THROWS_AS(parse_config(unknown), std::invalid_argument);
    std::istringstream garbage("epochs = many\n");
    CHECK_THROWS_AS(parse_config(garbage), std::invalid_argument);
    std::istringstream invalid("batch_size = 0\n");
    CHECK_THROWS_AS(parse_config(invalid), std::invalid_argument);
}

// ---- colorize

TEST_CASE("colorize at lambda 0 is the low band of G(x)") {
    const auto p = init_params(tiny_arch(), 2);
    const auto s = prepared(6, 1, 32)[0];
    const auto out = colorize(p, s.thermal, {0.0, pansharpen::OutOfBand::none}, {});
    CHECK(out == frequency::decompose(forward(p, s.thermal.pixels), frequency::KernelSpec{}).lf);

    // raw frames are preprocessed on the way in
    const auto raw = io::gen_synthetic_dataset(6, 1, 32, 32)[0].thermal;
    CHECK(colorize(p, raw, {3.0}, {}) == colorize(p, s.thermal, {3.0}, {}));
}

TEST_CASE("flat thermal input gives a flat-ish colorization") {
    const auto p = init_params(tiny_arch(), 4);
    ThermalFrame flat = ThermalFrame::raw(ImageF32(32, 32, 1, 30000.0f), 16);
    const auto out = colorize(p, flat, {3.0, pansharpen::OutOfBand::none}, {});
    const auto g = forward(p, preprocess::preprocess(flat).pixels);
    const auto lf = frequency::decompose(g, frequency::KernelSpec{}).lf;
    // thermal HF is identically zero, so only G's own low band remains
    CHECK(out == lf);
}
