#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "fdcheck.hpp"
#include "pdg/denoiser.hpp"
#include "pdg/losses.hpp"
#include "pdg/rng.hpp"

using namespace pdg;
using pdg::testutil::fd_rel_err;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("pdg_denoiser_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<GeoPoint> random_points(std::size_t n, Rng& rng) {
    std::vector<GeoPoint> pts(n);
    for (auto& p : pts) p = {rng.uniform(), rng.uniform()};
    return pts;
}

std::vector<double> random_values(std::size_t n, Rng& rng) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    return v;
}

Tensor forward_once(const DenoiserParams& params, const std::vector<GeoPoint>& m_co,
                    const std::vector<double>& x_co, const std::vector<GeoPoint>& m_ta,
                    const std::vector<double>& x_ta, int t, const ReceptiveMask& mask) {
    Tape tape;
    const ParamVars pv = ParamVars::lift(tape, params);
    return tape.value(denoiser_forward(tape, pv, params, m_co, x_co, m_ta, x_ta, t, mask));
}

} // namespace

TEST_CASE("step embedding at t=0 is zeros then ones") {
    const Tensor e = step_embedding(0.0, 12);
    REQUIRE(e.rows() == 1);
    REQUIRE(e.cols() == 12);
    for (std::size_t i = 0; i < 6; ++i) CHECK(e[i] == 0.0);
    for (std::size_t i = 6; i < 12; ++i) CHECK(e[i] == 1.0);
}

TEST_CASE("step embedding entry zero oscillates at unit frequency") {
    for (double t : {0.5, 1.0, 3.7, 250.0}) {
        const Tensor e = step_embedding(t, 16);
        CHECK(e[0] == doctest::Approx(std::sin(t)).epsilon(1e-15));
        CHECK(e[8] == doctest::Approx(std::cos(t)).epsilon(1e-15));
    }
}

TEST_CASE("step embedding matches the printed formula at d=8") {
    const double t = 3.0;
    const int w = 4;
    const Tensor e = step_embedding(t, 8);
    for (int i = 0; i < w; ++i) {
        const double freq = std::pow(10.0, 4.0 * i / (w - 1));
        CHECK(e[static_cast<std::size_t>(i)] == doctest::Approx(std::sin(freq * t)).epsilon(1e-12));
        CHECK(e[static_cast<std::size_t>(w + i)] ==
              doctest::Approx(std::cos(freq * t)).epsilon(1e-12));
    }
    // all entries bounded by 1
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(e[i]) <= 1.0);
}

TEST_CASE("step embedding rejects odd or tiny widths") {
    CHECK_THROWS_AS(step_embedding(1.0, 7), ConfigError);
    CHECK_THROWS_AS(step_embedding(1.0, 2), ConfigError);
}

TEST_CASE("zeroed encoder broadcasts the step vector") {
    Rng rng(3);
    DenoiserParams params = DenoiserParams::init(8, rng);
    for (double& v : params.enc_co_w.data()) v = 0.0;
    for (double& v : params.enc_co_b.data()) v = 0.0;

    Tape tape;
    const ParamVars pv = ParamVars::lift(tape, params);
    Tensor pt_row(1, 8);
    for (std::size_t j = 0; j < 8; ++j) pt_row(0, j) = 0.1 * static_cast<double>(j + 1);
    const Var p_t = tape.leaf(pt_row);

    const auto pts = random_points(5, rng);
    const auto vals = random_values(5, rng);
    const Tensor& h = tape.value(encode(tape, pv, PointRole::condition, pts, vals, p_t));
    REQUIRE(h.rows() == 5);
    REQUIRE(h.cols() == 8);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 8; ++j) CHECK(h(i, j) == pt_row(0, j));
}

TEST_CASE("identity-like encoder weights pass the raw triple through") {
    Rng rng(5);
    DenoiserParams params = DenoiserParams::init(8, rng);
    for (double& v : params.enc_ta_w.data()) v = 0.0;
    for (double& v : params.enc_ta_b.data()) v = 0.0;
    for (std::size_t i = 0; i < 3; ++i) params.enc_ta_w(i, i) = 1.0;

    Tape tape;
    const ParamVars pv = ParamVars::lift(tape, params);
    const Var p_t = tape.leaf(Tensor::zeros(1, 8));
    const std::vector<GeoPoint> pts = {{0.25, 0.75}, {0.5, 0.1}};
    const std::vector<double> vals = {1.5, -2.25};
    const Tensor& h = tape.value(encode(tape, pv, PointRole::target, pts, vals, p_t));
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(h(i, 0) == pts[i].lon);
        CHECK(h(i, 1) == pts[i].lat);
        CHECK(h(i, 2) == vals[i]);
        for (std::size_t j = 3; j < 8; ++j) CHECK(h(i, j) == 0.0);
    }
}

TEST_CASE("encoder weight gradients match finite differences") {
    Rng rng(7);
    const auto pts = random_points(4, rng);
    const auto vals = random_values(4, rng);
    for (int rep = 0; rep < 5; ++rep) {
        DenoiserParams params = DenoiserParams::init(8, rng);
        Tape tape;
        const ParamVars pv = ParamVars::lift(tape, params);
        const Var p_t = step_vector(tape, pv, 17.0, 8);
        const Var h = encode(tape, pv, PointRole::condition, pts, vals, p_t);
        tape.backward(tape.sum(tape.mul(h, h)));

        const auto loss_for = [&](const std::string& name) {
            return [&, name](const Tensor& probe) {
                DenoiserParams p2 = params;
                for (auto& [n, t] : p2.entries())
                    if (n == name) *t = probe;
                Tape t2;
                const ParamVars pv2 = ParamVars::lift(t2, p2);
                const Var pt2 = step_vector(t2, pv2, 17.0, 8);
                const Var h2 = encode(t2, pv2, PointRole::condition, pts, vals, pt2);
                return t2.value(t2.sum(t2.mul(h2, h2))).scalar_value();
            };
        };
        for (const char* name : {"enc_co_w", "enc_co_b", "step_w1", "step_b1", "step_w2",
                                 "step_b2"}) {
            CAPTURE(name);
            const Tensor* cur = nullptr;
            for (auto& [n, t] : params.entries())
                if (n == name) cur = t;
            REQUIRE(cur != nullptr);
            CHECK(fd_rel_err(loss_for(name), *cur, tape.grad(pv.at(name))) < 1e-4);
        }
    }
}

TEST_CASE("one-hot attention reproduces the single allowed condition") {
    Rng rng(11);
    const DenoiserParams params = DenoiserParams::init(8, rng);
    const auto m_ta = random_points(3, rng);
    const auto x_ta = random_values(3, rng);
    const auto m_co = random_points(5, rng);
    const auto x_co = random_values(5, rng);
    const std::size_t j = 2;

    // (a) mask allowing only condition j everywhere
    ReceptiveMask one_hot(3, 5);
    for (std::size_t i = 0; i < 3; ++i) one_hot.set(i, j, true);
    const Tensor a = forward_once(params, m_co, x_co, m_ta, x_ta, 10, one_hot);

    // (b) every condition replaced by condition j, full mask: attention must
    // average five identical value rows, which is that row
    const std::vector<GeoPoint> m_same(5, m_co[j]);
    const std::vector<double> x_same(5, x_co[j]);
    const Tensor b =
        forward_once(params, m_same, x_same, m_ta, x_ta, 10, ReceptiveMask::full(3, 5));

    REQUIRE(a.rows() == 3);
    REQUIRE(a.cols() == 1);
    for (std::size_t i = 0; i < 3; ++i) CHECK(a(i, 0) == doctest::Approx(b(i, 0)).epsilon(1e-12));
}

TEST_CASE("identical conditions split attention evenly") {
    Rng rng(13);
    const DenoiserParams params = DenoiserParams::init(8, rng);
    const auto m_ta = random_points(2, rng);
    const auto x_ta = random_values(2, rng);
    const GeoPoint c{0.4, 0.6};
    const std::vector<GeoPoint> m_co = {c, c};
    const std::vector<double> x_co = {0.8, 0.8};

    // two equal condition rows with a full mask vs a single-condition run
    const Tensor two =
        forward_once(params, m_co, x_co, m_ta, x_ta, 5, ReceptiveMask::full(2, 2));
    const Tensor one = forward_once(params, {c}, {0.8}, m_ta, x_ta, 5, ReceptiveMask::full(2, 1));
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(two(i, 0) == doctest::Approx(one(i, 0)).epsilon(1e-12));
}

TEST_CASE("full forward pass gradients match finite differences") {
    Rng rng(17);
    const auto m_ta = random_points(4, rng);
    const auto m_co = random_points(6, rng);
    const auto x_co = random_values(6, rng);
    const auto x_ta = random_values(4, rng);
    Tensor eps_true(4, 1);
    for (double& v : eps_true.data()) v = rng.normal();
    const ReceptiveMask mask = knn_mask(m_ta, m_co, 3);
    const int t = 37;

    DenoiserParams params = DenoiserParams::init(8, rng);
    // give the zero-initialized head output layer a nonzero operating point
    for (double& v : params.head_w2.data()) v = rng.normal(0.0, 0.3);
    params.head_b2(0, 0) = 0.05;

    Tape tape;
    const ParamVars pv = ParamVars::lift(tape, params);
    const Var eps_hat = denoiser_forward(tape, pv, params, m_co, x_co, m_ta, x_ta, t, mask);
    tape.backward(epsilon_loss(tape, eps_true, eps_hat));

    for (auto& [name, tensor] : params.entries()) {
        CAPTURE(name);
        const auto loss = [&, name = name](const Tensor& probe) {
            DenoiserParams p2 = params;
            for (auto& [n, tp] : p2.entries())
                if (n == name) *tp = probe;
            Tape t2;
            const ParamVars pv2 = ParamVars::lift(t2, p2);
            const Var eh2 = denoiser_forward(t2, pv2, p2, m_co, x_co, m_ta, x_ta, t, mask);
            return t2.value(epsilon_loss(t2, eps_true, eh2)).scalar_value();
        };
        CHECK(fd_rel_err(loss, *tensor, tape.grad(pv.at(name))) < 1e-4);
    }
}

TEST_CASE("output is one column per target") {
    Rng rng(19);
    const DenoiserParams params = DenoiserParams::init(12, rng);
    for (std::size_t n_ta : {1, 3, 9}) {
        const auto m_ta = random_points(n_ta, rng);
        const auto x_ta = random_values(n_ta, rng);
        const auto m_co = random_points(7, rng);
        const auto x_co = random_values(7, rng);
        const Tensor out = forward_once(params, m_co, x_co, m_ta, x_ta, 3,
                                        ReceptiveMask::full(n_ta, 7));
        CHECK(out.rows() == n_ta);
        CHECK(out.cols() == 1);
    }
}

TEST_CASE("freshly initialized head predicts exactly zero noise") {
    Rng rng(23);
    const DenoiserParams params = DenoiserParams::init(16, rng);
    const auto m_ta = random_points(5, rng);
    const auto x_ta = random_values(5, rng);
    const auto m_co = random_points(8, rng);
    const auto x_co = random_values(8, rng);
    const Tensor out =
        forward_once(params, m_co, x_co, m_ta, x_ta, 100, ReceptiveMask::full(5, 8));
    for (std::size_t i = 0; i < 5; ++i) CHECK(out(i, 0) == 0.0);
}

TEST_CASE("permuting targets permutes the output rows bit-identically") {
    Rng rng(29);
    const DenoiserParams params = DenoiserParams::init(8, rng);
    const auto m_ta = random_points(6, rng);
    const auto x_ta = random_values(6, rng);
    const auto m_co = random_points(9, rng);
    const auto x_co = random_values(9, rng);
    const ReceptiveMask mask = knn_mask(m_ta, m_co, 4);
    const Tensor base = forward_once(params, m_co, x_co, m_ta, x_ta, 50, mask);

    std::vector<std::size_t> perm = {3, 0, 5, 1, 4, 2};
    std::vector<GeoPoint> m_ta_p(6);
    std::vector<double> x_ta_p(6);
    for (std::size_t i = 0; i < 6; ++i) {
        m_ta_p[i] = m_ta[perm[i]];
        x_ta_p[i] = x_ta[perm[i]];
    }
    const ReceptiveMask mask_p = knn_mask(m_ta_p, m_co, 4);
    const Tensor permuted = forward_once(params, m_co, x_co, m_ta_p, x_ta_p, 50, mask_p);
    for (std::size_t i = 0; i < 6; ++i) CHECK(permuted(i, 0) == base(perm[i], 0));
}

TEST_CASE("permuting conditions leaves the output unchanged") {
    Rng rng(31);
    const DenoiserParams params = DenoiserParams::init(8, rng);
    const auto m_ta = random_points(4, rng);
    const auto x_ta = random_values(4, rng);
    const auto m_co = random_points(7, rng);
    const auto x_co = random_values(7, rng);
    const ReceptiveMask mask = knn_mask(m_ta, m_co, 3);
    const Tensor base = forward_once(params, m_co, x_co, m_ta, x_ta, 50, mask);

    const std::vector<std::size_t> perm = {6, 2, 0, 4, 1, 5, 3};
    std::vector<GeoPoint> m_co_p(7);
    std::vector<double> x_co_p(7);
    ReceptiveMask mask_p(4, 7);
    for (std::size_t j = 0; j < 7; ++j) {
        m_co_p[j] = m_co[perm[j]];
        x_co_p[j] = x_co[perm[j]];
        for (std::size_t i = 0; i < 4; ++i) mask_p.set(i, j, mask.allowed(i, perm[j]));
    }
    const Tensor permuted = forward_once(params, m_co_p, x_co_p, m_ta, x_ta, 50, mask_p);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(permuted(i, 0) == doctest::Approx(base(i, 0)).epsilon(1e-12));
}

TEST_CASE("values of fully excluded conditions cannot influence the output") {
    Rng rng(37);
    const DenoiserParams params = DenoiserParams::init(8, rng);
    const auto m_ta = random_points(5, rng);
    const auto x_ta = random_values(5, rng);
    const auto m_co = random_points(10, rng);
    auto x_co = random_values(10, rng);

    ReceptiveMask mask = knn_mask(m_ta, m_co, 4);
    const std::size_t excluded = 7;
    for (std::size_t i = 0; i < 5; ++i) mask.set(i, excluded, false);

    const Tensor before = forward_once(params, m_co, x_co, m_ta, x_ta, 20, mask);
    x_co[excluded] = 1e6;
    const Tensor after = forward_once(params, m_co, x_co, m_ta, x_ta, 20, mask);
    for (std::size_t i = 0; i < 5; ++i) CHECK(before(i, 0) == after(i, 0));
}

TEST_CASE("parameter init rejects bad widths and zeroes only the head output") {
    Rng rng(41);
    CHECK_THROWS_AS(DenoiserParams::init(7, rng), ConfigError);
    CHECK_THROWS_AS(DenoiserParams::init(2, rng), ConfigError);
    const DenoiserParams p = DenoiserParams::init(8, rng);
    for (double v : p.head_w2.data()) CHECK(v == 0.0);
    CHECK(p.head_b2(0, 0) == 0.0);
    double nonzero = 0.0;
    for (double v : p.attn_wq.data()) nonzero += std::abs(v);
    CHECK(nonzero > 0.0);
}

TEST_CASE("checkpoint save and load round trip exactly") {
    TempDir tmp;
    Rng rng(43);
    Checkpoint ck;
    ck.params = DenoiserParams::init(16, rng);
    for (double& v : ck.params.head_w2.data()) v = rng.normal();
    ck.norm = {48011.25, 37.5};
    ck.T = 500;
    ck.beta_start = 2e-4;
    ck.beta_end = 0.015;
    ck.k_min = 16;
    ck.k_max = 700;
    ck.full_attention = true;

    const std::string path = tmp.file("model.ckpt");
    save_checkpoint(path, ck);
    const Checkpoint back = load_checkpoint(path);

    CHECK(back.params.d == 16);
    CHECK(back.norm.mean == ck.norm.mean);
    CHECK(back.norm.std == ck.norm.std);
    CHECK(back.T == 500);
    CHECK(back.beta_start == 2e-4);
    CHECK(back.beta_end == 0.015);
    CHECK(back.k_min == 16);
    CHECK(back.k_max == 700);
    CHECK(back.full_attention == true);

    const auto orig = ck.params.entries();
    const auto loaded = back.params.entries();
    REQUIRE(orig.size() == loaded.size());
    for (std::size_t i = 0; i < orig.size(); ++i) {
        CHECK(orig[i].first == loaded[i].first);
        REQUIRE(orig[i].second->numel() == loaded[i].second->numel());
        for (std::size_t k = 0; k < orig[i].second->numel(); ++k)
            CHECK((*orig[i].second)[k] == (*loaded[i].second)[k]);
    }
}

TEST_CASE("checkpoint loader rejects foreign and truncated files") {
    TempDir tmp;
    const std::string bad = tmp.file("bad.ckpt");
    std::ofstream(bad, std::ios::binary) << "NOPE garbage";
    CHECK_THROWS_AS(load_checkpoint(bad), DataError);
    CHECK_THROWS_AS(load_checkpoint(tmp.file("missing.ckpt")), DataError);

    Rng rng(47);
    Checkpoint ck;
    ck.params = DenoiserParams::init(8, rng);
    const std::string full = tmp.file("full.ckpt");
    save_checkpoint(full, ck);
    const std::string text = [&] {
        std::ifstream in(full, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }();
    const std::string cut = tmp.file("cut.ckpt");
    std::ofstream(cut, std::ios::binary) << text.substr(0, text.size() / 2);
    CHECK_THROWS_AS(load_checkpoint(cut), DataError);
}
