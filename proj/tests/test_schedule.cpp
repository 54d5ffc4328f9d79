#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fdcheck.hpp"
#include "pdg/rng.hpp"
#include "pdg/schedule.hpp"

using namespace pdg;

TEST_CASE("single-step schedule holds exactly the start beta") {
    const NoiseSchedule s = make_schedule(1, 0.3, 0.9);
    CHECK(s.T == 1);
    CHECK(s.beta_at(1) == 0.3);
    CHECK(s.alpha_bar_at(1) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("make_schedule validates its range") {
    CHECK_THROWS_AS(make_schedule(0, 1e-4, 0.02), ConfigError);
    CHECK_THROWS_AS(make_schedule(10, 0.0, 0.02), ConfigError);
    CHECK_THROWS_AS(make_schedule(10, 0.02, 1e-4), ConfigError);
    CHECK_THROWS_AS(make_schedule(10, 1e-4, 1.0), ConfigError);
}

TEST_CASE("alpha_bar is a strictly decreasing running product") {
    const NoiseSchedule s = make_schedule(1000, 1e-4, 0.02);
    CHECK(s.alpha_bar_at(2) ==
          doctest::Approx((1.0 - s.beta_at(1)) * (1.0 - s.beta_at(2))).epsilon(1e-12));
    double prod = 1.0;
    for (int t = 1; t <= 1000; ++t) {
        prod *= 1.0 - s.beta_at(t);
        CHECK(std::abs(s.alpha_bar_at(t) - prod) < 1e-12);
        if (t > 1) CHECK(s.alpha_bar_at(t) < s.alpha_bar_at(t - 1));
    }
    CHECK(s.alpha_bar_at(1000) < s.alpha_bar_at(1));
}

TEST_CASE("forward_noise matches its closed form") {
    const NoiseSchedule s = make_schedule(100, 1e-4, 0.02);

    SUBCASE("zero noise scales by sqrt(alpha_bar)") {
        const Tensor x0 = Tensor::column({2.0, -1.0});
        const Tensor eps = Tensor::zeros(2, 1);
        const Tensor xt = forward_noise(x0, 40, eps, s);
        const double f = std::sqrt(s.alpha_bar_at(40));
        CHECK(xt(0, 0) == doctest::Approx(2.0 * f).epsilon(1e-15));
        CHECK(xt(1, 0) == doctest::Approx(-1.0 * f).epsilon(1e-15));
    }

    SUBCASE("near-zero beta leaves x0 almost unchanged") {
        const NoiseSchedule tiny = make_schedule(5, 1e-12, 1e-12);
        const Tensor x0 = Tensor::column({3.0});
        const Tensor eps = Tensor::column({1.0});
        const Tensor xt = forward_noise(x0, 5, eps, tiny);
        CHECK(xt(0, 0) == doctest::Approx(3.0).epsilon(1e-5));
    }

    SUBCASE("scalar case with alpha_bar 0.25") {
        // alpha_bar = 0.25 after one step means beta = 0.75
        const NoiseSchedule s1 = make_schedule(1, 0.75, 0.75);
        const Tensor xt = forward_noise(Tensor::scalar(2.0), 1, Tensor::scalar(1.0), s1);
        CHECK(xt.scalar_value() ==
              doctest::Approx(std::sqrt(0.25) * 2.0 + std::sqrt(0.75)).epsilon(1e-12));
        CHECK(xt.scalar_value() == doctest::Approx(1.8660254037844386).epsilon(1e-12));
    }

    SUBCASE("step bounds are enforced") {
        const Tensor x0 = Tensor::scalar(0.0);
        CHECK_THROWS_AS(forward_noise(x0, 0, x0, s), NumericError);
        CHECK_THROWS_AS(forward_noise(x0, 101, x0, s), NumericError);
    }
}

TEST_CASE("recover_x0 inverts forward_noise at every step") {
    const NoiseSchedule s = make_schedule(1000, 1e-4, 0.02);
    Rng rng(7);
    Tensor x0(5, 1), eps(5, 1);
    for (double& v : x0.data()) v = rng.normal();
    for (int t = 1; t <= 1000; ++t) {
        for (double& v : eps.data()) v = rng.normal();
        const Tensor xt = forward_noise(x0, t, eps, s);
        const Tensor back = recover_x0(xt, eps, t, s);
        for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(back[k] - x0[k]) < 1e-9);
    }
}

TEST_CASE("recover_x0 with zero predicted noise rescales x_t") {
    const NoiseSchedule s = make_schedule(50, 1e-3, 0.02);
    const Tensor xt = Tensor::column({1.2, -0.4});
    const Tensor x0 = recover_x0(xt, Tensor::zeros(2, 1), 30, s);
    const double f = 1.0 / std::sqrt(s.alpha_bar_at(30));
    CHECK(x0(0, 0) == doctest::Approx(1.2 * f).epsilon(1e-12));
    CHECK(x0(1, 0) == doctest::Approx(-0.4 * f).epsilon(1e-12));
}

TEST_CASE("recover_x0 matches an independent scalar evaluation") {
    const NoiseSchedule s = make_schedule(200, 1e-4, 0.02);
    Rng rng(19);
    for (int rep = 0; rep < 50; ++rep) {
        const int t = rng.uniform_int(1, 200);
        const double xt = rng.normal(0.0, 2.0);
        const double eh = rng.normal();
        const double ab = s.alpha_bar_at(t);
        const double expected = (xt - std::sqrt(1.0 - ab) * eh) / std::sqrt(ab);
        const Tensor got = recover_x0(Tensor::scalar(xt), Tensor::scalar(eh), t, s);
        CHECK(got.scalar_value() == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("tape recover_x0 gradient w.r.t. predicted noise matches finite differences") {
    const NoiseSchedule s = make_schedule(100, 1e-4, 0.02);
    Rng rng(29);
    for (int rep = 0; rep < 20; ++rep) {
        const int t = rng.uniform_int(1, 100);
        Tensor xt(3, 1), eh0(3, 1);
        for (double& v : xt.data()) v = rng.normal();
        for (double& v : eh0.data()) v = rng.normal();

        Tape tape;
        const Var eh = tape.leaf(eh0);
        const Var x0 = recover_x0(tape, xt, eh, t, s);
        tape.backward(tape.mean(tape.mul(x0, x0)));

        const auto loss = [&](const Tensor& p) {
            Tape t2;
            const Var x02 = recover_x0(t2, xt, t2.leaf(p), t, s);
            return t2.value(t2.mean(t2.mul(x02, x02))).scalar_value();
        };
        CHECK(pdg::testutil::fd_rel_err(loss, eh0, tape.grad(eh)) < 1e-4);
    }
}

TEST_CASE("reverse_step matches the posterior-mean formula") {
    const NoiseSchedule s = make_schedule(100, 1e-4, 0.02);

    SUBCASE("zero noise prediction and zero z rescale x_t") {
        const Tensor xt = Tensor::column({0.8});
        const Tensor out = reverse_step(xt, Tensor::zeros(1, 1), 10, s, Tensor::zeros(1, 1));
        CHECK(out(0, 0) == doctest::Approx(0.8 / std::sqrt(s.alpha_at(10))).epsilon(1e-12));
    }

    SUBCASE("final step adds no noise regardless of z") {
        const Tensor xt = Tensor::column({0.5});
        const Tensor eh = Tensor::column({0.2});
        const Tensor a = reverse_step(xt, eh, 1, s, Tensor::column({100.0}));
        const Tensor b = reverse_step(xt, eh, 1, s, Tensor::column({-100.0}));
        CHECK(a(0, 0) == b(0, 0));
    }

    SUBCASE("random inputs match an independent evaluation") {
        Rng rng(31);
        for (int rep = 0; rep < 50; ++rep) {
            const int t = rng.uniform_int(2, 100);
            const double xt = rng.normal(), eh = rng.normal(), z = rng.normal();
            const double at = s.alpha_at(t), ab = s.alpha_bar_at(t), bt = s.beta_at(t);
            const double expected =
                xt / std::sqrt(at) - (1.0 - at) / (std::sqrt(1.0 - ab) * std::sqrt(at)) * eh +
                std::sqrt(bt) * z;
            const Tensor got =
                reverse_step(Tensor::scalar(xt), Tensor::scalar(eh), t, s, Tensor::scalar(z));
            CHECK(got.scalar_value() == doctest::Approx(expected).epsilon(1e-12));
        }
    }

    SUBCASE("step bounds are enforced") {
        const Tensor v = Tensor::scalar(0.0);
        CHECK_THROWS_AS(reverse_step(v, v, 0, s, v), NumericError);
        CHECK_THROWS_AS(reverse_step(v, v, 101, s, v), NumericError);
    }
}

TEST_CASE("forward_noise variance tracks 1 - alpha_bar statistically") {
    // At x0 = 0 the noised value is sqrt(1-abar) * eps, so its variance is
    // 1 - abar. Sample variance of N draws of a scaled normal has standard
    // error sqrt(2/(N-1)) * var.
    const NoiseSchedule s = make_schedule(1000, 1e-4, 0.02);
    Rng rng(99);
    const int N = 100000;
    for (int t : {1, 250, 500, 750, 1000}) {
        const double expected = 1.0 - s.alpha_bar_at(t);
        double sum = 0.0, sumsq = 0.0;
        const Tensor x0 = Tensor::scalar(0.0);
        Tensor eps(1, 1);
        for (int i = 0; i < N; ++i) {
            eps(0, 0) = rng.normal();
            const double v = forward_noise(x0, t, eps, s).scalar_value();
            sum += v;
            sumsq += v * v;
        }
        const double mean = sum / N;
        const double var = sumsq / N - mean * mean;
        const double sigma = std::sqrt(2.0 / (N - 1)) * expected;
        CHECK(std::abs(var - expected) < 3.0 * sigma);
    }
}

TEST_CASE("schedule_from_betas validates every entry") {
    CHECK_THROWS_AS(schedule_from_betas({0.1, 0.0}), ConfigError);
    CHECK_THROWS_AS(schedule_from_betas({0.1, 1.0}), ConfigError);
    CHECK_THROWS_AS(schedule_from_betas({}), ConfigError);
    const NoiseSchedule s = schedule_from_betas({0.1, 0.2});
    CHECK(s.T == 2);
    CHECK(s.alpha_bar_at(2) == doctest::Approx(0.9 * 0.8).epsilon(1e-15));
}
