#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wavelab/model.hpp"

using namespace wavelab;

TEST_CASE("params_from_theta examples") {
    AbcdParams p = params_from_theta(0.0, 1.0, 1.0);
    CHECK(p.a == doctest::Approx(-1.0 / 6.0).epsilon(1e-15));
    CHECK(p.b == doctest::Approx(0.0));
    CHECK(p.c == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.d == doctest::Approx(0.0));
    // direct arithmetic: a1 = (1/2)((1-lambda)(theta^2-1/3) + 1 - 2 theta) = 1/2 here
    CHECK(p.a1 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.c1 == doctest::Approx(1.0).epsilon(1e-15));

    // a+b+c+d = 1/3 independent of (theta, lambda, mu)
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::uniform_real_distribution<double> th(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        AbcdParams q = params_from_theta(th(rng), dist(rng), dist(rng));
        CHECK(q.a + q.b + q.c + q.d == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    }

    AbcdParams r = params_from_theta(1.0, 0.7, 0.3);
    CHECK(r.c == doctest::Approx(0.0));
    CHECK(r.d == doctest::Approx(0.0));

    CHECK_THROWS_AS(params_from_theta(1.5, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("sonic_speed") {
    AbcdParams p;
    p.a = -1.0;
    p.c = -1.0;
    CHECK(sonic_speed(p) == doctest::Approx(1.0));
    p.a = -4.0;
    CHECK(sonic_speed(p) == doctest::Approx(1.0));
    p.a = -0.25;
    CHECK(sonic_speed(p) == doctest::Approx(0.5));
    p.a = 0.5;
    CHECK_THROWS_AS(sonic_speed(p), std::invalid_argument);
}

TEST_CASE("bottom_eval closed forms") {
    BottomSpec zero;
    zero.kind = BottomKind::Zero;
    for (int ds = 0; ds <= 2; ++ds)
        for (int dy = 0; dy <= 3; ++dy) CHECK(zero.h(1.2, -0.3, ds, dy) == 0.0);

    BottomSpec bot;
    bot.epsilon = 0.1;
    bot.amplitude = 0.7;
    bot.s0 = 0.0;
    bot.y0 = 0.0;
    CHECK(bot.h(0.0, 0.0) == doctest::Approx(0.1 * 0.7).epsilon(1e-15));

    CHECK_THROWS_AS(bot.h0(0.0, 0.0, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(bot.h0(0.0, 0.0, 0, 4), std::invalid_argument);
}

TEST_CASE("bottom_eval chain-rule consistency against finite differences") {
    for (BottomKind kind : {BottomKind::GaussianProduct, BottomKind::Sech2Product}) {
        BottomSpec bot;
        bot.kind = kind;
        bot.epsilon = 0.1;
        bot.amplitude = 0.5;
        bot.s0 = 0.4;
        bot.y0 = -0.2;
        bot.k0 = 1.3;
        bot.l0 = 0.8;
        const double dt = 1e-4, dx = 1e-4;
        for (double t : {-3.0, 0.0, 2.5}) {
            for (double x : {-4.0, 0.7}) {
                const double fd_t = (bot.h(t + dt, x) - bot.h(t - dt, x)) / (2.0 * dt);
                CHECK(fd_t == doctest::Approx(bot.h(t, x, 1, 0)).epsilon(1e-6));
                const double fd_x = (bot.h(t, x + dx) - bot.h(t, x - dx)) / (2.0 * dx);
                CHECK(fd_x == doctest::Approx(bot.h(t, x, 0, 1)).epsilon(1e-6));
                const double fd_tt =
                    (bot.h(t + dt, x, 1, 1) - bot.h(t - dt, x, 1, 1)) / (2.0 * dt);
                CHECK(fd_tt == doctest::Approx(bot.h(t, x, 2, 1)).epsilon(1e-5));
                const double fd_y3 =
                    (bot.h(t, x + dx, 0, 2) - bot.h(t, x - dx, 0, 2)) / (2.0 * dx);
                CHECK(fd_y3 == doctest::Approx(bot.h(t, x, 0, 3)).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("every derivative carries exactly one extra factor of epsilon") {
    BottomSpec a, b;
    a.epsilon = 0.1;
    b.epsilon = 0.2;
    const double s = 0.35, y = -0.6;  // fixed point of h0
    for (int ds = 0; ds <= 2; ++ds) {
        for (int dy = 0; dy <= 2; ++dy) {
            const double ra = a.h(s / a.epsilon, y / a.epsilon, ds, dy) /
                              a.h0(s, y, ds, dy);
            const double rb = b.h(s / b.epsilon, y / b.epsilon, ds, dy) /
                              b.h0(s, y, ds, dy);
            CHECK(ra == doctest::Approx(std::pow(a.epsilon, 1 + ds + dy)).epsilon(1e-12));
            CHECK(rb == doctest::Approx(std::pow(b.epsilon, 1 + ds + dy)).epsilon(1e-12));
        }
    }
}

TEST_CASE("decay envelope of the bottom hypothesis holds on a lattice") {
    for (BottomKind kind : {BottomKind::GaussianProduct, BottomKind::Sech2Product}) {
        BottomSpec bot;
        bot.kind = kind;
        bot.amplitude = 1.0;
        bot.k0 = 1.0;
        bot.l0 = 1.0;
        // |ds^k dy^l h0| <= C e^{-k0|s|} e^{-l0|y|} with the certified rates
        const double C = 60.0;
        for (int ds = 0; ds <= 2; ++ds) {
            for (int dy = 0; dy <= 3; ++dy) {
                for (double s = -6.0; s <= 6.0; s += 0.5) {
                    for (double y = -6.0; y <= 6.0; y += 0.5) {
                        const double bound = C * std::exp(-std::abs(s)) * std::exp(-std::abs(y));
                        CHECK(std::abs(bot.h0(s, y, ds, dy)) <= bound);
                    }
                }
            }
        }
    }
}

TEST_CASE("interaction horizon") {
    CHECK(interaction_horizon(0.1) == doctest::Approx(std::pow(0.1, -1.1)));
    CHECK(interaction_horizon(1e-3, 0.1, 100.0) == doctest::Approx(100.0));  // capped
    CHECK_THROWS_AS(interaction_horizon(0.9), std::invalid_argument);
}
