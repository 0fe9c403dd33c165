#include <doctest.h>

#include <cmath>

#include "fxcast/errors.hpp"
#include "fxcast/rng.hpp"
#include "fxcast/stats.hpp"

using namespace fxcast;
using namespace fxcast::stats;

TEST_CASE("rmse and mae arithmetic") {
    CHECK(rmse({1, 2}, {1, 2}) == 0.0);
    CHECK(mae({1, 2}, {1, 2}) == 0.0);
    CHECK(rmse({1, 2}, {2, 4}) == doctest::Approx(std::sqrt(2.5)));
    CHECK(rmse({1, 2}, {2, 4}) == doctest::Approx(1.581139).epsilon(1e-6));
    CHECK(mae({1, 2}, {2, 4}) == doctest::Approx(1.5));
    CHECK(rmse({0}, {-3}) == doctest::Approx(3.0));
    CHECK(mae({0}, {-3}) == doctest::Approx(3.0));
    CHECK_THROWS_AS(rmse({}, {}), ArgumentError);
    CHECK_THROWS_AS(mae({1}, {1, 2}), ArgumentError);
}

TEST_CASE("mae <= rmse on random residuals") {
    Rng rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> p(50), t(50);
        for (std::size_t i = 0; i < 50; ++i) {
            p[i] = rng.normal();
            t[i] = rng.normal();
        }
        CHECK(mae(p, t) <= rmse(p, t) + 1e-12);
    }
}

TEST_CASE("directional accuracy") {
    std::vector<double> actual = {1.0, 1.1, 1.05, 1.2, 1.15};
    CHECK(directional_accuracy(actual, actual) == 1.0);

    // predictions move opposite every step
    std::vector<double> opposite = {1.0, 0.9, 1.15, 0.9, 1.25};
    CHECK(directional_accuracy(opposite, actual) == 0.0);

    // 3 of 4 matches
    std::vector<double> mixed = {1.0, 1.2, 1.0, 1.3, 1.3};
    CHECK(directional_accuracy(mixed, actual) == doctest::Approx(0.75));

    CHECK_THROWS_AS(directional_accuracy({1.0}, {1.0}), InsufficientDataError);
}

TEST_CASE("directional accuracy is invariant under increasing transforms") {
    Rng rng(15);
    std::vector<double> pred(60), actual(60);
    for (std::size_t i = 0; i < 60; ++i) {
        actual[i] = 10 + rng.normal();
        pred[i] = actual[i] + 0.5 * rng.normal();
    }
    double base = directional_accuracy(pred, actual);
    auto f = [](double x) { return std::exp(0.3 * x); };  // strictly increasing
    std::vector<double> pf(60), af(60);
    for (std::size_t i = 0; i < 60; ++i) {
        pf[i] = f(pred[i]);
        af[i] = f(actual[i]);
    }
    CHECK(directional_accuracy(pf, af) == doctest::Approx(base));
}

TEST_CASE("diebold_mariano trivial and degenerate branches") {
    std::vector<double> a(100), b(100);
    Rng rng(16);
    for (std::size_t i = 0; i < 100; ++i) a[i] = b[i] = rng.uniform();
    auto same = diebold_mariano(a, b, 1);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);

    // constant nonzero differential: zero variance, p = 0 with flag
    std::vector<double> c(100, 2.0), d(100, 1.0);
    auto deg = diebold_mariano(c, d, 1);
    CHECK(deg.degenerate_variance);
    CHECK(deg.p_value == 0.0);

    CHECK_THROWS_AS(diebold_mariano({1, 2}, {1, 2}, 1), InsufficientDataError);
}

TEST_CASE("diebold_mariano rejects on the shifted-loss oracle") {
    Rng rng(17);
    std::vector<double> la(500), lb(500);
    for (std::size_t i = 0; i < 500; ++i) {
        double u = rng.normal();
        la[i] = u * u;
        lb[i] = (u + 0.5) * (u + 0.5);
    }
    auto r = diebold_mariano(la, lb, 1);
    CHECK(r.p_value < 0.01);
    CHECK(r.statistic < 0.0);  // a has smaller losses
}

TEST_CASE("diebold_mariano antisymmetry") {
    Rng rng(18);
    std::vector<double> la(80), lb(80);
    for (std::size_t i = 0; i < 80; ++i) {
        la[i] = std::abs(rng.normal());
        lb[i] = std::abs(rng.normal()) * 1.1;
    }
    for (std::size_t h : {1, 3}) {
        auto ab = diebold_mariano(la, lb, h);
        auto ba = diebold_mariano(lb, la, h);
        CHECK(ab.statistic == doctest::Approx(-ba.statistic).epsilon(1e-12));
        CHECK(ab.p_value == doctest::Approx(ba.p_value).epsilon(1e-12));
    }
}

TEST_CASE("hurst: white noise near 0.5") {
    Rng rng(19);
    std::vector<double> noise(4000);
    for (double& x : noise) x = rng.normal();
    auto r = hurst_exponent(noise);
    CHECK(r.h > 0.43);
    CHECK(r.h < 0.57);
    CHECK(r.log_sizes.size() >= 4);
}

TEST_CASE("hurst: ramp plus tiny noise is strongly persistent") {
    Rng rng(20);
    std::vector<double> ramp(4000);
    for (std::size_t i = 0; i < ramp.size(); ++i) {
        ramp[i] = static_cast<double>(i) + 0.01 * rng.normal();
    }
    auto r = hurst_exponent(ramp);
    CHECK(r.h > 0.85);
}

TEST_CASE("hurst is invariant under positive affine transforms") {
    Rng rng(22);
    std::vector<double> x(2000);
    double level = 0.0;
    for (double& v : x) {
        level += rng.normal();
        v = level;
    }
    auto base = hurst_exponent(x);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 3.5 * x[i] - 100.0;
    auto scaled = hurst_exponent(y);
    CHECK(scaled.h == doctest::Approx(base.h).epsilon(1e-9));
}

TEST_CASE("hurst error paths") {
    std::vector<double> tiny(50, 1.0);
    CHECK_THROWS_AS(hurst_exponent(tiny), InsufficientDataError);
    std::vector<double> flat(4000, 1.0);
    CHECK_THROWS_AS(hurst_exponent(flat), DomainError);
}
