#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "spinfp/gauss.hpp"

using namespace spinfp;

TEST_CASE("gauss_tail basic values") {
    CHECK(gauss_tail(0.0) == Catch::Approx(0.5).epsilon(1e-15));
    // frozen from a 40-digit erfc evaluation
    CHECK(gauss_tail(1.0) == Catch::Approx(0.1586552539314570514147675).epsilon(1e-14));
    CHECK(gauss_tail(0.5) == Catch::Approx(0.3085375387259868963622954).epsilon(1e-14));
    CHECK(gauss_tail(2.5) == Catch::Approx(0.006209665325776135166978105).epsilon(1e-14));
    CHECK(gauss_tail(-1.5) == Catch::Approx(0.933192798731141933995506).epsilon(1e-14));
    CHECK(gauss_tail(8.0) == Catch::Approx(6.220960574271784123515995e-16).epsilon(1e-12));
}

TEST_CASE("gauss_tail complement identity") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> dist(-8.0, 8.0);
    for (int i = 0; i < 2000; ++i) {
        const double x = dist(gen);
        CHECK(gauss_tail(x) + gauss_tail(-x) == Catch::Approx(1.0).margin(1e-14));
    }
}

TEST_CASE("log_gauss_tail matches direct log and stays finite far out") {
    for (double x : {-5.0, 0.0, 3.0, 10.0, 25.0, 27.9}) {
        CHECK(log_gauss_tail(x) == Catch::Approx(std::log(gauss_tail(x))).epsilon(1e-12));
    }
    // continuity across the asymptotic switch at x = 28
    CHECK(log_gauss_tail(28.0 + 1e-9) == Catch::Approx(log_gauss_tail(28.0 - 1e-9)).epsilon(1e-10));
    // far tail: compare against -x^2/2 - log(x sqrt(2 pi)) leading order
    const double x = 200.0;
    const double lead = -0.5 * x * x - std::log(x * std::sqrt(2.0 * M_PI));
    CHECK(log_gauss_tail(x) == Catch::Approx(lead).epsilon(1e-4));
    CHECK(std::isfinite(log_gauss_tail(1e4)));
}

TEST_CASE("gauss_hermite rule: normalization and moments") {
    for (int n : {20, 40, 80, 160}) {
        const auto gh = gauss_hermite(n);
        double w = 0.0, m2 = 0.0, m4 = 0.0;
        for (std::size_t i = 0; i < gh.size(); ++i) {
            w += gh.w[i];
            m2 += gh.w[i] * gh.x[i] * gh.x[i];
            m4 += gh.w[i] * gh.x[i] * gh.x[i] * gh.x[i] * gh.x[i];
        }
        CHECK(w == Catch::Approx(1.0).epsilon(1e-12));
        CHECK(m2 == Catch::Approx(1.0).epsilon(1e-10));
        CHECK(m4 == Catch::Approx(3.0).epsilon(1e-10));
    }
}

TEST_CASE("gaussian_panels integrates smooth Gaussian expectations") {
    std::vector<double> edges;
    for (int i = 0; i <= 40; ++i) edges.push_back(-10.0 + 0.5 * i);
    const auto rule = gaussian_panels(edges);
    double w = 0.0, m2 = 0.0, ex = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        w += rule.w[i];
        m2 += rule.w[i] * rule.x[i] * rule.x[i];
        ex += rule.w[i] * std::exp(rule.x[i]);  // E[e^Z] = e^{1/2}
    }
    CHECK(w == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(m2 == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(ex == Catch::Approx(std::exp(0.5)).epsilon(1e-12));
}
