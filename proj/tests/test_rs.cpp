#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "spinfp/theory/rs.hpp"
#include "support/adaptive_quad.hpp"

using namespace spinfp;

namespace {

// independent evaluation of the saddle right-hand sides by adaptive Simpson
std::pair<double, double> oracle_rhs(double q, double r, double beta, double j_d) {
    const double qq = std::max(q, 1e-10);
    const double sq = std::sqrt(qq), s1q = std::sqrt(1.0 - qq);
    const double eb = std::exp(beta), emb = std::exp(-beta);
    const double inv2pi = 1.0 / std::sqrt(2.0 * M_PI);
    auto H = [](double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); };
    auto body = [&](double z, double y, bool for_q) {
        const double hpp = H((j_d + y * sq) / s1q), hpm = H((j_d - y * sq) / s1q);
        const double hmp = H((-j_d + y * sq) / s1q), hmm = H((-j_d - y * sq) / s1q);
        const double bp = hpp * emb + hmm * eb, bm = hpm * emb + hmp * eb;
        const double ez = std::exp(z * std::sqrt(r)), emz = 1.0 / ez;
        const double den = ez * bp + emz * bm;
        if (for_q) {
            const double nq = (ez * bp - emz * bm) / den;
            return nq * nq;
        }
        const double epp = (j_d * sq + y) * inv2pi * std::exp(-(j_d + y * sq) * (j_d + y * sq) / (2 * (1 - qq)));
        const double epm = (j_d * sq - y) * inv2pi * std::exp(-(j_d - y * sq) * (j_d - y * sq) / (2 * (1 - qq)));
        const double emp = (-j_d * sq + y) * inv2pi * std::exp(-(-j_d + y * sq) * (-j_d + y * sq) / (2 * (1 - qq)));
        const double emm = (-j_d * sq - y) * inv2pi * std::exp(-(-j_d - y * sq) * (-j_d - y * sq) / (2 * (1 - qq)));
        return (ez * (epp * emb + emm * eb) + emz * (epm * emb + emp * eb)) / den;
    };
    auto f_q = [&](double z, double y) {
        return body(z, y, true) * testsupport::norm_pdf(z) * testsupport::norm_pdf(y);
    };
    auto f_r = [&](double z, double y) {
        return body(z, y, false) * testsupport::norm_pdf(z) * testsupport::norm_pdf(y);
    };
    const double rq = testsupport::integrate2d(f_q, -9, 9, -9, 9);
    const double rr = testsupport::integrate2d(f_r, -9, 9, -9, 9) /
                      std::sqrt(qq * (1 - qq) * (1 - qq) * (1 - qq));
    return {rq, rr};
}

}  // namespace

TEST_CASE("rs residual vanishes at the (0,0) saddle across the grid") {
    const auto gh = gauss_hermite(80);
    for (double beta : {1.0, 2.0, 4.0, 8.0}) {
        for (double jd : {0.0, 0.25, 0.5, 1.0}) {
            const auto [dq, dr] = rs_saddle_residual({0.0, 0.0, beta, jd}, gh);
            CHECK(std::abs(dq) < 1e-8);
            CHECK(std::abs(dr) < 1e-6);
        }
    }
}

TEST_CASE("rs residual at infinite temperature decouples") {
    const auto gh = gauss_hermite(80);
    // rhs_q at q = r = 0 vanishes and is J_D independent at beta ~ 0
    const auto [dq1, dr1] = rs_saddle_residual({0.0, 0.0, 1e-8, 0.3}, gh);
    const auto [dq2, dr2] = rs_saddle_residual({0.0, 0.0, 1e-8, 1.2}, gh);
    CHECK(std::abs(dq1) < 1e-10);
    CHECK(std::abs(dq2) < 1e-10);
    // at small q > 0 the q-rhs approaches the same J_D-free limit
    const auto [a1, b1] = rs_saddle_residual({1e-6, 0.1, 1e-8, 0.3}, gh);
    const auto [a2, b2] = rs_saddle_residual({1e-6, 0.1, 1e-8, 1.2}, gh);
    CHECK(a1 == Catch::Approx(a2).margin(1e-9));
}

TEST_CASE("rs residual matches adaptive-quadrature oracle at a spot point") {
    const auto gh = gauss_hermite(80);
    const double q = 0.3, r = 0.2, beta = 2.0, jd = 0.5;
    const auto [dq, dr] = rs_saddle_residual({q, r, beta, jd}, gh);
    const auto [oq, orr] = oracle_rhs(q, r, beta, jd);
    CHECK(dq == Catch::Approx(oq - q).margin(1e-6));
    CHECK(dr == Catch::Approx(orr - r).margin(1e-6));
}

TEST_CASE("rs residual quadrature refinement is converged") {
    const auto gh80 = gauss_hermite(80);
    const auto gh160 = gauss_hermite(160);
    for (const auto& [q, r, beta, jd] :
         {std::tuple{0.1, 0.05, 1.0, 0.2}, std::tuple{0.3, 0.2, 2.0, 0.5},
          std::tuple{0.5, 0.4, 4.0, 1.0}}) {
        const auto [a1, b1] = rs_saddle_residual({q, r, beta, jd}, gh80);
        const auto [a2, b2] = rs_saddle_residual({q, r, beta, jd}, gh160);
        CHECK(std::abs(a1 - a2) < 1e-8);
        CHECK(std::abs(b1 - b2) < 1e-8);
    }
}

TEST_CASE("solve_rs") {
    SECTION("exact fixed point stays put") {
        RsSolveOptions opt;
        opt.q0 = 0.0;
        opt.r0 = 0.0;
        const auto res = solve_rs(2.0, 0.5, opt);
        CHECK(res.converged);
        CHECK(std::abs(res.params.q) < 1e-9);
        CHECK(std::abs(res.params.r) < 1e-9);
    }
    SECTION("random starts land on the zero saddle") {
        std::mt19937_64 gen(3);
        std::uniform_real_distribution<double> dist(0.0, 0.5);
        for (double beta : {1.0, 4.0}) {
            for (double jd : {0.0, 0.5}) {
                RsSolveOptions opt;
                opt.q0 = dist(gen);
                opt.r0 = dist(gen);
                const auto res = solve_rs(beta, jd, opt);
                CHECK(res.converged);
                CHECK(std::max(std::abs(res.params.q), std::abs(res.params.r)) <= 1e-5);
            }
        }
    }
    SECTION("limit independent of damping") {
        RsSolveOptions a;
        a.q0 = 0.3;
        a.r0 = 0.2;
        RsSolveOptions b = a;
        b.damping = 0.0;
        const auto ra = solve_rs(2.0, 0.25, a);
        const auto rb = solve_rs(2.0, 0.25, b);
        CHECK(ra.converged);
        CHECK(rb.converged);
        CHECK(ra.params.q == Catch::Approx(rb.params.q).margin(2e-5));
        CHECK(ra.params.r == Catch::Approx(rb.params.r).margin(2e-5));
    }
}

TEST_CASE("rs closed forms") {
    SECTION("beta=50 proxy at J_D=0 gives ~0") {
        CHECK(std::abs(rs_free_energy(50.0, 0.0)) < 1e-10);
    }
    SECTION("large J_D gives -ln2/beta") {
        for (double beta : {1.0, 3.0}) {
            CHECK(rs_free_energy(beta, 10.0) ==
                  Catch::Approx(-std::log(2.0) / beta).epsilon(1e-12));
        }
    }
    SECTION("value matches formula recomputed from frozen H") {
        // H(0.5) frozen from a 40-digit erfc evaluation
        const double h = 0.3085375387259868963622954;
        const double beta = 1.0;
        const double expect = -std::log(2.0) / beta - std::log(1.0 + (std::exp(-2.0 * beta) - 1.0) * h) / beta;
        CHECK(rs_free_energy(beta, 0.5) == Catch::Approx(expect).epsilon(1e-12));
    }
    SECTION("thermodynamic consistency f = u - s/beta") {
        for (double beta : {0.5, 1.0, 2.0, 5.0, 9.0, 20.0}) {
            for (double jd : {-0.5, 0.0, 0.3, 1.0, 3.0}) {
                const double f = rs_free_energy(beta, jd);
                const double u = rs_energy_density(beta, jd);
                const double s = rs_entropy_density(beta, jd);
                CHECK(f == Catch::Approx(u - s / beta).margin(1e-10));
            }
        }
    }
    SECTION("zero-temperature entropy") {
        CHECK(rs_entropy_density_t0(0.0) == Catch::Approx(0.0).margin(1e-14));
        // ln 2 + ln(1 - H(1)), frozen oracle value
        CHECK(rs_entropy_density_t0(1.0) ==
              Catch::Approx(0.5203934015364954198907489).epsilon(1e-13));
        CHECK(rs_entropy_density_t0(-0.5) < 0.0);  // unphysical region
        CHECK(rs_energy_density_t0(1.0) == 0.0);
    }
    SECTION("finite-beta densities approach the zero-temperature limit") {
        CHECK(rs_entropy_density(60.0, 0.7) ==
              Catch::Approx(rs_entropy_density_t0(0.7)).margin(1e-8));
        CHECK(rs_energy_density(60.0, 0.7) == Catch::Approx(0.0).margin(1e-8));
    }
}

TEST_CASE("rs stability flag") {
    CHECK(rs_stable(0.0));
    CHECK_FALSE(rs_stable(-0.2));
    CHECK(rs_stable(-0.178));  // boundary inclusive
}

TEST_CASE("annealed fixed-point count") {
    CHECK(annealed_fp_count(5, 0.0) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(annealed_fp_count(14, 0.0) == Catch::Approx(1.0).epsilon(1e-12));
    // frozen from the 40-digit oracle: [2 (1 - H(0.5))]^14
    CHECK(annealed_fp_count(14, 0.5) == Catch::Approx(93.57944117559497).epsilon(1e-12));
    double prev = 0.0;
    for (double jd : {0.0, 0.2, 0.4, 0.8, 1.6}) {
        const double c = annealed_fp_count(10, jd);
        CHECK(c >= prev);
        prev = c;
    }
}
