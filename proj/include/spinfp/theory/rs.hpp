#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spinfp/gauss.hpp"

namespace spinfp {

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Order parameters of the replica-symmetric ansatz together with the control
// parameters. The conjugates are eliminated analytically (q_hat = r,
// r_hat = q, u_hat = 1/2), leaving the two-dimensional (q, r) system.
struct RsOrderParams {
    double q = 0.0;
    double r = 0.0;
    double beta = 1.0;
    double j_d = 0.0;
};

namespace detail {

struct RsKernels {
    std::vector<double> bp, bm, ebp, ebm;  // per y-node
};

// Per-y-node pieces of the saddle-point integrands:
//   H_tt' = H((t J_D + t' y sqrt(q)) / sqrt(1 - q))
//   E_tt' = (t J_D sqrt(q) + t' y) / sqrt(2 pi) * exp(-(t J_D + t' y sqrt(q))^2 / (2(1-q)))
inline RsKernels rs_kernels(const QuadRule& gh, double q, double beta, double j_d) {
    const double sq = std::sqrt(q);
    const double s1q = std::sqrt(1.0 - q);
    const double eb = std::exp(beta);
    const double emb = std::exp(-beta);
    const double inv2pi = 1.0 / std::sqrt(2.0 * M_PI);
    RsKernels k;
    const std::size_t n = gh.size();
    k.bp.resize(n);
    k.bm.resize(n);
    k.ebp.resize(n);
    k.ebm.resize(n);
    for (std::size_t jn = 0; jn < n; ++jn) {
        const double y = gh.x[jn];
        const double hpp = gauss_tail((j_d + y * sq) / s1q);
        const double hpm = gauss_tail((j_d - y * sq) / s1q);
        const double hmp = gauss_tail((-j_d + y * sq) / s1q);
        const double hmm = gauss_tail((-j_d - y * sq) / s1q);
        const double epp = (j_d * sq + y) * inv2pi * std::exp(-(j_d + y * sq) * (j_d + y * sq) / (2.0 * (1.0 - q)));
        const double epm = (j_d * sq - y) * inv2pi * std::exp(-(j_d - y * sq) * (j_d - y * sq) / (2.0 * (1.0 - q)));
        const double emp = (-j_d * sq + y) * inv2pi * std::exp(-(-j_d + y * sq) * (-j_d + y * sq) / (2.0 * (1.0 - q)));
        const double emm = (-j_d * sq - y) * inv2pi * std::exp(-(-j_d - y * sq) * (-j_d - y * sq) / (2.0 * (1.0 - q)));
        k.bp[jn] = hpp * emb + hmm * eb;
        k.bm[jn] = hpm * emb + hmp * eb;
        k.ebp[jn] = epp * emb + emm * eb;
        k.ebm[jn] = epm * emb + emp * eb;
    }
    return k;
}

}  // namespace detail

// Right-hand sides of the two saddle-point equations minus the inputs,
// evaluated by tensorized Gauss-Hermite quadrature. The r equation carries a
// 1/sqrt(q (1-q)^3) prefactor; its q -> 0+ singularity is handled by clamping
// q to 1e-10, where the odd integrand cancels and the analytic limit (0, 0)
// is recovered.
inline std::pair<double, double> rs_saddle_residual(const RsOrderParams& p, const QuadRule& gh) {
    const double q = std::max(p.q, 1e-10);
    const auto k = detail::rs_kernels(gh, q, p.beta, p.j_d);
    const double sr = std::sqrt(std::max(p.r, 0.0));
    double acc_q = 0.0, acc_r = 0.0;
    const std::size_t n = gh.size();
    for (std::size_t in = 0; in < n; ++in) {
        const double ez = std::exp(gh.x[in] * sr);
        const double emz = 1.0 / ez;
        const double wz = gh.w[in];
        double aq = 0.0, ar = 0.0;
        for (std::size_t jn = 0; jn < n; ++jn) {
            const double a = ez * k.bp[jn];
            const double b = emz * k.bm[jn];
            const double den = a + b;
            const double nq = (a - b) / den;
            const double nr = (ez * k.ebp[jn] + emz * k.ebm[jn]) / den;
            aq += gh.w[jn] * nq * nq;
            ar += gh.w[jn] * nr;
        }
        acc_q += wz * aq;
        acc_r += wz * ar;
    }
    const double rhs_q = acc_q;
    const double rhs_r = acc_r / std::sqrt(q * (1.0 - q) * (1.0 - q) * (1.0 - q));
    if (!std::isfinite(rhs_q) || !std::isfinite(rhs_r)) {
        std::ostringstream os;
        os << "rs_saddle_residual: non-finite quadrature at beta=" << p.beta << " j_d=" << p.j_d
           << " q=" << p.q << " r=" << p.r;
        throw NumericalFailure(os.str());
    }
    return {rhs_q - p.q, rhs_r - p.r};
}

struct RsSolveOptions {
    double damping = 0.9;
    double tol = 1e-6;
    int max_iter = 5000;
    double q0 = 0.25;
    double r0 = 0.25;
    int n_gh = 80;
};

struct RsSolveResult {
    RsOrderParams params;
    int iterations = 0;
    bool converged = false;
    std::vector<std::pair<double, double>> trace;  // sparse (q, r) snapshots
};

// Damped fixed-point iteration x <- damping * x + (1 - damping) * rhs(x).
// Terminates when the change is below tol relative to the parameter scale
// (with a small absolute floor so convergence to the (0, 0) saddle is
// detected as well).
inline RsSolveResult solve_rs(double beta, double j_d, const RsSolveOptions& opt = {}) {
    const QuadRule gh = gauss_hermite(opt.n_gh);
    RsSolveResult res;
    double q = opt.q0, r = opt.r0;
    const double a = opt.damping;
    for (int it = 0; it < opt.max_iter; ++it) {
        RsOrderParams p{q, r, beta, j_d};
        const auto [dq, dr] = rs_saddle_residual(p, gh);
        const double qn = a * q + (1.0 - a) * (q + dq);
        const double rn = a * r + (1.0 - a) * (r + dr);
        const double step = std::max(std::abs(qn - q), std::abs(rn - r));
        q = qn;
        r = rn;
        res.iterations = it + 1;
        if ((it & 63) == 0) res.trace.emplace_back(q, r);
        if (step <= opt.tol * std::max({std::abs(q), std::abs(r), 1e-2})) {
            res.converged = true;
            break;
        }
    }
    res.params = RsOrderParams{q, r, beta, j_d};
    if (!res.converged) res.trace.emplace_back(q, r);
    return res;
}

// Closed forms at the q* = r* = 0 saddle (equal to the annealed values).
inline double rs_free_energy(double beta, double j_d) {
    const double h = gauss_tail(j_d);
    return -std::log(2.0) / beta - std::log1p(std::expm1(-2.0 * beta) * h) / beta;
}

inline double rs_energy_density(double beta, double j_d) {
    const double h = gauss_tail(j_d);
    const double e2b = std::exp(-2.0 * beta);
    return 2.0 * e2b * h / (1.0 + (e2b - 1.0) * h);
}

inline double rs_entropy_density(double beta, double j_d) {
    const double h = gauss_tail(j_d);
    const double e2b = std::exp(-2.0 * beta);
    return std::log(2.0) + std::log1p((e2b - 1.0) * h) + 2.0 * beta * e2b * h / (1.0 + (e2b - 1.0) * h);
}

// beta -> infinity limits: u -> 0 and s -> ln 2 + ln(1 - H(J_D)).
inline double rs_energy_density_t0(double /*j_d*/) { return 0.0; }

inline double rs_entropy_density_t0(double j_d) {
    return std::log(2.0) + std::log1p(-gauss_tail(j_d));
}

// The RS saddle is stable for J_D >= -0.178 (boundary inclusive); below it
// the solution is flagged unreliable, though the no-fixed-points conclusion
// still holds by the annealed bound.
inline constexpr double rs_stability_bound() { return -0.178; }

inline bool rs_stable(double j_d) { return j_d >= rs_stability_bound(); }

// Annealed fixed-point count [2 (1 - H(J_D))]^n from the zero-temperature
// entropy density.
inline double annealed_fp_count(int n, double j_d) {
    return std::pow(2.0 * (1.0 - gauss_tail(j_d)), n);
}

}  // namespace spinfp
