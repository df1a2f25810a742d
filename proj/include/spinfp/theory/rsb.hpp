#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "spinfp/gauss.hpp"
#include "spinfp/theory/rs.hpp"

namespace spinfp {

// One point of the 1RSB ansatz with q0 = r0 = 0. Under the large-deviation
// mapping q1 = 1 - D/2 is an external parameter (D the pairwise squared
// distance per site, i.e. Hamming fraction (1 - q1)/2) and the Parisi
// parameter m plays the role of the number of real replicas.
struct RsbPoint {
    double q1 = 0.5;
    double r1 = 0.0;
    double m = 1.0;
    double beta = 20.0;  // +infinity selects the zero-temperature formulas
    double j_d = 0.0;
};

struct LocalEntropyPoint {
    double j_d = 0.0;
    double beta = 0.0;
    double q1 = 0.0;
    double m_star = 0.0;
    double s_internal = 0.0;
    double s_external = 0.0;
    double r1_star = 0.0;
    bool converged = false;

    double distance() const { return 0.5 * (1.0 - q1); }
};

namespace rsb_detail {

inline bool is_inf(double b) { return std::isinf(b); }

// log(e^a + e^b)
inline double lse2(double a, double b) {
    const double m = std::max(a, b);
    if (std::isinf(m) && m < 0) return m;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// log of the spin bracket e^{-beta} H(-x*) + e^{beta} H(x*) per y node, with
// x* = (-J_D - s y sqrt(q1)) / sqrt(1 - q1). At beta = inf the bracket is
// e^{beta} H(x*); the diverging factor cancels against the -beta term of the
// potential, so the zero-temperature path stores log H(x*) and drops both.
struct Context {
    double q1 = 0.0, j_d = 0.0, beta = 0.0;
    std::vector<double> y, wy, log_bp, log_bm;
};

inline Context make_context(double q1, double j_d, double beta) {
    Context ctx;
    ctx.q1 = q1;
    ctx.j_d = j_d;
    ctx.beta = beta;
    const double sq = std::sqrt(q1);
    const double s1q = std::sqrt(1.0 - q1);
    // composite y grid with panels refined around the bracket transition
    // layers at y = +-j_d/sqrt(q1), whose width scales like sqrt(1-q1)
    const double y0 = j_d / sq;
    const double w = std::min(1.0, s1q / sq);
    std::vector<double> edges;
    for (int i = 0; i <= 16; ++i) edges.push_back(-10.0 + 20.0 * i / 16.0);
    for (const double c : {-y0, y0}) {
        for (int i = 0; i <= 8; ++i) {
            const double e = c - 10.0 * w + 20.0 * w * i / 8.0;
            if (e > -10.0 && e < 10.0) edges.push_back(e);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                edges.end());
    const QuadRule yq = gaussian_panels(edges);
    ctx.y = yq.x;
    ctx.wy = yq.w;
    const std::size_t n = ctx.y.size();
    ctx.log_bp.resize(n);
    ctx.log_bm.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (int s : {+1, -1}) {
            const double xs = (-j_d - s * ctx.y[i] * sq) / s1q;
            double lb;
            if (is_inf(beta)) {
                lb = log_gauss_tail(xs);
            } else {
                lb = lse2(-beta + log_gauss_tail(-xs), beta + log_gauss_tail(xs));
            }
            (s > 0 ? ctx.log_bp[i] : ctx.log_bm[i]) = lb;
        }
    }
    return ctx;
}

// log of C_side = int_{z > -delta/r} Dz cosh^m(z r + delta) for side = +1
// (side = -1 mirrors delta -> -delta). Completing the square against the
// e^{m(zr+delta)} tilt centres the Gaussian exactly; the remaining factor
// (1 + e^{-2(tr + m r^2 + delta)})^m is integrated over refined panels near
// the kink. Accurate for arbitrary tilt m r.
inline double log_cosh_half(double m, double r, double delta) {
    const double t_lo = -delta / r - m * r;
    if (t_lo > 12.0) {
        // Gaussian mass beyond 12 sigma is negligible even against the
        // bounded 2^m correction once logs are compared downstream
        return -std::numeric_limits<double>::infinity();
    }
    std::vector<double> edges;
    const double fine = 0.5 / (m * r + 1.0);
    double e = t_lo;
    edges.push_back(e);
    double stepw = fine;
    while (e < 12.0) {
        e += stepw;
        edges.push_back(std::min(e, 12.0));
        stepw = std::min(1.0, stepw * 2.0);
    }
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> vals;
    vals.reserve(12 * (edges.size() - 1));
    const double half_l2pi = 0.5 * std::log(2.0 * M_PI);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        if (h <= 0.0) continue;
        for (int i = 0; i < 12; ++i) {
            const double t = c + h * detail::kGL12X[i];
            const double u = 2.0 * (t * r + m * r * r + delta);  // >= 0 on domain
            const double corr = (u > 700.0) ? 0.0 : std::log1p(std::exp(-u));
            const double lv = std::log(h * detail::kGL12W[i]) - 0.5 * t * t - half_l2pi + m * corr;
            vals.push_back(lv);
            best = std::max(best, lv);
        }
    }
    if (!std::isfinite(best)) return -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (const double v : vals) acc += std::exp(v - best);
    return m * (delta - std::log(2.0) + 0.5 * m * r * r) + best + std::log(acc);
}

// log integral Dz of A(z, y)^m at fixed y, A = e^{zr} P + e^{-zr} Q written
// as 2 sqrt(PQ) cosh(zr + delta), delta = (log P - log Q)/2.
inline double log_int_z(double m, double r, double lp, double lq) {
    if (r < 1e-150) {
        return m * lse2(lp, lq);
    }
    const double delta = 0.5 * (lp - lq);
    const double base = m * (std::log(2.0) + 0.5 * (lp + lq));
    return base + lse2(log_cosh_half(m, r, delta), log_cosh_half(m, r, -delta));
}

}  // namespace rsb_detail

// Full 1RSB free entropy per real replica,
//   phi = -beta + (1-m)/2 r1 q1 - r1/2 + (1/m) log int Dz Dy A^m,
//   A = sum_s e^{s z sqrt(r1)} [e^{-beta} H(-x*) + e^{beta} H(x*)].
// The zero-temperature mode (beta = inf) uses A = sum_s e^{s z sqrt(r1)} H(x*)
// with the -beta constant removed (they cancel in the limit).
inline double rsb_potential_ctx(const rsb_detail::Context& ctx, double r1, double m) {
    const double r = std::sqrt(std::max(r1, 0.0));
    double best = -std::numeric_limits<double>::infinity();
    const std::size_t n = ctx.y.size();
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) {
        vals[i] = std::log(ctx.wy[i]) + rsb_detail::log_int_z(m, r, ctx.log_bp[i], ctx.log_bm[i]);
        best = std::max(best, vals[i]);
    }
    double acc = 0.0;
    for (const double v : vals) acc += std::exp(v - best);
    const double log_int = best + std::log(acc);
    const double base = rsb_detail::is_inf(ctx.beta) ? 0.0 : -ctx.beta;
    const double phi = base + 0.5 * (1.0 - m) * r1 * ctx.q1 - 0.5 * r1 + log_int / m;
    if (!std::isfinite(phi)) {
        std::ostringstream os;
        os << "rsb_potential: non-finite at q1=" << ctx.q1 << " r1=" << r1 << " m=" << m
           << " beta=" << ctx.beta << " j_d=" << ctx.j_d;
        throw NumericalFailure(os.str());
    }
    return phi;
}

inline double rsb_potential(const RsbPoint& p) {
    const auto ctx = rsb_detail::make_context(p.q1, p.j_d, p.beta);
    return rsb_potential_ctx(ctx, p.r1, p.m);
}

struct RsbExtremum {
    double r1_star = 0.0;
    double phi = 0.0;       // free entropy per replica at the stationary point
    double f = 0.0;         // large-deviation free energy, f = -phi
    bool converged = false;
};

// Stationarity of phi in r1 by safeguarded bisection on the centred-difference
// derivative (relative step 1e-4). phi decreases from r1 = 0 and grows again
// at large r1 for m != 1, so the first sign change brackets the stationary
// point; at m = 1 the potential is exactly flat in r1 and r1* = 0 is returned.
inline RsbExtremum rsb_extremize_r1_ctx(const rsb_detail::Context& ctx, double m,
                                        double r_hint = 1.0) {
    RsbExtremum out;
    auto dphi = [&](double r1) {
        const double h = std::max(r1, 1e-8) * 1e-4;
        const double lo = std::max(r1 - h, 0.0);
        return (rsb_potential_ctx(ctx, r1 + h, m) - rsb_potential_ctx(ctx, lo, m)) / (r1 + h - lo);
    };
    const double g0 = dphi(1e-10);
    if (g0 >= -1e-12) {
        // boundary stationary point (or flat potential at m = 1)
        out.r1_star = 0.0;
        out.phi = rsb_potential_ctx(ctx, 0.0, m);
        out.f = -out.phi;
        out.converged = true;
        return out;
    }
    double lo = 1e-10, hi = std::max(r_hint, 1e-3);
    double ghi = dphi(hi);
    std::vector<double> bracket_trace{hi};
    while (ghi < 0.0 && hi < 1e7) {
        hi *= 2.0;
        ghi = dphi(hi);
        bracket_trace.push_back(hi);
    }
    if (ghi < 0.0) {
        std::ostringstream os;
        os << "rsb_extremize_r1: no stationary point in bracket (q1=" << ctx.q1 << " m=" << m
           << " beta=" << ctx.beta << " j_d=" << ctx.j_d << "); tried r1 up to";
        for (const double b : bracket_trace) os << ' ' << b;
        throw NumericalFailure(os.str());
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(std::max(lo, 1e-12) * hi);
        if (dphi(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
    }
    out.r1_star = 0.5 * (lo + hi);
    out.phi = rsb_potential_ctx(ctx, out.r1_star, m);
    out.f = -out.phi;
    out.converged = true;
    return out;
}

inline RsbExtremum rsb_extremize_r1(double q1, double m, double beta, double j_d,
                                    double r_hint = 1.0) {
    const auto ctx = rsb_detail::make_context(q1, j_d, beta);
    return rsb_extremize_r1_ctx(ctx, m, r_hint);
}

struct MStarOptions {
    double m_lo = 0.2;
    double m_hi = 20.0;
    int n_scan = 24;
    double tol_se = 1e-6;
    int max_bisect = 80;
};

// Zero-complexity point: the external entropy S_E(q1, m) = -m (f + S_I)
// crosses zero, with S_I = -d(m f)/dm from centred differences (relative step
// 1e-4 in m) and f(q1, m) the extremised large-deviation free energy. With
// f = -phi this is S_E = -m^2 dphi/dm, so the root is the stationary point of
// phi over m; the dense-cluster branch has m* > 1 (phi minimum), entered as
// the sign change of S_E from + to - along increasing m.
inline LocalEntropyPoint find_m_star(double q1, double beta, double j_d,
                                     const MStarOptions& opt = {}) {
    LocalEntropyPoint pt;
    pt.j_d = j_d;
    pt.beta = beta;
    pt.q1 = q1;
    const auto ctx = rsb_detail::make_context(q1, j_d, beta);
    double hint = 1.0;

    auto eval = [&](double m, double& si, double& se, double& r1) -> bool {
        const double dm = m * 1e-4;
        try {
            const auto c0 = rsb_extremize_r1_ctx(ctx, m, hint);
            hint = std::max(c0.r1_star, 1e-3);
            const auto cp = rsb_extremize_r1_ctx(ctx, m + dm, hint);
            const auto cm = rsb_extremize_r1_ctx(ctx, m - dm, hint);
            const double dmf = ((m + dm) * cp.f - (m - dm) * cm.f) / (2.0 * dm);
            si = -dmf;
            se = -m * (c0.f + si);
            r1 = c0.r1_star;
            return std::isfinite(si) && std::isfinite(se);
        } catch (const NumericalFailure&) {
            return false;
        }
    };

    double prev_m = 0.0, prev_se = 0.0;
    bool have_prev = false;
    for (int k = 0; k < opt.n_scan; ++k) {
        const double m = opt.m_lo * std::pow(opt.m_hi / opt.m_lo,
                                             static_cast<double>(k) / (opt.n_scan - 1));
        double si, se, r1;
        if (!eval(m, si, se, r1)) continue;
        if (have_prev && prev_se > 0.0 && se < 0.0) {
            double lo = prev_m, hi = m;
            double b_si = si, b_se = se, b_r1 = r1, b_m = m;
            for (int it = 0; it < opt.max_bisect; ++it) {
                const double mid = std::sqrt(lo * hi);
                double msi, mse, mr1;
                if (!eval(mid, msi, mse, mr1)) break;
                b_si = msi;
                b_se = mse;
                b_r1 = mr1;
                b_m = mid;
                if (std::abs(mse) <= opt.tol_se) break;
                if (mse > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            pt.m_star = b_m;
            pt.s_internal = b_si;
            pt.s_external = b_se;
            pt.r1_star = b_r1;
            pt.converged = std::abs(b_se) <= opt.tol_se;
            return pt;
        }
        prev_m = m;
        prev_se = se;
        have_prev = true;
    }
    pt.converged = false;
    pt.m_star = std::numeric_limits<double>::quiet_NaN();
    pt.s_internal = std::numeric_limits<double>::quiet_NaN();
    pt.s_external = std::numeric_limits<double>::quiet_NaN();
    return pt;
}

// Sweep find_m_star over a q1 grid; numerically unstable points are marked
// (converged = false) rather than aborting the sweep.
inline std::vector<LocalEntropyPoint> local_entropy_curve(double j_d, double beta,
                                                          const std::vector<double>& q1_grid,
                                                          const MStarOptions& opt = {}) {
    std::vector<LocalEntropyPoint> curve;
    curve.reserve(q1_grid.size());
    for (const double q1 : q1_grid) {
        try {
            curve.push_back(find_m_star(q1, beta, j_d, opt));
        } catch (const NumericalFailure&) {
            LocalEntropyPoint bad;
            bad.j_d = j_d;
            bad.beta = beta;
            bad.q1 = q1;
            bad.converged = false;
            curve.push_back(bad);
        }
    }
    return curve;
}

// True if S_I is non-decreasing in distance over the converged points.
inline bool curve_monotone(const std::vector<LocalEntropyPoint>& curve, double tol = 1e-5) {
    // curve ordered by increasing distance (decreasing q1)
    std::optional<double> prev;
    for (const auto& p : curve) {
        if (!p.converged) continue;
        if (prev && p.s_internal < *prev - tol) return false;
        prev = p.s_internal;
    }
    return true;
}

struct JcInterval {
    double lo = 0.0;  // largest grid J_D with a non-monotone curve
    double hi = 0.0;  // smallest grid J_D with a monotone curve
};

// Bisection over a sorted J_D grid for the monotone/non-monotone transition of
// the local-entropy curves. Returns the bracketing grid interval.
inline JcInterval detect_jc(double beta, const std::vector<double>& j_d_grid,
                            const std::vector<double>& q1_grid, const MStarOptions& opt = {}) {
    if (j_d_grid.size() < 2) throw std::invalid_argument("detect_jc: need >= 2 grid points");
    auto mono_at = [&](std::size_t idx) {
        return curve_monotone(local_entropy_curve(j_d_grid[idx], beta, q1_grid, opt));
    };
    std::size_t lo = 0, hi = j_d_grid.size() - 1;
    if (mono_at(lo) || !mono_at(hi)) {
        std::ostringstream os;
        os << "detect_jc: no transition inside grid [" << j_d_grid.front() << ", "
           << j_d_grid.back() << "] at beta=" << beta;
        throw NumericalFailure(os.str());
    }
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (mono_at(mid))
            hi = mid;
        else
            lo = mid;
    }
    return {j_d_grid[lo], j_d_grid[hi]};
}

}  // namespace spinfp
