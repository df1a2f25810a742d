#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace spinfp {

// Standard Gaussian upper tail H(x) = 1/2 erfc(x / sqrt(2)).
inline double gauss_tail(double x) {
    return 0.5 * std::erfc(x * M_SQRT1_2);
}

// log H(x), usable far beyond the underflow point of erfc.
inline double log_gauss_tail(double x) {
    if (x < 28.0) {
        return std::log(gauss_tail(x));
    }
    // asymptotic H(x) = phi(x)/x * (1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8 + ...)
    const double x2 = x * x;
    const double inv2 = 1.0 / x2;
    const double series = -inv2 * (1.0 - inv2 * (3.0 - inv2 * (15.0 - inv2 * 105.0)));
    return -0.5 * x2 - 0.5 * std::log(2.0 * M_PI) - std::log(x) + std::log1p(series);
}

// One-dimensional quadrature rule: sum_i w[i] f(x[i]) approximates
// an integral of f against a fixed measure.
struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;

    std::size_t size() const { return x.size(); }
};

// Gauss-Hermite rule for the measure e^{-x^2/2}/sqrt(2 pi) dx (probabilists'
// convention), computed by Golub-Welsch on the Jacobi matrix.
inline QuadRule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = std::sqrt(static_cast<double>(k));
        jac(k, k - 1) = b;
        jac(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    QuadRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.x[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        rule.w[i] = v0 * v0;  // measure already normalized to 1
    }
    return rule;
}

namespace detail {
// 12-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr double kGL12X[12] = {
    -0.9815606342467192, -0.9041172563704748, -0.7699026741943047,
    -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
    0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
    0.7699026741943047,  0.9041172563704748,  0.9815606342467192};
inline constexpr double kGL12W[12] = {
    0.04717533638651183, 0.10693932599531843, 0.16007832854334622,
    0.20316742672306592, 0.2334925365383548,  0.24914704581340277,
    0.24914704581340277, 0.2334925365383548,  0.20316742672306592,
    0.16007832854334622, 0.10693932599531843, 0.04717533638651183};
}  // namespace detail

// Composite 12-point Gauss-Legendre over consecutive panels given by `edges`,
// with the Gaussian weight e^{-x^2/2}/sqrt(2 pi) folded into the weights.
inline QuadRule gaussian_panels(const std::vector<double>& edges) {
    QuadRule rule;
    if (edges.size() < 2) throw std::invalid_argument("gaussian_panels: need >= 2 edges");
    const double norm = 1.0 / std::sqrt(2.0 * M_PI);
    rule.x.reserve(12 * (edges.size() - 1));
    rule.w.reserve(12 * (edges.size() - 1));
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        if (h <= 0.0) continue;
        for (int i = 0; i < 12; ++i) {
            const double xi = c + h * detail::kGL12X[i];
            rule.x.push_back(xi);
            rule.w.push_back(h * detail::kGL12W[i] * norm * std::exp(-0.5 * xi * xi));
        }
    }
    return rule;
}

}  // namespace spinfp
