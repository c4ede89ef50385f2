#pragma once

// Test-side reference computations. Each one takes a different route from the
// library so that agreement is evidence rather than tautology.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "pgarch/matalg.hpp"
#include "pgarch/model.hpp"

namespace oracle {

using pgarch::Mat;
using pgarch::Vec;

inline Mat naive_kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

inline double eigen_radius(const Mat& a) {
    Eigen::MatrixXd dense = a;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(dense, false);
    double rho = 0.0;
    for (const auto& lambda : solver.eigenvalues()) rho = std::max(rho, std::abs(lambda));
    return rho;
}

/// Σ_k M^k b, truncated once the terms stop mattering.
inline Vec neumann_series(const Mat& m, const Vec& b, int max_terms = 200000) {
    Vec term = b;
    Vec sum = b;
    for (int k = 0; k < max_terms && term.lpNorm<Eigen::Infinity>() > 1e-17 * (1.0 + sum.norm()); ++k) {
        term = m * term;
        sum += term;
    }
    return sum;
}

/// E{(C + ηD)^{⊗r}} by expanding all 2^r factor choices.
inline Mat expanded_kron_moment(const Mat& c, const Mat& d, const pgarch::InnovationDist& dist, int r) {
    const Eigen::Index n = c.rows();
    Eigen::Index size = 1;
    for (int i = 0; i < r; ++i) size *= n;
    Mat total = Mat::Zero(size, size);
    for (unsigned mask = 0; mask < (1u << r); ++mask) {
        Mat term = Mat::Ones(1, 1);
        int ds = 0;
        for (int i = 0; i < r; ++i) {
            const bool use_d = (mask >> i) & 1u;
            ds += use_d ? 1 : 0;
            term = naive_kron(term, use_d ? d : c);
        }
        total += pgarch::innovation_moment(dist, ds) * term;
    }
    return total;
}

/// n-point Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[static_cast<std::size_t>(i)] = z;
        w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

/// Probabilists' Gauss–Hermite rule (Golub–Welsch); exact for E{f(ε)} with
/// ε ~ N(0, 1) and f a polynomial of degree below 2n.
inline void gauss_hermite(int n, std::vector<double>& x, std::vector<double>& w) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    x.resize(static_cast<std::size_t>(n));
    w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        w[static_cast<std::size_t>(i)] = v0 * v0;
    }
}

/// E{f(ε)} for Gaussian ε, exact for polynomials of degree < 2n.
template <typename F>
auto gaussian_expectation(F&& f, int n = 12) {
    std::vector<double> x, w;
    gauss_hermite(n, x, w);
    auto total = (w[0] * f(x[0])).eval();
    for (std::size_t i = 1; i < x.size(); ++i) total += w[i] * f(x[i]);
    return total;
}

/// Density of ε on the real line.
inline double epsilon_density(const pgarch::InnovationDist& dist, double z) {
    if (dist.kind == pgarch::InnovationDist::Kind::Gaussian)
        return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    const double nu = dist.nu;
    const double scale = std::sqrt((nu - 2.0) / nu);
    const double u = z / scale;
    const double log_c = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi);
    return std::exp(log_c - 0.5 * (nu + 1.0) * std::log1p(u * u / nu)) / scale;
}

/// 2∫₀^∞ f(z) p(z) dz on a mesh graded geometrically near 0, uniform on [0.5, 8]
/// and geometric again outward, with the tail beyond `upper` dropped.
template <typename F>
double symmetric_expectation(const pgarch::InnovationDist& dist, F&& f, double upper = 60.0) {
    std::vector<double> x, w;
    gauss_legendre(30, x, w);
    std::vector<double> edges{0.0};
    for (double e = 1e-14; e < 0.5; e *= 4.0) edges.push_back(e);
    for (double e = 0.5; e < std::min(8.0, upper); e += 0.25) edges.push_back(e);
    for (double e = 8.0; e < upper; e *= 1.1) edges.push_back(e);
    edges.push_back(upper);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double a = edges[k], b = edges[k + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double z = mid + half * x[i];
            total += w[i] * half * f(z) * epsilon_density(dist, z);
        }
    }
    return 2.0 * total;
}

/// E{log(α ε² + β)} by composite Gauss–Legendre.
inline double expected_log_affine(const pgarch::InnovationDist& dist, double alpha, double beta) {
    return symmetric_expectation(dist, [&](double z) { return std::log(alpha * z * z + beta); },
                                 dist.kind == pgarch::InnovationDist::Kind::Gaussian ? 40.0 : 200.0);
}

/// Random valid spec with coefficients uniform in [lo, hi].
inline pgarch::ModelSpec random_spec(std::mt19937_64& gen, int s, int p, int q, double lo, double hi,
                                     pgarch::InnovationDist dist = pgarch::InnovationDist::gaussian()) {
    std::uniform_real_distribution<double> coef(lo, hi);
    std::uniform_real_distribution<double> intercept(0.05, 0.5);
    pgarch::ModelSpec spec;
    spec.period = s;
    spec.p = p;
    spec.q = q;
    spec.innovation = dist;
    for (int v = 0; v < s; ++v) {
        spec.alpha0.push_back(intercept(gen));
        std::vector<double> a, b;
        for (int i = 0; i < p; ++i) a.push_back(coef(gen));
        for (int j = 0; j < q; ++j) b.push_back(coef(gen));
        spec.alpha.push_back(a);
        spec.beta.push_back(b);
    }
    return spec;
}

/// Fixed point of the deterministic scalar recursion h_v = α₀(v) + Σ_i (α_i(v) + β_i(v)) h_{v-i},
/// found by iterating from zero until it stops moving.
inline std::vector<double> deterministic_fixed_point(const pgarch::ModelSpec& raw) {
    const auto spec = pgarch::normalize_orders(raw);
    const int s = spec.period, n = spec.p;
    std::vector<double> hist(static_cast<std::size_t>(n), 0.0);
    std::vector<double> last(static_cast<std::size_t>(s), 0.0);
    for (int sweep = 0; sweep < 1000000; ++sweep) {
        double change = 0.0;
        for (int v = 1; v <= s; ++v) {
            double h = spec.a0(v);
            for (int i = 1; i <= n; ++i) h += (spec.a(v, i) + spec.b(v, i)) * hist[static_cast<std::size_t>(i - 1)];
            std::rotate(hist.rbegin(), hist.rbegin() + 1, hist.rend());
            hist[0] = h;
            change = std::max(change, std::abs(h - last[static_cast<std::size_t>(v - 1)]));
            last[static_cast<std::size_t>(v - 1)] = h;
        }
        if (change < 1e-15 * (1.0 + last[0])) break;
    }
    return last;
}

}  // namespace oracle
