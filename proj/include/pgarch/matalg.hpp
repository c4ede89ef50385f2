#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace pgarch {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

/// Largest row count any constructed matrix may have (Kronecker powers hit this first).
inline constexpr std::size_t kDefaultDimCap = 4096;

/// Default relative tolerance for spectral_radius.
inline constexpr double kSpectralTol = 1e-9;

Mat kron(const Mat& a, const Mat& b, std::size_t dim_cap = kDefaultDimCap);
Vec kron(const Vec& a, const Vec& b, std::size_t dim_cap = kDefaultDimCap);

/// r-fold Kronecker power a ⊗ a ⊗ ... ⊗ a; r = 0 gives the 1×1 identity.
Mat kron_power(const Mat& a, int r, std::size_t dim_cap = kDefaultDimCap);

/// Column vector as an n×1 matrix, for vector⊗matrix products.
Mat as_column(const Vec& v);

/// Max absolute row sum (the operator norm induced by the sup norm).
double row_sum_norm(const Mat& a);

/**
 * Operator norm induced by the weighted ℓ¹ vector norm Σ w_i |x_i|:
 * max_j (Σ_i w_i |a_ij|) / w_j. Weights must be strictly positive.
 */
double weighted_column_norm(const Mat& a, std::span<const double> weights);

struct SpectralRadius {
    double value = 0.0;
    bool converged = false;
    int squarings = 0;
};

/**
 * Spectral radius by Gelfand's formula ρ(a) = lim ‖a^n‖^{1/n}, evaluated along
 * n = 2^k with the iterate renormalized before every squaring so nothing
 * overflows. The log of the discarded scale is carried separately:
 *
 *   M₀ = a, ℓ₀ = 0,  M_{k+1} = (M_k / ‖M_k‖)²,  ℓ_{k+1} = 2(ℓ_k + log‖M_k‖),
 *   ρ ≈ exp((ℓ_k + log‖M_k‖) / 2^k).
 *
 * Stops when successive estimates agree to `tol` (relative) or after 60
 * squarings, in which case `converged` is false and the last estimate is
 * returned. Works for defective and reducible matrices; for nonnegative input
 * the result is the Perron root.
 */
SpectralRadius spectral_radius(const Mat& a, double tol = kSpectralTol);

/// Solves (I - m) x = b by partially pivoted LU; requires ρ(m) < 1.
Mat solve_neumann(const Mat& m, const Mat& b);
Vec solve_neumann(const Mat& m, const Vec& b);

/// ms[0] * ms[1] * ... ; the empty product is the identity of order `size`.
Mat product_seq(std::span<const Mat> ms, Eigen::Index size);

/// Left Perron vector of a nonnegative square matrix, normalized to max entry 1.
/// Power iteration on (a + ρI)ᵀ; entries below `floor` are raised to it.
Vec perron_left_vector(const Mat& a, double floor = 1e-6, int iterations = 2000);

}  // namespace pgarch
