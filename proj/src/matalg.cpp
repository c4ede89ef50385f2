#include "pgarch/matalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pgarch/error.hpp"

namespace pgarch {

namespace {

void check_cap(Eigen::Index rows, Eigen::Index cols, std::size_t cap, const char* what) {
    if (static_cast<std::size_t>(rows) > cap || static_cast<std::size_t>(cols) > cap) {
        throw Error(ErrorCode::SizeOverflow, std::string(what) + ": result " +
                                                 std::to_string(rows) + "x" + std::to_string(cols) +
                                                 " exceeds dimension cap " + std::to_string(cap));
    }
}

}  // namespace

Mat kron(const Mat& a, const Mat& b, std::size_t dim_cap) {
    const Eigen::Index rb = b.rows();
    const Eigen::Index cb = b.cols();
    check_cap(a.rows() * rb, a.cols() * cb, dim_cap, "kron");
    Mat out(a.rows() * rb, a.cols() * cb);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    return out;
}

Vec kron(const Vec& a, const Vec& b, std::size_t dim_cap) {
    check_cap(a.size() * b.size(), 1, dim_cap, "kron");
    Vec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Mat kron_power(const Mat& a, int r, std::size_t dim_cap) {
    if (r < 0) throw Error(ErrorCode::InvalidArgument, "kron_power: r must be >= 0");
    if (a.rows() != a.cols()) throw Error(ErrorCode::ShapeMismatch, "kron_power: matrix not square");
    std::size_t dim = 1;
    for (int k = 0; k < r; ++k) {
        dim *= static_cast<std::size_t>(a.rows());
        if (dim > dim_cap)
            throw Error(ErrorCode::SizeOverflow, "kron_power: order " + std::to_string(a.rows()) +
                                                     "^" + std::to_string(r) +
                                                     " exceeds dimension cap " +
                                                     std::to_string(dim_cap));
    }
    if (r == 0) return Mat::Identity(1, 1);
    Mat out = a;
    for (int k = 1; k < r; ++k) out = kron(out, a, dim_cap);
    return out;
}

Mat as_column(const Vec& v) { return Mat(Eigen::Map<const Mat>(v.data(), v.size(), 1)); }

double row_sum_norm(const Mat& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

double weighted_column_norm(const Mat& a, std::span<const double> weights) {
    if (static_cast<Eigen::Index>(weights.size()) != a.rows() || a.rows() != a.cols())
        throw Error(ErrorCode::ShapeMismatch, "weighted_column_norm: weight length mismatch");
    double best = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        double col = 0.0;
        for (Eigen::Index i = 0; i < a.rows(); ++i) col += weights[i] * std::abs(a(i, j));
        best = std::max(best, col / weights[j]);
    }
    return best;
}

SpectralRadius spectral_radius(const Mat& a, double tol) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw Error(ErrorCode::ShapeMismatch, "spectral_radius: matrix must be square and non-empty");
    if (!a.allFinite()) throw Error(ErrorCode::NonFiniteValue, "spectral_radius: non-finite entry");

    constexpr int kMaxSquarings = 60;
    Mat m = a;
    double log_scale = 0.0;
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (int k = 0;; ++k) {
        const double norm = row_sum_norm(m);
        if (norm == 0.0) return {0.0, true, k};  // a^(2^k) = 0: nilpotent
        const double estimate = std::exp((log_scale + std::log(norm)) / std::ldexp(1.0, k));
        if (k > 0 && std::abs(estimate - previous) <= tol * estimate) return {estimate, true, k};
        previous = estimate;
        if (k == kMaxSquarings) return {estimate, false, k};
        m /= norm;
        m = (m * m).eval();
        log_scale = 2.0 * (log_scale + std::log(norm));
    }
}

Mat solve_neumann(const Mat& m, const Mat& b) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "solve_neumann: m not square");
    if (b.rows() != m.rows())
        throw Error(ErrorCode::ShapeMismatch, "solve_neumann: right-hand side has wrong row count");
    const auto rho = spectral_radius(m);
    if (rho.value >= 1.0)
        throw Error(ErrorCode::SpectralRadiusAtLeastOne,
                    "solve_neumann: spectral radius " + std::to_string(rho.value) + " >= 1");

    const Mat lhs = Mat::Identity(m.rows(), m.cols()) - m;
    Eigen::PartialPivLU<Mat> lu(lhs);
    Mat x = lu.solve(b);
    const double residual = row_sum_norm(lhs * x - b);
    if (!x.allFinite() || residual > 1e-10 * (1.0 + row_sum_norm(b)))
        throw Error(ErrorCode::SingularSystem,
                    "solve_neumann: LU breakdown (residual " + std::to_string(residual) + ")");
    return x;
}

Vec solve_neumann(const Mat& m, const Vec& b) { return solve_neumann(m, as_column(b)).col(0); }

Mat product_seq(std::span<const Mat> ms, Eigen::Index size) {
    if (ms.empty()) return Mat::Identity(size, size);
    Mat out = ms.front();
    for (std::size_t k = 1; k < ms.size(); ++k) {
        if (out.cols() != ms[k].rows())
            throw Error(ErrorCode::ShapeMismatch,
                        "product_seq: factor " + std::to_string(k) + " is not conformable");
        out = (out * ms[k]).eval();
    }
    return out;
}

Vec perron_left_vector(const Mat& a, double floor, int iterations) {
    const Eigen::Index n = a.rows();
    Vec x = Vec::Ones(n);
    const double shift = spectral_radius(a).value;
    if (shift == 0.0) return x;
    const Mat at = a.transpose();
    for (int it = 0; it < iterations; ++it) {
        Vec next = at * x + shift * x;
        next /= next.maxCoeff();
        const bool done = (next - x).cwiseAbs().maxCoeff() < 1e-14;
        x = std::move(next);
        if (done) break;
    }
    for (Eigen::Index i = 0; i < n; ++i) x(i) = std::max(x(i), floor);
    return x;
}

}  // namespace pgarch
