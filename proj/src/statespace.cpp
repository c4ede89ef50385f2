#include "pgarch/statespace.hpp"

#include <cmath>
#include <string>

#include "pgarch/error.hpp"

namespace pgarch {

SeasonBlocks build_season_blocks(const ModelSpec& raw, int season) {
    const ModelSpec spec = normalize_orders(raw);
    const int n = spec.p;
    const int d = 2 * n;
    const int v = spec.wrap(season);

    SeasonBlocks blk;
    blk.season = v;
    blk.C = Mat::Zero(d, d);
    blk.D = Mat::Zero(d, d);
    for (int i = 0; i < n; ++i) {
        blk.D(0, i) = spec.a(v, i + 1);
        blk.D(0, n + i) = spec.b(v, i + 1);
        blk.C(n, i) = spec.a(v, i + 1);
        blk.C(n, n + i) = spec.b(v, i + 1);
    }
    for (int i = 1; i < n; ++i) {
        blk.C(i, i - 1) = 1.0;
        blk.C(n + i, n + i - 1) = 1.0;
    }
    blk.b0 = Vec::Zero(d);
    blk.b1 = Vec::Zero(d);
    blk.b1(0) = spec.a0(v);
    blk.b0(n) = spec.a0(v);
    return blk;
}

std::vector<SeasonBlocks> build_all_blocks(const ModelSpec& spec) {
    std::vector<SeasonBlocks> out;
    out.reserve(static_cast<std::size_t>(spec.period));
    for (int v = 1; v <= spec.period; ++v) out.push_back(build_season_blocks(spec, v));
    return out;
}

Mat phi_mean(const ModelSpec& spec, int season) {
    const auto blk = build_season_blocks(spec, season);
    return blk.C + blk.D;
}

Vec b_mean(const ModelSpec& spec, int season) {
    const auto blk = build_season_blocks(spec, season);
    return blk.b0 + blk.b1;
}

Mat phi_kron_moment(const SeasonBlocks& blk, const InnovationDist& dist, int r,
                    std::size_t dim_cap) {
    if (r < 1) throw Error(ErrorCode::InvalidArgument, "phi_kron_moment: r must be >= 1");
    for (int m = 0; m <= r; ++m) {
        if (!std::isfinite(innovation_moment(dist, m)))
            throw Error(ErrorCode::MomentDoesNotExist,
                        "phi_kron_moment: kappa_" + std::to_string(m) + " is infinite for " +
                            to_string(dist));
    }
    // Check the size before building anything.
    std::size_t dim = 1;
    for (int k = 0; k < r; ++k) {
        dim *= static_cast<std::size_t>(blk.dim());
        if (dim > dim_cap)
            throw Error(ErrorCode::SizeOverflow,
                        "phi_kron_moment: d^r = " + std::to_string(blk.dim()) + "^" +
                            std::to_string(r) + " exceeds dimension cap " + std::to_string(dim_cap));
    }

    // groups[k] = sum of all j-fold products containing exactly k factors of D
    std::vector<Mat> groups{blk.C, blk.D};
    for (int j = 2; j <= r; ++j) {
        std::vector<Mat> next(static_cast<std::size_t>(j + 1));
        for (int k = 0; k <= j; ++k) {
            Mat acc;
            if (k < j) acc = kron(groups[k], blk.C, dim_cap);
            if (k > 0) {
                Mat with_d = kron(groups[k - 1], blk.D, dim_cap);
                acc = (k < j) ? Mat(acc + with_d) : with_d;
            }
            next[k] = std::move(acc);
        }
        groups = std::move(next);
    }
    Mat out = Mat::Zero(groups[0].rows(), groups[0].cols());
    for (int k = 0; k <= r; ++k) out += innovation_moment(dist, k) * groups[k];
    return out;
}

Mat phi_kron_moment(const ModelSpec& spec, int season, int r, std::size_t dim_cap) {
    return phi_kron_moment(build_season_blocks(spec, season), spec.innovation, r, dim_cap);
}

std::pair<Mat, Vec> cross_moment_phi_b(const ModelSpec& spec, int season) {
    const double k2 = innovation_moment(spec.innovation, 2);
    if (!std::isfinite(k2))
        throw Error(ErrorCode::MomentDoesNotExist,
                    "cross_moment_phi_b: kappa_2 is infinite for " + to_string(spec.innovation));
    const auto blk = build_season_blocks(spec, season);
    const Mat b0 = as_column(blk.b0);
    const Mat b1 = as_column(blk.b1);
    const Mat& C = blk.C;
    const Mat& D = blk.D;

    Mat x = kron(C, b0) + kron(C, b1) + kron(D, b0) + k2 * kron(D, b1) + kron(b0, C) + kron(b1, C) +
            kron(b0, D) + k2 * kron(b1, D);
    Vec beta2 =
        kron(blk.b0, blk.b0) + kron(blk.b0, blk.b1) + kron(blk.b1, blk.b0) + k2 * kron(blk.b1, blk.b1);
    return {std::move(x), std::move(beta2)};
}

CompanionSystem build_companion(const ModelSpec& spec) {
    const int s = spec.period;
    const auto blocks = build_all_blocks(spec);
    const Eigen::Index d = blocks.front().dim();

    CompanionSystem sys;
    sys.A_mean = Mat::Zero(d * s, d * s);
    sys.B_mean = Vec::Zero(d * s);

    // Block row j (1-based) of the last block column is φ_j ⋯ φ_1; block j of B
    // is Σ_{k≤j} (φ_j ⋯ φ_{k+1}) B_k, built by the running recursion
    // B^{(j)} = φ_j B^{(j-1)} + B_j.
    Mat running = Mat::Identity(d, d);
    Vec b_running = Vec::Zero(d);
    for (int j = 1; j <= s; ++j) {
        const auto& blk = blocks[static_cast<std::size_t>(j - 1)];
        const Mat phi = blk.C + blk.D;
        running = (phi * running).eval();
        b_running = (phi * b_running + blk.b0 + blk.b1).eval();
        sys.A_mean.block((j - 1) * d, (s - 1) * d, d, d) = running;
        sys.B_mean.segment((j - 1) * d, d) = b_running;
    }

    std::vector<Mat> factors;
    factors.reserve(static_cast<std::size_t>(s));
    for (int v = s; v >= 1; --v) {
        const auto& blk = blocks[static_cast<std::size_t>(v - 1)];
        factors.push_back(blk.C + blk.D);
    }
    sys.seasonal_product = product_seq(factors, d);
    sys.selector = Vec::Zero(d);
    sys.selector(0) = 1.0;
    return sys;
}

Mat sample_phi(const SeasonBlocks& blocks, double eta) { return blocks.C + eta * blocks.D; }

Vec sample_b(const SeasonBlocks& blocks, double eta) { return blocks.b0 + eta * blocks.b1; }

Mat sample_seasonal_product(std::span<const SeasonBlocks> blocks, std::span<const double> etas) {
    if (blocks.size() != etas.size())
        throw Error(ErrorCode::ShapeMismatch, "sample_seasonal_product: one eta per season required");
    const Eigen::Index d = blocks.front().dim();
    Mat out = Mat::Identity(d, d);
    for (std::size_t v = 0; v < blocks.size(); ++v)
        out = (sample_phi(blocks[v], etas[v]) * out).eval();
    return out;
}

Mat sample_stacked(std::span<const SeasonBlocks> blocks, std::span<const double> etas) {
    if (blocks.size() != etas.size())
        throw Error(ErrorCode::ShapeMismatch, "sample_stacked: one eta per season required");
    const auto s = static_cast<Eigen::Index>(blocks.size());
    const Eigen::Index d = blocks.front().dim();
    Mat out = Mat::Zero(d * s, d * s);
    Mat running = Mat::Identity(d, d);
    for (Eigen::Index j = 0; j < s; ++j) {
        running = (sample_phi(blocks[j], etas[j]) * running).eval();
        out.block(j * d, (s - 1) * d, d, d) = running;
    }
    return out;
}

Mat beta_block(const ModelSpec& raw, int season) {
    const ModelSpec spec = normalize_orders(raw);
    const int n = spec.q;
    const int v = spec.wrap(season);
    Mat out = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) out(0, j) = spec.b(v, j + 1);
    for (int j = 1; j < n; ++j) out(j, j - 1) = 1.0;
    return out;
}

}  // namespace pgarch
