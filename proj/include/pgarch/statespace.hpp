#pragma once

#include <span>
#include <utility>
#include <vector>

#include "pgarch/matalg.hpp"
#include "pgarch/model.hpp"

namespace pgarch {

/**
 * Affine decomposition of one season's random transition.
 *
 * The state is y = (x²_t, …, x²_{t-n+1}, h_t, …, h_{t-n+1}) with n = p = q
 * after order normalization, so d = 2n. With η = ε²_t the recursion reads
 *
 *   y_t = (C + η D) y_{t-1} + (b0 + η b1).
 *
 * D is zero outside row 0, which holds (α₁..α_n, β₁..β_n). C carries the same
 * coefficients in row n plus the two shift subdiagonals. b1 = α₀ e₀ and
 * b0 = α₀ e_n.
 */
struct SeasonBlocks {
    int season = 1;
    Mat C;
    Mat D;
    Vec b0;
    Vec b1;

    [[nodiscard]] Eigen::Index dim() const noexcept { return C.rows(); }
};

/// Mean-value companion system of the stacked annual recursion.
struct CompanionSystem {
    Mat A_mean;            ///< ds×ds, nonzero only in its last block column
    Vec B_mean;            ///< ds
    Mat seasonal_product;  ///< φ_s ⋯ φ_1 of the mean blocks, d×d
    Vec selector;          ///< H = e₁, picks x² out of the state
};

/// Blocks for season v (any integer; wrapped into 1..s). Orders are normalized internally.
SeasonBlocks build_season_blocks(const ModelSpec& spec, int season);

/// All s seasons, index 0 holding season 1.
std::vector<SeasonBlocks> build_all_blocks(const ModelSpec& spec);

/// E{φ_v(η)} = C + D.
Mat phi_mean(const ModelSpec& spec, int season);

/// E{B_v(η)} = b0 + b1.
Vec b_mean(const ModelSpec& spec, int season);

/// E{φ_v(η)^{⊗r}} = Σ_{w∈{0,1}^r} κ_{|w|} M_{w₁}⊗…⊗M_{w_r} with M₀ = C, M₁ = D.
Mat phi_kron_moment(const ModelSpec& spec, int season, int r,
                    std::size_t dim_cap = kDefaultDimCap);

/// Same expansion from prebuilt blocks.
Mat phi_kron_moment(const SeasonBlocks& blocks, const InnovationDist& dist, int r,
                    std::size_t dim_cap = kDefaultDimCap);

/**
 * Returns (X_v, β2_v) with
 *   X_v  = E{φ_v(η) ⊗ B_v(η) + B_v(η) ⊗ φ_v(η)}   (d² × d)
 *   β2_v = E{B_v(η) ⊗ B_v(η)}                     (d²)
 * so that E{(φy + B)^{⊗2}} = φ^{(2)} E{y^{⊗2}} + X_v E{y} + β2_v.
 */
std::pair<Mat, Vec> cross_moment_phi_b(const ModelSpec& spec, int season);

CompanionSystem build_companion(const ModelSpec& spec);

/// φ_v(η) = C + η D.
Mat sample_phi(const SeasonBlocks& blocks, double eta);

/// B_v(η) = b0 + η b1.
Vec sample_b(const SeasonBlocks& blocks, double eta);

/// Φ(η̲) = φ_s(η_s) ⋯ φ_1(η_1) for one year of squared innovations.
Mat sample_seasonal_product(std::span<const SeasonBlocks> blocks, std::span<const double> etas);

/// The stacked ds×ds matrix A(η̲) of the annual recursion Y_t = A(η̲_t) Y_{t-1} + B(η̲_t).
Mat sample_stacked(std::span<const SeasonBlocks> blocks, std::span<const double> etas);

/// q×q mean block B_v of the state transition (β row on top, shift below).
Mat beta_block(const ModelSpec& spec, int season);

}  // namespace pgarch
