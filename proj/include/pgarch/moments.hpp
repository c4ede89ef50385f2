#pragma once

#include <optional>
#include <vector>

#include "pgarch/matalg.hpp"
#include "pgarch/model.hpp"

namespace pgarch {

/**
 * Seasonal first and second moments of the state y and its lagged cross
 * moments γ_v(h) = E{y_{st+v} ⊗ y_{st+v-h}}.
 *
 * Second-order objects are d²-vectors in the Kronecker convention, so the
 * entry for components (i, j) sits at i·d + j. Component 0 of y is x² and
 * component p (after normalization, p = d/2) is h.
 */
class MomentTable {
public:
    MomentTable(int period, int dim, std::vector<Vec> mu1, std::vector<Vec> mu2,
                std::vector<std::vector<Vec>> gamma);

    [[nodiscard]] int period() const noexcept { return period_; }
    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int max_lag() const noexcept { return static_cast<int>(gamma_.size()) - 1; }

    /// Seasons wrap modulo s, including zero and negative arguments.
    [[nodiscard]] const Vec& mu1(int season) const;
    [[nodiscard]] const Vec& mu2(int season) const;
    [[nodiscard]] const Vec& gamma(int season, int lag) const;

    [[nodiscard]] double e_x2(int season) const { return mu1(season)(0); }
    [[nodiscard]] double e_h(int season) const { return mu1(season)(dim_ / 2); }
    [[nodiscard]] double e_x4(int season) const { return mu2(season)(0); }
    [[nodiscard]] double e_h2(int season) const {
        const int k = dim_ / 2;
        return mu2(season)(k * dim_ + k);
    }
    /// E{x²_{st+v} x²_{st+v-h}}.
    [[nodiscard]] double cross_x2(int season, int lag) const { return gamma(season, lag)(0); }

    /// Cov(x²_{st+v}, x²_{st+v-h}).
    [[nodiscard]] double autocov_sq(int season, int lag) const;

private:
    [[nodiscard]] std::size_t slot(int season) const noexcept;

    int period_;
    int dim_;
    std::vector<Vec> mu1_;
    std::vector<Vec> mu2_;
    std::vector<std::vector<Vec>> gamma_;  // [lag][season - 1]
};

/// μ₁(v) = E{y_{st+v}}, v = 1..s (index 0 is season 1). Requires the L¹ condition.
std::vector<Vec> seasonal_mean(const ModelSpec& spec);

/// μ₂(v) = E{y_{st+v}^{⊗2}} given μ₁. Requires the L² condition.
std::vector<Vec> seasonal_second(const ModelSpec& spec, const std::vector<Vec>& mu1);

/// γ_v(h) for h = 0..max_lag; result[h][v-1].
std::vector<std::vector<Vec>> cross_moment_lags(const ModelSpec& spec, const std::vector<Vec>& mu1,
                                                const std::vector<Vec>& mu2, int max_lag);

/// Default maximum lag: 10 s.
inline int default_max_lag(const ModelSpec& spec) { return 10 * spec.period; }

/// Full table; throws SpectralRadiusAtLeastOne when the required moments do not exist.
MomentTable compute_moments(const ModelSpec& spec, int max_lag);

/// Scalar recursions for PGARCH(1,1); an independent cross-check of the matrix engine.
struct Garch11ClosedForm {
    std::vector<double> theta1;  ///< α₁(v) + β₁(v)
    std::vector<double> theta2;  ///< κ₂α₁²(v) + β₁²(v) + 2α₁(v)β₁(v)
    std::vector<double> mu1;     ///< E{x²} = E{h}
    std::vector<double> eh2;     ///< E{h²}; empty when Π θ₂ ≥ 1
    std::vector<double> mu2;     ///< E{x⁴} = κ₂ E{h²}; empty when Π θ₂ ≥ 1

    /// E{x²_{st+v} x²_{st+v-h}}; requires second moments.
    [[nodiscard]] double gamma(int season, int lag) const;

    int period = 1;
    double kappa2 = 3.0;
    std::vector<double> alpha0;
    std::vector<double> alpha1;
    std::vector<double> beta1;
};

Garch11ClosedForm garch11_closed_forms(const ModelSpec& spec);

}  // namespace pgarch
