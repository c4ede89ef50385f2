#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pgarch/model.hpp"

namespace pgarch {

enum class Verdict { Holds, Fails, Inconclusive };
enum class CheckId { L1, Lr, Ergodicity, Lyapunov, Garch11Strict };

std::string_view to_string(Verdict v) noexcept;

/// Relative band around 1 inside which a spectral-radius verdict is inconclusive.
inline constexpr double kVerdictBand = 1e-8;

/// Named scalar evidence, kept in insertion order for stable reports.
class Evidence {
public:
    void set(std::string name, double value);
    [[nodiscard]] std::optional<double> find(std::string_view name) const;
    /// Throws pgarch::Error(InvalidArgument) when the name is absent.
    [[nodiscard]] double at(std::string_view name) const;
    [[nodiscard]] const std::vector<std::pair<std::string, double>>& items() const noexcept {
        return items_;
    }

private:
    std::vector<std::pair<std::string, double>> items_;
};

struct Certificate {
    CheckId check = CheckId::L1;
    int order = 1;  ///< moment order r for Lr checks (2 reports as "L2")
    Verdict verdict = Verdict::Inconclusive;
    Evidence evidence;
    std::vector<std::string> notes;

    /// "L1", "L2", "L3", ..., "ergodicity", "lyapunov", "garch11_strict".
    [[nodiscard]] std::string id() const;
};

/// Three-way comparison of `value` with 1 using a symmetric band.
Verdict compare_to_one(double value, double band = kVerdictBand);

/// Unique L¹ (periodically correlated) solution iff ρ(φ_s ⋯ φ_1) < 1.
Certificate check_L1(const ModelSpec& spec);

/// E{y^{⊗r}} finite (2r-th moment of x) iff ρ(Π E{φ^{⊗r}}) < 1. Requires r ≥ 2.
Certificate check_Lr(const ModelSpec& spec, int r);

enum class LyapunovMode { Seasonal, Stacked };

std::string_view to_string(LyapunovMode m) noexcept;

struct LyapunovOptions {
    long long years = 10000;
    int reps = 32;
    std::uint64_t seed = 1;
    LyapunovMode mode = LyapunovMode::Seasonal;
    int threads = 0;  ///< 0: resolve from $PGARCH_THREADS / hardware
};

struct LyapunovEstimate {
    double gamma_hat = 0.0;  ///< nats per period cycle (s observations)
    double std_error = 0.0;  ///< sample sd across replications / sqrt(reps)
    int reps = 0;
    long long years = 0;
    std::uint64_t seed = 0;
    LyapunovMode mode = LyapunovMode::Seasonal;
    int period = 1;
    bool degenerate = false;  ///< some product collapsed to zero; gamma_hat = -inf
    std::vector<double> per_rep;

    [[nodiscard]] double per_observation() const noexcept { return gamma_hat / period; }
};

/**
 * Top Lyapunov exponent of the annual random products by direct simulation.
 *
 * Each replication draws its own substream, multiplies the yearly matrices
 * (Φ(η̲) in seasonal mode, the stacked A(η̲) otherwise) onto a running product,
 * renormalizes after every multiply and accumulates the log of the discarded
 * norm. Replications are reduced in index order, so the result depends only
 * on (spec, seed, years, reps, mode).
 */
LyapunovEstimate estimate_lyapunov(const ModelSpec& spec, const LyapunovOptions& options = {});

/// Holds iff γ̂ + 3 SE < 0; fails iff γ̂ - 3 SE > 0.
Certificate lyapunov_certificate(const LyapunovEstimate& est);

/// Σ_v E{log(η α₁(v) + β₁(v))} < 0 for PGARCH(1,1).
Certificate garch11_strict_condition(const ModelSpec& spec);

/// E{log(α η + β)} for one season, with the absolute quadrature error estimate.
std::pair<double, double> expected_log_affine(const InnovationDist& dist, double alpha, double beta);

struct ErgodicityOptions {
    std::vector<double> r_grid{1.0, 0.5, 0.25, 0.1};
    long long mc_draws = 100000;
    std::uint64_t seed = 1;
    int threads = 0;
};

/**
 * Checks the hypotheses of the geometric-ergodicity theorem: an absolutely
 * continuous innovation, the L¹ condition, ρ(B_s ⋯ B_1) < 1, and
 * E{‖A(η̲)‖^r} < 1 for some r in the grid. The last one is a Monte Carlo
 * estimate and must clear 1 by three standard errors. It is tried under two
 * operator norms (max row sum, and a column-sum norm weighted by the left
 * Perron vector of the mean annual product), since the condition is
 * norm-dependent while the conclusion is not.
 */
Certificate check_ergodicity(const ModelSpec& spec, const ErgodicityOptions& options = {});

}  // namespace pgarch
