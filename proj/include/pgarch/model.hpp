#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace pgarch {

/// Law of the i.i.d. innovation ε. Every supported kind has E{ε}=E{ε³}=0 and E{ε²}=1.
struct InnovationDist {
    enum class Kind { Gaussian, StudentT, Unit };

    Kind kind = Kind::Gaussian;
    double nu = 0.0;  ///< degrees of freedom; only meaningful for StudentT

    static InnovationDist gaussian() { return {Kind::Gaussian, 0.0}; }
    /// Student-t with ν > 4 degrees of freedom, rescaled to unit variance.
    static InnovationDist student_t(double nu) { return {Kind::StudentT, nu}; }
    /// ε = ±1 with equal probability, so η = ε² ≡ 1. For deterministic tests only.
    static InnovationDist unit() { return {Kind::Unit, 0.0}; }

    [[nodiscard]] bool absolutely_continuous() const noexcept { return kind != Kind::Unit; }

    friend bool operator==(const InnovationDist&, const InnovationDist&) = default;
};

std::string to_string(const InnovationDist& dist);

/// κ_m = E{ε^{2m}}; +∞ when the moment does not exist (Student-t with 2m ≥ ν).
double innovation_moment(const InnovationDist& dist, int m);

/// E{log ε²}, finite for the absolutely continuous kinds and 0 for `unit`.
double expected_log_eta(const InnovationDist& dist);

/**
 * Periodic GARCH(p, q) model with period s.
 *
 * Seasons are numbered 1..s in the public API; the coefficient arrays are
 * stored with row 0 holding season 1. `alpha[v][i]` is α_{i+1}(v+1) and
 * `beta[v][j]` is β_{j+1}(v+1).
 */
struct ModelSpec {
    int period = 1;
    int p = 1;
    int q = 1;
    std::vector<double> alpha0;
    std::vector<std::vector<double>> alpha;
    std::vector<std::vector<double>> beta;
    InnovationDist innovation;

    /// State dimension p + q of the squared-process recursion.
    [[nodiscard]] int state_dim() const noexcept { return p + q; }

    [[nodiscard]] double a0(int season) const { return alpha0.at(index(season)); }
    [[nodiscard]] double a(int season, int i) const { return alpha.at(index(season)).at(i - 1); }
    [[nodiscard]] double b(int season, int j) const { return beta.at(index(season)).at(j - 1); }

    /// Maps any integer season (including ≤ 0) onto 1..period.
    [[nodiscard]] int wrap(long long season) const noexcept;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;

private:
    [[nodiscard]] std::size_t index(int season) const {
        return static_cast<std::size_t>(wrap(season) - 1);
    }
};

/// Returns `raw` unchanged when all model invariants hold; throws pgarch::Error otherwise.
ModelSpec validate_spec(const ModelSpec& raw);

/// Pads α and β with zero columns so that p = q = max(p, q, 1).
ModelSpec normalize_orders(const ModelSpec& spec);

/// PGARCH(1,1) after normalization.
[[nodiscard]] bool is_garch11(const ModelSpec& spec);

ModelSpec spec_from_json(const nlohmann::json& doc);
nlohmann::json spec_to_json(const ModelSpec& spec);
ModelSpec load_spec(const std::filesystem::path& path);

/// 16 hex digits identifying the canonical serialization of a spec.
std::string spec_fingerprint(const ModelSpec& spec);

}  // namespace pgarch
