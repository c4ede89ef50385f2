#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pgarch/model.hpp"
#include "pgarch/moments.hpp"

namespace pgarch {

inline constexpr double kDefaultOverflowCeiling = 1e300;
inline constexpr long long kDefaultBurnin = 1000;

/// A simulated path; observation (t, v) sits at index t·s + (v - 1).
struct Path {
    std::string spec_fingerprint;
    std::uint64_t seed = 0;
    long long n_years = 0;
    long long burnin_years = 0;
    int period = 1;
    std::vector<double> x;
    std::vector<double> h;

    [[nodiscard]] std::size_t size() const noexcept { return x.size(); }
    [[nodiscard]] double x_at(long long year, int season) const {
        return x[static_cast<std::size_t>(year * period + season - 1)];
    }
    [[nodiscard]] double h_at(long long year, int season) const {
        return h[static_cast<std::size_t>(year * period + season - 1)];
    }
};

struct SimulationOptions {
    long long n_years = 1000;
    long long burnin_years = kDefaultBurnin;
    std::uint64_t seed = 1;
    double overflow_ceiling = kDefaultOverflowCeiling;
};

/**
 * Iterates the defining recursion season by season starting from x² = 0 and
 * h = α₀(season) in every lagged slot, then drops the burn-in years. The
 * innovation for year t and season v comes from the counter generator keyed by
 * (seed, t, v), where t counts from the first recorded year and burn-in years
 * are negative; the recorded draws therefore do not depend on the burn-in
 * length. Throws OverflowError when h exceeds the ceiling or stops being
 * finite, reporting the year on the same scale (1 = first recorded year).
 */
Path simulate_path(const ModelSpec& spec, const SimulationOptions& options);

/// CSV with header `year,season,x,h`; years count from 1 after burn-in.
void write_path_csv(const Path& path, std::ostream& out);

/// Sample mean with batch-means standard error.
struct Estimate {
    double mean = 0.0;
    double se = 0.0;
};

struct SeasonalStats {
    int period = 1;
    int max_lag = 0;
    int batches = 0;
    std::vector<Estimate> x2;
    std::vector<Estimate> x4;
    std::vector<Estimate> h;
    std::vector<Estimate> h2;
    std::vector<std::vector<Estimate>> cross;  ///< [lag][season-1]: E{x²_{st+v} x²_{st+v-lag}}

    [[nodiscard]] const Estimate& cross_at(int season, int lag) const {
        return cross.at(static_cast<std::size_t>(lag)).at(static_cast<std::size_t>(season - 1));
    }
};

/// Minimum path length accepted by empirical_stats.
inline constexpr long long kMinStatsYears = 60;

/**
 * Seasonal sample moments. Years are split into max(30, ⌊√n⌋) contiguous
 * batches; SE = sd(batch means) / √batches. Lagged products whose partner
 * falls before the first recorded observation are skipped.
 */
SeasonalStats empirical_stats(const Path& path, int max_lag);

struct VerificationRow {
    std::string quantity;  ///< "E[x2]", "E[x4]", "E[h]", "E[h2]", "E[x2*x2(-h)]"
    int season = 1;
    int lag = 0;
    double analytic = 0.0;
    double empirical = 0.0;
    double se = 0.0;
    double z = 0.0;
};

struct VerificationReport {
    std::vector<VerificationRow> rows;
    bool pass = false;
    double max_abs_z = 0.0;
    double fraction_over_3 = 0.0;
    std::string worst;  ///< label of the row with the largest |z|
    std::vector<std::string> notes;
};

/// Pass iff every |z| ≤ 4 and at most 10% of rows exceed 3.
VerificationReport compare_moments(const MomentTable& analytic, const SeasonalStats& empirical);

/// Largest state dimension for which verify evaluates the L⁴ condition.
inline constexpr int kMaxL4CheckDim = 4;

struct VerifyOptions {
    long long n_years = 200000;
    long long burnin_years = kDefaultBurnin;
    std::uint64_t seed = 1;
    int max_lag = 4;
};

/**
 * Analytic table versus a fresh simulation. Requires the L² condition. When
 * E{x⁸} is infinite the fourth-order estimators have infinite variance and
 * their batch-means SEs are not trustworthy; the report then carries a note
 * saying so, but the pass rule is unchanged. The L⁴ check is skipped above
 * kMaxL4CheckDim.
 */
VerificationReport verify(const ModelSpec& spec, const VerifyOptions& options);

}  // namespace pgarch
