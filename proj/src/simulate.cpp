#include "pgarch/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "pgarch/certify.hpp"
#include "pgarch/error.hpp"
#include "pgarch/rng.hpp"

namespace pgarch {

Path simulate_path(const ModelSpec& raw, const SimulationOptions& options) {
    if (options.n_years < 1) throw Error(ErrorCode::InvalidArgument, "simulate_path: n_years must be >= 1");
    if (options.burnin_years < 0)
        throw Error(ErrorCode::InvalidArgument, "simulate_path: burnin_years must be >= 0");
    const ModelSpec spec = normalize_orders(validate_spec(raw));
    const int s = spec.period;
    const int n = spec.p;

    Path path;
    path.spec_fingerprint = spec_fingerprint(raw);
    path.seed = options.seed;
    path.n_years = options.n_years;
    path.burnin_years = options.burnin_years;
    path.period = s;
    const auto recorded = static_cast<std::size_t>(options.n_years) * static_cast<std::size_t>(s);
    path.x.reserve(recorded);
    path.h.reserve(recorded);

    // lag k (1-based) lives at index k-1
    std::vector<double> x2_lags(static_cast<std::size_t>(n), 0.0);
    std::vector<double> h_lags(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) h_lags[static_cast<std::size_t>(k - 1)] = spec.a0(spec.wrap(1 - k));

    const auto key = derive_key(options.seed, Stream::Path, 0);
    const long long total_years = options.burnin_years + options.n_years;
    for (long long t = 0; t < total_years; ++t) {
        for (int v = 1; v <= s; ++v) {
            double h = spec.a0(v);
            for (int i = 1; i <= n; ++i) {
                h += spec.a(v, i) * x2_lags[static_cast<std::size_t>(i - 1)];
                h += spec.b(v, i) * h_lags[static_cast<std::size_t>(i - 1)];
            }
            if (!std::isfinite(h) || h > options.overflow_ceiling)
                throw OverflowError(t - options.burnin_years + 1, v, h);
            // burn-in years get negative indices so recorded draws do not depend on the burn-in length
            const auto year = static_cast<std::uint64_t>(t - options.burnin_years);
            const double eps = draw_epsilon(spec.innovation, key, year, static_cast<std::uint64_t>(v));
            const double x = eps * std::sqrt(h);
            std::rotate(x2_lags.rbegin(), x2_lags.rbegin() + 1, x2_lags.rend());
            std::rotate(h_lags.rbegin(), h_lags.rbegin() + 1, h_lags.rend());
            x2_lags[0] = x * x;
            h_lags[0] = h;
            if (t >= options.burnin_years) {
                path.x.push_back(x);
                path.h.push_back(h);
            }
        }
    }
    return path;
}

void write_path_csv(const Path& path, std::ostream& out) {
    out << "year,season,x,h\n";
    const auto old_precision = out.precision(17);
    for (std::size_t k = 0; k < path.size(); ++k) {
        const auto year = static_cast<long long>(k) / path.period + 1;
        const auto season = static_cast<int>(k % static_cast<std::size_t>(path.period)) + 1;
        out << year << ',' << season << ',' << path.x[k] << ',' << path.h[k] << '\n';
    }
    out.precision(old_precision);
}

namespace {

/// Accumulates per-batch sums so the mean and batch-means SE fall out together.
class BatchAccumulator {
public:
    explicit BatchAccumulator(int batches)
        : sums_(static_cast<std::size_t>(batches), 0.0), counts_(static_cast<std::size_t>(batches), 0) {}

    void add(int batch, double value) {
        sums_[static_cast<std::size_t>(batch)] += value;
        ++counts_[static_cast<std::size_t>(batch)];
    }

    [[nodiscard]] Estimate finish() const {
        double total = 0.0;
        long long count = 0;
        std::vector<double> means;
        for (std::size_t b = 0; b < sums_.size(); ++b) {
            total += sums_[b];
            count += counts_[b];
            if (counts_[b] > 0) means.push_back(sums_[b] / static_cast<double>(counts_[b]));
        }
        Estimate e;
        e.mean = count > 0 ? total / static_cast<double>(count) : 0.0;
        if (means.size() >= 2) {
            double mm = 0.0;
            for (double m : means) mm += m;
            mm /= static_cast<double>(means.size());
            double ss = 0.0;
            for (double m : means) ss += (m - mm) * (m - mm);
            e.se = std::sqrt(ss / static_cast<double>(means.size() - 1)) /
                   std::sqrt(static_cast<double>(means.size()));
        }
        return e;
    }

private:
    std::vector<double> sums_;
    std::vector<long long> counts_;
};

}  // namespace

SeasonalStats empirical_stats(const Path& path, int max_lag) {
    if (path.n_years < kMinStatsYears)
        throw Error(ErrorCode::TooShort, "empirical_stats: need at least " +
                                             std::to_string(kMinStatsYears) + " years, got " +
                                             std::to_string(path.n_years));
    if (max_lag < 0) throw Error(ErrorCode::InvalidArgument, "empirical_stats: max_lag must be >= 0");

    const int s = path.period;
    const long long years = path.n_years;
    const int batches = static_cast<int>(
        std::max<long long>(30, static_cast<long long>(std::sqrt(static_cast<double>(years)))));
    auto batch_of = [&](long long year) { return static_cast<int>(year * batches / years); };

    auto make = [&] { return std::vector<BatchAccumulator>(static_cast<std::size_t>(s), BatchAccumulator(batches)); };
    auto acc_x2 = make();
    auto acc_x4 = make();
    auto acc_h = make();
    auto acc_h2 = make();
    std::vector<std::vector<BatchAccumulator>> acc_cross(static_cast<std::size_t>(max_lag) + 1);
    for (auto& row : acc_cross) row = make();

    for (long long t = 0; t < years; ++t) {
        const int b = batch_of(t);
        for (int v = 1; v <= s; ++v) {
            const auto k = static_cast<long long>(t * s + v - 1);
            const auto sv = static_cast<std::size_t>(v - 1);
            const double x2 = path.x[static_cast<std::size_t>(k)] * path.x[static_cast<std::size_t>(k)];
            const double h = path.h[static_cast<std::size_t>(k)];
            acc_x2[sv].add(b, x2);
            acc_x4[sv].add(b, x2 * x2);
            acc_h[sv].add(b, h);
            acc_h2[sv].add(b, h * h);
            for (int lag = 0; lag <= max_lag && lag <= k; ++lag) {
                const double xl = path.x[static_cast<std::size_t>(k - lag)];
                acc_cross[static_cast<std::size_t>(lag)][sv].add(b, x2 * xl * xl);
            }
        }
    }

    SeasonalStats out;
    out.period = s;
    out.max_lag = max_lag;
    out.batches = batches;
    for (int v = 0; v < s; ++v) {
        const auto sv = static_cast<std::size_t>(v);
        out.x2.push_back(acc_x2[sv].finish());
        out.x4.push_back(acc_x4[sv].finish());
        out.h.push_back(acc_h[sv].finish());
        out.h2.push_back(acc_h2[sv].finish());
    }
    out.cross.resize(static_cast<std::size_t>(max_lag) + 1);
    for (int lag = 0; lag <= max_lag; ++lag)
        for (int v = 0; v < s; ++v)
            out.cross[static_cast<std::size_t>(lag)].push_back(
                acc_cross[static_cast<std::size_t>(lag)][static_cast<std::size_t>(v)].finish());
    return out;
}

namespace {

double z_score(double analytic, const Estimate& e) {
    const double diff = e.mean - analytic;
    const double scale = std::max(1.0, std::abs(analytic));
    if (e.se <= 1e-12 * scale) {
        // deterministic paths: no sampling noise to divide by
        if (std::abs(diff) <= 1e-8 * scale) return 0.0;
        return std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    return diff / e.se;
}

}  // namespace

VerificationReport compare_moments(const MomentTable& analytic, const SeasonalStats& empirical) {
    if (analytic.period() != empirical.period)
        throw Error(ErrorCode::ShapeMismatch, "compare_moments: period mismatch");
    VerificationReport report;
    auto add = [&](std::string name, int v, int lag, double a, const Estimate& e) {
        VerificationRow row;
        row.quantity = std::move(name);
        row.season = v;
        row.lag = lag;
        row.analytic = a;
        row.empirical = e.mean;
        row.se = e.se;
        row.z = z_score(a, e);
        report.rows.push_back(std::move(row));
    };
    const int max_lag = std::min(analytic.max_lag(), empirical.max_lag);
    for (int v = 1; v <= analytic.period(); ++v) {
        const auto sv = static_cast<std::size_t>(v - 1);
        add("E[x2]", v, 0, analytic.e_x2(v), empirical.x2[sv]);
        add("E[x4]", v, 0, analytic.e_x4(v), empirical.x4[sv]);
        add("E[h]", v, 0, analytic.e_h(v), empirical.h[sv]);
        add("E[h2]", v, 0, analytic.e_h2(v), empirical.h2[sv]);
        for (int lag = 1; lag <= max_lag; ++lag)
            add("E[x2*x2(-h)]", v, lag, analytic.cross_x2(v, lag), empirical.cross_at(v, lag));
    }

    std::size_t over3 = 0;
    const VerificationRow* worst = nullptr;
    for (const auto& row : report.rows) {
        const double az = std::abs(row.z);
        if (az > 3.0) ++over3;
        if (worst == nullptr || az > std::abs(worst->z)) worst = &row;
    }
    if (worst != nullptr) {
        report.max_abs_z = std::abs(worst->z);
        std::ostringstream label;
        label << worst->quantity << " season=" << worst->season;
        if (worst->lag > 0) label << " lag=" << worst->lag;
        report.worst = label.str();
    }
    report.fraction_over_3 =
        report.rows.empty() ? 0.0 : static_cast<double>(over3) / static_cast<double>(report.rows.size());
    report.pass = report.max_abs_z <= 4.0 && report.fraction_over_3 <= 0.10;
    return report;
}

VerificationReport verify(const ModelSpec& spec, const VerifyOptions& options) {
    const auto table = compute_moments(spec, options.max_lag);
    SimulationOptions sim;
    sim.n_years = options.n_years;
    sim.burnin_years = options.burnin_years;
    sim.seed = options.seed;
    const auto path = simulate_path(spec, sim);
    auto report = compare_moments(table, empirical_stats(path, options.max_lag));
    if (table.dim() > kMaxL4CheckDim) {
        report.notes.emplace_back("L4 condition not evaluated (state dimension above " +
                                  std::to_string(kMaxL4CheckDim) + ")");
    } else if (const auto l4 = check_Lr(spec, 4); l4.verdict != Verdict::Holds) {
        report.notes.emplace_back("L4 condition is " + std::string(to_string(l4.verdict)) +
                                  ": E{x^8} may be infinite, so SEs of fourth-order quantities are unreliable");
    }
    return report;
}

}  // namespace pgarch
