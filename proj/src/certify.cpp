#include "pgarch/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pgarch/error.hpp"
#include "pgarch/matalg.hpp"
#include "pgarch/parallel.hpp"
#include "pgarch/rng.hpp"
#include "pgarch/statespace.hpp"

namespace pgarch {

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Fails: return "fails";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

std::string_view to_string(LyapunovMode m) noexcept {
    return m == LyapunovMode::Seasonal ? "seasonal" : "stacked";
}

void Evidence::set(std::string name, double value) {
    for (auto& [key, val] : items_) {
        if (key == name) {
            val = value;
            return;
        }
    }
    items_.emplace_back(std::move(name), value);
}

std::optional<double> Evidence::find(std::string_view name) const {
    for (const auto& [key, val] : items_)
        if (key == name) return val;
    return std::nullopt;
}

double Evidence::at(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw Error(ErrorCode::InvalidArgument, "no evidence named " + std::string(name));
}

std::string Certificate::id() const {
    switch (check) {
        case CheckId::L1: return "L1";
        case CheckId::Lr: return "L" + std::to_string(order);
        case CheckId::Ergodicity: return "ergodicity";
        case CheckId::Lyapunov: return "lyapunov";
        case CheckId::Garch11Strict: return "garch11_strict";
    }
    return "unknown";
}

Verdict compare_to_one(double value, double band) {
    if (std::isnan(value)) return Verdict::Inconclusive;
    if (value < 1.0 - band) return Verdict::Holds;
    if (value > 1.0 + band) return Verdict::Fails;
    return Verdict::Inconclusive;
}

namespace {

Certificate radius_certificate(CheckId id, int order, const Mat& product) {
    Certificate cert;
    cert.check = id;
    cert.order = order;
    const auto rho = spectral_radius(product);
    cert.evidence.set("rho", rho.value);
    cert.evidence.set("band", kVerdictBand);
    cert.evidence.set("squarings", rho.squarings);
    cert.verdict = compare_to_one(rho.value, kVerdictBand);
    if (!rho.converged) {
        cert.verdict = Verdict::Inconclusive;
        cert.notes.emplace_back("spectral radius iteration did not converge in 60 squarings");
    }
    return cert;
}

}  // namespace

Certificate check_L1(const ModelSpec& spec) {
    const auto sys = build_companion(spec);
    auto cert = radius_certificate(CheckId::L1, 1, sys.seasonal_product);
    cert.notes.emplace_back(
        "rho = spectral radius of the mean annual product phi_s...phi_1; holds <=> unique "
        "periodically correlated solution in L1, which is then also the strictly stationary one "
        "(gamma_L < log rho)");
    return cert;
}

Certificate check_Lr(const ModelSpec& spec, int r) {
    if (r < 2) throw Error(ErrorCode::InvalidArgument, "check_Lr: r must be >= 2");
    if (const double kr = innovation_moment(spec.innovation, r); !std::isfinite(kr)) {
        Certificate cert;
        cert.check = CheckId::Lr;
        cert.order = r;
        cert.verdict = Verdict::Fails;
        cert.evidence.set("rho", kr);
        cert.evidence.set("kappa_r", kr);
        cert.notes.emplace_back("kappa_r is infinite, so E{x^" + std::to_string(2 * r) +
                                "} cannot be finite");
        return cert;
    }
    std::vector<Mat> factors;
    factors.reserve(static_cast<std::size_t>(spec.period));
    for (int v = spec.period; v >= 1; --v) factors.push_back(phi_kron_moment(spec, v, r));
    const Mat product = product_seq(factors, factors.front().rows());

    auto cert = radius_certificate(CheckId::Lr, r, product);
    cert.evidence.set("kappa_r", innovation_moment(spec.innovation, r));
    std::ostringstream note;
    note << "holds <=> E{y^(x)" << r << "} finite, i.e. E{x^" << 2 * r << "} < inf";
    cert.notes.push_back(note.str());
    if (r > 2) {
        const double k = innovation_moment(spec.innovation, 2 * (r - 1));
        cert.evidence.set("kappa_2(r-1)", k);
        if (!std::isfinite(k))
            cert.notes.emplace_back(
                "kappa_{2(r-1)} is infinite; the expansion only needs kappa_r, which is finite");
    }
    return cert;
}

LyapunovEstimate estimate_lyapunov(const ModelSpec& spec, const LyapunovOptions& options) {
    if (options.years < 100)
        throw Error(ErrorCode::InvalidArgument, "estimate_lyapunov: years must be >= 100");
    if (options.reps < 2)
        throw Error(ErrorCode::InvalidArgument, "estimate_lyapunov: reps must be >= 2");

    const auto blocks = build_all_blocks(spec);
    const auto s = static_cast<std::size_t>(spec.period);

    std::vector<double> per_rep(static_cast<std::size_t>(options.reps));
    parallel_for(per_rep.size(), resolve_threads(options.threads), [&](std::size_t rep) {
        const auto key = derive_key(options.seed, Stream::Lyapunov, rep);
        std::vector<double> etas(s);
        const Eigen::Index n = options.mode == LyapunovMode::Seasonal
                                   ? blocks.front().dim()
                                   : blocks.front().dim() * static_cast<Eigen::Index>(s);
        Mat product = Mat::Identity(n, n);
        double log_norm = 0.0;
        for (long long t = 0; t < options.years; ++t) {
            for (std::size_t v = 0; v < s; ++v) {
                const double eps = draw_epsilon(spec.innovation, key, static_cast<std::uint64_t>(t), v + 1);
                etas[v] = eps * eps;
            }
            const Mat step = options.mode == LyapunovMode::Seasonal
                                 ? sample_seasonal_product(blocks, etas)
                                 : sample_stacked(blocks, etas);
            product = (step * product).eval();
            const double norm = row_sum_norm(product);
            if (!(norm > 0.0) || !std::isfinite(norm)) {
                log_norm = -std::numeric_limits<double>::infinity();
                break;
            }
            product /= norm;
            log_norm += std::log(norm);
        }
        per_rep[rep] = log_norm / static_cast<double>(options.years);
    });

    LyapunovEstimate est;
    est.reps = options.reps;
    est.years = options.years;
    est.seed = options.seed;
    est.mode = options.mode;
    est.period = spec.period;
    est.per_rep = per_rep;
    est.degenerate = std::any_of(per_rep.begin(), per_rep.end(), [](double g) { return std::isinf(g); });
    if (est.degenerate) {
        est.gamma_hat = -std::numeric_limits<double>::infinity();
        est.std_error = 0.0;
        return est;
    }
    double sum = 0.0;
    for (double g : per_rep) sum += g;
    const double mean = sum / options.reps;
    double ss = 0.0;
    for (double g : per_rep) ss += (g - mean) * (g - mean);
    est.gamma_hat = mean;
    est.std_error = std::sqrt(ss / (options.reps - 1)) / std::sqrt(static_cast<double>(options.reps));
    return est;
}

Certificate lyapunov_certificate(const LyapunovEstimate& est) {
    Certificate cert;
    cert.check = CheckId::Lyapunov;
    cert.evidence.set("gamma_hat", est.gamma_hat);
    cert.evidence.set("std_error", est.std_error);
    cert.evidence.set("gamma_hat_per_observation", est.per_observation());
    cert.evidence.set("years", static_cast<double>(est.years));
    cert.evidence.set("reps", est.reps);
    cert.evidence.set("seed", static_cast<double>(est.seed));
    const double hi = est.gamma_hat + 3.0 * est.std_error;
    const double lo = est.gamma_hat - 3.0 * est.std_error;
    cert.verdict = hi < 0.0 ? Verdict::Holds : (lo > 0.0 ? Verdict::Fails : Verdict::Inconclusive);
    cert.notes.push_back(std::string("mode=") + std::string(to_string(est.mode)) +
                         "; gamma_hat is per period cycle (s observations)");
    if (est.degenerate)
        cert.notes.emplace_back("random product collapsed to zero: gamma_L = -inf");
    return cert;
}

std::pair<double, double> expected_log_affine(const InnovationDist& dist, double alpha, double beta) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (alpha == 0.0 && beta == 0.0) return {-inf, 0.0};
    if (alpha == 0.0) return {std::log(beta), 0.0};
    if (dist.kind == InnovationDist::Kind::Unit) return {std::log(alpha + beta), 0.0};
    if (beta == 0.0) return {std::log(alpha) + expected_log_eta(dist), 0.0};

    // E log(alpha eps^2 + beta) = 2 * int_0^inf log(alpha e^2 + beta) f(e) de, split
    // where alpha e^2 = beta so the near-singular part sits on its own panel.
    std::function<double(double)> density;
    if (dist.kind == InnovationDist::Kind::Gaussian) {
        density = [](double e) { return std::exp(-0.5 * e * e) / std::sqrt(2.0 * M_PI); };
    } else {
        const double scale = std::sqrt((dist.nu - 2.0) / dist.nu);
        const boost::math::students_t_distribution<double> t(dist.nu);
        density = [t, scale](double e) { return boost::math::pdf(t, e / scale) / scale; };
    }
    const auto integrand = [&](double e) {
        const double f = density(e);
        return f == 0.0 ? 0.0 : 2.0 * std::log(alpha * e * e + beta) * f;
    };
    // Panels [0, c], then geometric panels c·4^k up to 1, then [1, ∞), where
    // c = sqrt(beta/alpha): the integrand is smooth on each of them even when
    // beta is tiny and log(alpha e^2 + beta) approaches log(alpha e^2).
    using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double split = std::sqrt(beta / alpha);
    std::vector<double> edges{0.0, split};
    for (double e = 4.0 * split; e < 1.0; e *= 4.0) edges.push_back(e);
    if (edges.back() < 1.0) edges.push_back(1.0);
    edges.push_back(inf);
    double value = 0.0;
    double err = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        double panel_err = 0.0;
        value += Quad::integrate(integrand, edges[k], edges[k + 1], 15, 1e-10, &panel_err);
        err += std::abs(panel_err);
    }
    if (!std::isfinite(value) || !std::isfinite(err) || err > 1e-6)
        throw Error(ErrorCode::QuadratureFailure,
                    "expected_log_affine: quadrature error estimate " + std::to_string(err));
    return {value, err};
}

Certificate garch11_strict_condition(const ModelSpec& spec) {
    if (!is_garch11(spec))
        throw Error(ErrorCode::NotGarch11, "garch11_strict_condition: requires p = q = 1");
    const ModelSpec g = normalize_orders(spec);
    Certificate cert;
    cert.check = CheckId::Garch11Strict;
    double total = 0.0;
    double error = 0.0;
    for (int v = 1; v <= g.period; ++v) {
        const auto [term, err] = expected_log_affine(g.innovation, g.a(v, 1), g.b(v, 1));
        cert.evidence.set("term_season_" + std::to_string(v), term);
        total += term;
        error += err;
    }
    const double band = std::max(error, 1e-12);
    cert.evidence.set("S", total);
    cert.evidence.set("quadrature_error", error);
    if (std::isinf(total) && total < 0.0) {
        cert.verdict = Verdict::Holds;
        cert.notes.emplace_back("some season has alpha1 = beta1 = 0, so S = -inf");
    } else {
        cert.verdict = total < -band ? Verdict::Holds
                                     : (total > band ? Verdict::Fails : Verdict::Inconclusive);
    }
    cert.notes.emplace_back(
        "S = sum_v E log(eta alpha1(v) + beta1(v)); S < 0 is sufficient for a unique strictly "
        "stationary solution");
    return cert;
}

Certificate check_ergodicity(const ModelSpec& spec, const ErgodicityOptions& options) {
    if (!spec.innovation.absolutely_continuous())
        throw Error(ErrorCode::InnovationNotAbsolutelyContinuous,
                    "check_ergodicity: innovation " + to_string(spec.innovation) +
                        " has no Lebesgue density");
    if (options.r_grid.empty())
        throw Error(ErrorCode::InvalidArgument, "check_ergodicity: empty r grid");
    for (double r : options.r_grid)
        if (!(r > 0.0 && r <= 1.0))
            throw Error(ErrorCode::InvalidArgument, "check_ergodicity: r must lie in (0, 1]");
    if (options.mc_draws < 2)
        throw Error(ErrorCode::InvalidArgument, "check_ergodicity: mc_draws must be >= 2");

    Certificate cert;
    cert.check = CheckId::Ergodicity;

    const auto l1 = check_L1(spec);
    cert.evidence.set("rho_L1", l1.evidence.at("rho"));

    const int s = spec.period;
    std::vector<Mat> b_blocks;
    for (int v = s; v >= 1; --v) b_blocks.push_back(beta_block(spec, v));
    const double rho_b = spectral_radius(product_seq(b_blocks, b_blocks.front().rows())).value;
    cert.evidence.set("rho_B", rho_b);
    const Verdict b_verdict = compare_to_one(rho_b);

    // Weights for the Perron-weighted norm.
    const auto blocks = build_all_blocks(spec);
    const Eigen::Index d = blocks.front().dim();
    const Vec perron = perron_left_vector(build_companion(spec).seasonal_product);
    std::vector<double> weights(static_cast<std::size_t>(d * s));
    for (int j = 0; j < s; ++j)
        for (Eigen::Index i = 0; i < d; ++i)
            weights[static_cast<std::size_t>(j * d + i)] = (j == s - 1 ? 1.0 : 1e-6) * perron(i);

    const auto n = static_cast<std::size_t>(options.mc_draws);
    std::vector<double> row_norms(n);
    std::vector<double> weighted_norms(n);
    parallel_for(n, resolve_threads(options.threads), [&](std::size_t i) {
        const auto key = derive_key(options.seed, Stream::Ergodicity, i);
        std::vector<double> etas(static_cast<std::size_t>(s));
        for (int v = 0; v < s; ++v) {
            const double eps = draw_epsilon(spec.innovation, key, 0, static_cast<std::uint64_t>(v + 1));
            etas[static_cast<std::size_t>(v)] = eps * eps;
        }
        const Mat a = sample_stacked(blocks, etas);
        row_norms[i] = row_sum_norm(a);
        weighted_norms[i] = weighted_column_norm(a, weights);
    });

    struct Candidate {
        const char* norm;
        double r;
        double mean;
        double se;
    };
    std::vector<Candidate> candidates;
    for (const auto& [name, norms] :
         {std::pair<const char*, const std::vector<double>*>{"row_sum", &row_norms},
          std::pair<const char*, const std::vector<double>*>{"perron_weighted", &weighted_norms}}) {
        for (double r : options.r_grid) {
            double sum = 0.0;
            double sum_sq = 0.0;
            for (double x : *norms) {
                const double y = std::pow(x, r);
                sum += y;
                sum_sq += y * y;
            }
            const double mean = sum / static_cast<double>(n);
            const double var = std::max(0.0, (sum_sq - n * mean * mean) / static_cast<double>(n - 1));
            const double se = std::sqrt(var / static_cast<double>(n));
            std::ostringstream key;
            key << "E_norm_r[" << name << ",r=" << r << "]";
            cert.evidence.set(key.str() + ".mean", mean);
            cert.evidence.set(key.str() + ".se", se);
            candidates.push_back({name, r, mean, se});
        }
    }

    const auto passing = std::find_if(candidates.begin(), candidates.end(),
                                      [](const Candidate& c) { return c.mean + 3.0 * c.se < 1.0; });
    const bool straddles = std::any_of(candidates.begin(), candidates.end(),
                                       [](const Candidate& c) { return c.mean - 3.0 * c.se < 1.0; });
    Verdict moment_verdict = Verdict::Fails;
    if (passing != candidates.end()) {
        moment_verdict = Verdict::Holds;
        cert.evidence.set("r", passing->r);
        cert.evidence.set("E_norm_r", passing->mean);
        cert.evidence.set("E_norm_r.se", passing->se);
        cert.notes.push_back(std::string("moment condition met with the ") + passing->norm +
                             " operator norm");
    } else if (straddles) {
        moment_verdict = Verdict::Inconclusive;
    }

    if (l1.verdict == Verdict::Fails) {
        cert.verdict = Verdict::Fails;
        cert.notes.emplace_back(
            "the L1 condition rho(phi_s...phi_1) < 1 fails; ergodicity is only certified under "
            "it together with an absolutely continuous innovation law");
    } else if (b_verdict == Verdict::Fails) {
        cert.verdict = Verdict::Fails;
        cert.notes.emplace_back("rho(B_s...B_1) >= 1");
    } else if (moment_verdict == Verdict::Fails) {
        cert.verdict = Verdict::Fails;
        cert.notes.emplace_back(
            "no (norm, r) pair gives E||A||^r < 1; the sufficient conditions are not met");
    } else if (l1.verdict == Verdict::Holds && b_verdict == Verdict::Holds &&
               moment_verdict == Verdict::Holds) {
        cert.verdict = Verdict::Holds;
        cert.notes.emplace_back("geometrically ergodic; beta-mixing with exponential decay");
    } else {
        cert.verdict = Verdict::Inconclusive;
    }
    cert.evidence.set("mc_draws", static_cast<double>(options.mc_draws));
    cert.evidence.set("seed", static_cast<double>(options.seed));
    return cert;
}

}  // namespace pgarch
