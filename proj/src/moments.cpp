#include "pgarch/moments.hpp"

#include <cmath>
#include <string>

#include "pgarch/certify.hpp"
#include "pgarch/error.hpp"
#include "pgarch/statespace.hpp"

namespace pgarch {

MomentTable::MomentTable(int period, int dim, std::vector<Vec> mu1, std::vector<Vec> mu2,
                         std::vector<std::vector<Vec>> gamma)
    : period_(period), dim_(dim), mu1_(std::move(mu1)), mu2_(std::move(mu2)), gamma_(std::move(gamma)) {}

std::size_t MomentTable::slot(int season) const noexcept {
    long long r = (static_cast<long long>(season) - 1) % period_;
    if (r < 0) r += period_;
    return static_cast<std::size_t>(r);
}

const Vec& MomentTable::mu1(int season) const { return mu1_.at(slot(season)); }
const Vec& MomentTable::mu2(int season) const { return mu2_.at(slot(season)); }

const Vec& MomentTable::gamma(int season, int lag) const {
    if (lag < 0 || lag > max_lag())
        throw Error(ErrorCode::InvalidArgument,
                    "MomentTable::gamma: lag " + std::to_string(lag) + " outside 0.." +
                        std::to_string(max_lag()));
    return gamma_[static_cast<std::size_t>(lag)].at(slot(season));
}

double MomentTable::autocov_sq(int season, int lag) const {
    return cross_x2(season, lag) - e_x2(season) * e_x2(season - lag);
}

namespace {

std::size_t idx(const ModelSpec& spec, int season) {
    return static_cast<std::size_t>(spec.wrap(season) - 1);
}

/// Solves the periodic fixed point m(v) = T_v m(v-1) + c_v, m(0) = m(s):
/// m(s) = (I - T_s⋯T_1)^{-1} Σ_j (T_s⋯T_{s-j+1}) c_{s-j}, then forward recursion.
std::vector<Vec> periodic_fixed_point(const std::vector<Mat>& transition, const std::vector<Vec>& intercept) {
    const auto s = transition.size();
    const Eigen::Index n = transition.front().rows();
    Mat product = Mat::Identity(n, n);
    Vec rhs = Vec::Zero(n);
    for (std::size_t j = 0; j < s; ++j) {
        const std::size_t v = s - 1 - j;  // season s-j, 0-based
        rhs += product * intercept[v];
        product = (product * transition[v]).eval();
    }
    std::vector<Vec> out(s);
    out[s - 1] = solve_neumann(product, rhs);
    Vec previous = out[s - 1];
    for (std::size_t v = 0; v + 1 < s; ++v) {
        out[v] = transition[v] * previous + intercept[v];
        previous = out[v];
    }
    return out;
}

void require_holds(const Certificate& cert, const char* what) {
    if (cert.verdict != Verdict::Holds)
        throw Error(ErrorCode::SpectralRadiusAtLeastOne,
                    std::string(what) + ": " + cert.id() + " condition does not hold (rho=" +
                        std::to_string(cert.evidence.at("rho")) + ")");
}

}  // namespace

std::vector<Vec> seasonal_mean(const ModelSpec& spec) {
    require_holds(check_L1(spec), "seasonal_mean");
    std::vector<Mat> transition;
    std::vector<Vec> intercept;
    for (int v = 1; v <= spec.period; ++v) {
        const auto blk = build_season_blocks(spec, v);
        transition.push_back(blk.C + blk.D);
        intercept.push_back(blk.b0 + blk.b1);
    }
    return periodic_fixed_point(transition, intercept);
}

std::vector<Vec> seasonal_second(const ModelSpec& spec, const std::vector<Vec>& mu1) {
    require_holds(check_Lr(spec, 2), "seasonal_second");
    std::vector<Mat> transition;
    std::vector<Vec> intercept;
    for (int v = 1; v <= spec.period; ++v) {
        transition.push_back(phi_kron_moment(spec, v, 2));
        const auto [cross, beta2] = cross_moment_phi_b(spec, v);
        intercept.push_back(beta2 + cross * mu1[idx(spec, v - 1)]);
    }
    return periodic_fixed_point(transition, intercept);
}

std::vector<std::vector<Vec>> cross_moment_lags(const ModelSpec& spec, const std::vector<Vec>& mu1,
                                                const std::vector<Vec>& mu2, int max_lag) {
    if (max_lag < 0) throw Error(ErrorCode::InvalidArgument, "cross_moment_lags: max_lag must be >= 0");
    const auto s = static_cast<std::size_t>(spec.period);
    std::vector<Mat> lifted(s);
    std::vector<Vec> intercept(s);
    for (int v = 1; v <= spec.period; ++v) {
        const auto blk = build_season_blocks(spec, v);
        const Eigen::Index d = blk.dim();
        lifted[idx(spec, v)] = kron(Mat(blk.C + blk.D), Mat(Mat::Identity(d, d)));
        intercept[idx(spec, v)] = blk.b0 + blk.b1;
    }
    std::vector<std::vector<Vec>> gamma(static_cast<std::size_t>(max_lag) + 1);
    gamma[0] = mu2;
    for (int h = 1; h <= max_lag; ++h) {
        auto& row = gamma[static_cast<std::size_t>(h)];
        row.resize(s);
        for (int v = 1; v <= spec.period; ++v) {
            row[idx(spec, v)] = lifted[idx(spec, v)] * gamma[static_cast<std::size_t>(h - 1)][idx(spec, v - 1)] +
                                kron(intercept[idx(spec, v)], mu1[idx(spec, v - h)]);
        }
    }
    return gamma;
}

MomentTable compute_moments(const ModelSpec& spec, int max_lag) {
    auto mu1 = seasonal_mean(spec);
    auto mu2 = seasonal_second(spec, mu1);
    auto gamma = cross_moment_lags(spec, mu1, mu2, max_lag);
    const int d = static_cast<int>(mu1.front().size());
    return MomentTable(spec.period, d, std::move(mu1), std::move(mu2), std::move(gamma));
}

// ---------------------------------------------------------------------------
// PGARCH(1,1) scalar forms

namespace {

/// Σ_{j=0}^{v-1} (Π_{i<j} θ(v-i)) c(v-j) + (Π_{i<v} θ(v-i)) tail, seasons 1-based.
double unrolled(const std::vector<double>& theta, const std::vector<double>& c, int v, double tail,
                int s) {
    auto at = [s](const std::vector<double>& x, int season) {
        return x[static_cast<std::size_t>(((season - 1) % s + s) % s)];
    };
    double sum = 0.0;
    double prod = 1.0;
    for (int j = 0; j < v; ++j) {
        sum += prod * at(c, v - j);
        prod *= at(theta, v - j);
    }
    return sum + prod * tail;
}

}  // namespace

Garch11ClosedForm garch11_closed_forms(const ModelSpec& raw) {
    if (!is_garch11(raw)) throw Error(ErrorCode::NotGarch11, "garch11_closed_forms: requires p = q = 1");
    const ModelSpec spec = normalize_orders(raw);
    const int s = spec.period;

    Garch11ClosedForm out;
    out.period = s;
    out.kappa2 = innovation_moment(spec.innovation, 2);
    double prod1 = 1.0;
    double prod2 = 1.0;
    for (int v = 1; v <= s; ++v) {
        const double a = spec.a(v, 1);
        const double b = spec.b(v, 1);
        out.alpha0.push_back(spec.a0(v));
        out.alpha1.push_back(a);
        out.beta1.push_back(b);
        out.theta1.push_back(a + b);
        out.theta2.push_back(out.kappa2 * a * a + b * b + 2.0 * a * b);
        prod1 *= out.theta1.back();
        prod2 *= out.theta2.back();
    }
    if (!(prod1 < 1.0))
        throw Error(ErrorCode::NotStationary,
                    "garch11_closed_forms: prod theta1 = " + std::to_string(prod1) + " >= 1");

    // mu1(s) = (1 - Π θ₁)^{-1} Σ_j (Π_{v<j} θ₁(s-v)) α₀(s-j)
    const double mu1_s = unrolled(out.theta1, out.alpha0, s, 0.0, s) / (1.0 - prod1);
    out.mu1.resize(static_cast<std::size_t>(s));
    for (int v = 1; v <= s; ++v)
        out.mu1[static_cast<std::size_t>(v - 1)] = unrolled(out.theta1, out.alpha0, v, mu1_s, s);

    if (std::isfinite(out.kappa2) && prod2 < 1.0) {
        std::vector<double> c(static_cast<std::size_t>(s));
        for (int v = 1; v <= s; ++v) {
            const auto k = static_cast<std::size_t>(v - 1);
            const double mu1_prev = out.mu1[static_cast<std::size_t>((v - 2 + s) % s)];
            c[k] = out.alpha0[k] * out.alpha0[k] + 2.0 * out.alpha0[k] * out.theta1[k] * mu1_prev;
        }
        const double eh2_s = unrolled(out.theta2, c, s, 0.0, s) / (1.0 - prod2);
        for (int v = 1; v <= s; ++v) {
            out.eh2.push_back(unrolled(out.theta2, c, v, eh2_s, s));
            out.mu2.push_back(out.kappa2 * out.eh2.back());
        }
    }
    return out;
}

double Garch11ClosedForm::gamma(int season, int lag) const {
    if (mu2.empty())
        throw Error(ErrorCode::NotStationary, "Garch11ClosedForm::gamma: fourth moment does not exist");
    if (lag < 0) throw Error(ErrorCode::InvalidArgument, "Garch11ClosedForm::gamma: negative lag");
    auto at = [this](const std::vector<double>& x, int v) {
        return x[static_cast<std::size_t>(((v - 1) % period + period) % period)];
    };
    if (lag == 0) return at(mu2, season);
    // E{x²_v x²_{v-1}} = α₀(v) μ₁(v-1) + (κ₂ α₁(v) + β₁(v)) E{h²_{v-1}}
    const int first = season - lag + 1;
    double g = at(alpha0, first) * at(mu1, first - 1) +
               (kappa2 * at(alpha1, first) + at(beta1, first)) * at(eh2, first - 1);
    // h ≥ 2: γ_v(h) = α₀(v) μ₁(v-h) + θ₁(v) γ_{v-1}(h-1)
    for (int k = 2; k <= lag; ++k) {
        const int v = first + k - 1;
        g = at(alpha0, v) * at(mu1, v - k) + at(theta1, v) * g;
    }
    return g;
}

}  // namespace pgarch
