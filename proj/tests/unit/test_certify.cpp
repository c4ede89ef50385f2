#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pgarch/certify.hpp"
#include "pgarch/error.hpp"
#include "pgarch/statespace.hpp"

using namespace pgarch;
using Catch::Approx;

namespace {

ModelSpec garch11(std::vector<double> a0, std::vector<double> a1, std::vector<double> b1,
                  InnovationDist dist = InnovationDist::gaussian()) {
    ModelSpec spec;
    spec.period = static_cast<int>(a0.size());
    spec.alpha0 = std::move(a0);
    for (std::size_t v = 0; v < a1.size(); ++v) {
        spec.alpha.push_back({a1[v]});
        spec.beta.push_back({b1[v]});
    }
    spec.innovation = dist;
    return spec;
}

bool has_code(const std::function<void()>& fn, ErrorCode code) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

}  // namespace

TEST_CASE("compare_to_one uses a symmetric band", "[certify]") {
    CHECK(compare_to_one(0.9) == Verdict::Holds);
    CHECK(compare_to_one(1.2) == Verdict::Fails);
    CHECK(compare_to_one(1.0) == Verdict::Inconclusive);
    CHECK(compare_to_one(1.0 + 5e-9) == Verdict::Inconclusive);
    CHECK(compare_to_one(std::nan("")) == Verdict::Inconclusive);
}

TEST_CASE("L1 and L2 on the running example", "[certify]") {
    const auto spec = garch11({0.1}, {0.2}, {0.7});
    const auto l1 = check_L1(spec);
    CHECK(l1.id() == "L1");
    CHECK(l1.verdict == Verdict::Holds);
    CHECK(l1.evidence.at("rho") == Approx(0.9).epsilon(kSpectralTol));
    const auto l2 = check_Lr(spec, 2);
    CHECK(l2.id() == "L2");
    CHECK(l2.verdict == Verdict::Holds);
    CHECK(l2.evidence.at("rho") == Approx(0.89).epsilon(kSpectralTol));

    const auto bad = check_L1(garch11({0.1}, {0.6}, {0.6}));
    CHECK(bad.verdict == Verdict::Fails);
    CHECK(bad.evidence.at("rho") == Approx(1.2).epsilon(kSpectralTol));

    const auto edge = check_L1(garch11({0.1}, {0.5}, {0.5}));
    CHECK(edge.verdict == Verdict::Inconclusive);
}

TEST_CASE("Lr radius matches the Kronecker expansion oracle", "[certify]") {
    std::mt19937_64 gen(21);
    for (int trial = 0; trial < 10; ++trial) {
        const auto spec = oracle::random_spec(gen, 1 + trial % 3, 1 + trial % 2, 1, 0.0, 0.5);
        const auto n = normalize_orders(spec);
        for (int r = 2; r <= 3; ++r) {
            Mat product = Mat::Identity(1, 1);
            for (int v = 1; v <= spec.period; ++v) {
                const auto blk = build_season_blocks(n, v);
                const Mat m = oracle::expanded_kron_moment(blk.C, blk.D, spec.innovation, r);
                product = v == 1 ? m : Mat(m * product);
            }
            CHECK(check_Lr(spec, r).evidence.at("rho") ==
                  Approx(oracle::eigen_radius(product)).epsilon(1e-8).margin(1e-13));
        }
    }
}

TEST_CASE("Lr reports fails when the innovation moment is infinite", "[certify]") {
    const auto spec = garch11({0.1}, {0.05}, {0.3}, InnovationDist::student_t(5.0));
    CHECK(check_Lr(spec, 2).verdict == Verdict::Holds);
    const auto l3 = check_Lr(spec, 3);
    CHECK(l3.verdict == Verdict::Fails);
    CHECK(std::isinf(l3.evidence.at("kappa_r")));
    CHECK_THROWS_AS(check_Lr(spec, 1), Error);
}

TEST_CASE("expected_log_affine agrees with composite Gauss-Legendre", "[certify][quadrature]") {
    const std::vector<std::pair<double, double>> cases{{1.0, 0.0},  {1.1, 0.05}, {0.1, 0.3}, {0.2, 0.7},
                                                       {2.5, 1e-6}, {0.01, 2.0}, {1.0, 1.0}};
    for (const auto& dist : {InnovationDist::gaussian(), InnovationDist::student_t(6.0)}) {
        for (const auto& [a, b] : cases) {
            const auto [value, err] = expected_log_affine(dist, a, b);
            INFO(to_string(dist) << " alpha=" << a << " beta=" << b);
            CHECK(err < 1e-10);
            CHECK(value == Approx(oracle::expected_log_affine(dist, a, b)).margin(1e-8));
        }
    }
    CHECK(expected_log_affine(InnovationDist::unit(), 0.3, 0.4).first == Approx(std::log(0.7)));
    CHECK(std::isinf(expected_log_affine(InnovationDist::gaussian(), 0.0, 0.0).first));
}

TEST_CASE("strict stationarity log-moment condition", "[certify][quadrature]") {
    const auto arch = check_L1(garch11({0.1}, {1.0}, {0.0}));
    CHECK(arch.verdict == Verdict::Inconclusive);
    const auto cert = garch11_strict_condition(garch11({0.1}, {1.0}, {0.0}));
    CHECK(cert.verdict == Verdict::Holds);
    CHECK(cert.evidence.at("S") == Approx(-1.270363).margin(1e-6));

    // explosive in L1 but strictly stationary
    const auto mixed = garch11({0.1, 0.1}, {1.1, 0.1}, {0.05, 0.3});
    const auto s = garch11_strict_condition(mixed);
    const double expect = oracle::expected_log_affine(InnovationDist::gaussian(), 1.1, 0.05) +
                          oracle::expected_log_affine(InnovationDist::gaussian(), 0.1, 0.3);
    CHECK(s.evidence.at("S") == Approx(expect).margin(1e-8));
    CHECK(s.verdict == (expect < 0 ? Verdict::Holds : Verdict::Fails));

    CHECK(garch11_strict_condition(garch11({0.1}, {3.0}, {0.5})).verdict == Verdict::Fails);

    ModelSpec wide = garch11({0.1}, {0.2}, {0.7});
    wide.p = 2;
    wide.alpha = {{0.2, 0.1}};
    CHECK(has_code([&] { garch11_strict_condition(wide); }, ErrorCode::NotGarch11));
}

TEST_CASE("Lyapunov estimate with unit innovations is exact", "[certify][lyapunov]") {
    const auto spec = garch11({0.1, 0.2}, {0.4, 0.1}, {0.3, 0.2}, InnovationDist::unit());
    LyapunovOptions opt;
    opt.years = 500;
    opt.reps = 4;
    const auto est = estimate_lyapunov(spec, opt);
    CHECK(est.gamma_hat == Approx(std::log(0.7) + std::log(0.3)).epsilon(1e-12));
    CHECK(est.std_error == 0.0);
    CHECK(lyapunov_certificate(est).verdict == Verdict::Holds);

    opt.mode = LyapunovMode::Stacked;
    const auto stacked = estimate_lyapunov(spec, opt);
    CHECK(stacked.gamma_hat == Approx(est.gamma_hat).epsilon(1e-2));
}

TEST_CASE("Lyapunov estimate is reproducible across worker counts", "[certify][lyapunov]") {
    const auto spec = garch11({0.1, 0.1}, {1.1, 0.1}, {0.05, 0.3});
    LyapunovOptions opt;
    opt.years = 400;
    opt.reps = 8;
    opt.seed = 99;
    opt.threads = 1;
    const auto one = estimate_lyapunov(spec, opt);
    opt.threads = 4;
    const auto four = estimate_lyapunov(spec, opt);
    CHECK(one.per_rep == four.per_rep);
    CHECK(one.gamma_hat == four.gamma_hat);
    opt.seed = 100;
    CHECK(estimate_lyapunov(spec, opt).gamma_hat != one.gamma_hat);
    opt.years = 10;
    CHECK(has_code([&] { estimate_lyapunov(spec, opt); }, ErrorCode::InvalidArgument));
}

TEST_CASE("Lyapunov estimate sits below log of the L1 radius", "[certify][lyapunov]") {
    const auto spec = garch11({0.1}, {0.2}, {0.7});
    LyapunovOptions opt;
    opt.years = 4000;
    opt.reps = 8;
    const auto est = estimate_lyapunov(spec, opt);
    CHECK(est.gamma_hat < std::log(0.9));
    const double quad = oracle::expected_log_affine(InnovationDist::gaussian(), 0.2, 0.7);
    CHECK(std::abs(est.gamma_hat - quad) < 4.0 * est.std_error + 2e-3);
}

TEST_CASE("ergodicity gate", "[certify][ergodicity]") {
    ErgodicityOptions opt;
    opt.mc_draws = 20000;
    const auto good = check_ergodicity(garch11({0.1}, {0.2}, {0.7}), opt);
    CHECK(good.verdict == Verdict::Holds);
    CHECK(good.evidence.at("rho_B") == Approx(0.7).epsilon(1e-12));
    CHECK(good.evidence.find("r").has_value());

    const auto bad = check_ergodicity(garch11({0.1}, {0.6}, {0.6}), opt);
    CHECK(bad.verdict == Verdict::Fails);
    CHECK(has_code([] { check_ergodicity(garch11({0.1}, {0.2}, {0.7}, InnovationDist::unit())); },
                   ErrorCode::InnovationNotAbsolutelyContinuous));

    opt.r_grid = {1.5};
    CHECK(has_code([&] { check_ergodicity(garch11({0.1}, {0.2}, {0.7}), opt); }, ErrorCode::InvalidArgument));
}

TEST_CASE("ergodicity on a seasonal higher-order spec", "[certify][ergodicity]") {
    ModelSpec spec;
    spec.period = 2;
    spec.p = 2;
    spec.q = 1;
    spec.alpha0 = {0.1, 0.2};
    spec.alpha = {{0.1, 0.05}, {0.2, 0.0}};
    spec.beta = {{0.6}, {0.5}};
    spec.innovation = InnovationDist::student_t(8.0);
    ErgodicityOptions opt;
    opt.mc_draws = 20000;
    opt.threads = 3;
    const auto a = check_ergodicity(spec, opt);
    CHECK(a.verdict == Verdict::Holds);
    opt.threads = 1;
    const auto b = check_ergodicity(spec, opt);
    CHECK(a.evidence.items() == b.evidence.items());
}
