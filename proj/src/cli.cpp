#include "pgarch/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgarch/certify.hpp"
#include "pgarch/error.hpp"
#include "pgarch/model.hpp"
#include "pgarch/moments.hpp"
#include "pgarch/parallel.hpp"
#include "pgarch/report.hpp"
#include "pgarch/simulate.hpp"

namespace pgarch::cli {

using nlohmann::json;

namespace {

struct Common {
    std::string spec_path;
    std::string format = "human";
    int threads = 0;
};

struct CertifyArgs {
    int max_moment_order = 2;
    bool ergodicity = false;
    bool lyapunov = false;
    bool garch11_strict = false;
    long long years = 10000;
    int reps = 32;
    std::uint64_t seed = 1;
    std::string mode = "seasonal";
    long long mc_draws = 100000;
};

struct MomentsArgs {
    int max_lag = -1;  // -1: 10 s
    std::string out;
};

struct SimulateArgs {
    long long years = 1000;
    long long burnin = kDefaultBurnin;
    std::uint64_t seed = 1;
    std::string out;
};

struct LyapunovArgs {
    long long years = 10000;
    int reps = 32;
    std::uint64_t seed = 1;
    std::string mode = "seasonal";
};

struct VerifyArgs {
    long long years = 200000;
    long long burnin = kDefaultBurnin;
    std::uint64_t seed = 1;
    int max_lag = 4;
};

/// %g-style rendering used throughout the human output.
std::string g(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(6) << value;
    return os.str();
}

void add_common(CLI::App& sub, Common& common) {
    sub.add_option("spec", common.spec_path, "model spec JSON file")->required();
    sub.add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({"human", "machine"}))
        ->capture_default_str();
    sub.add_option("--threads", common.threads, "worker cap (0: $PGARCH_THREADS or hardware)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

LyapunovMode parse_mode(const std::string& mode) {
    return mode == "stacked" ? LyapunovMode::Stacked : LyapunovMode::Seasonal;
}

json common_options(const Common& common, int threads) {
    return {{"spec_path", common.spec_path}, {"format", common.format}, {"threads", threads}};
}

void echo_options(std::ostream& out, const json& options) {
    out << "options:";
    for (const auto& [key, value] : options.items())
        out << ' ' << key << '=' << (value.is_string() ? value.get<std::string>() : value.dump());
    out << '\n';
}

json envelope(const std::string& command, const json& options, const ModelSpec& spec) {
    return {{"tool", "pgarch"},
            {"tool_version", std::string(kToolVersion)},
            {"command", command},
            {"options", options},
            {"spec_fingerprint", spec_fingerprint(spec)}};
}

/// Evidence keys shown in the one-line human summary of each check.
std::vector<std::string> headline_keys(const Certificate& cert) {
    switch (cert.check) {
        case CheckId::L1:
        case CheckId::Lr: return {"rho"};
        case CheckId::Lyapunov: return {"gamma_hat", "std_error"};
        case CheckId::Garch11Strict: return {"S"};
        case CheckId::Ergodicity: return {"rho_L1", "rho_B", "r", "E_norm_r"};
    }
    return {};
}

std::string headline(const Certificate& cert) {
    std::string line = cert.id() + ": " + std::string(to_string(cert.verdict));
    std::vector<std::string> parts;
    for (const auto& key : headline_keys(cert))
        if (auto value = cert.evidence.find(key)) parts.push_back(key + "=" + g(*value));
    if (!parts.empty()) {
        line += " (";
        for (std::size_t i = 0; i < parts.size(); ++i) line += (i ? ", " : "") + parts[i];
        line += ")";
    }
    return line;
}

int exit_for(const std::vector<Certificate>& certs) {
    bool inconclusive = false;
    for (const auto& c : certs) {
        if (c.verdict == Verdict::Fails) return kExitFails;
        if (c.verdict == Verdict::Inconclusive) inconclusive = true;
    }
    return inconclusive ? kExitInconclusive : kExitOk;
}

int emit_certificates(std::ostream& out, const Common& common, json options, const ModelSpec& spec,
                      const std::vector<Certificate>& certs, const std::string& command) {
    const int code = exit_for(certs);
    if (common.format == "machine") {
        auto doc = envelope(command, options, spec);
        json arr = json::array();
        const auto fp = spec_fingerprint(spec);
        for (const auto& c : certs) arr.push_back(certificate_to_json(c, fp));
        doc["certificates"] = arr;
        doc["exit_code"] = code;
        out << doc.dump(2) << '\n';
    } else {
        echo_options(out, options);
        for (const auto& c : certs) out << headline(c) << '\n';
    }
    return code;
}

int do_certify(std::ostream& out, const Common& common, const CertifyArgs& args) {
    const auto spec = load_spec(common.spec_path);
    const int threads = resolve_threads(common.threads);
    auto options = common_options(common, threads);
    options["max_moment_order"] = args.max_moment_order;
    options["ergodicity"] = args.ergodicity;
    options["lyapunov"] = args.lyapunov;
    options["garch11_strict"] = args.garch11_strict;
    options["years"] = args.years;
    options["reps"] = args.reps;
    options["seed"] = args.seed;
    options["mode"] = args.mode;
    options["mc_draws"] = args.mc_draws;

    std::vector<Certificate> certs;
    certs.push_back(check_L1(spec));
    for (int r = 2; r <= args.max_moment_order; ++r) certs.push_back(check_Lr(spec, r));
    if (args.garch11_strict) {
        if (!is_garch11(spec))
            throw Error(ErrorCode::InvalidArgument, "garch11_strict: spec is not PGARCH(1,1)");
        certs.push_back(garch11_strict_condition(spec));
    }
    if (args.lyapunov) {
        LyapunovOptions lo;
        lo.years = args.years;
        lo.reps = args.reps;
        lo.seed = args.seed;
        lo.mode = parse_mode(args.mode);
        lo.threads = threads;
        certs.push_back(lyapunov_certificate(estimate_lyapunov(spec, lo)));
    }
    if (args.ergodicity) {
        ErgodicityOptions eo;
        eo.mc_draws = args.mc_draws;
        eo.seed = args.seed;
        eo.threads = threads;
        certs.push_back(check_ergodicity(spec, eo));
    }
    return emit_certificates(out, common, options, spec, certs, "certify");
}

int do_moments(std::ostream& out, std::ostream& err, const Common& common, const MomentsArgs& args) {
    const auto spec = load_spec(common.spec_path);
    const int max_lag = args.max_lag >= 0 ? args.max_lag : default_max_lag(spec);
    auto options = common_options(common, resolve_threads(common.threads));
    options["max_lag"] = max_lag;
    options["out"] = args.out;

    std::vector<Certificate> gates{check_L1(spec), check_Lr(spec, 2)};
    for (const auto& gate : gates) {
        if (gate.verdict == Verdict::Holds) continue;
        if (common.format == "machine") {
            auto doc = envelope("moments", options, spec);
            json arr = json::array();
            for (const auto& c : gates) arr.push_back(certificate_to_json(c, spec_fingerprint(spec)));
            doc["certificates"] = arr;
            doc["moments"] = nullptr;
            doc["exit_code"] = kExitNotStationary;
            out << doc.dump(2) << '\n';
        } else {
            echo_options(out, options);
            for (const auto& c : gates) out << headline(c) << '\n';
        }
        err << "moments: " << gate.id() << " condition is not satisfied; moments do not exist\n";
        return kExitNotStationary;
    }

    const auto table = compute_moments(spec, max_lag);
    if (!args.out.empty()) {
        std::ofstream file(args.out);
        if (!file) throw SpecError("out", "cannot open " + args.out + " for writing");
        write_lag_csv(table, file);
    }
    if (common.format == "machine") {
        auto doc = envelope("moments", options, spec);
        json arr = json::array();
        for (const auto& c : gates) arr.push_back(certificate_to_json(c, spec_fingerprint(spec)));
        doc["certificates"] = arr;
        doc["moments"] = moments_to_json(table);
        doc["exit_code"] = kExitOk;
        out << doc.dump(2) << '\n';
        return kExitOk;
    }
    echo_options(out, options);
    for (const auto& c : gates) out << headline(c) << '\n';
    out << "season  μ₁=E{x²}  E{h}  μ₂=E{x⁴}  E{h²}\n";
    for (int v = 1; v <= table.period(); ++v)
        out << v << "  " << g(table.e_x2(v)) << "  " << g(table.e_h(v)) << "  " << g(table.e_x4(v)) << "  "
            << g(table.e_h2(v)) << '\n';
    if (is_garch11(spec)) {
        const auto cf = garch11_closed_forms(spec);
        out << "season  θ₁  θ₂\n";
        for (int v = 1; v <= cf.period; ++v)
            out << v << "  " << g(cf.theta1[static_cast<std::size_t>(v - 1)]) << "  "
                << g(cf.theta2[static_cast<std::size_t>(v - 1)]) << '\n';
    }
    out << "season  lag  γ_v(h)  Cov(x²_v, x²_{v-h})\n";
    for (int v = 1; v <= table.period(); ++v)
        for (int h = 0; h <= table.max_lag(); ++h)
            out << v << "  " << h << "  " << g(table.cross_x2(v, h)) << "  " << g(table.autocov_sq(v, h))
                << '\n';
    return kExitOk;
}

int do_simulate(std::ostream& out, const Common& common, const SimulateArgs& args) {
    const auto spec = load_spec(common.spec_path);
    auto options = common_options(common, resolve_threads(common.threads));
    options["years"] = args.years;
    options["burnin"] = args.burnin;
    options["seed"] = args.seed;
    options["out"] = args.out;

    SimulationOptions so;
    so.n_years = args.years;
    so.burnin_years = args.burnin;
    so.seed = args.seed;
    const auto path = simulate_path(spec, so);

    std::ofstream file(args.out);
    if (!file) throw SpecError("out", "cannot open " + args.out + " for writing");
    write_path_csv(path, file);

    if (common.format == "machine") {
        auto doc = envelope("simulate", options, spec);
        doc["observations"] = path.size();
        doc["exit_code"] = kExitOk;
        out << doc.dump(2) << '\n';
    } else {
        echo_options(out, options);
        out << "wrote " << path.size() << " observations (" << path.n_years << " years x " << path.period
            << " seasons) to " << args.out << '\n';
    }
    return kExitOk;
}

int do_lyapunov(std::ostream& out, const Common& common, const LyapunovArgs& args) {
    const auto spec = load_spec(common.spec_path);
    const int threads = resolve_threads(common.threads);
    auto options = common_options(common, threads);
    options["years"] = args.years;
    options["reps"] = args.reps;
    options["seed"] = args.seed;
    options["mode"] = args.mode;

    LyapunovOptions lo;
    lo.years = args.years;
    lo.reps = args.reps;
    lo.seed = args.seed;
    lo.mode = parse_mode(args.mode);
    lo.threads = threads;
    const auto est = estimate_lyapunov(spec, lo);
    const auto cert = lyapunov_certificate(est);
    const int code = exit_for({cert});
    if (common.format == "machine") {
        auto doc = envelope("lyapunov", options, spec);
        doc["estimate"] = lyapunov_to_json(est);
        doc["certificates"] = json::array({certificate_to_json(cert, spec_fingerprint(spec))});
        doc["exit_code"] = code;
        out << doc.dump(2) << '\n';
    } else {
        echo_options(out, options);
        out << "γ_L = " << g(est.gamma_hat) << " ± " << g(est.std_error) << " per cycle ("
            << g(est.per_observation()) << " per observation)\n";
        out << headline(cert) << '\n';
    }
    return code;
}

int do_verify(std::ostream& out, std::ostream& err, const Common& common, const VerifyArgs& args) {
    const auto spec = load_spec(common.spec_path);
    auto options = common_options(common, resolve_threads(common.threads));
    options["years"] = args.years;
    options["burnin"] = args.burnin;
    options["seed"] = args.seed;
    options["max_lag"] = args.max_lag;

    if (const auto gate = check_Lr(spec, 2); gate.verdict != Verdict::Holds) {
        err << "verify: L2 condition is not satisfied (rho=" << g(gate.evidence.at("rho"))
            << "); analytic moments do not exist\n";
        return kExitNotStationary;
    }
    VerifyOptions vo;
    vo.n_years = args.years;
    vo.burnin_years = args.burnin;
    vo.seed = args.seed;
    vo.max_lag = args.max_lag;
    const auto report = verify(spec, vo);
    const int code = report.pass ? kExitOk : kExitFails;
    if (common.format == "machine") {
        auto doc = envelope("verify", options, spec);
        doc["verification"] = verification_to_json(report);
        doc["exit_code"] = code;
        out << doc.dump(2) << '\n';
    } else {
        echo_options(out, options);
        out << "quantity  season  lag  analytic  empirical  se  z\n";
        for (const auto& r : report.rows)
            out << r.quantity << "  " << r.season << "  " << r.lag << "  " << g(r.analytic) << "  "
                << g(r.empirical) << "  " << g(r.se) << "  " << g(r.z) << '\n';
        out << "verify: " << (report.pass ? "pass" : "fail") << " (max |z|=" << g(report.max_abs_z)
            << ", fraction |z|>3=" << g(report.fraction_over_3) << ", worst: " << report.worst << ")\n";
        for (const auto& note : report.notes) out << "note: " << note << '\n';
    }
    return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Periodic GARCH stationarity, moments and simulation", "pgarch"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    Common common;
    CertifyArgs certify_args;
    MomentsArgs moments_args;
    SimulateArgs simulate_args;
    LyapunovArgs lyapunov_args;
    VerifyArgs verify_args;

    auto* certify = app.add_subcommand("certify", "stationarity, moment and ergodicity certificates");
    add_common(*certify, common);
    certify->add_option("--max-moment-order", certify_args.max_moment_order, "highest r for the Lr checks")
        ->check(CLI::Range(1, 16))
        ->capture_default_str();
    certify->add_flag("--ergodicity", certify_args.ergodicity, "check the geometric-ergodicity hypotheses");
    certify->add_flag("--lyapunov", certify_args.lyapunov, "estimate the top Lyapunov exponent");
    certify->add_flag("--garch11-strict", certify_args.garch11_strict,
                      "log-moment strict stationarity condition (PGARCH(1,1) only)");
    certify->add_option("--years", certify_args.years, "Lyapunov product length")->capture_default_str();
    certify->add_option("--reps", certify_args.reps, "Lyapunov replications")->capture_default_str();
    certify->add_option("--seed", certify_args.seed, "Monte Carlo seed")->capture_default_str();
    certify->add_option("--mode", certify_args.mode, "Lyapunov product")
        ->check(CLI::IsMember({"seasonal", "stacked"}))
        ->capture_default_str();
    certify->add_option("--mc-draws", certify_args.mc_draws, "ergodicity Monte Carlo draws")
        ->capture_default_str();

    auto* moments = app.add_subcommand("moments", "analytic seasonal moments and lag table");
    add_common(*moments, common);
    moments->add_option("--max-lag", moments_args.max_lag, "largest lag (default 10 s)")
        ->check(CLI::NonNegativeNumber);
    moments->add_option("--out", moments_args.out, "write the lag table CSV here");

    auto* simulate = app.add_subcommand("simulate", "simulate a path to CSV");
    add_common(*simulate, common);
    simulate->add_option("--years", simulate_args.years, "recorded years")->required();
    simulate->add_option("--burnin", simulate_args.burnin, "discarded years")->capture_default_str();
    simulate->add_option("--seed", simulate_args.seed, "RNG seed")->required();
    simulate->add_option("--out", simulate_args.out, "CSV output file")->required();

    auto* lyapunov = app.add_subcommand("lyapunov", "top Lyapunov exponent estimate");
    add_common(*lyapunov, common);
    lyapunov->add_option("--years", lyapunov_args.years, "product length")->capture_default_str();
    lyapunov->add_option("--reps", lyapunov_args.reps, "replications")->capture_default_str();
    lyapunov->add_option("--seed", lyapunov_args.seed, "seed")->capture_default_str();
    lyapunov->add_option("--mode", lyapunov_args.mode, "seasonal or stacked product")
        ->check(CLI::IsMember({"seasonal", "stacked"}))
        ->capture_default_str();

    auto* verify_cmd = app.add_subcommand("verify", "analytic versus simulated moments");
    add_common(*verify_cmd, common);
    verify_cmd->add_option("--years", verify_args.years, "simulated years")->capture_default_str();
    verify_cmd->add_option("--burnin", verify_args.burnin, "discarded years")->capture_default_str();
    verify_cmd->add_option("--seed", verify_args.seed, "seed")->capture_default_str();
    verify_cmd->add_option("--max-lag", verify_args.max_lag, "largest lag compared")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*certify) return do_certify(out, common, certify_args);
        if (*moments) return do_moments(out, err, common, moments_args);
        if (*simulate) return do_simulate(out, common, simulate_args);
        if (*lyapunov) return do_lyapunov(out, common, lyapunov_args);
        if (*verify_cmd) return do_verify(out, err, common, verify_args);
    } catch (const OverflowError& e) {
        err << "overflow: " << e.what() << '\n';
        return kExitOverflow;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return e.code() == ErrorCode::SpectralRadiusAtLeastOne ? kExitNotStationary : kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace pgarch::cli
