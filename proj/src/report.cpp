#include "pgarch/report.hpp"

#include <cmath>
#include <ostream>

namespace pgarch {

using nlohmann::json;

json json_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return value;
}

json certificate_to_json(const Certificate& cert, const std::string& spec_fingerprint) {
    json evidence = json::object();
    for (const auto& [name, value] : cert.evidence.items()) evidence[name] = json_number(value);
    return {
        {"check_id", cert.id()},
        {"verdict", std::string(to_string(cert.verdict))},
        {"evidence", evidence},
        {"notes", cert.notes},
        {"spec_fingerprint", spec_fingerprint},
        {"tool_version", std::string(kToolVersion)},
    };
}

namespace {

json vec_to_json(const Vec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(json_number(v(i)));
    return out;
}

}  // namespace

json moments_to_json(const MomentTable& table) {
    json seasons = json::array();
    for (int v = 1; v <= table.period(); ++v) {
        seasons.push_back({
            {"season", v},
            {"E_x2", json_number(table.e_x2(v))},
            {"E_h", json_number(table.e_h(v))},
            {"E_x4", json_number(table.e_x4(v))},
            {"E_h2", json_number(table.e_h2(v))},
            {"mu1", vec_to_json(table.mu1(v))},
            {"mu2", vec_to_json(table.mu2(v))},
        });
    }
    json lags = json::array();
    for (int v = 1; v <= table.period(); ++v)
        for (int h = 0; h <= table.max_lag(); ++h)
            lags.push_back({{"season", v},
                            {"lag", h},
                            {"gamma_first_component", json_number(table.cross_x2(v, h))},
                            {"autocov_sq", json_number(table.autocov_sq(v, h))}});
    return {{"period", table.period()},
            {"state_dim", table.dim()},
            {"max_lag", table.max_lag()},
            {"seasons", seasons},
            {"lag_table", lags}};
}

void write_lag_csv(const MomentTable& table, std::ostream& out) {
    out << "season,lag,gamma_first_component,autocov_sq\n";
    const auto old_precision = out.precision(17);
    for (int v = 1; v <= table.period(); ++v)
        for (int h = 0; h <= table.max_lag(); ++h)
            out << v << ',' << h << ',' << table.cross_x2(v, h) << ',' << table.autocov_sq(v, h) << '\n';
    out.precision(old_precision);
}

json lyapunov_to_json(const LyapunovEstimate& est) {
    json reps = json::array();
    for (double g : est.per_rep) reps.push_back(json_number(g));
    return {{"gamma_hat", json_number(est.gamma_hat)},
            {"std_error", json_number(est.std_error)},
            {"per_observation", json_number(est.per_observation())},
            {"reps", est.reps},
            {"years", est.years},
            {"seed", est.seed},
            {"mode", std::string(to_string(est.mode))},
            {"period", est.period},
            {"degenerate", est.degenerate},
            {"per_rep", reps}};
}

json verification_to_json(const VerificationReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"quantity", r.quantity},
                        {"season", r.season},
                        {"lag", r.lag},
                        {"analytic", json_number(r.analytic)},
                        {"empirical", json_number(r.empirical)},
                        {"se", json_number(r.se)},
                        {"z", json_number(r.z)}});
    return {{"pass", report.pass},
            {"max_abs_z", json_number(report.max_abs_z)},
            {"fraction_over_3", json_number(report.fraction_over_3)},
            {"worst", report.worst},
            {"notes", report.notes},
            {"rows", rows}};
}

}  // namespace pgarch
