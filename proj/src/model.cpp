#include "pgarch/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/digamma.hpp>

#include "pgarch/error.hpp"

namespace pgarch {

std::string to_string(const InnovationDist& dist) {
    switch (dist.kind) {
        case InnovationDist::Kind::Gaussian: return "gaussian";
        case InnovationDist::Kind::Unit: return "unit";
        case InnovationDist::Kind::StudentT: {
            std::ostringstream os;
            os << "student_t(" << dist.nu << ")";
            return os.str();
        }
    }
    return "unknown";
}

double innovation_moment(const InnovationDist& dist, int m) {
    if (m < 0) throw Error(ErrorCode::InvalidArgument, "innovation_moment: m must be >= 0");
    if (m <= 1) return 1.0;
    switch (dist.kind) {
        case InnovationDist::Kind::Unit: return 1.0;
        case InnovationDist::Kind::Gaussian: {
            // (2m-1)!!
            double k = 1.0;
            for (int j = 1; j <= m; ++j) k *= 2.0 * j - 1.0;
            return k;
        }
        case InnovationDist::Kind::StudentT: {
            const double nu = dist.nu;
            if (2.0 * m >= nu) return std::numeric_limits<double>::infinity();
            // E{T^{2m}} ((nu-2)/nu)^m = (nu-2)^m prod_{k=1..m} (2k-1)/(nu-2k)
            double k = 1.0;
            for (int j = 1; j <= m; ++j) k *= (2.0 * j - 1.0) * (nu - 2.0) / (nu - 2.0 * j);
            return k;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double expected_log_eta(const InnovationDist& dist) {
    using boost::math::digamma;
    switch (dist.kind) {
        case InnovationDist::Kind::Unit: return 0.0;
        case InnovationDist::Kind::Gaussian: return digamma(0.5) + std::log(2.0);
        case InnovationDist::Kind::StudentT:
            // T^2 ~ F(1, nu) and eta = T^2 (nu-2)/nu
            return digamma(0.5) - digamma(0.5 * dist.nu) + std::log(dist.nu - 2.0);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

int ModelSpec::wrap(long long season) const noexcept {
    const long long s = period;
    long long r = (season - 1) % s;
    if (r < 0) r += s;
    return static_cast<int>(r + 1);
}

namespace {

void require(bool ok, ErrorCode code, const std::string& msg) {
    if (!ok) throw Error(code, msg);
}

void check_row_block(const std::vector<std::vector<double>>& rows, int s, int order,
                     const char* field) {
    require(static_cast<int>(rows.size()) == s, ErrorCode::BadDimensions,
            std::string(field) + ": expected " + std::to_string(s) + " rows (one per season), got " +
                std::to_string(rows.size()));
    for (std::size_t v = 0; v < rows.size(); ++v) {
        require(static_cast<int>(rows[v].size()) == order, ErrorCode::BadDimensions,
                std::string(field) + "[" + std::to_string(v) + "]: expected " +
                    std::to_string(order) + " entries, got " + std::to_string(rows[v].size()));
        for (std::size_t i = 0; i < rows[v].size(); ++i) {
            const double x = rows[v][i];
            const std::string where =
                std::string(field) + "[" + std::to_string(v) + "][" + std::to_string(i) + "]";
            require(std::isfinite(x), ErrorCode::NonFiniteValue, where + ": not finite");
            require(x >= 0.0, ErrorCode::NegativeCoefficient, where + ": must be >= 0");
        }
    }
}

}  // namespace

ModelSpec validate_spec(const ModelSpec& raw) {
    require(raw.period >= 1, ErrorCode::BadDimensions, "period: must be >= 1");
    require(raw.p >= 0, ErrorCode::BadDimensions, "p: must be >= 0");
    require(raw.q >= 0, ErrorCode::BadDimensions, "q: must be >= 0");
    require(raw.p + raw.q >= 1, ErrorCode::BadDimensions, "p, q: p + q must be >= 1");

    require(static_cast<int>(raw.alpha0.size()) == raw.period, ErrorCode::BadDimensions,
            "alpha0: expected " + std::to_string(raw.period) + " entries, got " +
                std::to_string(raw.alpha0.size()));
    for (std::size_t v = 0; v < raw.alpha0.size(); ++v) {
        const std::string where = "alpha0[" + std::to_string(v) + "]";
        require(std::isfinite(raw.alpha0[v]), ErrorCode::NonFiniteValue, where + ": not finite");
        require(raw.alpha0[v] > 0.0, ErrorCode::NonPositiveIntercept, where + ": must be > 0");
    }
    check_row_block(raw.alpha, raw.period, raw.p, "alpha");
    check_row_block(raw.beta, raw.period, raw.q, "beta");

    if (raw.innovation.kind == InnovationDist::Kind::StudentT) {
        require(std::isfinite(raw.innovation.nu) && raw.innovation.nu > 4.0,
                ErrorCode::InvalidInnovation, "innovation.nu: student_t requires nu > 4");
    }
    return raw;
}

ModelSpec normalize_orders(const ModelSpec& spec) {
    ModelSpec out = spec;
    const int n = std::max({spec.p, spec.q, 1});
    out.p = n;
    out.q = n;
    for (auto& row : out.alpha) row.resize(static_cast<std::size_t>(n), 0.0);
    for (auto& row : out.beta) row.resize(static_cast<std::size_t>(n), 0.0);
    return out;
}

bool is_garch11(const ModelSpec& spec) { return std::max({spec.p, spec.q, 1}) == 1; }

namespace {

const nlohmann::json& field(const nlohmann::json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw SpecError(key, "missing");
    return *it;
}

int read_int(const nlohmann::json& doc, const char* key) {
    const auto& v = field(doc, key);
    if (!v.is_number_integer()) throw SpecError(key, "expected an integer");
    return v.get<int>();
}

std::vector<double> read_vector(const nlohmann::json& v, const std::string& name) {
    if (!v.is_array()) throw SpecError(name, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
            throw SpecError(name + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

std::vector<std::vector<double>> read_matrix(const nlohmann::json& doc, const char* key) {
    const auto& v = field(doc, key);
    if (!v.is_array()) throw SpecError(key, "expected an array of per-season arrays");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(read_vector(v[i], std::string(key) + "[" + std::to_string(i) + "]"));
    return out;
}

InnovationDist read_innovation(const nlohmann::json& doc) {
    const auto& v = field(doc, "innovation");
    if (!v.is_object()) throw SpecError("innovation", "expected an object with a \"kind\" field");
    auto kind_it = v.find("kind");
    if (kind_it == v.end() || !kind_it->is_string())
        throw SpecError("innovation.kind", "missing or not a string");
    const auto kind = kind_it->get<std::string>();
    if (kind == "gaussian") return InnovationDist::gaussian();
    if (kind == "unit") return InnovationDist::unit();
    if (kind == "student_t") {
        auto nu = v.find("nu");
        if (nu == v.end() || !nu->is_number())
            throw SpecError("innovation.nu", "student_t requires a numeric nu");
        return InnovationDist::student_t(nu->get<double>());
    }
    throw SpecError("innovation.kind", "unknown kind \"" + kind + "\"");
}

}  // namespace

ModelSpec spec_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw SpecError("<root>", "expected a JSON object");
    ModelSpec spec;
    spec.period = read_int(doc, "period");
    spec.p = read_int(doc, "p");
    spec.q = read_int(doc, "q");
    spec.alpha0 = read_vector(field(doc, "alpha0"), "alpha0");
    spec.alpha = read_matrix(doc, "alpha");
    spec.beta = read_matrix(doc, "beta");
    spec.innovation = read_innovation(doc);
    return validate_spec(spec);
}

nlohmann::json spec_to_json(const ModelSpec& spec) {
    nlohmann::json innovation;
    switch (spec.innovation.kind) {
        case InnovationDist::Kind::Gaussian: innovation = {{"kind", "gaussian"}}; break;
        case InnovationDist::Kind::Unit: innovation = {{"kind", "unit"}}; break;
        case InnovationDist::Kind::StudentT:
            innovation = {{"kind", "student_t"}, {"nu", spec.innovation.nu}};
            break;
    }
    return {
        {"period", spec.period}, {"p", spec.p},         {"q", spec.q},
        {"alpha0", spec.alpha0}, {"alpha", spec.alpha}, {"beta", spec.beta},
        {"innovation", innovation},
    };
}

ModelSpec load_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("spec_path", "file not found (" + path.string() + ")");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw SpecError("spec_path", std::string("invalid JSON: ") + e.what());
    }
    return spec_from_json(doc);
}

std::string spec_fingerprint(const ModelSpec& spec) {
    // FNV-1a over the canonical dump; nlohmann::json objects keep keys sorted.
    const std::string canonical = spec_to_json(spec).dump();
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << hash;
    return os.str();
}

}  // namespace pgarch
