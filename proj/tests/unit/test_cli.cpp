#include "catch_amalgamated.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgarch/cli.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kSpecs = PGARCH_SPECS_DIR;
const fs::path kGolden = PGARCH_GOLDEN_DIR;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "pgarch");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = pgarch::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string spec(const char* name) { return (kSpecs / name).string(); }

/// Replaces every leaf with its JSON type name; arrays keep the shape of their first element.
json shape(const json& doc) {
    if (doc.is_object()) {
        json out = json::object();
        for (const auto& [key, value] : doc.items()) out[key] = shape(value);
        return out;
    }
    if (doc.is_array()) return doc.empty() ? json::array() : json::array({shape(doc.front())});
    if (doc.is_string()) return "string";
    if (doc.is_boolean()) return "boolean";
    if (doc.is_number()) return "number";
    return "null";
}

void check_golden(const std::string& name, const std::string& output) {
    const json doc = json::parse(output);
    const json actual = shape(doc);
    const fs::path file = kGolden / (name + ".schema.json");
    if (std::getenv("PGARCH_REGENERATE_GOLDEN") != nullptr) {
        std::ofstream(file) << actual.dump(2) << '\n';
    }
    std::ifstream in(file);
    REQUIRE(in.good());
    const json expected = json::parse(in);
    INFO("schema of " << name << ":\n" << actual.dump(2));
    CHECK(actual == expected);
}

}  // namespace

TEST_CASE("certify prints one verdict line per check", "[cli]") {
    const auto ok = run({"certify", spec("garch11.json")});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("L1: holds (rho=0.9)") != std::string::npos);
    CHECK(ok.out.find("L2: holds (rho=0.89)") != std::string::npos);
    CHECK(ok.out.rfind("options:", 0) == 0);

    const auto bad = run({"certify", spec("explosive_l1.json")});
    CHECK(bad.code == 2);
    CHECK(bad.out.find("L1: fails (rho=1.2)") != std::string::npos);

    const auto higher = run({"certify", spec("garch11.json"), "--max-moment-order", "3"});
    CHECK(higher.code == 2);
    CHECK(higher.out.find("L3: fails") != std::string::npos);
}

TEST_CASE("usage and configuration errors exit 1 naming the field", "[cli]") {
    const auto missing = run({"simulate", "missing.json", "--years", "10", "--seed", "1", "--out", "x.csv"});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("spec_path: file not found") != std::string::npos);

    CHECK(run({}).code == 1);
    CHECK(run({"certify"}).code == 1);
    CHECK(run({"certify", spec("garch11.json"), "--format", "xml"}).code == 1);
    CHECK(run({"lyapunov", spec("garch11.json"), "--mode", "diagonal"}).code == 1);
    const auto few = run({"lyapunov", spec("garch11.json"), "--years", "5"});
    CHECK(few.code == 1);
    CHECK(few.err.find("years") != std::string::npos);
}

TEST_CASE("moments exit 4 without stationarity", "[cli]") {
    const auto res = run({"moments", spec("explosive_l1.json")});
    CHECK(res.code == 4);
    CHECK(res.out.find("L1: fails") != std::string::npos);
    CHECK(run({"verify", spec("explosive_l1.json"), "--years", "100"}).code == 4);
}

TEST_CASE("moments writes the lag table CSV", "[cli]") {
    const auto csv = fs::temp_directory_path() / "pgarch_cli_lags.csv";
    const auto res = run({"moments", spec("seasonal2.json"), "--max-lag", "3", "--out", csv.string()});
    CHECK(res.code == 0);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "season,lag,gamma_first_component,autocov_sq");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 2 * 4);
    fs::remove(csv);
}

TEST_CASE("simulate exits 5 on overflow", "[cli]") {
    const auto tmp = fs::temp_directory_path();
    const auto explosive = tmp / "pgarch_cli_explosive.json";
    std::ofstream(explosive) << R"({"period": 1, "p": 1, "q": 1, "alpha0": [0.1], "alpha": [[0.9]],
        "beta": [[0.9]], "innovation": {"kind": "gaussian"}})";
    const auto res = run({"simulate", explosive.string(), "--years", "100000", "--seed", "1", "--out",
                          (tmp / "pgarch_cli_explosive.csv").string()});
    CHECK(res.code == 5);
    CHECK(res.err.find("season 1") != std::string::npos);
    fs::remove(explosive);
    fs::remove(tmp / "pgarch_cli_explosive.csv");
}

TEST_CASE("machine output is a single JSON document with a pinned schema", "[cli][golden]") {
    const auto tmp = fs::temp_directory_path();

    const auto certify = run({"certify", spec("garch11.json"), "--format", "machine", "--lyapunov", "--years",
                              "200", "--reps", "4", "--ergodicity", "--mc-draws", "2000", "--garch11-strict"});
    CHECK(certify.code == 0);
    check_golden("certify", certify.out);
    const auto doc = json::parse(certify.out);
    CHECK(doc["exit_code"] == 0);
    CHECK(doc["options"]["reps"] == 4);
    CHECK(doc["certificates"][0]["check_id"] == "L1");
    CHECK(doc["certificates"][0]["verdict"] == "holds");

    const auto moments = run({"moments", spec("seasonal2.json"), "--format", "machine", "--max-lag", "2"});
    CHECK(moments.code == 0);
    check_golden("moments", moments.out);

    const auto lyapunov =
        run({"lyapunov", spec("seasonal2.json"), "--format", "machine", "--years", "200", "--reps", "4"});
    CHECK(lyapunov.code == 0);
    check_golden("lyapunov", lyapunov.out);

    const auto verify =
        run({"verify", spec("garch11.json"), "--format", "machine", "--years", "5000", "--max-lag", "2"});
    check_golden("verify", verify.out);

    const auto csv = tmp / "pgarch_cli_path.csv";
    const auto simulate = run({"simulate", spec("seasonal2.json"), "--format", "machine", "--years", "50",
                               "--seed", "3", "--out", csv.string()});
    CHECK(simulate.code == 0);
    check_golden("simulate", simulate.out);
    fs::remove(csv);
}

TEST_CASE("exit codes do not depend on the worker count", "[cli]") {
    const std::vector<std::string> base{"certify", spec("seasonal2.json"), "--lyapunov", "--years", "300",
                                        "--reps", "6", "--format", "machine"};
    auto one = base;
    one.insert(one.end(), {"--threads", "1"});
    auto three = base;
    three.insert(three.end(), {"--threads", "3"});
    const auto a = json::parse(run(one).out);
    const auto b = json::parse(run(three).out);
    CHECK(a["exit_code"] == b["exit_code"]);
    CHECK(a["certificates"] == b["certificates"]);
}
