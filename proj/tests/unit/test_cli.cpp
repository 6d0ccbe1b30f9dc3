#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hazardlens/cli.hpp"
#include "json.hpp"

namespace hazardlens::cli {
namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        rows.push_back(fields);
    }
    return rows;
}

class ScopedEnv {
public:
    ScopedEnv(const char* name, const char* value) : name_(name) { ::setenv(name, value, 1); }
    ~ScopedEnv() { ::unsetenv(name_); }

private:
    const char* name_;
};

TEST(CliNntCurve, TrialsAAndB) {
    const Outcome o = invoke({"nnt-curve", "--model", "exp:0.1", "--model", "exp:0.6", "--hr", "0.6"});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    const auto rows = csv_rows(o.out);
    ASSERT_EQ(rows.size(), 121u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "nnt_1", "nnt_2"}));
    EXPECT_EQ(std::stod(rows[10][0]), 1.0);
    EXPECT_NEAR(std::stod(rows[10][1]), 27.08, 0.01);
    EXPECT_NEAR(std::stod(rows[10][2]), 6.72, 0.01);
    for (std::size_t i = 60; i <= 120; ++i) {
        EXPECT_LT(std::stod(rows[i][1]), std::stod(rows[i][2])) << "t=" << rows[i][0];
    }
}

TEST(CliNntCurve, BitStableAcrossRuns) {
    const std::vector<std::string> args = {"nnt-curve", "--model", "poly:0.1,0.01", "--hr", "0.7"};
    EXPECT_EQ(invoke(args).out, invoke(args).out);
}

TEST(CliNntCurve, SvgArtifact) {
    const auto path = std::filesystem::temp_directory_path() / "hazardlens_test_curve.svg";
    const Outcome o = invoke({"nnt-curve", "--model", "exp:0.1", "--hr", "0.6", "--svg", path.string()});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    std::ifstream in(path);
    const std::string svg((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("<polyline"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    std::filesystem::remove(path);

    const Outcome s = invoke({"nnt-curve", "--model", "exp:0.1", "--hr", "0.6", "--format", "svg"});
    EXPECT_EQ(s.out.rfind("<svg", 0), 0u);
}

TEST(CliMeasures, JsonRoundTrip) {
    const Outcome o = invoke({"measures", "--model", "exp:0.1", "--hr", "0.6", "--time", "1"});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    const auto j = nlohmann::json::parse(o.out);
    EXPECT_EQ(j["model"], "exp:0.1");
    EXPECT_NEAR(j["arr"].get<double>(), 0.036927, 1e-6);
    EXPECT_EQ(j["nnt_display"].get<long>(), 27);
    EXPECT_NEAR(j["md"].get<double>(), 4.6210, 1e-3);
    EXPECT_NEAR(j["mst_ratio"].get<double>(), 0.6, 1e-12);
}

TEST(CliMeasures, NoEffectIsInf) {
    const Outcome o = invoke({"measures", "--model", "exp:0.1", "--hr", "1", "--time", "1"});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    const auto j = nlohmann::json::parse(o.out);
    EXPECT_EQ(j["nnt"], "inf");
    EXPECT_TRUE(j["nnt_display"].is_null());
}

TEST(CliMeasures, EnvironmentFormat) {
    ScopedEnv env("HAZARDLENS_FORMAT", "csv");
    const Outcome o = invoke({"measures", "--model", "exp:0.6", "--hr", "0.6"});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    EXPECT_EQ(o.out.rfind("model,hr,", 0), 0u);
    const Outcome flag = invoke({"measures", "--model", "exp:0.6", "--hr", "0.6", "--format", "json"});
    EXPECT_EQ(flag.out.front(), '{');
}

TEST(CliMeasures, OutFile) {
    const auto path = std::filesystem::temp_directory_path() / "hazardlens_test_measures.json";
    const Outcome o = invoke({"measures", "--model", "exp:0.6", "--hr", "0.6", "--out", path.string()});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    EXPECT_TRUE(o.out.empty());
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["nnt_display"].get<long>(), 7);
    std::filesystem::remove(path);
}

TEST(CliErrors, ExitCodes) {
    EXPECT_EQ(invoke({"measures", "--model", "exp:-1", "--hr", "0.6"}).code, kExitUsage);
    EXPECT_EQ(invoke({"measures", "--model", "gompertz:1", "--hr", "0.6"}).code, kExitUsage);
    EXPECT_EQ(invoke({"measures", "--hr", "0.6"}).code, kExitUsage);
    EXPECT_EQ(invoke({"no-such-command"}).code, kExitUsage);
    EXPECT_EQ(invoke({"asymptotics", "--poly", "1,0.1", "--terms", "10"}).code, kExitUsage);
    // Mean survival near 1e300 is beyond what the quadrature can resolve.
    EXPECT_EQ(invoke({"measures", "--model", "poly:1e-300", "--hr", "0.6"}).code, kExitNumeric);
    EXPECT_EQ(invoke({"icer", "--model", "exp:0.1", "--hr", "1", "--c0", "1", "--ce", "2"}).code, kExitUsage);
    const Outcome bad = invoke({"measures", "--model", "exp:-1", "--hr", "0.6"});
    EXPECT_FALSE(bad.err.empty());
    EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST(CliSweep, TrendAndCriticalRate) {
    const Outcome o = invoke({"sweep", "--gammas", "0.05:3:0.05", "--hrs", "0.6", "--time", "1"});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    const auto rows = csv_rows(o.out);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"gamma", "arr_hr0.6", "md_hr0.6"}));
    const auto& trend = rows[rows.size() - 2];
    const auto& crit = rows.back();
    ASSERT_EQ(trend[0], "#trend");
    EXPECT_EQ(trend[1].rfind("unimodal peak@", 0), 0u);
    EXPECT_NEAR(std::stod(trend[1].substr(14)), 1.27706, 0.05);
    EXPECT_EQ(trend[2], "decreasing");
    ASSERT_EQ(crit[0], "#gamma_crit");
    EXPECT_NEAR(std::stod(crit[1]), 1.27706, 1e-5);
}

TEST(CliIcer, ExactAndApprox) {
    const Outcome o = invoke({"icer", "--model", "exp:0.1", "--hr", "0.6", "--c0", "0", "--ce", "100"});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    const auto j = nlohmann::json::parse(o.out);
    // c0 = 0: exact and approximate forms coincide, 100 / (1 - 0.6) = 250.
    EXPECT_NEAR(j["icer_exact"].get<double>(), 250.0, 1e-9);
    EXPECT_NEAR(j["icer_approx"].get<double>(), 250.0, 1e-9);
}

TEST(CliAsymptotics, JsonReport) {
    const Outcome o = invoke({"asymptotics", "--poly", "1,0.01", "--terms", "4"});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    const auto j = nlohmann::json::parse(o.out);
    ASSERT_EQ(j["terms"].size(), 4u);
    EXPECT_NEAR(j["partial_sums"][3].get<double>(), 0.98108, 1e-12);
    EXPECT_NEAR(j["quadrature"].get<double>(), 0.981094307315388, 1e-10);
    EXPECT_NEAR(j["closeness"].get<double>(), 7.0710678, 1e-6);
}

TEST(CliSimulate, CsvColumns) {
    const Outcome o = invoke({"simulate", "--model", "exp:0.1", "--hr", "0.6", "--n", "20000", "--time", "1",
                              "--format", "csv"});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    const auto rows = csv_rows(o.out);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"quantity", "time", "empirical", "std_error", "analytic", "z"}));
    bool saw_nnt = false;
    for (const auto& r : rows) {
        if (r[0] == "nnt") {
            saw_nnt = true;
            EXPECT_NEAR(std::stod(r[4]), 27.0804, 1e-3);
            EXPECT_LT(std::abs(std::stod(r[5])), 4.0);
        }
    }
    EXPECT_TRUE(saw_nnt);
}

}  // namespace
}  // namespace hazardlens::cli
