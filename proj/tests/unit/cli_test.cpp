#include "cli.hpp"

#include "jetgeom/report/report.hpp"

#include "support/corpus.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace jetgeom;

namespace {

struct CliRun {
    int status;
    std::string out;
    std::string err;
};

CliRun jetgeom_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int status = cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "jetgeom_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(CliAnalyze, FlatReportIsAllZero) {
    CliRun r = jetgeom_cli({"analyze", corpus::path("flat")});
    ASSERT_EQ(r.status, 0) << r.err;
    auto doc = nlohmann::json::parse(r.out);
    for (const char* key : {"Gamma^i_jk", "L^i_jk", "N^(i)_(alpha)j", "T^m_alphaj", "R^l_ijk", "R^l_ibetak"}) {
        ASSERT_TRUE(doc["families"].contains(key)) << key;
        for (auto& [label, value] : doc["families"][key].items()) EXPECT_EQ(value, "0") << key << " " << label;
    }
    EXPECT_EQ(doc["model"]["name"], "flat");
    EXPECT_EQ(doc["engine"]["version"], std::string(engine_version()));
}

TEST(CliAnalyze, SphereCurvatureComponents) {
    CliRun r = jetgeom_cli({"analyze", corpus::path("sphere")});
    ASSERT_EQ(r.status, 0) << r.err;
    auto rl = nlohmann::json::parse(r.out)["families"]["R^l_ijk"];
    EXPECT_EQ(rl["1,2,2,1"], "sin(x1)^2");
    EXPECT_EQ(rl["1,2,1,2"], "-sin(x1)^2");
}

TEST(CliAnalyze, MissingFile) {
    CliRun r = jetgeom_cli({"analyze", "no/such/missing.json"});
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("not found"), std::string::npos) << r.err;
}

TEST(CliAnalyze, CorruptedFixtureIsAnEngineError) {
    CliRun r = jetgeom_cli({"analyze", corpus::fixture("sphere_corrupted")});
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.err.find("P^(m)(beta)_(mu)i(j)"), std::string::npos) << r.err;
}

TEST(CliAnalyze, WritesReportAndLatex) {
    auto json_path = scratch("sphere.json"), tex_path = scratch("sphere.tex");
    CliRun r = jetgeom_cli({"analyze", corpus::path("sphere"), "-o", json_path.string(), "--latex", tex_path.string()});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(read_file(json_path), jetgeom_cli({"analyze", corpus::path("sphere")}).out);
    std::string tex = read_file(tex_path);
    EXPECT_TRUE(tex.starts_with("\\documentclass"));
    EXPECT_NE(tex.find("\\end{document}"), std::string::npos);
    EXPECT_NE(tex.find("\\sin"), std::string::npos);
}

TEST(CliVerify, SpherePasses) {
    CliRun r = jetgeom_cli({"verify", corpus::path("sphere")});
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("checks passed"), std::string::npos);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(CliVerify, EchoesProbesAndSeed) {
    CliRun r = jetgeom_cli({"verify", corpus::path("flat"), "--probes", "3", "--seed", "7"});
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("probes=3 seed=7"), std::string::npos) << r.out;
}

TEST(CliVerify, CorruptedFixtureListsFailures) {
    CliRun r = jetgeom_cli({"verify", corpus::fixture("sphere_corrupted")});
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.out.find("connection.L_equals_Gamma failed"), std::string::npos);
    EXPECT_NE(r.out.find("FAIL at 1,1,2 witness t1="), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("5 of "), std::string::npos);
}

TEST(CliVerify, LoadFailure) {
    EXPECT_EQ(jetgeom_cli({"verify", "missing.json"}).status, 2);
}

TEST(CliVerify, JsonReport) {
    auto path = scratch("verify.json");
    CliRun r = jetgeom_cli({"verify", corpus::path("flat"), "--probes", "4", "--json", path.string()});
    ASSERT_EQ(r.status, 0);
    auto doc = nlohmann::json::parse(read_file(path));
    EXPECT_EQ(doc["probes"], 4);
    EXPECT_EQ(doc["passed"], true);
    EXPECT_EQ(doc["failures"], 0);
    EXPECT_TRUE(doc["checks"].contains("connection.C_zero"));
}

TEST(CliEval, SphereMetricAtEquator) {
    CliRun r = jetgeom_cli({"eval", corpus::path("sphere"), "--at", "x1=1.5707963268,x2=0,t1=0,v1_1=0,v2_1=0"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("g_ij 2,2 1.000000000000\n"), std::string::npos);
    EXPECT_NE(r.out.find("\nR - 2.000000000000\n"), std::string::npos);
}

TEST(CliEval, FlatConnectionVanishes) {
    CliRun r = jetgeom_cli({"eval", corpus::path("flat"), "--at", "t1=0.3,x1=0.1,x2=-2,v1_1=4,v2_1=5"});
    ASSERT_EQ(r.status, 0) << r.err;
    std::istringstream lines(r.out);
    std::string key, label, value;
    int seen = 0;
    while (lines >> key >> label >> value)
        if (key == "L^i_jk" || key == "Gamma^i_jk" || key == "N^(i)_(alpha)j") {
            EXPECT_EQ(std::stod(value), 0.0) << key << " " << label;
            ++seen;
        }
    EXPECT_GT(seen, 0);
}

TEST(CliEval, IncompletePoint) {
    CliRun r = jetgeom_cli({"eval", corpus::path("sphere"), "--at", "x1=1"});
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("missing coordinate"), std::string::npos) << r.err;
}

TEST(CliEval, DomainError) {
    CliRun r = jetgeom_cli({"eval", corpus::path("sphere"), "--at", "x1=0,x2=0,t1=0,v1_1=0,v2_1=0"});
    EXPECT_EQ(r.status, 1);
}

TEST(CliArgs, UsageErrors) {
    EXPECT_EQ(jetgeom_cli({}).status, 1);
    EXPECT_EQ(jetgeom_cli({"frobnicate"}).status, 1);
    EXPECT_EQ(jetgeom_cli({"eval", corpus::path("flat")}).status, 1);
    EXPECT_EQ(jetgeom_cli({"verify", corpus::path("flat"), "--probes", "0"}).status, 1);
    CliRun v = jetgeom_cli({"--version"});
    EXPECT_EQ(v.status, 0);
    EXPECT_EQ(v.out, std::string(engine_version()) + "\n");
}

TEST(CliReport, DeterministicAcrossRuns) {
    for (const auto& name : corpus::names()) {
        EXPECT_EQ(jetgeom_cli({"analyze", corpus::path(name)}).out, jetgeom_cli({"analyze", corpus::path(name)}).out)
            << name;
        EXPECT_EQ(jetgeom_cli({"verify", corpus::path(name)}).out, jetgeom_cli({"verify", corpus::path(name)}).out)
            << name;
    }
}

TEST(CliReport, CanonicalRoundTrip) {
    for (const auto& name : corpus::names()) {
        std::string report = jetgeom_cli({"analyze", corpus::path(name)}).out;
        EXPECT_EQ(canonical_json(report), report) << name;
    }
}

TEST(CliReport, ComponentsReparse) {
    for (const auto& name : corpus::names()) {
        ModelSpec model = corpus::load(name);
        auto doc = nlohmann::json::parse(jetgeom_cli({"analyze", corpus::path(name)}).out);
        int count = 0;
        for (auto& [key, family] : doc["families"].items())
            for (auto& [label, value] : family.items()) {
                const std::string text = value.get<std::string>();
                EXPECT_EQ(sym::to_string(sym::canonical(sym::parse_expression(text, model.coords))), text)
                    << name << " " << key << " " << label;
                ++count;
            }
        EXPECT_GT(count, 100) << name;
    }
}
