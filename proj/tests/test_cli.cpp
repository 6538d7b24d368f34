#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "glcert/cli.hpp"

using namespace glcert;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("glcert_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }
    std::string write(const std::string& name, const json& j) const { return write(name, j.dump(2)); }

    static json read_json(const std::string& p) {
        std::ifstream f(p);
        return json::parse(f);
    }
    static std::string slurp(const std::string& p) {
        std::ifstream f(p);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    int exec(const std::string& args) const {
        const std::string cmd = std::string(GLCERT_CLI_PATH) + " " + args + " > " + path("stdout.txt") + " 2> " +
                                path("stderr.txt");
        const int rc = std::system(cmd.c_str());
        return WEXITSTATUS(rc);
    }

    json solve_config(double h, const std::string& init = "uniform") const {
        return {{"field", {{"kind", "constant"}, {"h", h}}},
                {"lattice", {{"R_dom", 3.0}, {"delta", 0.25}}},
                {"init", init},
                {"output", {{"json_path", path("energy.json")}, {"state_path", path("state.json")}}}};
    }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SolveZeroField) {
    EXPECT_EQ(exec("solve --config " + write("c.json", solve_config(0.0))), 0);
    const auto j = read_json(path("energy.json"));
    EXPECT_LE(j.at("energy").at("total").get<double>(), 1e-8);
    EXPECT_TRUE(j.at("converged").get<bool>());
    EXPECT_TRUE(j.contains("reproducibility"));
    const auto snap = read_json(path("state.json"));
    EXPECT_EQ(snap.at("format"), "glcert-state/1");
    EXPECT_EQ(snap.at("reproducibility"), j.at("reproducibility"));
}

TEST_F(CliTest, SolveNonConvergence) {
    auto c = solve_config(0.5, "random");
    c["minimize"] = {{"max_iters", 1}};
    EXPECT_EQ(exec("solve --config " + write("c.json", c)), 2);
}

TEST_F(CliTest, MalformedJsonReportsLocation) {
    EXPECT_EQ(exec("solve --config " + write("c.json", std::string("{\n  \"field\": {\"kind\": \"constant\",,}\n}"))), 1);
    const auto err = slurp(path("stderr.txt"));
    EXPECT_NE(err.find("line 2"), std::string::npos) << err;
}

TEST_F(CliTest, BadFieldReportsKey) {
    auto c = solve_config(0.5);
    c["field"]["h"] = "strong";
    EXPECT_EQ(exec("solve --config " + write("c.json", c)), 1);
    EXPECT_NE(slurp(path("stderr.txt")).find("field.h"), std::string::npos);
}

TEST_F(CliTest, MissingConfigFlagOrFile) {
    EXPECT_EQ(exec("solve"), 1);
    EXPECT_EQ(exec("solve --config " + path("nope.json")), 1);
    EXPECT_EQ(exec("--help"), 0);
}

TEST_F(CliTest, SweepEmptyRadii) {
    json c = {{"field", {{"kind", "constant"}, {"h", 0.5}}}, {"lattice", {{"radii", json::array()}}}};
    EXPECT_EQ(exec("sweep --config " + write("c.json", c)), 1);
}

TEST_F(CliTest, SweepWritesCsvAndVerdict) {
    json c = {{"field", {{"kind", "constant"}, {"h", 0.0}}},
              {"lattice", {{"radii", {3, 4}}, {"delta", 0.25}}},
              {"output", {{"csv_path", path("s.csv")}, {"json_path", path("s.json")}}}};
    EXPECT_EQ(exec("sweep --config " + write("c.json", c)), 0);
    std::istringstream csv(slurp(path("s.csv")));
    std::string line;
    int rows = -1;
    while (std::getline(csv, line)) ++rows;
    EXPECT_EQ(rows, 2);
    const auto v = read_json(path("s.json"));
    EXPECT_EQ(v.at("verdict"), "inconclusive");  // two entries only; still exit 0
    EXPECT_EQ(v.at("entries").size(), 2u);
    EXPECT_TRUE(v.contains("reproducibility"));
}

TEST_F(CliTest, CertifyZeroSnapshot) {
    auto c = solve_config(0.5, "normal");
    c["minimize"] = {{"max_iters", 0}};
    c["output"]["certificate_path"] = path("cert.json");
    const auto cfg = write("c.json", c);
    exec("solve --config " + cfg);
    EXPECT_EQ(exec("certify --config " + cfg), 0);
    EXPECT_TRUE(read_json(path("cert.json")).at("all_pass").get<bool>());
}

TEST_F(CliTest, CertifyConvergedSnapshot) {
    auto c = solve_config(0.5);
    c["output"]["certificate_path"] = path("cert.json");
    const auto cfg = write("c.json", c);
    ASSERT_EQ(exec("solve --config " + cfg), 0);
    EXPECT_EQ(exec("certify --config " + cfg + " --state " + path("state.json")), 0);
    const auto cert = read_json(path("cert.json"));
    EXPECT_EQ(cert.at("schema"), "glcert-certificate/1");
    EXPECT_TRUE(cert.contains("reproducibility"));
}

TEST_F(CliTest, CertifyFailingStepGivesThree) {
    const Lattice lat(3.0, 0.25);
    State s = initial_state(lat, InitKind::Uniform);
    s.psi[0] = 1.5;  // breaks the max-modulus bound
    save_snapshot(path("state.json"), lat, s);
    EXPECT_EQ(exec("certify --config " + write("c.json", solve_config(0.5))), 3);
}

TEST_F(CliTest, CertifyCorruptedOrMismatchedSnapshot) {
    const auto cfg = write("c.json", solve_config(0.5));
    write("state.json", std::string("{\"format\": \"glcert-state/1\", \"lattice\": "));
    EXPECT_EQ(exec("certify --config " + cfg), 1);

    const Lattice other(4.0, 0.25);
    save_snapshot(path("state.json"), other, State(other));
    EXPECT_EQ(exec("certify --config " + cfg), 1);
    EXPECT_NE(slurp(path("stderr.txt")).find("does not match"), std::string::npos);

    auto j = snapshot_to_json(Lattice(3.0, 0.25), State(Lattice(3.0, 0.25)));
    j["a"].erase(0);
    write("state.json", j);
    EXPECT_EQ(exec("certify --config " + cfg), 1);
}

TEST_F(CliTest, FieldCheckPowerLawBelowOne) {
    json c = {{"field", {{"kind", "power_law"}, {"h", 1.0}, {"alpha", 0.5}, {"r_cut", 1e-3}}},
              {"field_check", {{"radii", {1, 10}}}},
              {"output", {{"json_path", path("fc.json")}}}};
    EXPECT_EQ(exec("field-check --config " + write("c.json", c)), 0);
    const auto j = read_json(path("fc.json"));
    EXPECT_EQ(j.at("classification"), "not_in_L2");
    for (const auto& r : j.at("reverse_holder")) EXPECT_FALSE(r.at("holds").get<bool>());
    EXPECT_TRUE(j.at("tail").at("nonexistence_regime").get<bool>());
}

TEST_F(CliTest, FieldCheckConstantAndL2) {
    json c = {{"field", {{"kind", "constant"}, {"h", 0.5}}}, {"field_check", {{"radii", {2, 8}}}}};
    EXPECT_EQ(exec("field-check --config " + write("c.json", c)), 0);
    const auto out = slurp(path("stdout.txt"));
    EXPECT_NE(out.find("not_in_L2"), std::string::npos);
    EXPECT_EQ(out.find("fails"), std::string::npos);

    c["field"] = {{"kind", "power_law"}, {"h", 0.5}, {"alpha", 1.5}, {"r_cut", 0.1}};
    EXPECT_EQ(exec("field-check --config " + write("c.json", c)), 0);
    EXPECT_NE(slurp(path("stdout.txt")).find("classification\tin_L2"), std::string::npos);

    c["field"] = {{"kind", "tabulated"}, {"table", {{0, 1}, {10, 1}}}};
    EXPECT_EQ(exec("field-check --config " + write("c.json", c)), 1);
}

TEST_F(CliTest, RerunsAreBitIdentical) {
    auto c = solve_config(0.5, "random");
    c["seed"] = 9;
    c["minimize"] = {{"max_iters", 50}};
    const auto cfg = write("c.json", c);
    exec("solve --config " + cfg);
    const auto e1 = slurp(path("energy.json")), s1 = slurp(path("state.json"));
    exec("solve --config " + cfg);
    EXPECT_EQ(slurp(path("energy.json")), e1);
    EXPECT_EQ(slurp(path("state.json")), s1);
}

TEST(CliConfig, HashIsCanonicalAndSensitive) {
    const json a = json::parse(R"({"field": {"kind": "constant", "h": 0.5}, "seed": 1})");
    const json b = json::parse(R"({"seed": 1, "field": {"h": 0.5, "kind": "constant"}})");
    const json c = json::parse(R"({"seed": 2, "field": {"h": 0.5, "kind": "constant"}})");
    EXPECT_EQ(cli::config_hash(a), cli::config_hash(b));
    EXPECT_NE(cli::config_hash(a), cli::config_hash(c));
    EXPECT_EQ(cli::config_hash(a).size(), 16u);
}

TEST(CliConfig, DefaultsAndValidation) {
    const auto c = cli::parse_config(json::parse(R"({"field": {"kind": "power_law", "h": 0.5, "alpha": 0.5},
                                                     "lattice": {"R_dom": 8}})"));
    EXPECT_EQ(c.delta.spacing_for(8), 0.25);
    EXPECT_EQ(c.field.r_cut, 0.125);
    EXPECT_EQ(c.init, "uniform");
    EXPECT_EQ(c.R0, 1.0);
    EXPECT_THROW(cli::parse_config(json::parse(R"({"lattice": {"R_dom": 8}})")), ConfigError);
    EXPECT_THROW(cli::parse_config(json::parse(R"({"field": {"kind": "constant", "h": 1}, "init": "hot"})")),
                 ConfigError);
    EXPECT_THROW(cli::parse_config(json::parse(R"({"field": {"kind": "constant", "h": 1},
                                                   "minimize": {"ls_shrink": 2}})")),
                 ConfigError);
}

TEST(CliConfig, DemoConfigsParse) {
    for (const char* name : {"zero_field.json", "constant_solve.json", "constant_sweep.json", "power_law_sweep.json",
                             "field_check_alpha05.json"})
        EXPECT_NO_THROW(cli::load_config(std::string(GLCERT_CONFIG_DIR) + "/" + name)) << name;
}
