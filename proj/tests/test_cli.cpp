#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "switchdiff/run.hpp"

using namespace switchdiff;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("switchdiff_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text) {
        const auto p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    int invoke(const std::string& args, const std::string& env = "") {
        const std::string cmd = env + " " + SWITCHDIFF_CLI + " " + args + " > " + (dir_ / "stdout.txt").string() +
                                " 2> " + (dir_ / "stderr.txt").string();
        const int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    }

    std::string read(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    fs::path dir_;
};

const char* kModel = R"("model": {"lambda_plus": 1, "lambda_minus": 2, "r_plus": 1, "r_minus": 1,
                                  "drift_plus": 1, "drift_minus": -1})";

}  // namespace

TEST_F(Cli, CheckPrintsSummary) {
    const auto cfg = write("c.json", std::string("{") + kModel + "}");
    EXPECT_EQ(invoke("check --config " + cfg.string() + " --out " + (dir_ / "o").string()), 0);
    EXPECT_EQ(read(dir_ / "stdout.txt"), "transient: true, velocity_star: 0.333333\n");
    EXPECT_TRUE(fs::exists(dir_ / "o" / "report.csv"));
    EXPECT_NE(read(dir_ / "o" / "meta.json").find("\"wall_time_s\""), std::string::npos);
}

TEST_F(Cli, ConfigErrorsExitOne) {
    const auto bad = write("bad.json", std::string("{") + kModel + ", \"sigma\": 1}");
    EXPECT_EQ(invoke("check --config " + bad.string()), 1);
    EXPECT_NE(read(dir_ / "stderr.txt").find("sigma"), std::string::npos);
    EXPECT_EQ(invoke("check --config " + (dir_ / "missing.json").string()), 1);
    const auto cfg = write("c.json", std::string("{") + kModel + "}");
    EXPECT_EQ(invoke("bogus --config " + cfg.string()), 1);
    EXPECT_EQ(invoke("check --config " + cfg.string() + " --format xml"), 1);
}

TEST_F(Cli, DomainErrorExitsTwo) {
    // lambda beyond 1 / a_2 is a domain error of the bound
    const auto cfg = write("c.json", R"({"model": {"lambda_plus": 1, "lambda_minus": 1, "r_plus": 1, "r_minus": 0.2,
        "drift_plus": 1, "drift_minus": -0.2}, "params": {"lambda": 2, "samples": 100, "cycles": 2}})");
    EXPECT_EQ(invoke("verify-lemma2 --config " + cfg.string() + " --out " + (dir_ / "o").string()), 2);
}

TEST_F(Cli, ViolationExitsThree) {
    // tolerance far below the fluctuation of T_2n/n at n = 10
    const auto cfg = write("c.json", std::string("{") + kModel +
                                         R"(, "params": {"n": 10, "tolerance": 1e-9, "repeats": 2}})");
    EXPECT_EQ(invoke("verify-lln --config " + cfg.string() + " --out " + (dir_ / "o").string()), 3);
    EXPECT_NE(read(dir_ / "o" / "report.csv").find("bound_violated"), std::string::npos);
}

TEST_F(Cli, LambdaZeroRowHasZeroZ) {
    const auto cfg = write("c.json", std::string("{") + kModel +
                                         R"(, "params": {"lambdas": [0], "ns": [1], "samples": 100}})");
    EXPECT_EQ(invoke("verify-mgf --config " + cfg.string() + " --out " + (dir_ / "o").string()), 0);
    const auto csv = read(dir_ / "o" / "report.csv");
    EXPECT_NE(csv.find("mgf_deficit[lambda=0;n=1],1,1,0,1,1,0,consistent\n"), std::string::npos) << csv;
}

TEST_F(Cli, OverridePrecedence) {
    const auto cfg = write("c.json", std::string("{") + kModel +
                                         R"(, "seed": 1, "output": {"dir": ")" + (dir_ / "cfg").string() +
                                         R"("}, "params": {"n_cycles": 3}})");
    EXPECT_EQ(invoke("skeleton --config " + cfg.string()), 0);
    EXPECT_NE(read(dir_ / "cfg" / "meta.json").find("\"seed\": 1,"), std::string::npos);

    EXPECT_EQ(invoke("skeleton --config " + cfg.string(),
                     "SWITCHDIFF_SEED=7 SWITCHDIFF_OUT=" + (dir_ / "env").string()),
              0);
    EXPECT_NE(read(dir_ / "env" / "meta.json").find("\"seed\": 7,"), std::string::npos);

    EXPECT_EQ(invoke("skeleton --config " + cfg.string() + " --seed 9 --out " + (dir_ / "flag").string(),
                     "SWITCHDIFF_SEED=7 SWITCHDIFF_OUT=" + (dir_ / "env").string()),
              0);
    EXPECT_NE(read(dir_ / "flag" / "meta.json").find("\"seed\": 9,"), std::string::npos);
    const auto sk = read(dir_ / "flag" / "skeleton.csv");
    EXPECT_EQ(sk.rfind("index,time,regime_after\n", 0), 0u);
    EXPECT_EQ(std::count(sk.begin(), sk.end(), '\n'), 8);
    EXPECT_EQ(invoke("skeleton --config " + cfg.string(), "SWITCHDIFF_SEED=abc"), 1);
}

TEST_F(Cli, SimulateWritesTrajectory) {
    const auto cfg = write("c.json", std::string("{") + kModel + R"(, "params": {"horizon": 2, "integrator": "em", "dt": 0.1}})");
    EXPECT_EQ(invoke("simulate --config " + cfg.string() + " --out " + (dir_ / "o").string()), 0);
    const auto tr = read(dir_ / "o" / "trajectory.csv");
    EXPECT_EQ(tr.rfind("time,x,regime\n0,0,plus\n", 0), 0u);
}

TEST_F(Cli, ReportsByteIdenticalAcrossThreads) {
    const auto cfg = write("c.json", std::string("{") + kModel +
                                         R"(, "params": {"samples": 3000, "ns": [2, 4], "lambdas": [0.1, 0.3]}})");
    std::string first;
    for (int threads : {1, 4, 16}) {
        const auto out = dir_ / ("t" + std::to_string(threads));
        ASSERT_EQ(invoke("verify-mgf --config " + cfg.string() + " --format json --threads " +
                         std::to_string(threads) + " --out " + out.string()),
                  0);
        const auto report = read(out / "report.json");
        if (first.empty()) first = report;
        EXPECT_EQ(report, first) << threads;
    }
}

TEST(Report, CsvColumns) {
    BoundReport r;
    r.quantity = "q[a=1]";
    r.analytic = 0.5;
    r.estimate = {0.25, 0.125, 10, 0.0, 1.0, EstimateKind::mean_of_real};
    r.z_score = -2.0;
    r.verdict = Verdict::consistent;
    std::ostringstream os;
    write_report_csv(os, {r});
    EXPECT_EQ(os.str(), "quantity,analytic,estimate,se,ci_low,ci_high,z,verdict\nq[a=1],0.5,0.25,0.125,0,1,-2,consistent\n");
}
