/*
 * Copyright 2026 The Fogbank Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "support.hpp"

#include <fogbank/cli.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fogbank;

namespace fs = std::filesystem;

namespace {

struct CliRun
{
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args)
{
    args.insert(args.begin(), "fogbank");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test
{
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() / ("fogbank_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed())
                                            + "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const
    {
        std::ofstream(path(name)) << text;
        return path(name);
    }

    static std::string read(const std::string& p)
    {
        std::ifstream in(p);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::string small_config() const
    {
        return write("small.json", R"({"version": 1, "tasks": {"count": 6}, "sweep": {"from": 1000, "to": 2000, "step": 1000}})");
    }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, UsageErrors)
{
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"solve", "--bogus"}).code, 2);
    EXPECT_EQ(run({"solve", "--variant", "huge"}).code, 2);
    EXPECT_EQ(run({"validate"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST_F(Cli, HelpForEverySubcommand)
{
    CliRun top = run({"--help"});
    EXPECT_EQ(top.code, 0);
    for (const char* sub : {"solve", "sweep", "oracle-check", "validate", "export-lp"}) {
        CliRun r = run({sub, "--help"});
        EXPECT_EQ(r.code, 0) << sub;
        EXPECT_NE(r.out.find("--"), std::string::npos) << sub;
        EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
    }
}

TEST_F(Cli, ConfigErrorsExitTwo)
{
    std::string bad = write("bad.json", R"({"servers": {"vn": {"idle_power_w": 99}}})");
    CliRun r = run({"solve", "--config", bad});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("servers.vn.idle_power_w"), std::string::npos) << r.err;
    EXPECT_EQ(run({"solve", "--config", path("missing.json")}).code, 2);
    EXPECT_EQ(run({"solve", "--workload", "0"}).code, 2);
}

TEST_F(Cli, SolveDenseDistributed)
{
    std::string out = path("sol.json");
    CliRun r = run({"solve", "--variant", "high", "--strategy", "distributed", "--workload", "3500", "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    Solution sol = parse_solution_json(read(out));
    EXPECT_EQ(sol.status, MilpStatus::Optimal);
    double vf = 0;
    for (const auto& [key, mips] : sol.allocation) {
        vf += key.second.rfind("vf", 0) == 0 ? mips : 0;
    }
    EXPECT_GT(vf, 0);
    EXPECT_EQ(sol.stats.runtime_ms, 0);

    CliRun v = run({"validate", "--variant", "high", "--strategy", "distributed", "--workload", "3500", "--solution", out});
    EXPECT_EQ(v.code, 0) << v.out;
    EXPECT_EQ(v.out, "ok\n");
}

TEST_F(Cli, ValidateRejectsTamperedSolution)
{
    std::string cfg = small_config();
    std::string out = path("sol.json");
    ASSERT_EQ(run({"solve", "--config", cfg, "--variant", "low", "--strategy", "single", "--workload", "2000", "--out", out}).code, 0);
    auto j = nlohmann::ordered_json::parse(read(out));
    j["allocation"][0]["mips"] = j["allocation"][0]["mips"].get<double>() + 1;
    std::string bad = write("bad.json", j.dump(2));
    CliRun v = run({"validate", "--config", cfg, "--variant", "low", "--strategy", "single", "--workload", "2000", "--solution", bad});
    EXPECT_EQ(v.code, 1);
    EXPECT_NE(v.out.find("violations"), std::string::npos);
}

TEST_F(Cli, InfeasibleSolveExitsOne)
{
    std::string cfg = write("tiny.json", R"({"servers": {"cc": {"capacity_mips": 1000, "count": 1}}, "tasks": {"count": 3}})");
    CliRun r = run({"solve", "--config", cfg, "--variant", "cc", "--workload", "500"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("Infeasible"), std::string::npos);
}

TEST_F(Cli, SweepIsIndependentOfWorkers)
{
    std::string cfg = small_config();
    CliRun one = run({"sweep", "--config", cfg, "--workers", "1"});
    CliRun two = run({"sweep", "--config", cfg, "--workers", "2"});
    ASSERT_EQ(one.code, 0) << one.err;
    ASSERT_EQ(two.code, 0) << two.err;
    EXPECT_EQ(one.out, two.out);
    EXPECT_EQ(std::count(one.out.begin(), one.out.end(), '\n'), 1 + 4 * 2 * 2);
    EXPECT_EQ(one.out.rfind(csv_header, 0), 0u);
}

TEST_F(Cli, ExportLp)
{
    CliRun r = run({"export-lp", "--variant", "low", "--strategy", "single", "--workload", "1000", "--tasks", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("Minimize"), std::string::npos);
    EXPECT_NE(r.out.find("Generals"), std::string::npos);
    CliRun per = run({"export-lp", "--variant", "low", "--strategy", "single", "--workload", "1000", "--tasks", "3", "--per-task"});
    EXPECT_NE(per.out.find("dem_3:"), std::string::npos);
    EXPECT_EQ(r.out.find("dem_3:"), std::string::npos);
}

TEST_F(Cli, OracleCheckSmoke)
{
    std::string report = path("trials.csv");
    CliRun r = run({"oracle-check", "--trials", "10", "--seed", "7", "--out", report});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("max relative gap:"), std::string::npos);
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
    std::string csv = read(report);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 20);
}
