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

#include <gtest/gtest.h>

using namespace fogbank;
using namespace fogbank::testing;

TEST(Oracle, SingleCountsEveryAssignment)
{
    Scenario one = custom({vehicle(1, 1), server("nf1", Tier::NF, 6000, 15, 25)}, {500});
    OracleResult r = enumerate_single(one);
    EXPECT_EQ(r.candidates, 2u);
    EXPECT_NEAR(r.solution.objective_w, 5.28, 1e-12);

    Scenario three = custom({vehicle(1, 1), vehicle(2, 1), server("nf1", Tier::NF, 6000, 15, 25)},
                            {1000, 2500, 3000});
    OracleResult o = enumerate_single(three);
    EXPECT_EQ(o.candidates, 27u);
    Solution bb = solve(three);
    ASSERT_EQ(bb.status, MilpStatus::Optimal);
    EXPECT_NEAR(bb.objective_w, o.solution.objective_w, 1e-9);
}

TEST(Oracle, InterchangeableOptima)
{
    Scenario sc = custom({vehicle(1, 1), vehicle(1, 2)}, {1000, 1000});
    OracleResult o = enumerate_single(sc);
    EXPECT_EQ(o.candidates, 4u);
    // Both tasks on one vehicle: 4 + 2000 * 8 / 3200 + 20 Mbps * 0.006.
    EXPECT_NEAR(o.solution.objective_w, 9.12, 1e-12);
    double other = evaluate_power({{{1, "vf1_vn2"}, 1000}, {{2, "vf1_vn2"}, 1000}}, sc).total_w;
    EXPECT_NEAR(other, o.solution.objective_w, 1e-12);
    EXPECT_NEAR(solve(sc).objective_w, 9.12, 1e-9);
}

TEST(Oracle, DistributedSplitsAcrossVehicles)
{
    Scenario sc = custom({vehicle(1, 1), vehicle(1, 2)}, {4000}, Strategy::Distributed);
    OracleResult o = enumerate_distributed(sc);
    EXPECT_EQ(o.candidates, 3u);
    ASSERT_EQ(o.solution.status, MilpStatus::Optimal);
    EXPECT_EQ(o.solution.activations.size(), 2u);
    double sum = 0;
    for (const auto& [key, mips] : o.solution.allocation) {
        EXPECT_LE(mips, 3200 + 1e-9);
        sum += mips;
    }
    EXPECT_NEAR(sum, 4000, 1e-9);
    EXPECT_NEAR(o.solution.objective_w, 18.24, 1e-9);
    EXPECT_NEAR(solve(sc).objective_w, 18.24, 1e-9);

    Scenario single = sc;
    single.strategy = Strategy::Single;
    EXPECT_EQ(enumerate_single(single).solution.status, MilpStatus::Infeasible);
    EXPECT_EQ(solve(single).status, MilpStatus::Infeasible);
}

TEST(Oracle, ReducedLowDensityCell)
{
    ModelConfig cfg = small_config(2);
    cfg.vehicles_per_vf_low = 2;
    Scenario sc = make_scenario(cfg, Variant::LowDensity, Strategy::Distributed, 3500);
    ASSERT_EQ(sc.topology.servers.size(), 1u + 1 + 1 + 8);
    OracleResult o = enumerate_distributed(sc);
    Solution bb = solve(sc);
    ASSERT_EQ(o.solution.status, MilpStatus::Optimal);
    ASSERT_EQ(bb.status, MilpStatus::Optimal);
    EXPECT_TRUE(near_rel(bb.objective_w, o.solution.objective_w, 1e-6));

    sc.strategy = Strategy::Single;
    EXPECT_THROW(enumerate_single(sc), precondition_error);
}

TEST(Oracle, SizeGuards)
{
    std::vector<ServerSpec> seven;
    for (int i = 1; i <= 7; ++i) {
        seven.push_back(vehicle(1 + (i - 1) % 4, 1 + (i - 1) / 4));
    }
    EXPECT_THROW(enumerate_single(custom(seven, {500})), precondition_error);
    EXPECT_THROW(enumerate_single(custom({vehicle(1, 1)}, std::vector<double>(7, 100))), precondition_error);
    EXPECT_NO_THROW(enumerate_distributed(custom(seven, {500}, Strategy::Distributed)));
    EXPECT_THROW(enumerate_distributed(make_scenario(small_config(1), Variant::LowDensity, Strategy::Distributed, 500)),
                 precondition_error);
}

TEST(Oracle, RandomInstancesAgreeWithSolver)
{
    OracleCheckOptions o;
    o.trials = 200;
    o.seed = 42;
    OracleCheckReport rep = oracle_check(o);
    EXPECT_EQ(rep.trials.size(), 400u);
    EXPECT_EQ(rep.status_mismatches, 0);
    EXPECT_LE(rep.max_rel_gap, 1e-6);
    EXPECT_TRUE(rep.passed());
    int infeasible = 0, aggregated = 0;
    for (const auto& t : rep.trials) {
        infeasible += t.oracle_status == MilpStatus::Infeasible;
        aggregated += t.aggregated;
    }
    EXPECT_GT(infeasible, 0);
    EXPECT_LT(infeasible, 200);
    EXPECT_EQ(aggregated, 200);
}

TEST(Oracle, RandomInstancesAreValidScenarios)
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        Scenario sc = random_instance(rng, Strategy::Distributed, 6, 12);
        EXPECT_NO_THROW(validate_scenario(sc));
        EXPECT_GE(sc.tasks.size(), 1u);
        EXPECT_LE(sc.tasks.size(), 6u);
        EXPECT_LE(sc.topology.servers.size(), 12u);
    }
}
