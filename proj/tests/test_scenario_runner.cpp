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

namespace {

ModelConfig small_grid()
{
    ModelConfig cfg = small_config(10);
    cfg.sweep = {500, 1500, 500};
    return cfg;
}

int active_cloud(const PointResult& p)
{
    int n = 0;
    for (const auto& id : p.solution.activations) {
        n += id.rfind("cc", 0) == 0;
    }
    return n;
}

} // namespace

TEST(ScenarioRunner, CloudCliff)
{
    ModelConfig cfg;
    PointResult w2500 = solve_point(cfg, Variant::CCOnly, Strategy::Single, 2500);
    PointResult w3000 = solve_point(cfg, Variant::CCOnly, Strategy::Single, 3000);
    PointResult w3500 = solve_point(cfg, Variant::CCOnly, Strategy::Single, 3500);
    EXPECT_EQ(active_cloud(w3000), 1);
    EXPECT_GE(active_cloud(w3500), 2);
    EXPECT_NEAR(w3000.row.total_w, 400, 1e-9);
    // Second server idles at 301 W on top of 175000 MIPS of marginal cost.
    EXPECT_NEAR(w3500.row.total_w, 602 + 175000 * 0.00066, 1e-9);
    EXPECT_GT(w3500.row.total_w - w3000.row.total_w, 10 * (w3000.row.total_w - w2500.row.total_w));
}

TEST(ScenarioRunner, SingleTasksTooLargeForVehicles)
{
    for (Variant v : {Variant::LowDensity, Variant::HighDensity}) {
        SweepRow r = run_point(ModelConfig{}, v, Strategy::Single, 3500);
        ASSERT_EQ(r.status, MilpStatus::Optimal);
        EXPECT_EQ(r.alloc_vf_total(), 0) << to_string(v);
        EXPECT_TRUE(r.valid);
    }
}

TEST(ScenarioRunner, DistributedUsesDenseVehicles)
{
    SweepRow r = run_point(ModelConfig{}, Variant::HighDensity, Strategy::Distributed, 3500);
    ASSERT_EQ(r.status, MilpStatus::Optimal);
    EXPECT_GT(r.alloc_vf_total(), 0);
    EXPECT_NEAR(r.alloc_total(), 50 * 3500, 1e-6);
    EXPECT_TRUE(near_rel(r.objective_w, r.total_w, 1e-9));
}

TEST(ScenarioRunner, WorkloadOutsideGridRejected)
{
    EXPECT_THROW(run_point(ModelConfig{}, Variant::CloudFog, Strategy::Single, 250), precondition_error);
    EXPECT_THROW(run_point(ModelConfig{}, Variant::CloudFog, Strategy::Single, 5500), precondition_error);
}

TEST(ScenarioRunner, GridOrderAndConservation)
{
    ModelConfig cfg = small_grid();
    SweepResults rows = run_sweep(cfg);
    ASSERT_EQ(rows.size(), 4u * 2 * 3);
    std::size_t i = 0;
    for (Variant v : all_variants) {
        for (Strategy s : all_strategies) {
            for (double w : {500.0, 1000.0, 1500.0}) {
                const auto& r = rows[i++];
                EXPECT_EQ(r.variant, v);
                EXPECT_EQ(r.strategy, s);
                EXPECT_EQ(r.workload_mips, w);
                ASSERT_EQ(r.status, MilpStatus::Optimal);
                EXPECT_TRUE(r.valid);
                EXPECT_NEAR(r.alloc_total(), 10 * w, 1e-6 * w);
                EXPECT_NEAR(r.processing_w + r.networking_w, r.total_w, 1e-9 * r.total_w);
                EXPECT_EQ(r.runtime_ms, 0);
                if (v == Variant::CCOnly || v == Variant::CloudFog) {
                    EXPECT_EQ(r.alloc_vf_total(), 0);
                }
                if (v == Variant::CCOnly) {
                    EXPECT_EQ(r.alloc_lf + r.alloc_nf, 0);
                }
            }
        }
    }
}

TEST(ScenarioRunner, WorkerCountDoesNotChangeOutput)
{
    ModelConfig cfg = small_grid();
    RunOptions one, many;
    many.workers = 3;
    EXPECT_EQ(emit_csv(run_sweep(cfg, one)), emit_csv(run_sweep(cfg, many)));
}

TEST(ScenarioRunner, InfeasibleCellsAreRecorded)
{
    ModelConfig cfg = small_grid();
    cfg.cc.count = 1;
    cfg.cc.capacity_mips = 1000;
    SweepResults rows = run_sweep(cfg);
    for (const auto& r : rows) {
        if (r.variant == Variant::CCOnly) {
            EXPECT_EQ(r.status, MilpStatus::Infeasible);
            EXPECT_FALSE(r.has_values());
        } else {
            EXPECT_EQ(r.status, MilpStatus::Optimal);
        }
    }
    std::string csv = emit_csv(rows);
    EXPECT_NE(csv.find("cc,single,500,Infeasible,,,,,,,,,,,0,0\n"), std::string::npos) << csv;
}

TEST(ScenarioRunner, TimingIsOptIn)
{
    ModelConfig cfg = small_grid();
    RunOptions timed;
    timed.record_timing = true;
    SweepRow r = run_point(cfg, Variant::HighDensity, Strategy::Single, 1500, timed);
    EXPECT_GT(r.runtime_ms, 0);
}

TEST(ScenarioRunner, CellNames)
{
    EXPECT_EQ(cell_name(Variant::HighDensity, Strategy::Distributed, 3500), "high/distributed/3500");
}
