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

#ifndef FOGBANK_SCENARIO_RUNNER_HPP
#define FOGBANK_SCENARIO_RUNNER_HPP

#include <fogbank/config.hpp>
#include <fogbank/errors.hpp>
#include <fogbank/reporting.hpp>
#include <fogbank/solve.hpp>
#include <fogbank/topology.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace fogbank {

struct RunOptions
{
    SolveOptions solve{};
    int workers{1};
    bool record_timing{false}; ///< wall-clock runtime_ms makes output run-dependent
};

struct PointResult
{
    Scenario scenario;
    Solution solution;
    ValidationReport report;
    SweepRow row;
};

inline std::string cell_name(Variant v, Strategy s, double workload)
{
    return std::string(to_string(v)) + "/" + std::string(to_string(s)) + "/" + detail::csv_real(workload);
}

/// Solve one grid cell and keep everything needed to inspect it.
inline PointResult solve_point(const ModelConfig& cfg, Variant variant, Strategy strategy, double workload_mips,
                               const RunOptions& opts = {})
{
    const double slack = 1e-9 * cfg.sweep.to;
    if (workload_mips < cfg.sweep.from - slack || workload_mips > cfg.sweep.to + slack) {
        throw precondition_error("workload " + detail::csv_real(workload_mips) + " MIPS is outside the sweep bounds");
    }
    PointResult pr;
    pr.scenario = make_scenario(cfg, variant, strategy, workload_mips);
    pr.solution = solve(pr.scenario, opts.solve);
    pr.report = validate(pr.solution, pr.scenario);

    SweepRow& row = pr.row;
    row.variant = variant;
    row.strategy = strategy;
    row.workload_mips = workload_mips;
    row.status = pr.solution.status;
    row.bb_nodes = pr.solution.stats.bb_nodes;
    row.runtime_ms = opts.record_timing ? pr.solution.stats.runtime_ms : 0.0;
    row.valid = pr.report.ok;
    if (!pr.solution.allocation.empty() || pr.solution.status == MilpStatus::Optimal) {
        row.objective_w = pr.solution.objective_w;
        row.total_w = pr.solution.breakdown.total_w;
        row.processing_w = pr.solution.breakdown.processing_w;
        row.networking_w = pr.solution.breakdown.networking_w;
        auto nodes = node_breakdown(pr.solution, pr.scenario.topology);
        row.alloc_cc = nodes["CC"];
        row.alloc_lf = nodes["LF"];
        row.alloc_nf = nodes["NF"];
        auto vfs = vf_breakdown(pr.solution, pr.scenario.topology);
        for (int vf = 1; vf <= 4; ++vf) {
            row.alloc_vf[static_cast<std::size_t>(vf - 1)] = vfs.count(vf) ? vfs[vf] : 0.0;
        }
    }
    return pr;
}

inline SweepRow run_point(const ModelConfig& cfg, Variant variant, Strategy strategy, double workload_mips,
                          const RunOptions& opts = {})
{
    return solve_point(cfg, variant, strategy, workload_mips, opts).row;
}

/**
 * Every (variant, strategy, workload) cell, variant-major, then strategy,
 * then ascending workload. Cells run on \p opts.workers threads; the output
 * order and content do not depend on the worker count.
 */
inline SweepResults run_sweep(const ModelConfig& cfg, const RunOptions& opts = {})
{
    cfg.validate();
    struct Cell
    {
        Variant variant;
        Strategy strategy;
        double workload;
    };
    std::vector<Cell> cells;
    for (Variant v : all_variants) {
        for (Strategy s : all_strategies) {
            for (double w : cfg.sweep.points()) {
                cells.push_back({v, s, w});
            }
        }
    }
    if (cells.empty()) {
        throw precondition_error("sweep grid is empty");
    }

    SweepResults rows(cells.size());
    std::vector<std::exception_ptr> errors(cells.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                rows[i] = run_point(cfg, cells[i].variant, cells[i].strategy, cells[i].workload, opts);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int workers = std::max(1, std::min<int>(opts.workers, static_cast<int>(cells.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) {
        pool.emplace_back(work);
    }
    work();
    for (auto& th : pool) {
        th.join();
    }

    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!errors[i]) {
            continue;
        }
        std::string where = cell_name(cells[i].variant, cells[i].strategy, cells[i].workload);
        try {
            std::rethrow_exception(errors[i]);
        } catch (const numerical_failure& e) {
            throw numerical_failure("sweep cell " + where + ": " + e.what());
        }
    }
    return rows;
}

} // namespace fogbank

#endif // FOGBANK_SCENARIO_RUNNER_HPP
