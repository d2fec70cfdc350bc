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

#ifndef FOGBANK_CLI_HPP
#define FOGBANK_CLI_HPP

#include <fogbank/config.hpp>
#include <fogbank/milp.hpp>
#include <fogbank/oracle.hpp>
#include <fogbank/reporting.hpp>
#include <fogbank/scenario_runner.hpp>
#include <fogbank/topology.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fogbank {

namespace cli_detail {

struct Flags
{
    std::string config_path;
    std::string variant{"high"};
    std::string strategy{"distributed"};
    std::optional<double> workload;
    std::optional<int> tasks;
    std::optional<std::uint64_t> seed;
    int workers{1};
    std::string out;
    std::string solution_path;
    double gap_abs{1e-9};
    double gap_rel{1e-9};
    std::int64_t node_limit{1'000'000};
    std::int64_t time_limit_ms{0};
    int trials{200};
    int max_tasks{5};
    bool timing{false};
    bool per_task{false};
};

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw precondition_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ModelConfig load(const Flags& f)
{
    ModelConfig cfg = f.config_path.empty() ? ModelConfig{} : load_config(read_file(f.config_path));
    if (f.tasks) {
        cfg.task_count = *f.tasks;
    }
    if (f.seed) {
        cfg.seed = *f.seed;
    }
    cfg.validate();
    return cfg;
}

inline BranchAndBoundOptions bb_options(const Flags& f)
{
    BranchAndBoundOptions o;
    o.gap_abs = f.gap_abs;
    o.gap_rel = f.gap_rel;
    o.node_limit = f.node_limit;
    o.time_limit_ms = f.time_limit_ms;
    return o;
}

inline void write(const Flags& f, const std::string& text, std::ostream& out)
{
    if (f.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(f.out, std::ios::binary);
    if (!file) {
        throw precondition_error("cannot write " + f.out);
    }
    file << text;
}

inline Scenario scenario_from(const Flags& f, const ModelConfig& cfg)
{
    double w = f.workload.value_or(cfg.sweep.from);
    return make_scenario(cfg, parse_variant(f.variant), parse_strategy(f.strategy), w);
}

inline void add_scenario_flags(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--config", f.config_path, "configuration JSON (defaults when omitted)");
    cmd->add_option("--variant", f.variant, "scenario variant")->check(CLI::IsMember({"cc", "cf", "low", "high"}));
    cmd->add_option("--strategy", f.strategy, "allocation strategy")
        ->check(CLI::IsMember({"single", "distributed"}));
    cmd->add_option("--workload", f.workload, "per-task workload in MIPS (default: sweep start)");
    cmd->add_option("--tasks", f.tasks, "number of tasks (overrides config)")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", f.seed, "seed (overrides config)");
}

inline void add_solver_flags(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--gap-abs", f.gap_abs, "absolute optimality gap")->check(CLI::NonNegativeNumber);
    cmd->add_option("--gap-rel", f.gap_rel, "relative optimality gap")->check(CLI::NonNegativeNumber);
    cmd->add_option("--node-limit", f.node_limit, "branch-and-bound node limit")->check(CLI::PositiveNumber);
    cmd->add_option("--time-limit-ms", f.time_limit_ms, "wall-clock limit per solve, 0 = none")
        ->check(CLI::NonNegativeNumber);
}

} // namespace cli_detail

/**
 * Entry point of the `fogbank` tool.
 *
 * Exit codes: 0 success, 1 infeasible or invalid result (still written),
 * 2 usage or configuration error.
 */
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    using namespace cli_detail;
    Flags f;
    CLI::App app{"Energy-aware task placement over cloud, fixed fog and vehicular fog nodes", "fogbank"};
    app.require_subcommand(1);

    auto* solve_cmd = app.add_subcommand("solve", "solve one scenario and write the solution JSON");
    add_scenario_flags(solve_cmd, f);
    add_solver_flags(solve_cmd, f);
    solve_cmd->add_option("--out", f.out, "output path (stdout when omitted)");
    solve_cmd->add_flag("--timing", f.timing, "record wall-clock runtime in the output");
    solve_cmd->add_flag("--per-task", f.per_task, "do not merge identical tasks");

    auto* sweep_cmd = app.add_subcommand("sweep", "run the variant x strategy x workload grid and write CSV");
    sweep_cmd->add_option("--config", f.config_path, "configuration JSON (defaults when omitted)");
    sweep_cmd->add_option("--tasks", f.tasks, "number of tasks (overrides config)")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--seed", f.seed, "seed (overrides config)");
    sweep_cmd->add_option("--workers", f.workers, "parallel workers")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--out", f.out, "output path (stdout when omitted)");
    sweep_cmd->add_flag("--timing", f.timing, "record wall-clock runtime_ms (output is then run-dependent)");
    add_solver_flags(sweep_cmd, f);

    auto* oracle_cmd = app.add_subcommand("oracle-check", "compare branch-and-bound with exhaustive oracles");
    oracle_cmd->add_option("--trials", f.trials, "random trials (each runs both strategies)")
        ->check(CLI::NonNegativeNumber);
    oracle_cmd->add_option("--seed", f.seed, "random seed");
    oracle_cmd->add_option("--max-tasks", f.max_tasks, "largest task count per trial")->check(CLI::Range(1, 6));
    oracle_cmd->add_option("--out", f.out, "write the per-trial report here");
    add_solver_flags(oracle_cmd, f);

    auto* validate_cmd = app.add_subcommand("validate", "check a solution JSON against its scenario");
    add_scenario_flags(validate_cmd, f);
    validate_cmd->add_option("--solution", f.solution_path, "solution JSON written by `solve`")->required();

    auto* lp_cmd = app.add_subcommand("export-lp", "write the scenario MILP in LP text format");
    add_scenario_flags(lp_cmd, f);
    lp_cmd->add_option("--out", f.out, "output path (stdout when omitted)");
    lp_cmd->add_flag("--per-task", f.per_task, "do not merge identical tasks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*solve_cmd) {
            ModelConfig cfg = load(f);
            Scenario sc = scenario_from(f, cfg);
            SolveOptions so;
            so.bb = bb_options(f);
            so.build.aggregate_identical_tasks = !f.per_task;
            Solution sol = solve(sc, so);
            if (!f.timing) {
                sol.stats.runtime_ms = 0;
            }
            write(f, emit_solution_json(sol), out);
            if (sol.status != MilpStatus::Optimal) {
                err << "status: " << to_string(sol.status) << "\n";
                return 1;
            }
            return validate(sol, sc).ok ? 0 : 1;
        }
        if (*sweep_cmd) {
            ModelConfig cfg = load(f);
            RunOptions ro;
            ro.solve.bb = bb_options(f);
            ro.workers = f.workers;
            ro.record_timing = f.timing;
            SweepResults rows = run_sweep(cfg, ro);
            write(f, emit_csv(rows), out);
            bool ok = std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.valid; });
            return ok ? 0 : 1;
        }
        if (*oracle_cmd) {
            OracleCheckOptions oo;
            oo.trials = f.trials;
            oo.seed = f.seed.value_or(42);
            oo.max_tasks = f.max_tasks;
            oo.bb = bb_options(f);
            OracleCheckReport rep = oracle_check(oo);
            if (!f.out.empty()) {
                std::ostringstream os;
                os.precision(17);
                os << "trial,strategy,aggregated,tasks,servers,solver_status,oracle_status,solver_w,oracle_w,rel_gap\n";
                for (const auto& t : rep.trials) {
                    os << t.index << ',' << to_string(t.strategy) << ',' << (t.aggregated ? 1 : 0) << ',' << t.tasks
                       << ',' << t.servers << ',' << to_string(t.solver_status) << ','
                       << to_string(t.oracle_status) << ',' << t.solver_w << ',' << t.oracle_w << ',' << t.rel_gap
                       << '\n';
                }
                write(f, os.str(), out);
            }
            int infeasible = 0;
            for (const auto& t : rep.trials) {
                infeasible += t.oracle_status == MilpStatus::Infeasible ? 1 : 0;
            }
            char gap[32];
            std::snprintf(gap, sizeof gap, "%.3e", rep.max_rel_gap);
            out << "instances: " << rep.trials.size() << " (" << infeasible << " infeasible)\n";
            out << "status mismatches: " << rep.status_mismatches << "\n";
            out << "max relative gap: " << gap << "\n";
            out << (rep.passed() ? "PASS" : "FAIL") << "\n";
            return rep.passed() ? 0 : 1;
        }
        if (*validate_cmd) {
            ModelConfig cfg = load(f);
            Scenario sc = scenario_from(f, cfg);
            Solution sol = parse_solution_json(read_file(f.solution_path));
            ValidationReport rep = validate(sol, sc);
            out << (rep.ok ? "ok" : "violations") << "\n";
            for (const auto& v : rep.violations) {
                out << v.constraint << " lhs=" << v.lhs << " rhs=" << v.rhs << " slack=" << v.slack << "\n";
            }
            return rep.ok ? 0 : 1;
        }
        if (*lp_cmd) {
            ModelConfig cfg = load(f);
            Scenario sc = scenario_from(f, cfg);
            BuildOptions bo;
            bo.aggregate_identical_tasks = !f.per_task;
            write(f, export_lp(build_milp(sc, bo)), out);
            return 0;
        }
    } catch (const config_error& e) {
        err << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const precondition_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const lookup_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace fogbank

#endif // FOGBANK_CLI_HPP
