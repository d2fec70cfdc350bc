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

#ifndef FOGBANK_ORACLE_HPP
#define FOGBANK_ORACLE_HPP

#include <fogbank/config.hpp>
#include <fogbank/errors.hpp>
#include <fogbank/power.hpp>
#include <fogbank/simplex.hpp>
#include <fogbank/solve.hpp>
#include <fogbank/topology.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace fogbank {

/// Exhaustive ground truth plus how many candidates were examined.
struct OracleResult
{
    Solution solution;
    std::size_t candidates{0};
};

namespace detail {

inline Solution oracle_solution(const Allocation* best, const Scenario& sc)
{
    Solution sol;
    if (best == nullptr) {
        sol.status = MilpStatus::Infeasible;
        return sol;
    }
    sol.status = MilpStatus::Optimal;
    sol.allocation = *best;
    sol.breakdown = evaluate_power(*best, sc);
    sol.objective_w = sol.breakdown.total_w;
    sol.activations = active_servers(*best, sc.topology);
    return sol;
}

} // namespace detail

/**
 * Try every whole-task assignment (servers^tasks) and keep the cheapest
 * capacity-feasible one, priced by evaluate_power. Limited to 6 tasks and
 * 6 servers.
 */
inline OracleResult enumerate_single(const Scenario& sc)
{
    const auto& servers = sc.topology.servers;
    const auto& devices = sc.topology.devices;
    const std::size_t nt = sc.tasks.size(), ns = servers.size();
    if (nt > 6 || ns > 6) {
        throw precondition_error("enumerate_single: limited to 6 tasks and 6 servers");
    }
    OracleResult out;
    if (nt == 0) {
        Allocation empty;
        out.candidates = 1;
        out.solution = detail::oracle_solution(&empty, sc);
        return out;
    }
    if (ns == 0) {
        out.solution = detail::oracle_solution(nullptr, sc);
        return out;
    }
    const auto route_idx = sc.route_device_indices();

    std::vector<std::size_t> pick(nt, 0);
    std::optional<Allocation> best;
    double best_w = std::numeric_limits<double>::infinity();
    for (;;) {
        ++out.candidates;
        std::vector<double> load(ns, 0.0), traffic(devices.size(), 0.0);
        for (std::size_t k = 0; k < nt; ++k) {
            load[pick[k]] += sc.tasks[k].workload_mips;
            for (std::size_t d : route_idx[pick[k]]) {
                traffic[d] += sc.tasks[k].traffic_mbps;
            }
        }
        bool feasible = true;
        for (std::size_t s = 0; s < ns && feasible; ++s) {
            feasible = load[s] <= servers[s].capacity_mips + row_tolerance(servers[s].capacity_mips);
        }
        for (std::size_t d = 0; d < devices.size() && feasible; ++d) {
            feasible = traffic[d] <= devices[d].capacity_mbps + row_tolerance(devices[d].capacity_mbps);
        }
        if (feasible) {
            Allocation alloc;
            for (std::size_t k = 0; k < nt; ++k) {
                alloc[{sc.tasks[k].id, servers[pick[k]].id}] = sc.tasks[k].workload_mips;
            }
            double w = evaluate_power(alloc, sc).total_w;
            if (w < best_w) {
                best_w = w;
                best = std::move(alloc);
            }
        }
        std::size_t k = 0;
        while (k < nt && ++pick[k] == ns) {
            pick[k++] = 0;
        }
        if (k == nt) {
            break;
        }
    }
    out.solution = detail::oracle_solution(best ? &*best : nullptr, sc);
    return out;
}

/**
 * For every subset of powered-on servers solve the remaining split-placement
 * LP with the simplex and keep the cheapest result, priced by evaluate_power.
 * Limited to 12 servers (4096 subsets).
 */
inline OracleResult enumerate_distributed(const Scenario& sc, const SimplexOptions& lp_opts = {})
{
    const auto& servers = sc.topology.servers;
    const auto& devices = sc.topology.devices;
    const std::size_t nt = sc.tasks.size(), ns = servers.size();
    if (ns > 12) {
        throw precondition_error("enumerate_distributed: limited to 12 servers");
    }
    OracleResult out;
    if (nt == 0) {
        Allocation empty;
        out.candidates = 1;
        out.solution = detail::oracle_solution(&empty, sc);
        return out;
    }
    const auto route_idx = sc.route_device_indices();
    const auto route_psi = sc.route_energy_per_mbps();
    const double demand = sc.total_demand_mips();

    std::optional<Allocation> best;
    double best_w = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask < (1u << ns); ++mask) {
        ++out.candidates;
        std::vector<std::size_t> on;
        double capacity = 0;
        for (std::size_t s = 0; s < ns; ++s) {
            if (mask & (1u << s)) {
                on.push_back(s);
                capacity += servers[s].capacity_mips;
            }
        }
        if (capacity < demand * (1 - 1e-12)) {
            continue;
        }

        MilpInstance lp;
        std::vector<std::vector<std::size_t>> col(nt, std::vector<std::size_t>(ns, no_column));
        for (std::size_t k = 0; k < nt; ++k) {
            const auto& t = sc.tasks[k];
            for (std::size_t s : on) {
                double cost = servers[s].marginal_w_per_mips() + t.traffic_mbps / t.workload_mips * route_psi[s];
                col[k][s] = lp.add_variable({"x" + std::to_string(k) + "_" + std::to_string(s), 0,
                                             std::min(t.workload_mips, servers[s].capacity_mips),
                                             Integrality::Continuous, 0},
                                            cost);
            }
            Constraint dem{"dem", {}, Relation::Equal, t.workload_mips};
            for (std::size_t s : on) {
                dem.terms.push_back({col[k][s], 1.0});
            }
            lp.constraints.push_back(std::move(dem));
        }
        for (std::size_t s : on) {
            Constraint cap{"cap", {}, Relation::LessEqual, servers[s].capacity_mips};
            for (std::size_t k = 0; k < nt; ++k) {
                cap.terms.push_back({col[k][s], 1.0});
            }
            lp.constraints.push_back(std::move(cap));
        }
        for (std::size_t d = 0; d < devices.size(); ++d) {
            Constraint row{"dev", {}, Relation::LessEqual, devices[d].capacity_mbps};
            for (std::size_t s : on) {
                bool crosses = false;
                for (std::size_t r : route_idx[s]) {
                    crosses = crosses || r == d;
                }
                if (!crosses) {
                    continue;
                }
                for (std::size_t k = 0; k < nt; ++k) {
                    row.terms.push_back({col[k][s], sc.tasks[k].traffic_mbps / sc.tasks[k].workload_mips});
                }
            }
            if (!row.terms.empty()) {
                lp.constraints.push_back(std::move(row));
            }
        }

        LpSolution sol = simplex_solve(lp, lp_opts);
        if (sol.status != LpStatus::Optimal) {
            continue;
        }
        Allocation alloc;
        for (std::size_t k = 0; k < nt; ++k) {
            const auto& t = sc.tasks[k];
            for (std::size_t s : on) {
                double v = sol.values[col[k][s]];
                if (v > 1e-12 * t.workload_mips) {
                    alloc[{t.id, servers[s].id}] = v;
                }
            }
        }
        double w = evaluate_power(alloc, sc).total_w;
        if (w < best_w) {
            best_w = w;
            best = std::move(alloc);
        }
    }
    out.solution = detail::oracle_solution(best ? &*best : nullptr, sc);
    return out;
}

/// Small random scenario with mixed tiers, perturbed profiles and sometimes binding links.
inline Scenario random_instance(std::mt19937_64& rng, Strategy strategy, int max_tasks, int max_servers)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    const ModelConfig defaults;
    const int nservers = pick(1, max_servers);
    std::vector<std::pair<Tier, int>> slots;
    for (int i = 0; i < nservers; ++i) {
        Tier tier = static_cast<Tier>(pick(0, 3));
        slots.push_back({tier, tier == Tier::VN ? pick(1, 4) : 0});
    }
    std::stable_sort(slots.begin(), slots.end());

    Topology topo;
    topo.vf_ids = {1, 2, 3, 4};
    std::map<Tier, int> counter;
    std::map<int, int> vn_counter;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        auto [tier, vf] = slots[i];
        const TierProfile& base = tier == Tier::CC   ? defaults.cc
                                : tier == Tier::LF ? defaults.lf
                                : tier == Tier::NF ? defaults.nf
                                                   : defaults.vn;
        double cap_scale = tier == Tier::CC ? uniform(0.05, 0.3) : tier == Tier::LF ? uniform(0.05, 0.5) : uniform(0.5, 1.5);
        ServerSpec s;
        s.tier = tier;
        s.capacity_mips = std::round(base.capacity_mips * cap_scale);
        s.idle_power_w = unit(rng) < 0.1 ? 0.0 : base.idle_power_w * uniform(0.5, 1.5);
        s.max_power_w = s.idle_power_w + (base.max_power_w - base.idle_power_w) * uniform(0.5, 1.5);
        if (tier == Tier::VN) {
            s.vf_id = vf;
            s.id = "vf" + std::to_string(vf) + "_vn" + std::to_string(++vn_counter[vf]);
        } else {
            std::string prefix = tier == Tier::CC ? "cc" : tier == Tier::LF ? "lf" : "nf";
            s.id = prefix + std::to_string(++counter[tier]);
        }
        // Now and then clone the previous server to exercise the symmetry rows.
        if (i > 0 && slots[i - 1] == slots[i] && unit(rng) < 0.4) {
            const auto& prev = topo.servers.back();
            s.capacity_mips = prev.capacity_mips;
            s.idle_power_w = prev.idle_power_w;
            s.max_power_w = prev.max_power_w;
        }
        topo.servers.push_back(std::move(s));
    }
    const std::pair<const char*, DeviceKind> kinds[] = {{"rsu1", DeviceKind::RSU}, {"rsu2", DeviceKind::RSU},
                                                        {"rsu3", DeviceKind::RSU}, {"rsu4", DeviceKind::RSU},
                                                        {"onu", DeviceKind::ONU},  {"olt", DeviceKind::OLT},
                                                        {"metro", DeviceKind::METRO}, {"core", DeviceKind::CORE}};
    for (const auto& [id, kind] : kinds) {
        const auto& p = defaults.network.at(kind);
        double cap = unit(rng) < 0.2 ? std::round(uniform(40, 250)) : p.capacity_mbps;
        topo.devices.push_back({id, kind, p.energy_per_mbps_w * uniform(0.5, 1.5), cap});
    }

    const int source_vf = pick(1, 4);
    TaskSet tasks;
    const int ntasks = pick(1, max_tasks);
    for (int k = 1; k <= ntasks; ++k) {
        double w = 500.0 * pick(1, 10);
        tasks.push_back({k, w, w * defaults.traffic_per_mips, source_vf});
    }
    return make_scenario(std::move(topo), std::move(tasks), strategy, Variant::CloudFog, source_vf);
}

struct OracleCheckOptions
{
    int trials{200};
    std::uint64_t seed{42};
    int max_tasks{5};
    int max_servers_single{6};
    int max_servers_distributed{12};
    BranchAndBoundOptions bb{};
};

struct OracleTrial
{
    int index{0};
    Strategy strategy{Strategy::Single};
    bool aggregated{true};
    std::size_t tasks{0};
    std::size_t servers{0};
    MilpStatus solver_status{MilpStatus::Infeasible};
    MilpStatus oracle_status{MilpStatus::Infeasible};
    double solver_w{0};
    double oracle_w{0};
    double rel_gap{0};
};

struct OracleCheckReport
{
    std::vector<OracleTrial> trials;
    double max_rel_gap{0};
    int status_mismatches{0};
    double runtime_ms{0};

    bool passed(double tolerance = 1e-6) const { return status_mismatches == 0 && max_rel_gap <= tolerance; }
};

/**
 * Compare branch-and-bound against the enumeration oracles on seeded random
 * instances. Each trial runs one single-strategy and one distributed
 * instance; odd trials disable identical-task aggregation.
 */
inline OracleCheckReport oracle_check(const OracleCheckOptions& opts)
{
    if (opts.trials < 0 || opts.max_tasks < 1 || opts.max_tasks > 6) {
        throw precondition_error("oracle_check: need trials >= 0 and 1 <= max_tasks <= 6");
    }
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(opts.seed);
    OracleCheckReport report;
    for (int i = 0; i < opts.trials; ++i) {
        for (Strategy strategy : all_strategies) {
            int max_servers = strategy == Strategy::Single ? opts.max_servers_single : opts.max_servers_distributed;
            Scenario sc = random_instance(rng, strategy, opts.max_tasks, max_servers);
            SolveOptions so;
            so.bb = opts.bb;
            so.build.aggregate_identical_tasks = i % 2 == 0;
            Solution bb = solve(sc, so);
            OracleResult oracle = strategy == Strategy::Single ? enumerate_single(sc) : enumerate_distributed(sc, opts.bb.lp);

            OracleTrial t;
            t.index = i;
            t.strategy = strategy;
            t.aggregated = so.build.aggregate_identical_tasks;
            t.tasks = sc.tasks.size();
            t.servers = sc.topology.servers.size();
            t.solver_status = bb.status;
            t.oracle_status = oracle.solution.status;
            t.solver_w = bb.objective_w;
            t.oracle_w = oracle.solution.objective_w;
            if (t.solver_status != t.oracle_status) {
                ++report.status_mismatches;
                t.rel_gap = std::numeric_limits<double>::infinity();
            } else if (t.solver_status == MilpStatus::Optimal) {
                t.rel_gap = std::abs(t.solver_w - t.oracle_w) / std::max(std::abs(t.oracle_w), 1e-12);
            }
            report.max_rel_gap = std::max(report.max_rel_gap, t.rel_gap);
            report.trials.push_back(t);
        }
    }
    report.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace fogbank

#endif // FOGBANK_ORACLE_HPP
