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

#ifndef FOGBANK_SOLVE_HPP
#define FOGBANK_SOLVE_HPP

#include <fogbank/branch_and_bound.hpp>
#include <fogbank/milp.hpp>
#include <fogbank/model.hpp>
#include <fogbank/power.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace fogbank {

struct SolveStats
{
    std::int64_t bb_nodes{0};
    std::int64_t lp_iterations{0};
    double runtime_ms{0};
};

/// Placement chosen for a scenario, in scenario terms (task ids, server ids).
struct Solution
{
    MilpStatus status{MilpStatus::Infeasible};
    double objective_w{std::numeric_limits<double>::quiet_NaN()};
    Allocation allocation;
    std::vector<std::string> activations; ///< servers carrying load, topology order
    PowerBreakdown breakdown;
    SolveStats stats;

    bool has_allocation() const { return status == MilpStatus::Optimal || !activations.empty() || !allocation.empty(); }
};

struct SolveOptions
{
    BranchAndBoundOptions bb{};
    BuildOptions build{};
    bool seed_incumbent{true};
};

/**
 * Greedy placement used only to seed the branch-and-bound cutoff.
 *
 * Tasks in descending workload order go whole onto the feasible server with
 * the smallest marginal power, idle power included when the server is still
 * off. Returns nothing when some task fits nowhere.
 */
inline std::optional<Allocation> greedy_allocation(const Scenario& sc)
{
    const auto& servers = sc.topology.servers;
    const auto& devices = sc.topology.devices;
    const auto route_idx = sc.route_device_indices();
    const auto route_psi = sc.route_energy_per_mbps();

    std::vector<const Task*> order;
    for (const auto& t : sc.tasks) {
        order.push_back(&t);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const Task* a, const Task* b) { return a->workload_mips > b->workload_mips; });

    std::vector<double> load(servers.size(), 0.0);
    std::vector<double> traffic(devices.size(), 0.0);
    Allocation alloc;
    for (const Task* t : order) {
        std::size_t pick = servers.size();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < servers.size(); ++s) {
            if (load[s] + t->workload_mips > servers[s].capacity_mips) {
                continue;
            }
            bool fits = std::all_of(route_idx[s].begin(), route_idx[s].end(), [&](std::size_t d) {
                return traffic[d] + t->traffic_mbps <= devices[d].capacity_mbps;
            });
            if (!fits) {
                continue;
            }
            double cost = (load[s] > 0 ? 0.0 : servers[s].idle_power_w)
                        + servers[s].marginal_w_per_mips() * t->workload_mips + t->traffic_mbps * route_psi[s];
            if (cost < best) {
                best = cost;
                pick = s;
            }
        }
        if (pick == servers.size()) {
            return std::nullopt;
        }
        load[pick] += t->workload_mips;
        for (std::size_t d : route_idx[pick]) {
            traffic[d] += t->traffic_mbps;
        }
        alloc[{t->id, servers[pick].id}] = t->workload_mips;
    }
    return alloc;
}

/**
 * Column values of \p milp that realize \p alloc. Loads among interchangeable
 * servers are permuted into descending order so symmetry rows hold.
 */
inline std::vector<double> columns_from_allocation(const MilpInstance& milp, const Scenario& sc, const Allocation& alloc)
{
    const auto nsrv = sc.topology.servers.size();
    std::map<int, std::size_t> class_of;
    for (std::size_t g = 0; g < milp.task_classes.size(); ++g) {
        for (int id : milp.task_classes[g].task_ids) {
            class_of[id] = g;
        }
    }
    std::vector<std::vector<double>> x(milp.task_classes.size(), std::vector<double>(nsrv, 0.0));
    std::vector<std::vector<double>> d = x;
    for (const auto& [key, mips] : alloc) {
        std::size_t g = class_of.at(key.first);
        std::size_t s = sc.topology.server_index(key.second);
        x[g][s] += mips;
        if (mips > 0) {
            d[g][s] += 1;
        }
    }
    std::vector<double> load(nsrv, 0.0);
    for (std::size_t s = 0; s < nsrv; ++s) {
        for (std::size_t g = 0; g < x.size(); ++g) {
            load[s] += x[g][s];
        }
    }

    std::vector<std::size_t> perm(nsrv);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t begin = 0; begin < nsrv;) {
        std::size_t end = begin + 1;
        while (end < nsrv && same_server_class(sc, end - 1, end)) {
            ++end;
        }
        std::stable_sort(perm.begin() + static_cast<long>(begin), perm.begin() + static_cast<long>(end),
                         [&](std::size_t a, std::size_t b) { return load[a] > load[b]; });
        begin = end;
    }

    std::vector<double> values(milp.num_columns(), 0.0);
    for (std::size_t slot = 0; slot < nsrv; ++slot) {
        std::size_t s = perm[slot];
        values[milp.a_col[slot]] = load[s] > 0 ? 1.0 : 0.0;
        for (std::size_t g = 0; g < x.size(); ++g) {
            values[milp.x_col[g][slot]] = x[g][s];
            if (milp.d_col[g][slot] != no_column) {
                values[milp.d_col[g][slot]] = d[g][s];
            }
        }
    }
    return values;
}

/**
 * Per-task placement from MILP column values.
 *
 * Single: each class's integer counts hand whole tasks to servers in order.
 * Distributed: class volumes are dealt to member tasks north-west-corner
 * style, so each task gets exactly its workload.
 */
inline Allocation extract_allocation(const MilpInstance& milp, const std::vector<double>& values, const Scenario& sc)
{
    const auto& servers = sc.topology.servers;
    Allocation alloc;
    for (std::size_t g = 0; g < milp.task_classes.size(); ++g) {
        const auto& tc = milp.task_classes[g];
        const double w = tc.workload_mips;
        if (milp.strategy == Strategy::Single) {
            std::size_t member = 0;
            for (std::size_t s = 0; s < servers.size(); ++s) {
                auto count = static_cast<long>(std::llround(values[milp.d_col[g][s]]));
                for (long c = 0; c < count && member < tc.task_ids.size(); ++c) {
                    alloc[{tc.task_ids[member++], servers[s].id}] = w;
                }
            }
            continue;
        }

        const double eps = 1e-9 * std::max(1.0, tc.demand_mips());
        std::vector<double> volume(servers.size());
        for (std::size_t s = 0; s < servers.size(); ++s) {
            double v = values[milp.x_col[g][s]];
            volume[s] = v > eps ? v : 0.0;
        }
        std::size_t s = 0;
        for (int id : tc.task_ids) {
            double need = w;
            std::vector<std::pair<std::size_t, double>> cells;
            while (need > 1e-9 * w && s < servers.size()) {
                if (volume[s] <= eps) {
                    ++s;
                    continue;
                }
                double take = std::min(need, volume[s]);
                cells.push_back({s, take});
                need -= take;
                volume[s] -= take;
            }
            if (cells.empty()) {
                continue;
            }
            // Absorb rounding drift so the task's cells sum to its workload.
            double placed = 0;
            for (const auto& c : cells) {
                placed += c.second;
            }
            auto largest = std::max_element(cells.begin(), cells.end(),
                                            [](const auto& a, const auto& b) { return a.second < b.second; });
            largest->second += w - placed;
            for (const auto& [srv, mips] : cells) {
                alloc[{id, servers[srv].id}] += mips;
            }
        }
    }
    return alloc;
}

inline std::vector<std::string> active_servers(const Allocation& alloc, const Topology& topo)
{
    std::vector<double> load(topo.servers.size(), 0.0);
    for (const auto& [key, mips] : alloc) {
        load[topo.server_index(key.second)] += mips;
    }
    std::vector<std::string> out;
    for (std::size_t s = 0; s < load.size(); ++s) {
        if (load[s] > 0) {
            out.push_back(topo.servers[s].id);
        }
    }
    return out;
}

/// Translate a branch-and-bound result back to the scenario.
inline Solution make_solution(const MilpInstance& milp, const MilpResult& r, const Scenario& sc)
{
    Solution sol;
    sol.status = r.status;
    sol.stats = {r.nodes, r.lp_iterations, r.runtime_ms};
    if (!r.has_incumbent) {
        return sol;
    }
    sol.objective_w = r.objective;
    sol.allocation = extract_allocation(milp, r.values, sc);
    sol.activations = active_servers(sol.allocation, sc.topology);
    sol.breakdown = compute_power(sol.allocation, sc);
    auto violations = check_allocation(sol.allocation, sc);
    if (!violations.empty()) {
        throw numerical_failure("solver returned an allocation that violates placement rows:" + describe(violations));
    }
    return sol;
}

/// Build the MILP for \p sc and solve it exactly.
inline Solution solve(const Scenario& sc, const SolveOptions& opts = {})
{
    const auto t0 = std::chrono::steady_clock::now();
    MilpInstance milp = build_milp(sc, opts.build);
    std::optional<std::vector<double>> seed;
    if (opts.seed_incumbent && !milp.structurally_infeasible) {
        if (auto greedy = greedy_allocation(sc)) {
            seed = columns_from_allocation(milp, sc, *greedy);
        }
    }
    MilpResult r = branch_and_bound(milp, opts.bb, seed ? &*seed : nullptr);
    Solution sol = make_solution(milp, r, sc);
    sol.stats.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

} // namespace fogbank

#endif // FOGBANK_SOLVE_HPP
