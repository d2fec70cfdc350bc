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

#ifndef FOGBANK_POWER_HPP
#define FOGBANK_POWER_HPP

#include <fogbank/errors.hpp>
#include <fogbank/model.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fogbank {

/// MIPS of task (first) placed on server (second).
using Allocation = std::map<std::pair<int, std::string>, double>;

struct PowerBreakdown
{
    double processing_w{0};
    double networking_w{0};
    double total_w{0};
    std::map<std::string, double> per_server_w;
    std::map<std::string, double> per_device_w;
};

struct Violation
{
    std::string constraint;
    double lhs{0};
    double rhs{0};
    double slack{0}; ///< rhs - lhs; negative means overfilled
};

/// Feasibility tolerance for a row with right-hand side \p rhs and term magnitude \p scale.
inline double row_tolerance(double rhs, double scale = 0)
{
    return 1e-9 * std::max({1.0, std::abs(rhs), std::abs(scale)});
}

/**
 * Re-derive demand, processing capacity, link capacity and (for the single
 * strategy) one-node-per-task rows from the scenario and test \p alloc.
 */
inline std::vector<Violation> check_allocation(const Allocation& alloc, const Scenario& sc)
{
    const auto& servers = sc.topology.servers;
    const auto& devices = sc.topology.devices;
    auto route_idx = sc.route_device_indices();

    std::map<int, const Task*> task_by_id;
    for (const auto& t : sc.tasks) {
        task_by_id[t.id] = &t;
    }
    std::map<std::string, std::size_t> server_by_id;
    for (std::size_t s = 0; s < servers.size(); ++s) {
        server_by_id[servers[s].id] = s;
    }

    std::vector<Violation> out;
    std::map<int, double> placed;
    std::map<int, int> nodes_used;
    std::vector<double> load(servers.size(), 0.0);
    std::vector<double> traffic(devices.size(), 0.0);

    for (const auto& [key, mips] : alloc) {
        const auto& [task_id, server_id] = key;
        auto t = task_by_id.find(task_id);
        auto s = server_by_id.find(server_id);
        if (t == task_by_id.end() || s == server_by_id.end()) {
            out.push_back({"ref_" + std::to_string(task_id) + "_" + server_id, mips, 0, -mips});
            continue;
        }
        if (mips < 0) {
            out.push_back({"nonneg_" + std::to_string(task_id) + "_" + server_id, mips, 0, mips});
        }
        placed[task_id] += mips;
        if (mips > 0) {
            nodes_used[task_id] += 1;
        }
        load[s->second] += mips;
        double mbps = t->second->traffic_mbps * mips / t->second->workload_mips;
        for (std::size_t d : route_idx[s->second]) {
            traffic[d] += mbps;
        }
    }

    for (const auto& t : sc.tasks) {
        double lhs = placed[t.id];
        if (std::abs(lhs - t.workload_mips) > row_tolerance(t.workload_mips)) {
            out.push_back({"dem_" + std::to_string(t.id), lhs, t.workload_mips, t.workload_mips - lhs});
        }
        if (sc.strategy == Strategy::Single && nodes_used[t.id] > 1) {
            out.push_back({"single_" + std::to_string(t.id), static_cast<double>(nodes_used[t.id]), 1,
                           1.0 - nodes_used[t.id]});
        }
    }
    for (std::size_t s = 0; s < servers.size(); ++s) {
        double cap = servers[s].capacity_mips;
        if (load[s] - cap > row_tolerance(cap)) {
            out.push_back({"cap_" + servers[s].id, load[s], cap, cap - load[s]});
        }
    }
    for (std::size_t d = 0; d < devices.size(); ++d) {
        double cap = devices[d].capacity_mbps;
        if (traffic[d] - cap > row_tolerance(cap)) {
            out.push_back({"dev_" + devices[d].id, traffic[d], cap, cap - traffic[d]});
        }
    }
    return out;
}

/// Power of an allocation without feasibility checks. Servers with load > 0 pay idle power.
inline PowerBreakdown compute_power(const Allocation& alloc, const Scenario& sc)
{
    const auto& servers = sc.topology.servers;
    const auto& devices = sc.topology.devices;
    auto route_idx = sc.route_device_indices();

    std::map<int, const Task*> task_by_id;
    for (const auto& t : sc.tasks) {
        task_by_id[t.id] = &t;
    }
    std::vector<double> load(servers.size(), 0.0);
    std::vector<double> traffic(devices.size(), 0.0);
    for (const auto& [key, mips] : alloc) {
        std::size_t s = sc.topology.server_index(key.second);
        auto t = task_by_id.find(key.first);
        if (t == task_by_id.end()) {
            throw lookup_error("unknown task " + std::to_string(key.first));
        }
        load[s] += mips;
        double mbps = t->second->traffic_mbps / t->second->workload_mips * mips;
        for (std::size_t d : route_idx[s]) {
            traffic[d] += mbps;
        }
    }

    PowerBreakdown pb;
    for (std::size_t s = 0; s < servers.size(); ++s) {
        double w = 0;
        if (load[s] > 0) {
            const auto& spec = servers[s];
            w = spec.idle_power_w + (spec.max_power_w - spec.idle_power_w) / spec.capacity_mips * load[s];
        }
        pb.per_server_w[servers[s].id] = w;
        pb.processing_w += w;
    }
    for (std::size_t d = 0; d < devices.size(); ++d) {
        double w = devices[d].energy_per_mbps_w * traffic[d];
        pb.per_device_w[devices[d].id] = w;
        pb.networking_w += w;
    }
    pb.total_w = pb.processing_w + pb.networking_w;
    return pb;
}

inline std::string describe(const std::vector<Violation>& vs)
{
    std::ostringstream os;
    os.precision(10);
    for (const auto& v : vs) {
        os << "\n  " << v.constraint << ": lhs=" << v.lhs << " rhs=" << v.rhs << " slack=" << v.slack;
    }
    return os.str();
}

/**
 * Total processing plus networking power of a placement, computed directly
 * from server profiles and the devices each task's traffic crosses.
 *
 * Throws validation_error listing every violated row when the allocation is
 * not feasible for the scenario.
 */
inline PowerBreakdown evaluate_power(const Allocation& alloc, const Scenario& sc)
{
    auto violations = check_allocation(alloc, sc);
    if (!violations.empty()) {
        throw validation_error("infeasible allocation:" + describe(violations));
    }
    return compute_power(alloc, sc);
}

} // namespace fogbank

#endif // FOGBANK_POWER_HPP
