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

#ifndef FOGBANK_TOPOLOGY_HPP
#define FOGBANK_TOPOLOGY_HPP

#include <fogbank/config.hpp>
#include <fogbank/errors.hpp>
#include <fogbank/model.hpp>

#include <cstdint>
#include <random>
#include <set>
#include <string>

namespace fogbank {

inline std::string rsu_id(int vf) { return "rsu" + std::to_string(vf); }

inline int vehicles_per_vf(const ModelConfig& cfg, Variant variant)
{
    switch (variant) {
    case Variant::LowDensity: return cfg.vehicles_per_vf_low;
    case Variant::HighDensity: return cfg.vehicles_per_vf_high;
    default: return 0;
    }
}

/**
 * Instantiate the cloud / fixed-fog / vehicular-fog architecture.
 *
 * Server order is CC pool, LF, NF, then the vehicles of each Fogbank in
 * ascending Fogbank id. The variant decides which tiers are present.
 */
inline Topology build_topology(const ModelConfig& cfg, Variant variant)
{
    cfg.validate();
    Topology topo;
    auto add_pool = [&](Tier tier, const TierProfile& p, int count, const std::string& prefix) {
        for (int i = 1; i <= count; ++i) {
            topo.servers.push_back({prefix + std::to_string(i), tier, p.capacity_mips, p.idle_power_w,
                                    p.max_power_w, std::nullopt});
        }
    };
    add_pool(Tier::CC, cfg.cc, cfg.cc_pool_size(), "cc");
    if (variant != Variant::CCOnly) {
        add_pool(Tier::LF, cfg.lf, cfg.lf.count, "lf");
        add_pool(Tier::NF, cfg.nf, cfg.nf.count, "nf");
    }
    int per_vf = vehicles_per_vf(cfg, variant);
    for (int vf = 1; vf <= cfg.vf_count; ++vf) {
        topo.vf_ids.push_back(vf);
        for (int i = 1; i <= per_vf; ++i) {
            topo.servers.push_back({"vf" + std::to_string(vf) + "_vn" + std::to_string(i), Tier::VN,
                                    cfg.vn.capacity_mips, cfg.vn.idle_power_w, cfg.vn.max_power_w, vf});
        }
    }

    auto profile = [&](DeviceKind k) { return cfg.network.at(k); };
    for (int vf : topo.vf_ids) {
        auto p = profile(DeviceKind::RSU);
        topo.devices.push_back({rsu_id(vf), DeviceKind::RSU, p.energy_per_mbps_w, p.capacity_mbps});
    }
    const std::pair<const char*, DeviceKind> upstream[] = {
        {"onu", DeviceKind::ONU}, {"olt", DeviceKind::OLT}, {"metro", DeviceKind::METRO}, {"core", DeviceKind::CORE}};
    for (const auto& [id, kind] : upstream) {
        auto p = profile(kind);
        topo.devices.push_back({id, kind, p.energy_per_mbps_w, p.capacity_mbps});
    }
    return topo;
}

/**
 * Path of every task's traffic from the source Fogbank's RSU to each server.
 *
 * RSUs only reach each other through the ONU, so remote vehicles sit behind
 * [source RSU, ONU, remote RSU].
 */
inline RouteTable derive_routes(const Topology& topo, int source_vf)
{
    if (!topo.has_vf(source_vf)) {
        throw lookup_error("unknown source Fogbank vf" + std::to_string(source_vf));
    }
    const std::string src = rsu_id(source_vf);
    RouteTable table;
    table.routes.reserve(topo.servers.size());
    for (const auto& s : topo.servers) {
        Route r{s.id, {src}};
        switch (s.tier) {
        case Tier::CC: r.devices.insert(r.devices.end(), {"onu", "olt", "metro", "core"}); break;
        case Tier::LF: r.devices.insert(r.devices.end(), {"onu", "olt"}); break;
        case Tier::NF: r.devices.push_back("onu"); break;
        case Tier::VN:
            if (*s.vf_id != source_vf) {
                r.devices.push_back("onu");
                r.devices.push_back(rsu_id(*s.vf_id));
            }
            break;
        }
        for (const auto& d : r.devices) {
            (void)topo.device_index(d);
        }
        table.routes.push_back(std::move(r));
    }
    return table;
}

struct TaskOptions
{
    double traffic_per_mips{0.01};
    int source_vf{1};
    WorkloadMode mode{WorkloadMode::Uniform};
    double random_min_mips{500};
    double random_max_mips{5000};
};

/// Task ids run 1..count; traffic follows workload at traffic_per_mips.
inline TaskSet make_tasks(int count, double workload_mips, std::uint64_t seed, const TaskOptions& opts = {})
{
    if (count < 1) {
        throw precondition_error("make_tasks: count must be >= 1");
    }
    if (opts.mode == WorkloadMode::Uniform && !(workload_mips > 0)) {
        throw precondition_error("make_tasks: workload must be > 0");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> draw(opts.random_min_mips, opts.random_max_mips);
    TaskSet tasks;
    tasks.reserve(static_cast<std::size_t>(count));
    for (int k = 1; k <= count; ++k) {
        double w = opts.mode == WorkloadMode::Uniform ? workload_mips : draw(rng);
        tasks.push_back({k, w, w * opts.traffic_per_mips, opts.source_vf});
    }
    return tasks;
}

inline TaskOptions task_options(const ModelConfig& cfg)
{
    return {cfg.traffic_per_mips, cfg.source_vf, cfg.workload_mode, cfg.random_min_mips, cfg.random_max_mips};
}

/// Check the structural invariants that tie tasks, routes and topology together.
inline void validate_scenario(const Scenario& sc)
{
    std::set<std::string> ids;
    for (const auto& s : sc.topology.servers) {
        s.validate();
        if (!ids.insert(s.id).second) {
            throw config_error(s.id, "duplicate server id " + s.id);
        }
        if (s.vf_id && !sc.topology.has_vf(*s.vf_id)) {
            throw config_error(s.id + ".vf_id", "server " + s.id + " belongs to an unknown Fogbank");
        }
    }
    for (const auto& d : sc.topology.devices) {
        d.validate();
        if (!ids.insert(d.id).second) {
            throw config_error(d.id, "duplicate id " + d.id);
        }
    }
    if (sc.routes.routes.size() != sc.topology.servers.size()) {
        throw config_error("routes", "route table must hold one route per server");
    }
    for (std::size_t i = 0; i < sc.routes.routes.size(); ++i) {
        const auto& r = sc.routes.routes[i];
        if (r.target_server != sc.topology.servers[i].id) {
            throw config_error("routes", "route table out of order at " + r.target_server);
        }
        if (r.devices.empty() || r.devices.front() != rsu_id(sc.source_vf)) {
            throw config_error("routes", "route to " + r.target_server + " must start at the source RSU");
        }
        std::set<std::string> seen(r.devices.begin(), r.devices.end());
        if (seen.size() != r.devices.size()) {
            throw config_error("routes", "route to " + r.target_server + " repeats a device");
        }
    }
    std::set<int> task_ids;
    for (const auto& t : sc.tasks) {
        if (!(t.workload_mips > 0) || !(t.traffic_mbps > 0)) {
            throw config_error("tasks", "task " + std::to_string(t.id) + " needs positive workload and traffic");
        }
        if (t.source_vf != sc.source_vf) {
            throw config_error("tasks", "task " + std::to_string(t.id) + " does not originate in the source Fogbank");
        }
        if (!task_ids.insert(t.id).second) {
            throw config_error("tasks", "duplicate task id " + std::to_string(t.id));
        }
    }
}

inline Scenario make_scenario(Topology topology, TaskSet tasks, Strategy strategy, Variant variant, int source_vf)
{
    Scenario sc;
    sc.routes = derive_routes(topology, source_vf);
    sc.topology = std::move(topology);
    sc.tasks = std::move(tasks);
    sc.strategy = strategy;
    sc.variant = variant;
    sc.source_vf = source_vf;
    validate_scenario(sc);
    return sc;
}

/// Scenario for one sweep cell: all tasks share \p workload_mips (uniform mode).
inline Scenario make_scenario(const ModelConfig& cfg, Variant variant, Strategy strategy, double workload_mips)
{
    return make_scenario(build_topology(cfg, variant),
                         make_tasks(cfg.task_count, workload_mips, cfg.seed, task_options(cfg)), strategy, variant,
                         cfg.source_vf);
}

} // namespace fogbank

#endif // FOGBANK_TOPOLOGY_HPP
