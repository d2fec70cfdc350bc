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

#ifndef FOGBANK_TESTS_SUPPORT_HPP
#define FOGBANK_TESTS_SUPPORT_HPP

#include <fogbank/fogbank.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace fogbank::testing {

/// The default network with every Fogbank RSU and the shared upstream chain.
inline Topology network_only(const ModelConfig& cfg = {})
{
    Topology t = build_topology(cfg, Variant::CCOnly);
    t.servers.clear();
    return t;
}

inline ServerSpec server(std::string id, Tier tier, double cap, double idle, double max, std::optional<int> vf = {})
{
    return {std::move(id), tier, cap, idle, max, vf};
}

inline ServerSpec vehicle(int vf, int i, const ModelConfig& cfg = {})
{
    return {"vf" + std::to_string(vf) + "_vn" + std::to_string(i), Tier::VN, cfg.vn.capacity_mips,
            cfg.vn.idle_power_w, cfg.vn.max_power_w, vf};
}

inline Scenario custom(std::vector<ServerSpec> servers, std::vector<double> workloads,
                       Strategy strategy = Strategy::Single, int source_vf = 1)
{
    Topology t = network_only();
    t.servers = std::move(servers);
    TaskSet tasks;
    for (std::size_t k = 0; k < workloads.size(); ++k) {
        tasks.push_back({static_cast<int>(k) + 1, workloads[k], workloads[k] * 0.01, source_vf});
    }
    return make_scenario(std::move(t), std::move(tasks), strategy, Variant::CloudFog, source_vf);
}

inline ModelConfig small_config(int tasks)
{
    ModelConfig cfg;
    cfg.task_count = tasks;
    return cfg;
}

/// Multiply every power coefficient of the scenario by \p c.
inline Scenario scaled(Scenario sc, double c)
{
    for (auto& s : sc.topology.servers) {
        s.idle_power_w *= c;
        s.max_power_w *= c;
    }
    for (auto& d : sc.topology.devices) {
        d.energy_per_mbps_w *= c;
    }
    return sc;
}

inline bool near_rel(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

} // namespace fogbank::testing

#endif // FOGBANK_TESTS_SUPPORT_HPP
