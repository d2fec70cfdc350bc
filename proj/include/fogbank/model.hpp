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

#ifndef FOGBANK_MODEL_HPP
#define FOGBANK_MODEL_HPP

#include <fogbank/errors.hpp>

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fogbank {

enum class Tier { CC, LF, NF, VN };
enum class DeviceKind { RSU, ONU, OLT, METRO, CORE };
enum class Strategy { Single, Distributed };
enum class Variant { CCOnly, CloudFog, LowDensity, HighDensity };

inline constexpr std::array<Variant, 4> all_variants{Variant::CCOnly, Variant::CloudFog,
                                                     Variant::LowDensity, Variant::HighDensity};
inline constexpr std::array<Strategy, 2> all_strategies{Strategy::Single, Strategy::Distributed};

inline std::string_view to_string(Tier t)
{
    switch (t) {
    case Tier::CC: return "CC";
    case Tier::LF: return "LF";
    case Tier::NF: return "NF";
    case Tier::VN: return "VN";
    }
    return "?";
}

inline std::string_view to_string(DeviceKind k)
{
    switch (k) {
    case DeviceKind::RSU: return "RSU";
    case DeviceKind::ONU: return "ONU";
    case DeviceKind::OLT: return "OLT";
    case DeviceKind::METRO: return "METRO";
    case DeviceKind::CORE: return "CORE";
    }
    return "?";
}

// Short names double as CLI flag values and CSV cells.
inline std::string_view to_string(Strategy s)
{
    return s == Strategy::Single ? "single" : "distributed";
}

inline std::string_view to_string(Variant v)
{
    switch (v) {
    case Variant::CCOnly: return "cc";
    case Variant::CloudFog: return "cf";
    case Variant::LowDensity: return "low";
    case Variant::HighDensity: return "high";
    }
    return "?";
}

inline Strategy parse_strategy(std::string_view s)
{
    if (s == "single") {
        return Strategy::Single;
    }
    if (s == "distributed") {
        return Strategy::Distributed;
    }
    throw precondition_error("unknown strategy '" + std::string(s) + "'");
}

inline Variant parse_variant(std::string_view s)
{
    for (Variant v : all_variants) {
        if (to_string(v) == s) {
            return v;
        }
    }
    throw precondition_error("unknown variant '" + std::string(s) + "'");
}

struct ServerSpec
{
    std::string id;
    Tier tier{Tier::CC};
    double capacity_mips{0};
    double idle_power_w{0};
    double max_power_w{0};
    std::optional<int> vf_id;

    /// Incremental watts per MIPS above idle.
    double marginal_w_per_mips() const { return (max_power_w - idle_power_w) / capacity_mips; }

    void validate() const
    {
        if (!(capacity_mips > 0)) {
            throw config_error(id + ".capacity_mips", "server " + id + ": capacity_mips must be > 0");
        }
        if (!(idle_power_w >= 0)) {
            throw config_error(id + ".idle_power_w", "server " + id + ": idle_power_w must be >= 0");
        }
        if (!(max_power_w > 0) || idle_power_w > max_power_w) {
            throw config_error(id + ".max_power_w",
                               "server " + id + ": requires 0 <= idle_power_w <= max_power_w, max_power_w > 0");
        }
        if (vf_id.has_value() != (tier == Tier::VN)) {
            throw config_error(id + ".vf_id", "server " + id + ": vf_id must be set exactly for VN servers");
        }
    }

    bool operator==(const ServerSpec&) const = default;
};

struct NetworkDeviceSpec
{
    std::string id;
    DeviceKind kind{DeviceKind::RSU};
    double energy_per_mbps_w{0};
    double capacity_mbps{0};

    void validate() const
    {
        if (!(energy_per_mbps_w >= 0)) {
            throw config_error(id + ".energy_per_mbps_w", "device " + id + ": energy_per_mbps_w must be >= 0");
        }
        if (!(capacity_mbps > 0)) {
            throw config_error(id + ".capacity_mbps", "device " + id + ": capacity_mbps must be > 0");
        }
    }

    bool operator==(const NetworkDeviceSpec&) const = default;
};

struct Route
{
    std::string target_server;
    std::vector<std::string> devices; ///< source RSU first

    bool operator==(const Route&) const = default;
};

struct Task
{
    int id{0};
    double workload_mips{0};
    double traffic_mbps{0};
    int source_vf{1};
};

using TaskSet = std::vector<Task>;

/**
 * Processing nodes and network devices of one architecture instance.
 *
 * Every Fogbank listed in \c vf_ids owns an RSU named "rsu<id>", whether or
 * not it currently hosts vehicles.
 */
struct Topology
{
    std::vector<ServerSpec> servers;
    std::vector<NetworkDeviceSpec> devices;
    std::vector<int> vf_ids;

    std::size_t server_index(std::string_view id) const
    {
        for (std::size_t i = 0; i < servers.size(); ++i) {
            if (servers[i].id == id) {
                return i;
            }
        }
        throw lookup_error("unknown server '" + std::string(id) + "'");
    }

    std::size_t device_index(std::string_view id) const
    {
        for (std::size_t i = 0; i < devices.size(); ++i) {
            if (devices[i].id == id) {
                return i;
            }
        }
        throw lookup_error("unknown network device '" + std::string(id) + "'");
    }

    bool has_vf(int vf) const
    {
        for (int v : vf_ids) {
            if (v == vf) {
                return true;
            }
        }
        return false;
    }

    std::size_t count(Tier t) const
    {
        std::size_t n = 0;
        for (const auto& s : servers) {
            n += s.tier == t ? 1 : 0;
        }
        return n;
    }

    bool operator==(const Topology&) const = default;
};

/// One route per server, aligned with Topology::servers.
struct RouteTable
{
    std::vector<Route> routes;

    const Route& to(std::string_view server_id) const
    {
        for (const auto& r : routes) {
            if (r.target_server == server_id) {
                return r;
            }
        }
        throw lookup_error("no route to server '" + std::string(server_id) + "'");
    }
};

struct Scenario
{
    Topology topology;
    RouteTable routes;
    TaskSet tasks;
    Strategy strategy{Strategy::Single};
    Variant variant{Variant::CloudFog};
    int source_vf{1};

    double total_demand_mips() const
    {
        double sum = 0;
        for (const auto& t : tasks) {
            sum += t.workload_mips;
        }
        return sum;
    }

    /// Device indices along the route to each server.
    std::vector<std::vector<std::size_t>> route_device_indices() const
    {
        std::vector<std::vector<std::size_t>> out(topology.servers.size());
        for (std::size_t s = 0; s < topology.servers.size(); ++s) {
            for (const auto& d : routes.routes.at(s).devices) {
                out[s].push_back(topology.device_index(d));
            }
        }
        return out;
    }

    /// Summed per-Mbps energy of every device on the route to each server.
    std::vector<double> route_energy_per_mbps() const
    {
        std::vector<double> out(topology.servers.size(), 0.0);
        auto idx = route_device_indices();
        for (std::size_t s = 0; s < idx.size(); ++s) {
            for (std::size_t d : idx[s]) {
                out[s] += topology.devices[d].energy_per_mbps_w;
            }
        }
        return out;
    }
};

} // namespace fogbank

#endif // FOGBANK_MODEL_HPP
