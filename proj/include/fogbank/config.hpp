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

#ifndef FOGBANK_CONFIG_HPP
#define FOGBANK_CONFIG_HPP

#include <fogbank/errors.hpp>
#include <fogbank/model.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fogbank {

inline constexpr int config_schema_version = 1;

struct TierProfile
{
    double capacity_mips{0};
    double idle_power_w{0};
    double max_power_w{0};
    int count{0}; ///< CC: 0 sizes the pool to the worst-case sweep demand

    bool operator==(const TierProfile&) const = default;
};

struct DeviceProfile
{
    double energy_per_mbps_w{0};
    double capacity_mbps{5000};

    bool operator==(const DeviceProfile&) const = default;
};

enum class WorkloadMode { Uniform, Random };

struct SweepGrid
{
    double from{500};
    double to{5000};
    double step{500};

    std::vector<double> points() const
    {
        std::vector<double> out;
        for (int i = 0;; ++i) {
            double w = from + i * step;
            if (w > to * (1 + 1e-12)) {
                break;
            }
            out.push_back(w);
        }
        return out;
    }

    bool operator==(const SweepGrid&) const = default;
};

/**
 * Everything needed to build topologies, task sets and the sweep grid.
 *
 * The defaults are an assumed power profile, not published measurements:
 * they satisfy the two efficiency orderings (CC best per MIPS, local vehicle
 * best per Mbps) and keep one CC server between 150,000 and 175,000 MIPS.
 */
struct ModelConfig
{
    TierProfile cc{160000, 301, 365, 0};
    TierProfile lf{54400, 120, 175, 1};
    TierProfile nf{6000, 15, 25, 1};
    TierProfile vn{3200, 4, 12, 0};
    int vf_count{4};
    int vehicles_per_vf_low{5};
    int vehicles_per_vf_high{15};

    std::map<DeviceKind, DeviceProfile> network{
        {DeviceKind::RSU, {0.006, 5000}},
        {DeviceKind::ONU, {0.003, 5000}},
        {DeviceKind::OLT, {0.002, 5000}},
        {DeviceKind::METRO, {0.005, 5000}},
        {DeviceKind::CORE, {0.010, 5000}},
    };

    int task_count{50};
    double traffic_per_mips{0.01};
    int source_vf{1};
    WorkloadMode workload_mode{WorkloadMode::Uniform};
    double random_min_mips{500};
    double random_max_mips{5000};

    SweepGrid sweep{};
    std::uint64_t seed{42};

    /// Largest per-task workload any sweep point or random draw can produce.
    double worst_case_workload() const
    {
        double w = sweep.to;
        if (workload_mode == WorkloadMode::Random) {
            w = std::max(w, random_max_mips);
        }
        return w;
    }

    int cc_pool_size() const
    {
        if (cc.count > 0) {
            return cc.count;
        }
        double demand = task_count * worst_case_workload();
        return std::max(1, static_cast<int>(std::ceil(demand / cc.capacity_mips - 1e-12)));
    }

    void validate() const;

    bool operator==(const ModelConfig&) const = default;
};

namespace detail {

inline void check_tier(const TierProfile& p, const std::string& path, bool allow_zero_count)
{
    if (!(p.capacity_mips > 0)) {
        throw config_error(path + ".capacity_mips", path + ".capacity_mips must be > 0");
    }
    if (!(p.idle_power_w >= 0)) {
        throw config_error(path + ".idle_power_w", path + ".idle_power_w must be >= 0");
    }
    if (!(p.max_power_w > 0)) {
        throw config_error(path + ".max_power_w", path + ".max_power_w must be > 0");
    }
    if (p.idle_power_w > p.max_power_w) {
        throw config_error(path + ".idle_power_w", path + ".idle_power_w must not exceed max_power_w");
    }
    if (p.count < 0 || (!allow_zero_count && p.count == 0)) {
        throw config_error(path + ".count", path + ".count out of range");
    }
}

} // namespace detail

inline void ModelConfig::validate() const
{
    detail::check_tier(cc, "servers.cc", true);
    detail::check_tier(lf, "servers.lf", true);
    detail::check_tier(nf, "servers.nf", true);
    detail::check_tier(vn, "servers.vn", true);
    if (vf_count < 1 || vf_count > 4) {
        throw config_error("servers.vn.vf_count", "servers.vn.vf_count must be in [1, 4]");
    }
    if (vehicles_per_vf_low < 0) {
        throw config_error("servers.vn.vehicles_per_vf.low", "servers.vn.vehicles_per_vf.low must be >= 0");
    }
    if (vehicles_per_vf_high < 0) {
        throw config_error("servers.vn.vehicles_per_vf.high", "servers.vn.vehicles_per_vf.high must be >= 0");
    }
    for (const auto& [kind, d] : network) {
        std::string path = "network." + std::string(to_string(kind));
        std::transform(path.begin(), path.end(), path.begin(), [](unsigned char c) { return std::tolower(c); });
        if (!(d.energy_per_mbps_w >= 0)) {
            throw config_error(path + ".energy_per_mbps_w", path + ".energy_per_mbps_w must be >= 0");
        }
        if (!(d.capacity_mbps > 0)) {
            throw config_error(path + ".capacity_mbps", path + ".capacity_mbps must be > 0");
        }
    }
    if (network.size() != 5) {
        throw config_error("network", "network must define rsu, onu, olt, metro and core");
    }
    if (task_count < 1) {
        throw config_error("tasks.count", "tasks.count must be >= 1");
    }
    if (!(traffic_per_mips > 0)) {
        throw config_error("tasks.traffic_per_mips", "tasks.traffic_per_mips must be > 0");
    }
    if (source_vf < 1 || source_vf > vf_count) {
        throw config_error("tasks.source_vf", "tasks.source_vf must name an existing Fogbank");
    }
    if (!(random_min_mips > 0) || random_min_mips > random_max_mips) {
        throw config_error("tasks.random_range_mips", "tasks.random_range_mips must satisfy 0 < lo <= hi");
    }
    if (!(sweep.from > 0) || !(sweep.step > 0) || sweep.to < sweep.from) {
        throw config_error("sweep", "sweep requires 0 < from <= to and step > 0");
    }
}

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> known)
{
    if (!obj.is_object()) {
        throw config_error(path, (path.empty() ? std::string("document") : path) + " must be a JSON object");
    }
    for (const auto& [key, _] : obj.items()) {
        bool ok = std::any_of(known.begin(), known.end(), [&](const char* k) { return key == k; });
        if (!ok) {
            std::string field = path.empty() ? key : path + "." + key;
            throw config_error(field, "unknown key '" + field + "'");
        }
    }
}

inline double get_number(const json& obj, const std::string& path, const char* key, double fallback)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_number()) {
        throw config_error(path + "." + key, path + "." + key + " must be a number");
    }
    return it->get<double>();
}

inline long long get_integer(const json& obj, const std::string& path, const char* key, long long fallback)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    bool integral = it->is_number_integer()
                 || (it->is_number_float() && std::floor(it->get<double>()) == it->get<double>());
    if (!integral) {
        throw config_error(path + "." + key, path + "." + key + " must be an integer");
    }
    return it->get<long long>();
}

inline void read_tier(const json& servers, const char* key, TierProfile& p, bool vn, ModelConfig& cfg)
{
    auto it = servers.find(key);
    if (it == servers.end()) {
        return;
    }
    std::string path = std::string("servers.") + key;
    if (vn) {
        reject_unknown(*it, path,
                       {"capacity_mips", "idle_power_w", "max_power_w", "vf_count", "vehicles_per_vf"});
    } else {
        reject_unknown(*it, path, {"capacity_mips", "idle_power_w", "max_power_w", "count"});
    }
    p.capacity_mips = get_number(*it, path, "capacity_mips", p.capacity_mips);
    p.idle_power_w = get_number(*it, path, "idle_power_w", p.idle_power_w);
    p.max_power_w = get_number(*it, path, "max_power_w", p.max_power_w);
    if (!vn) {
        p.count = static_cast<int>(get_integer(*it, path, "count", p.count));
        return;
    }
    cfg.vf_count = static_cast<int>(get_integer(*it, path, "vf_count", cfg.vf_count));
    if (auto v = it->find("vehicles_per_vf"); v != it->end()) {
        std::string vpath = path + ".vehicles_per_vf";
        reject_unknown(*v, vpath, {"low", "high"});
        cfg.vehicles_per_vf_low = static_cast<int>(get_integer(*v, vpath, "low", cfg.vehicles_per_vf_low));
        cfg.vehicles_per_vf_high = static_cast<int>(get_integer(*v, vpath, "high", cfg.vehicles_per_vf_high));
    }
}

inline std::size_t line_of(std::string_view text, std::size_t byte)
{
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

} // namespace detail

/**
 * Parse and validate a JSON configuration document.
 *
 * Missing keys keep the defaults of ModelConfig; unknown keys are rejected.
 * Throws config_error naming the offending field (or the line, for syntax
 * errors).
 */
inline ModelConfig load_config(std::string_view text)
{
    using detail::json;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        auto line = detail::line_of(text, e.byte == 0 ? 0 : e.byte - 1);
        throw config_error("line " + std::to_string(line),
                           "configuration parse error at line " + std::to_string(line) + ": " + e.what());
    }

    ModelConfig cfg;
    detail::reject_unknown(doc, "", {"version", "servers", "network", "tasks", "sweep", "seed"});
    if (doc.contains("version")) {
        if (detail::get_integer(doc, "", "version", 0) != config_schema_version) {
            throw config_error("version", "unsupported configuration version");
        }
    }
    if (auto it = doc.find("servers"); it != doc.end()) {
        detail::reject_unknown(*it, "servers", {"cc", "lf", "nf", "vn"});
        detail::read_tier(*it, "cc", cfg.cc, false, cfg);
        detail::read_tier(*it, "lf", cfg.lf, false, cfg);
        detail::read_tier(*it, "nf", cfg.nf, false, cfg);
        detail::read_tier(*it, "vn", cfg.vn, true, cfg);
    }
    if (auto it = doc.find("network"); it != doc.end()) {
        detail::reject_unknown(*it, "network", {"rsu", "onu", "olt", "metro", "core"});
        const std::pair<const char*, DeviceKind> kinds[] = {{"rsu", DeviceKind::RSU},
                                                            {"onu", DeviceKind::ONU},
                                                            {"olt", DeviceKind::OLT},
                                                            {"metro", DeviceKind::METRO},
                                                            {"core", DeviceKind::CORE}};
        for (const auto& [key, kind] : kinds) {
            auto d = it->find(key);
            if (d == it->end()) {
                continue;
            }
            std::string path = std::string("network.") + key;
            detail::reject_unknown(*d, path, {"energy_per_mbps_w", "capacity_mbps"});
            auto& prof = cfg.network[kind];
            prof.energy_per_mbps_w = detail::get_number(*d, path, "energy_per_mbps_w", prof.energy_per_mbps_w);
            prof.capacity_mbps = detail::get_number(*d, path, "capacity_mbps", prof.capacity_mbps);
        }
    }
    if (auto it = doc.find("tasks"); it != doc.end()) {
        detail::reject_unknown(*it, "tasks",
                               {"count", "traffic_per_mips", "source_vf", "workload_mode", "random_range_mips"});
        cfg.task_count = static_cast<int>(detail::get_integer(*it, "tasks", "count", cfg.task_count));
        cfg.traffic_per_mips = detail::get_number(*it, "tasks", "traffic_per_mips", cfg.traffic_per_mips);
        cfg.source_vf = static_cast<int>(detail::get_integer(*it, "tasks", "source_vf", cfg.source_vf));
        if (auto m = it->find("workload_mode"); m != it->end()) {
            if (m->is_string() && *m == "uniform") {
                cfg.workload_mode = WorkloadMode::Uniform;
            } else if (m->is_string() && *m == "random") {
                cfg.workload_mode = WorkloadMode::Random;
            } else {
                throw config_error("tasks.workload_mode", "tasks.workload_mode must be \"uniform\" or \"random\"");
            }
        }
        if (auto r = it->find("random_range_mips"); r != it->end()) {
            if (!r->is_array() || r->size() != 2 || !(*r)[0].is_number() || !(*r)[1].is_number()) {
                throw config_error("tasks.random_range_mips", "tasks.random_range_mips must be [lo, hi]");
            }
            cfg.random_min_mips = (*r)[0].get<double>();
            cfg.random_max_mips = (*r)[1].get<double>();
        }
    }
    if (auto it = doc.find("sweep"); it != doc.end()) {
        detail::reject_unknown(*it, "sweep", {"from", "to", "step"});
        cfg.sweep.from = detail::get_number(*it, "sweep", "from", cfg.sweep.from);
        cfg.sweep.to = detail::get_number(*it, "sweep", "to", cfg.sweep.to);
        cfg.sweep.step = detail::get_number(*it, "sweep", "step", cfg.sweep.step);
    }
    if (doc.contains("seed")) {
        auto seed = detail::get_integer(doc, "", "seed", 0);
        if (seed < 0) {
            throw config_error("seed", "seed must be >= 0");
        }
        cfg.seed = static_cast<std::uint64_t>(seed);
    }
    cfg.validate();
    return cfg;
}

/// Serialize a configuration in the same schema load_config accepts.
inline nlohmann::ordered_json config_to_json(const ModelConfig& cfg)
{
    using oj = nlohmann::ordered_json;
    auto tier = [](const TierProfile& p) {
        return oj{{"capacity_mips", p.capacity_mips},
                  {"idle_power_w", p.idle_power_w},
                  {"max_power_w", p.max_power_w},
                  {"count", p.count}};
    };
    oj vn{{"capacity_mips", cfg.vn.capacity_mips},
          {"idle_power_w", cfg.vn.idle_power_w},
          {"max_power_w", cfg.vn.max_power_w},
          {"vf_count", cfg.vf_count},
          {"vehicles_per_vf", oj{{"low", cfg.vehicles_per_vf_low}, {"high", cfg.vehicles_per_vf_high}}}};
    oj network = oj::object();
    for (const auto& [kind, d] : cfg.network) {
        std::string key(to_string(kind));
        std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
        network[key] = oj{{"energy_per_mbps_w", d.energy_per_mbps_w}, {"capacity_mbps", d.capacity_mbps}};
    }
    return oj{{"version", config_schema_version},
              {"servers", oj{{"cc", tier(cfg.cc)}, {"lf", tier(cfg.lf)}, {"nf", tier(cfg.nf)}, {"vn", vn}}},
              {"network", network},
              {"tasks",
               oj{{"count", cfg.task_count},
                  {"traffic_per_mips", cfg.traffic_per_mips},
                  {"source_vf", cfg.source_vf},
                  {"workload_mode", cfg.workload_mode == WorkloadMode::Uniform ? "uniform" : "random"},
                  {"random_range_mips", oj::array({cfg.random_min_mips, cfg.random_max_mips})}}},
              {"sweep", oj{{"from", cfg.sweep.from}, {"to", cfg.sweep.to}, {"step", cfg.sweep.step}}},
              {"seed", cfg.seed}};
}

} // namespace fogbank

#endif // FOGBANK_CONFIG_HPP
