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

#ifndef FOGBANK_REPORTING_HPP
#define FOGBANK_REPORTING_HPP

#include <fogbank/branch_and_bound.hpp>
#include <fogbank/errors.hpp>
#include <fogbank/model.hpp>
#include <fogbank/power.hpp>
#include <fogbank/solve.hpp>

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fogbank {

struct ValidationReport
{
    bool ok{true};
    std::vector<Violation> violations;
};

/**
 * Second opinion on a solution, derived only from the scenario: every
 * placement row, the activation set, and the reported objective against a
 * fresh power evaluation (1e-6 relative).
 */
inline ValidationReport validate(const Solution& sol, const Scenario& sc)
{
    ValidationReport rep;
    if (sol.status == MilpStatus::Infeasible || (sol.status == MilpStatus::Limit && sol.allocation.empty())) {
        if (!sol.allocation.empty()) {
            rep.violations.push_back({"status", static_cast<double>(sol.allocation.size()), 0, 0});
        }
        rep.ok = rep.violations.empty();
        return rep;
    }
    rep.violations = check_allocation(sol.allocation, sc);
    double evaluated = compute_power(sol.allocation, sc).total_w;
    if (!(std::abs(sol.objective_w - evaluated) <= 1e-6 * std::max(1.0, std::abs(evaluated)))) {
        rep.violations.push_back({"obj", sol.objective_w, evaluated, evaluated - sol.objective_w});
    }
    if (sol.activations != active_servers(sol.allocation, sc.topology)) {
        rep.violations.push_back({"act", static_cast<double>(sol.activations.size()),
                                  static_cast<double>(active_servers(sol.allocation, sc.topology).size()), 0});
    }
    rep.ok = rep.violations.empty();
    return rep;
}

/// Allocated MIPS per node class: "CC", "LF", "NF" and "VF" (all Fogbanks).
inline std::map<std::string, double> node_breakdown(const Solution& sol, const Topology& topo)
{
    std::map<std::string, double> out{{"CC", 0.0}, {"LF", 0.0}, {"NF", 0.0}, {"VF", 0.0}};
    for (const auto& [key, mips] : sol.allocation) {
        Tier t = topo.servers[topo.server_index(key.second)].tier;
        out[t == Tier::VN ? "VF" : std::string(to_string(t))] += mips;
    }
    return out;
}

/// Allocated MIPS per Fogbank id; every Fogbank of the topology is listed.
inline std::map<int, double> vf_breakdown(const Solution& sol, const Topology& topo)
{
    std::map<int, double> out;
    for (int vf : topo.vf_ids) {
        out[vf] = 0.0;
    }
    for (const auto& [key, mips] : sol.allocation) {
        const auto& s = topo.servers[topo.server_index(key.second)];
        if (s.vf_id) {
            out[*s.vf_id] += mips;
        }
    }
    return out;
}

/// One (variant, strategy, workload) cell of the experiment grid.
struct SweepRow
{
    Variant variant{Variant::CCOnly};
    Strategy strategy{Strategy::Single};
    double workload_mips{0};
    MilpStatus status{MilpStatus::Infeasible};
    double total_w{std::numeric_limits<double>::quiet_NaN()};
    double processing_w{std::numeric_limits<double>::quiet_NaN()};
    double networking_w{std::numeric_limits<double>::quiet_NaN()};
    double alloc_cc{std::numeric_limits<double>::quiet_NaN()};
    double alloc_lf{std::numeric_limits<double>::quiet_NaN()};
    double alloc_nf{std::numeric_limits<double>::quiet_NaN()};
    std::array<double, 4> alloc_vf{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                                   std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    std::int64_t bb_nodes{0};
    double runtime_ms{0};

    // Not serialized: the solver's own objective and the validator verdict.
    double objective_w{std::numeric_limits<double>::quiet_NaN()};
    bool valid{true};

    bool has_values() const { return !std::isnan(total_w); }
    double alloc_vf_total() const { return alloc_vf[0] + alloc_vf[1] + alloc_vf[2] + alloc_vf[3]; }
    double alloc_total() const { return alloc_cc + alloc_lf + alloc_nf + alloc_vf_total(); }
};

using SweepResults = std::vector<SweepRow>;

inline constexpr const char* csv_header =
    "variant,strategy,workload_mips,status,total_w,processing_w,networking_w,alloc_cc,alloc_lf,alloc_nf,"
    "alloc_vf1,alloc_vf2,alloc_vf3,alloc_vf4,bb_nodes,runtime_ms";

namespace detail {

/// Six significant digits, '.' decimal point; NaN renders as an empty field.
inline std::string csv_real(double v)
{
    if (std::isnan(v)) {
        return "";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline double parse_real(const std::string& s)
{
    if (s.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) {
        throw precondition_error("bad CSV number '" + s + "'");
    }
    return v;
}

inline MilpStatus parse_status(const std::string& s)
{
    for (MilpStatus st : {MilpStatus::Optimal, MilpStatus::Infeasible, MilpStatus::Limit}) {
        if (to_string(st) == s) {
            return st;
        }
    }
    throw precondition_error("bad status '" + s + "'");
}

} // namespace detail

inline std::string emit_csv(const SweepResults& rows)
{
    std::string out = csv_header;
    out += '\n';
    for (const auto& r : rows) {
        const double fields[] = {r.total_w,     r.processing_w, r.networking_w, r.alloc_cc,
                                 r.alloc_lf,    r.alloc_nf,     r.alloc_vf[0],  r.alloc_vf[1],
                                 r.alloc_vf[2], r.alloc_vf[3]};
        out += to_string(r.variant);
        out += ',';
        out += to_string(r.strategy);
        out += ',';
        out += detail::csv_real(r.workload_mips);
        out += ',';
        out += to_string(r.status);
        for (double f : fields) {
            out += ',';
            out += detail::csv_real(f);
        }
        out += ',';
        out += std::to_string(r.bb_nodes);
        out += ',';
        out += detail::csv_real(r.runtime_ms);
        out += '\n';
    }
    return out;
}

/// Inverse of emit_csv (values come back at six significant digits).
inline SweepResults parse_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != csv_header) {
        throw precondition_error("CSV header does not match the sweep schema");
    }
    SweepResults rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            cells.emplace_back();
        }
        if (cells.size() != 16) {
            throw precondition_error("CSV row has " + std::to_string(cells.size()) + " fields, expected 16");
        }
        SweepRow r;
        r.variant = parse_variant(cells[0]);
        r.strategy = parse_strategy(cells[1]);
        r.workload_mips = detail::parse_real(cells[2]);
        r.status = detail::parse_status(cells[3]);
        r.total_w = detail::parse_real(cells[4]);
        r.processing_w = detail::parse_real(cells[5]);
        r.networking_w = detail::parse_real(cells[6]);
        r.alloc_cc = detail::parse_real(cells[7]);
        r.alloc_lf = detail::parse_real(cells[8]);
        r.alloc_nf = detail::parse_real(cells[9]);
        for (int v = 0; v < 4; ++v) {
            r.alloc_vf[static_cast<std::size_t>(v)] = detail::parse_real(cells[10 + static_cast<std::size_t>(v)]);
        }
        r.bb_nodes = std::stoll(cells[14]);
        r.runtime_ms = detail::parse_real(cells[15]);
        rows.push_back(r);
    }
    return rows;
}

inline nlohmann::ordered_json solution_to_json(const Solution& sol)
{
    using oj = nlohmann::ordered_json;
    oj j;
    j["status"] = to_string(sol.status);
    j["objective_w"] = std::isnan(sol.objective_w) ? oj(nullptr) : oj(sol.objective_w);
    j["allocation"] = oj::array();
    for (const auto& [key, mips] : sol.allocation) {
        j["allocation"].push_back(oj{{"task", key.first}, {"server", key.second}, {"mips", mips}});
    }
    j["activations"] = sol.activations;
    oj per_server = oj::object(), per_device = oj::object();
    for (const auto& [id, w] : sol.breakdown.per_server_w) {
        per_server[id] = w;
    }
    for (const auto& [id, w] : sol.breakdown.per_device_w) {
        per_device[id] = w;
    }
    j["breakdown"] = oj{{"processing_w", sol.breakdown.processing_w},
                        {"networking_w", sol.breakdown.networking_w},
                        {"total_w", sol.breakdown.total_w},
                        {"per_server_w", per_server},
                        {"per_device_w", per_device}};
    j["stats"] = oj{{"bb_nodes", sol.stats.bb_nodes},
                    {"lp_iterations", sol.stats.lp_iterations},
                    {"runtime_ms", sol.stats.runtime_ms}};
    return j;
}

inline std::string emit_solution_json(const Solution& sol) { return solution_to_json(sol).dump(2) + "\n"; }

/// Read back a document written by emit_solution_json.
inline Solution parse_solution_json(const std::string& text)
{
    auto j = nlohmann::json::parse(text);
    Solution sol;
    sol.status = detail::parse_status(j.at("status").get<std::string>());
    sol.objective_w = j.at("objective_w").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                    : j.at("objective_w").get<double>();
    for (const auto& a : j.at("allocation")) {
        sol.allocation[{a.at("task").get<int>(), a.at("server").get<std::string>()}] = a.at("mips").get<double>();
    }
    sol.activations = j.at("activations").get<std::vector<std::string>>();
    const auto& b = j.at("breakdown");
    sol.breakdown.processing_w = b.at("processing_w").get<double>();
    sol.breakdown.networking_w = b.at("networking_w").get<double>();
    sol.breakdown.total_w = b.at("total_w").get<double>();
    sol.breakdown.per_server_w = b.at("per_server_w").get<std::map<std::string, double>>();
    sol.breakdown.per_device_w = b.at("per_device_w").get<std::map<std::string, double>>();
    const auto& s = j.at("stats");
    sol.stats = {s.at("bb_nodes").get<std::int64_t>(), s.at("lp_iterations").get<std::int64_t>(),
                 s.at("runtime_ms").get<double>()};
    return sol;
}

} // namespace fogbank

#endif // FOGBANK_REPORTING_HPP
