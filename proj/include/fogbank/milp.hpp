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

#ifndef FOGBANK_MILP_HPP
#define FOGBANK_MILP_HPP

#include <fogbank/errors.hpp>
#include <fogbank/model.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fogbank {

enum class Integrality { Continuous, Binary, Integer };
enum class Relation { LessEqual, Equal };

struct Variable
{
    std::string name;
    double lower{0};
    double upper{0};
    Integrality integrality{Integrality::Continuous};
    int branch_priority{0}; ///< higher values are branched on first
};

struct Term
{
    std::size_t col;
    double coef;
};

struct Constraint
{
    std::string name;
    std::vector<Term> terms;
    Relation relation{Relation::LessEqual};
    double rhs{0};
};

/**
 * Tasks with identical workload and traffic, modelled as one commodity with
 * multiplicity task_ids.size(). With aggregation off every class holds a
 * single task and the columns are exactly the per-task x/d variables.
 */
struct TaskClass
{
    std::vector<int> task_ids;
    double workload_mips{0};
    double traffic_mbps{0};

    std::size_t multiplicity() const { return task_ids.size(); }
    double demand_mips() const { return workload_mips * static_cast<double>(task_ids.size()); }
};

inline constexpr std::size_t no_column = std::numeric_limits<std::size_t>::max();

struct MilpInstance
{
    std::vector<Variable> variables;
    std::vector<Constraint> constraints;
    std::vector<double> objective;
    std::map<std::string, std::size_t> var_index;

    // Scenario-facing layout: x[class][server], d[class][server] (single only), a[server].
    Strategy strategy{Strategy::Single};
    std::vector<TaskClass> task_classes;
    std::vector<std::vector<std::size_t>> x_col;
    std::vector<std::vector<std::size_t>> d_col;
    std::vector<std::size_t> a_col;

    bool structurally_infeasible{false};
    std::string infeasibility_reason;

    std::size_t num_columns() const { return variables.size(); }
    std::size_t num_rows() const { return constraints.size(); }

    std::size_t column(const std::string& name) const
    {
        auto it = var_index.find(name);
        if (it == var_index.end()) {
            throw lookup_error("no column named " + name);
        }
        return it->second;
    }

    std::size_t add_variable(Variable v, double cost)
    {
        std::size_t col = variables.size();
        var_index.emplace(v.name, col);
        variables.push_back(std::move(v));
        objective.push_back(cost);
        return col;
    }

    std::size_t count_rows(std::string_view prefix) const
    {
        return static_cast<std::size_t>(std::count_if(constraints.begin(), constraints.end(), [&](const auto& c) {
            return c.name.compare(0, prefix.size(), prefix) == 0;
        }));
    }

    double objective_value(const std::vector<double>& values) const
    {
        double z = 0;
        for (std::size_t j = 0; j < objective.size(); ++j) {
            z += objective[j] * values[j];
        }
        return z;
    }

    /// Largest scaled violation of any row or bound by \p values.
    double max_violation(const std::vector<double>& values) const
    {
        double worst = 0;
        for (const auto& c : constraints) {
            double lhs = 0;
            double scale = std::abs(c.rhs);
            for (const auto& t : c.terms) {
                lhs += t.coef * values[t.col];
                scale = std::max(scale, std::abs(t.coef * values[t.col]));
            }
            double v = c.relation == Relation::Equal ? std::abs(lhs - c.rhs) : lhs - c.rhs;
            worst = std::max(worst, v / std::max(1.0, scale));
        }
        for (std::size_t j = 0; j < variables.size(); ++j) {
            double scale = std::max({1.0, std::abs(variables[j].lower), std::abs(variables[j].upper)});
            worst = std::max(worst, (variables[j].lower - values[j]) / scale);
            worst = std::max(worst, (values[j] - variables[j].upper) / scale);
        }
        return worst;
    }
};

struct BuildOptions
{
    bool aggregate_identical_tasks{true};
    bool symmetry_breaking{true};
};

/// Group tasks with equal workload and traffic, in order of first appearance.
inline std::vector<TaskClass> classify_tasks(const TaskSet& tasks, bool aggregate)
{
    std::vector<TaskClass> classes;
    for (const auto& t : tasks) {
        auto it = std::find_if(classes.begin(), classes.end(), [&](const TaskClass& c) {
            return aggregate && c.workload_mips == t.workload_mips && c.traffic_mbps == t.traffic_mbps;
        });
        if (it == classes.end()) {
            classes.push_back({{t.id}, t.workload_mips, t.traffic_mbps});
        } else {
            it->task_ids.push_back(t.id);
        }
    }
    return classes;
}

/// Interchangeable servers: same profile, Fogbank and route.
inline bool same_server_class(const Scenario& sc, std::size_t a, std::size_t b)
{
    const auto& s = sc.topology.servers[a];
    const auto& t = sc.topology.servers[b];
    return s.tier == t.tier && s.vf_id == t.vf_id && s.capacity_mips == t.capacity_mips
        && s.idle_power_w == t.idle_power_w && s.max_power_w == t.max_power_w
        && sc.routes.routes[a].devices == sc.routes.routes[b].devices;
}

namespace detail {

inline std::string index_name(char prefix, int k, const std::string& server)
{
    return std::string(1, prefix) + "[" + std::to_string(k) + "][" + server + "]";
}

} // namespace detail

/**
 * Build the power-minimizing placement MILP for a scenario.
 *
 * Objective: sum_s idle_s a_s + sum_{k,s} (e_s + F_k/W_k * sum_{n in route(s)} psi_n) x_ks.
 * Rows (by name prefix):
 *   cap_s   processing capacity, coupled to the activation binary a_s
 *   dev_n   traffic through each device on some route
 *   dem_k   every task's workload is placed
 *   lnk_k_s x_ks = W_k d_ks             (single strategy)
 *   asg_k   sum_s d_ks = 1 (class size)  (single strategy)
 *   sb_a_s, sb_l_s  activation and load ordering among interchangeable servers
 */
inline MilpInstance build_milp(const Scenario& sc, const BuildOptions& opts = {})
{
    MilpInstance m;
    m.strategy = sc.strategy;
    m.task_classes = classify_tasks(sc.tasks, opts.aggregate_identical_tasks);
    const auto& servers = sc.topology.servers;
    const auto nsrv = servers.size();
    const auto route_psi = sc.route_energy_per_mbps();
    const auto route_idx = sc.route_device_indices();
    const bool single = sc.strategy == Strategy::Single;

    m.a_col.resize(nsrv);
    for (std::size_t s = 0; s < nsrv; ++s) {
        m.a_col[s] = m.add_variable({"a[" + servers[s].id + "]", 0, 1, Integrality::Binary, 1}, servers[s].idle_power_w);
    }
    m.x_col.assign(m.task_classes.size(), std::vector<std::size_t>(nsrv, no_column));
    m.d_col.assign(m.task_classes.size(), std::vector<std::size_t>(nsrv, no_column));
    for (std::size_t g = 0; g < m.task_classes.size(); ++g) {
        const auto& tc = m.task_classes[g];
        const int label = tc.task_ids.front();
        const double per_mips_mbps = tc.traffic_mbps / tc.workload_mips;
        const auto mult = static_cast<double>(tc.multiplicity());
        for (std::size_t s = 0; s < nsrv; ++s) {
            const auto& spec = servers[s];
            double cost = spec.marginal_w_per_mips() + per_mips_mbps * route_psi[s];
            m.x_col[g][s] = m.add_variable(
                {detail::index_name('x', label, spec.id), 0, std::min(tc.demand_mips(), spec.capacity_mips),
                 Integrality::Continuous, 0},
                cost);
        }
        if (single) {
            for (std::size_t s = 0; s < nsrv; ++s) {
                double fits = std::floor(servers[s].capacity_mips / tc.workload_mips * (1 + 1e-12));
                double ub = std::min(mult, fits);
                auto kind = tc.multiplicity() == 1 ? Integrality::Binary : Integrality::Integer;
                m.d_col[g][s] = m.add_variable({detail::index_name('d', label, servers[s].id), 0, ub, kind, 0}, 0.0);
            }
        }
    }

    for (std::size_t s = 0; s < nsrv; ++s) {
        Constraint row{"cap_" + servers[s].id, {}, Relation::LessEqual, 0};
        for (std::size_t g = 0; g < m.task_classes.size(); ++g) {
            row.terms.push_back({m.x_col[g][s], 1.0});
        }
        row.terms.push_back({m.a_col[s], -servers[s].capacity_mips});
        m.constraints.push_back(std::move(row));
    }

    const auto& devices = sc.topology.devices;
    for (std::size_t n = 0; n < devices.size(); ++n) {
        Constraint row{"dev_" + devices[n].id, {}, Relation::LessEqual, devices[n].capacity_mbps};
        for (std::size_t g = 0; g < m.task_classes.size(); ++g) {
            const auto& tc = m.task_classes[g];
            for (std::size_t s = 0; s < nsrv; ++s) {
                if (std::find(route_idx[s].begin(), route_idx[s].end(), n) != route_idx[s].end()) {
                    row.terms.push_back({m.x_col[g][s], tc.traffic_mbps / tc.workload_mips});
                }
            }
        }
        if (!row.terms.empty()) {
            m.constraints.push_back(std::move(row));
        }
    }

    for (std::size_t g = 0; g < m.task_classes.size(); ++g) {
        const auto& tc = m.task_classes[g];
        const std::string label = std::to_string(tc.task_ids.front());
        Constraint dem{"dem_" + label, {}, Relation::Equal, tc.demand_mips()};
        for (std::size_t s = 0; s < nsrv; ++s) {
            dem.terms.push_back({m.x_col[g][s], 1.0});
        }
        m.constraints.push_back(std::move(dem));
        if (!single) {
            continue;
        }
        for (std::size_t s = 0; s < nsrv; ++s) {
            m.constraints.push_back({"lnk_" + label + "_" + servers[s].id,
                                     {{m.x_col[g][s], 1.0}, {m.d_col[g][s], -tc.workload_mips}},
                                     Relation::Equal,
                                     0});
        }
        Constraint asg{"asg_" + label, {}, Relation::Equal, static_cast<double>(tc.multiplicity())};
        for (std::size_t s = 0; s < nsrv; ++s) {
            asg.terms.push_back({m.d_col[g][s], 1.0});
        }
        m.constraints.push_back(std::move(asg));
    }

    if (opts.symmetry_breaking) {
        for (std::size_t s = 1; s < nsrv; ++s) {
            if (!same_server_class(sc, s - 1, s)) {
                continue;
            }
            m.constraints.push_back({"sb_a_" + servers[s].id,
                                     {{m.a_col[s], 1.0}, {m.a_col[s - 1], -1.0}},
                                     Relation::LessEqual,
                                     0});
            Constraint load{"sb_l_" + servers[s].id, {}, Relation::LessEqual, 0};
            for (std::size_t g = 0; g < m.task_classes.size(); ++g) {
                load.terms.push_back({m.x_col[g][s], 1.0});
                load.terms.push_back({m.x_col[g][s - 1], -1.0});
            }
            m.constraints.push_back(std::move(load));
        }
    }

    // Capacity pigeonholes that make the model infeasible before any solve.
    double capacity = 0;
    double largest = 0;
    for (const auto& s : servers) {
        capacity += s.capacity_mips;
        largest = std::max(largest, s.capacity_mips);
    }
    double demand = sc.total_demand_mips();
    if (demand > capacity * (1 + 1e-12)) {
        m.structurally_infeasible = true;
        m.infeasibility_reason = "total demand " + std::to_string(demand) + " MIPS exceeds reachable capacity "
                               + std::to_string(capacity) + " MIPS";
    } else if (single) {
        for (const auto& t : sc.tasks) {
            if (t.workload_mips > largest * (1 + 1e-12)) {
                m.structurally_infeasible = true;
                m.infeasibility_reason = "task " + std::to_string(t.id) + " fits on no single server";
                break;
            }
        }
    }
    if (!m.structurally_infeasible && !sc.tasks.empty()) {
        double traffic = 0;
        for (const auto& t : sc.tasks) {
            traffic += t.traffic_mbps;
        }
        const auto& src = devices[sc.topology.device_index("rsu" + std::to_string(sc.source_vf))];
        if (traffic > src.capacity_mbps * (1 + 1e-12)) {
            m.structurally_infeasible = true;
            m.infeasibility_reason = "total traffic exceeds the source RSU capacity";
        }
    }
    return m;
}

namespace detail {

inline std::string lp_name(const std::string& name)
{
    std::string out;
    for (char c : name) {
        if (c == '[') {
            out += '_';
        } else if (c != ']') {
            out += c;
        }
    }
    return out;
}

inline std::string lp_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

/// CPLEX LP text of the instance, for cross-checking with external solvers.
inline std::string export_lp(const MilpInstance& m)
{
    std::ostringstream os;
    auto linear = [&](const std::vector<Term>& terms) {
        bool first = true;
        for (const auto& t : terms) {
            if (t.coef == 0) {
                continue;
            }
            os << (t.coef < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
            os << detail::lp_number(std::abs(t.coef)) << ' ' << detail::lp_name(m.variables[t.col].name);
            first = false;
        }
        if (first) {
            os << "0 " << detail::lp_name(m.variables.front().name);
        }
    };

    os << "\\ placement MILP: " << m.num_columns() << " columns, " << m.num_rows() << " rows\n";
    os << "Minimize\n obj: ";
    std::vector<Term> obj;
    for (std::size_t j = 0; j < m.objective.size(); ++j) {
        obj.push_back({j, m.objective[j]});
    }
    linear(obj);
    os << "\nSubject To\n";
    for (const auto& c : m.constraints) {
        os << ' ' << c.name << ": ";
        linear(c.terms);
        os << (c.relation == Relation::Equal ? " = " : " <= ") << detail::lp_number(c.rhs) << '\n';
    }
    os << "Bounds\n";
    for (const auto& v : m.variables) {
        if (v.integrality == Integrality::Binary && v.lower == 0 && v.upper == 1) {
            continue;
        }
        os << ' ' << detail::lp_number(v.lower) << " <= " << detail::lp_name(v.name)
           << " <= " << detail::lp_number(v.upper) << '\n';
    }
    os << "Binaries\n";
    for (const auto& v : m.variables) {
        if (v.integrality == Integrality::Binary) {
            os << ' ' << detail::lp_name(v.name) << '\n';
        }
    }
    os << "Generals\n";
    for (const auto& v : m.variables) {
        if (v.integrality == Integrality::Integer) {
            os << ' ' << detail::lp_name(v.name) << '\n';
        }
    }
    os << "End\n";
    return os.str();
}

} // namespace fogbank

#endif // FOGBANK_MILP_HPP
