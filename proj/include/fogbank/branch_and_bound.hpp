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

#ifndef FOGBANK_BRANCH_AND_BOUND_HPP
#define FOGBANK_BRANCH_AND_BOUND_HPP

#include <fogbank/milp.hpp>
#include <fogbank/simplex.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

namespace fogbank {

enum class MilpStatus {
    Optimal,    ///< proven within the configured gap
    Infeasible, ///< proven: no integer-feasible point
    Limit       ///< node or time limit hit; the incumbent (if any) is not proven optimal
};

inline std::string_view to_string(MilpStatus s)
{
    switch (s) {
    case MilpStatus::Optimal: return "Optimal";
    case MilpStatus::Infeasible: return "Infeasible";
    case MilpStatus::Limit: return "Limit";
    }
    return "?";
}

struct BranchAndBoundOptions
{
    double gap_abs{1e-9};
    double gap_rel{1e-9};
    double integrality_tol{1e-6};
    std::int64_t node_limit{1'000'000};
    std::int64_t time_limit_ms{0}; ///< 0 disables the wall-clock limit
    SimplexOptions lp{};
};

struct MilpResult
{
    MilpStatus status{MilpStatus::Infeasible};
    bool has_incumbent{false};
    double objective{std::numeric_limits<double>::infinity()};
    std::vector<double> values;
    double best_bound{-std::numeric_limits<double>::infinity()};
    std::int64_t nodes{0};
    std::int64_t lp_iterations{0};
    double runtime_ms{0};
};

namespace detail {

struct BoundChange
{
    std::size_t col;
    double lower;
    double upper;
};

struct Node
{
    double bound;
    int depth;
    std::int64_t id;
    std::vector<BoundChange> changes;
};

struct NodeOrder
{
    // priority_queue pops the "largest": lowest bound, then deepest, then oldest.
    bool operator()(const Node& a, const Node& b) const
    {
        if (a.bound != b.bound) {
            return a.bound > b.bound;
        }
        if (a.depth != b.depth) {
            return a.depth < b.depth;
        }
        return a.id > b.id;
    }
};

inline bool is_integer_column(const Variable& v) { return v.integrality != Integrality::Continuous; }

} // namespace detail

/**
 * Best-first branch-and-bound on the LP bound.
 *
 * Branches on the fractional integer column with the highest branch priority,
 * most fractional first, lowest index on ties. \p incumbent, when given and
 * feasible, seeds the pruning cutoff. The final integer assignment is
 * re-solved with all integer columns fixed so continuous values are clean.
 */
inline MilpResult branch_and_bound(const MilpInstance& milp, const BranchAndBoundOptions& opts = {},
                                   const std::vector<double>* incumbent = nullptr)
{
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    MilpResult res;
    auto finish = [&]() {
        res.runtime_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
        return res;
    };
    if (milp.structurally_infeasible) {
        res.status = MilpStatus::Infeasible;
        return finish();
    }

    const std::size_t n = milp.num_columns();
    SimplexSolver solver(milp, opts.lp);
    std::vector<double> root_lo(n), root_up(n);
    for (std::size_t j = 0; j < n; ++j) {
        root_lo[j] = milp.variables[j].lower;
        root_up[j] = milp.variables[j].upper;
        if (detail::is_integer_column(milp.variables[j])) {
            root_lo[j] = std::ceil(root_lo[j] - opts.integrality_tol);
            root_up[j] = std::floor(root_up[j] + opts.integrality_tol);
        }
    }

    // Fix integers at their rounded values and re-solve for the continuous part.
    auto polish = [&](const std::vector<double>& values) -> std::optional<LpSolution> {
        std::vector<double> lo(root_lo), up(root_up);
        for (std::size_t j = 0; j < n; ++j) {
            if (detail::is_integer_column(milp.variables[j])) {
                lo[j] = up[j] = std::round(values[j]);
            }
        }
        auto lp = solver.solve(lo, up);
        res.lp_iterations += lp.iterations;
        if (lp.status != LpStatus::Optimal) {
            return std::nullopt;
        }
        return lp;
    };
    auto accept = [&](const std::vector<double>& values, double objective) {
        if (!res.has_incumbent || objective < res.objective) {
            res.has_incumbent = true;
            res.objective = objective;
            res.values = values;
        }
    };
    auto cutoff = [&]() {
        if (!res.has_incumbent) {
            return std::numeric_limits<double>::infinity();
        }
        return res.objective - std::max(opts.gap_abs, opts.gap_rel * std::abs(res.objective));
    };

    if (incumbent != nullptr && incumbent->size() == n) {
        bool integral = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (detail::is_integer_column(milp.variables[j])) {
                integral = integral && std::abs((*incumbent)[j] - std::round((*incumbent)[j])) <= opts.integrality_tol;
            }
        }
        if (integral && milp.max_violation(*incumbent) <= 1e-9) {
            if (auto lp = polish(*incumbent)) {
                accept(lp->values, lp->objective_w);
            } else {
                accept(*incumbent, milp.objective_value(*incumbent));
            }
        }
    }

    std::priority_queue<detail::Node, std::vector<detail::Node>, detail::NodeOrder> open;
    std::int64_t next_id = 0;
    open.push({-std::numeric_limits<double>::infinity(), 0, next_id++, {}});
    bool limited = false;
    std::vector<double> lo(n), up(n);

    while (!open.empty()) {
        if (res.nodes >= opts.node_limit) {
            limited = true;
            break;
        }
        if (opts.time_limit_ms > 0
            && std::chrono::duration<double, std::milli>(clock::now() - t0).count() > opts.time_limit_ms) {
            limited = true;
            break;
        }
        detail::Node node = open.top();
        open.pop();
        if (node.bound >= cutoff()) {
            // Best-first: every remaining node is bounded at least as high.
            open = {};
            break;
        }
        ++res.nodes;
        lo = root_lo;
        up = root_up;
        for (const auto& c : node.changes) {
            lo[c.col] = c.lower;
            up[c.col] = c.upper;
        }
        LpSolution lp = solver.solve(lo, up);
        res.lp_iterations += lp.iterations;
        if (lp.status != LpStatus::Optimal || lp.objective_w >= cutoff()) {
            continue;
        }

        std::size_t branch = n;
        int best_priority = std::numeric_limits<int>::min();
        double best_score = opts.integrality_tol;
        for (std::size_t j = 0; j < n; ++j) {
            const auto& v = milp.variables[j];
            if (!detail::is_integer_column(v)) {
                continue;
            }
            double frac = lp.values[j] - std::floor(lp.values[j]);
            double score = std::min(frac, 1.0 - frac);
            if (score <= opts.integrality_tol) {
                continue;
            }
            if (v.branch_priority > best_priority || (v.branch_priority == best_priority && score > best_score)) {
                best_priority = v.branch_priority;
                best_score = score;
                branch = j;
            }
        }

        if (branch == n) {
            if (auto clean = polish(lp.values)) {
                accept(clean->values, clean->objective_w);
            } else {
                accept(lp.values, lp.objective_w);
            }
            continue;
        }

        double v = lp.values[branch];
        detail::Node down{lp.objective_w, node.depth + 1, next_id++, node.changes};
        down.changes.push_back({branch, lo[branch], std::floor(v)});
        detail::Node upn{lp.objective_w, node.depth + 1, next_id++, std::move(node.changes)};
        upn.changes.push_back({branch, std::ceil(v), up[branch]});
        open.push(std::move(down));
        open.push(std::move(upn));
    }

    if (limited) {
        res.status = MilpStatus::Limit;
        res.best_bound = open.empty() ? res.objective : open.top().bound;
    } else if (res.has_incumbent) {
        res.status = MilpStatus::Optimal;
        res.best_bound = res.objective;
    } else {
        res.status = MilpStatus::Infeasible;
    }
    return finish();
}

} // namespace fogbank

#endif // FOGBANK_BRANCH_AND_BOUND_HPP
