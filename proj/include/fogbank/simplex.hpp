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

#ifndef FOGBANK_SIMPLEX_HPP
#define FOGBANK_SIMPLEX_HPP

#include <fogbank/errors.hpp>
#include <fogbank/milp.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace fogbank {

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline std::string_view to_string(LpStatus s)
{
    switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    }
    return "?";
}

struct LpSolution
{
    LpStatus status{LpStatus::Infeasible};
    double objective_w{0};
    std::vector<double> values;
    double dual_residual{0};   ///< largest reduced-cost sign violation at the final basis
    double primal_residual{0}; ///< largest scaled row/bound violation
    std::int64_t iterations{0};
};

struct SimplexOptions
{
    double feasibility_tol{1e-9};
    double optimality_tol{1e-9};
    double pivot_tol{1e-10};
    std::int64_t iteration_limit{0}; ///< 0 selects 50 * (rows + columns) + 10000
    int refactor_interval{50};
    int degenerate_steps_before_bland{30};
};

/**
 * Bounded-variable revised simplex over the LP relaxation of a MilpInstance.
 *
 * Integrality is ignored. All structural columns must have finite bounds;
 * they are overridable per solve so branch-and-bound can reuse the scaled
 * matrix. Rows and columns are equilibrated by powers of two, the basis
 * inverse is kept dense with product-form updates and rebuilt periodically.
 * Phase one drives per-row artificials to zero; Dantzig pricing switches to
 * Bland's rule after a run of degenerate pivots.
 */
class SimplexSolver
{
public:
    explicit SimplexSolver(const MilpInstance& lp, SimplexOptions opts = {}) : lp_(&lp), opts_(opts)
    {
        n_ = lp.num_columns();
        m_ = lp.num_rows();
        cols_.assign(n_, {});
        for (std::size_t i = 0; i < m_; ++i) {
            for (const auto& t : lp.constraints[i].terms) {
                if (t.coef != 0) {
                    cols_[t.col].push_back({i, t.coef});
                }
            }
        }
        compute_scaling();
    }

    LpSolution solve() const
    {
        std::vector<double> lo(n_), up(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            lo[j] = lp_->variables[j].lower;
            up[j] = lp_->variables[j].upper;
        }
        return solve(lo, up);
    }

    LpSolution solve(std::span<const double> lower, std::span<const double> upper) const
    {
        for (std::size_t j = 0; j < n_; ++j) {
            if (!std::isfinite(lower[j]) || !std::isfinite(upper[j])) {
                throw precondition_error("simplex_solve: column " + lp_->variables[j].name + " has an infinite bound");
            }
            if (lower[j] > upper[j]) {
                LpSolution out;
                out.status = LpStatus::Infeasible;
                return out;
            }
        }
        Work w(*this, lower, upper);
        return w.run();
    }

private:
    struct Entry
    {
        std::size_t row;
        double value;
    };

    static double pow2_round(double v)
    {
        if (!(v > 0) || !std::isfinite(v)) {
            return 1.0;
        }
        return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(v))));
    }

    void compute_scaling()
    {
        row_scale_.assign(m_, 1.0);
        col_scale_.assign(n_, 1.0);
        for (int pass = 0; pass < 6; ++pass) {
            std::vector<double> rmin(m_, std::numeric_limits<double>::infinity()), rmax(m_, 0.0);
            for (std::size_t j = 0; j < n_; ++j) {
                for (const auto& e : cols_[j]) {
                    double v = std::abs(e.value) * col_scale_[j];
                    rmin[e.row] = std::min(rmin[e.row], v);
                    rmax[e.row] = std::max(rmax[e.row], v);
                }
            }
            for (std::size_t i = 0; i < m_; ++i) {
                if (rmax[i] > 0) {
                    row_scale_[i] = pow2_round(1.0 / std::sqrt(rmin[i] * rmax[i]));
                }
            }
            for (std::size_t j = 0; j < n_; ++j) {
                double cmin = std::numeric_limits<double>::infinity(), cmax = 0;
                for (const auto& e : cols_[j]) {
                    double v = std::abs(e.value) * row_scale_[e.row];
                    cmin = std::min(cmin, v);
                    cmax = std::max(cmax, v);
                }
                if (cmax > 0) {
                    col_scale_[j] = pow2_round(1.0 / std::sqrt(cmin * cmax));
                }
            }
        }
        scols_.assign(n_, {});
        for (std::size_t j = 0; j < n_; ++j) {
            for (const auto& e : cols_[j]) {
                scols_[j].push_back({e.row, e.value * row_scale_[e.row] * col_scale_[j]});
            }
        }
        double cmax = 0;
        for (std::size_t j = 0; j < n_; ++j) {
            cmax = std::max(cmax, std::abs(lp_->objective[j]) * col_scale_[j]);
        }
        obj_scale_ = cmax > 0 ? pow2_round(1.0 / cmax) : 1.0;
        srhs_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            srhs_[i] = lp_->constraints[i].rhs * row_scale_[i];
        }
        scost_.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            scost_[j] = lp_->objective[j] * col_scale_[j] * obj_scale_;
        }
    }

    enum class State : unsigned char { Basic, AtLower, AtUpper };

    // State of a single solve. Columns: structural [0,n), slack [n,n+m), artificial [n+m,n+2m).
    struct Work
    {
        const SimplexSolver& s;
        std::size_t n, m, total;
        std::vector<double> lo, up, x, cost, art_sign;
        std::vector<State> state;
        std::vector<std::size_t> basis;
        std::vector<double> binv; // row-major m x m
        std::int64_t iterations{0};
        std::int64_t limit;
        int since_refactor{0};

        Work(const SimplexSolver& solver, std::span<const double> lower, std::span<const double> upper)
            : s(solver), n(solver.n_), m(solver.m_), total(solver.n_ + 2 * solver.m_)
        {
            lo.assign(total, 0.0);
            up.assign(total, 0.0);
            x.assign(total, 0.0);
            cost.assign(total, 0.0);
            art_sign.assign(m, 1.0);
            state.assign(total, State::AtLower);
            for (std::size_t j = 0; j < n; ++j) {
                lo[j] = lower[j] / s.col_scale_[j];
                up[j] = upper[j] / s.col_scale_[j];
                x[j] = lo[j];
            }
            for (std::size_t i = 0; i < m; ++i) {
                up[n + i] = s.lp_->constraints[i].relation == Relation::Equal
                              ? 0.0
                              : std::numeric_limits<double>::infinity();
            }
            limit = s.opts_.iteration_limit > 0 ? s.opts_.iteration_limit
                                                : static_cast<std::int64_t>(50 * (n + m) + 10000);
        }

        template <class F>
        void for_column(std::size_t j, F&& f) const
        {
            if (j < n) {
                for (const auto& e : s.scols_[j]) {
                    f(e.row, e.value);
                }
            } else if (j < n + m) {
                f(j - n, 1.0);
            } else {
                f(j - n - m, art_sign[j - n - m]);
            }
        }

        double row_tol(std::size_t i) const { return s.opts_.feasibility_tol * std::max(1.0, std::abs(s.srhs_[i])); }

        void refactor()
        {
            std::vector<double> b(m * m, 0.0);
            for (std::size_t c = 0; c < m; ++c) {
                for_column(basis[c], [&](std::size_t r, double v) { b[r * m + c] = v; });
            }
            binv.assign(m * m, 0.0);
            for (std::size_t i = 0; i < m; ++i) {
                binv[i * m + i] = 1.0;
            }
            for (std::size_t c = 0; c < m; ++c) {
                std::size_t piv = c;
                double best = std::abs(b[c * m + c]);
                for (std::size_t r = c + 1; r < m; ++r) {
                    if (std::abs(b[r * m + c]) > best) {
                        best = std::abs(b[r * m + c]);
                        piv = r;
                    }
                }
                if (best < 1e-13) {
                    throw numerical_failure("simplex: singular basis during refactorization");
                }
                if (piv != c) {
                    for (std::size_t k = 0; k < m; ++k) {
                        std::swap(b[piv * m + k], b[c * m + k]);
                        std::swap(binv[piv * m + k], binv[c * m + k]);
                    }
                }
                double inv = 1.0 / b[c * m + c];
                for (std::size_t k = 0; k < m; ++k) {
                    b[c * m + k] *= inv;
                    binv[c * m + k] *= inv;
                }
                for (std::size_t r = 0; r < m; ++r) {
                    double f = b[r * m + c];
                    if (r == c || f == 0) {
                        continue;
                    }
                    for (std::size_t k = 0; k < m; ++k) {
                        b[r * m + k] -= f * b[c * m + k];
                        binv[r * m + k] -= f * binv[c * m + k];
                    }
                }
            }
            recompute_basics();
            since_refactor = 0;
        }

        void recompute_basics()
        {
            std::vector<double> r(s.srhs_);
            for (std::size_t j = 0; j < total; ++j) {
                if (state[j] != State::Basic && x[j] != 0) {
                    for_column(j, [&](std::size_t row, double v) { r[row] -= v * x[j]; });
                }
            }
            for (std::size_t i = 0; i < m; ++i) {
                double v = 0;
                const double* bi = &binv[i * m];
                for (std::size_t k = 0; k < m; ++k) {
                    v += bi[k] * r[k];
                }
                x[basis[i]] = v;
            }
        }

        void start()
        {
            std::vector<double> r(s.srhs_);
            for (std::size_t j = 0; j < n; ++j) {
                if (x[j] != 0) {
                    for (const auto& e : s.scols_[j]) {
                        r[e.row] -= e.value * x[j];
                    }
                }
            }
            basis.resize(m);
            binv.assign(m * m, 0.0);
            for (std::size_t i = 0; i < m; ++i) {
                std::size_t slack = n + i;
                std::size_t art = n + m + i;
                bool fits = r[i] >= -row_tol(i) && r[i] <= up[slack] + row_tol(i);
                if (fits) {
                    basis[i] = slack;
                    state[slack] = State::Basic;
                    x[slack] = r[i];
                    state[art] = State::AtLower;
                    binv[i * m + i] = 1.0;
                } else {
                    art_sign[i] = r[i] >= 0 ? 1.0 : -1.0;
                    basis[i] = art;
                    state[art] = State::Basic;
                    x[art] = std::abs(r[i]);
                    up[art] = std::numeric_limits<double>::infinity();
                    cost[art] = 1.0;
                    state[slack] = State::AtLower;
                    x[slack] = 0;
                    binv[i * m + i] = art_sign[i];
                }
            }
        }

        enum class Outcome { Optimal, Unbounded };

        Outcome iterate()
        {
            std::vector<double> y(m), alpha(m);
            int degenerate = 0;
            bool bland = false;
            for (;;) {
                if (iterations >= limit) {
                    throw numerical_failure("simplex: iteration limit " + std::to_string(limit) + " reached");
                }
                if (since_refactor >= s.opts_.refactor_interval) {
                    refactor();
                }
                std::fill(y.begin(), y.end(), 0.0);
                for (std::size_t i = 0; i < m; ++i) {
                    double cb = cost[basis[i]];
                    if (cb == 0) {
                        continue;
                    }
                    const double* bi = &binv[i * m];
                    for (std::size_t k = 0; k < m; ++k) {
                        y[k] += cb * bi[k];
                    }
                }

                std::size_t enter = total;
                double best = 0;
                for (std::size_t j = 0; j < total; ++j) {
                    if (state[j] == State::Basic || lo[j] == up[j]) {
                        continue;
                    }
                    double d = cost[j];
                    for_column(j, [&](std::size_t r, double v) { d -= y[r] * v; });
                    bool eligible = (state[j] == State::AtLower && d < -s.opts_.optimality_tol)
                                 || (state[j] == State::AtUpper && d > s.opts_.optimality_tol);
                    if (!eligible) {
                        continue;
                    }
                    if (bland) {
                        enter = j;
                        break;
                    }
                    if (std::abs(d) > best) {
                        best = std::abs(d);
                        enter = j;
                    }
                }
                if (enter == total) {
                    return Outcome::Optimal;
                }

                std::fill(alpha.begin(), alpha.end(), 0.0);
                for_column(enter, [&](std::size_t r, double v) {
                    for (std::size_t i = 0; i < m; ++i) {
                        alpha[i] += binv[i * m + r] * v;
                    }
                });
                const double dir = state[enter] == State::AtLower ? 1.0 : -1.0;

                // Two-pass (Harris) ratio test; Bland mode takes the smallest index among ties.
                const double inf = std::numeric_limits<double>::infinity();
                double harris = inf;
                for (std::size_t i = 0; i < m; ++i) {
                    double delta = dir * alpha[i];
                    if (std::abs(delta) <= s.opts_.pivot_tol) {
                        continue;
                    }
                    std::size_t b = basis[i];
                    double tol = s.opts_.feasibility_tol;
                    double lim = delta > 0 ? (x[b] - lo[b] + tol) / delta
                                           : (std::isfinite(up[b]) ? (up[b] - x[b] + tol) / -delta : inf);
                    harris = std::min(harris, lim);
                }
                harris = std::max(harris, 0.0);
                std::size_t leave = m;
                double theta = inf;
                double best_pivot = 0;
                for (std::size_t i = 0; i < m; ++i) {
                    double delta = dir * alpha[i];
                    if (std::abs(delta) <= s.opts_.pivot_tol) {
                        continue;
                    }
                    std::size_t b = basis[i];
                    double lim = delta > 0 ? (x[b] - lo[b]) / delta
                                           : (std::isfinite(up[b]) ? (up[b] - x[b]) / -delta : inf);
                    lim = std::max(lim, 0.0);
                    if (lim > harris) {
                        continue;
                    }
                    bool take = bland ? (leave == m || lim < theta - 1e-12
                                         || (lim <= theta + 1e-12 && basis[i] < basis[leave]))
                                      : std::abs(delta) > best_pivot;
                    if (take) {
                        leave = i;
                        theta = lim;
                        best_pivot = std::abs(delta);
                    }
                }
                double flip = up[enter] - lo[enter];
                bool bound_flip = flip <= theta;
                if (bound_flip) {
                    theta = flip;
                }
                if (!std::isfinite(theta)) {
                    return Outcome::Unbounded;
                }

                ++iterations;
                if (theta <= 1e-12) {
                    if (++degenerate >= s.opts_.degenerate_steps_before_bland) {
                        bland = true;
                    }
                } else {
                    degenerate = 0;
                    bland = false;
                }

                x[enter] += dir * theta;
                for (std::size_t i = 0; i < m; ++i) {
                    x[basis[i]] -= theta * dir * alpha[i];
                }
                if (bound_flip) {
                    state[enter] = state[enter] == State::AtLower ? State::AtUpper : State::AtLower;
                    x[enter] = state[enter] == State::AtLower ? lo[enter] : up[enter];
                    continue;
                }

                std::size_t out = basis[leave];
                bool to_lower = dir * alpha[leave] > 0;
                state[out] = to_lower ? State::AtLower : State::AtUpper;
                x[out] = to_lower ? lo[out] : up[out];
                basis[leave] = enter;
                state[enter] = State::Basic;

                const double piv = alpha[leave];
                double* pr = &binv[leave * m];
                for (std::size_t k = 0; k < m; ++k) {
                    pr[k] /= piv;
                }
                for (std::size_t i = 0; i < m; ++i) {
                    if (i == leave || alpha[i] == 0) {
                        continue;
                    }
                    double f = alpha[i];
                    double* bi = &binv[i * m];
                    for (std::size_t k = 0; k < m; ++k) {
                        bi[k] -= f * pr[k];
                    }
                }
                ++since_refactor;
            }
        }

        double dual_residual() const
        {
            std::vector<double> y(m, 0.0);
            for (std::size_t i = 0; i < m; ++i) {
                double cb = cost[basis[i]];
                for (std::size_t k = 0; k < m; ++k) {
                    y[k] += cb * binv[i * m + k];
                }
            }
            double worst = 0;
            for (std::size_t j = 0; j < total; ++j) {
                if (state[j] == State::Basic || lo[j] == up[j]) {
                    continue;
                }
                double d = cost[j];
                for_column(j, [&](std::size_t r, double v) { d -= y[r] * v; });
                worst = std::max(worst, state[j] == State::AtLower ? -d : d);
            }
            return std::max(worst, 0.0);
        }

        LpSolution run()
        {
            LpSolution out;
            start();
            bool need_phase1 = false;
            for (std::size_t i = 0; i < m; ++i) {
                need_phase1 = need_phase1 || basis[i] >= n + m;
            }
            if (need_phase1) {
                iterate();
                refactor();
                double infeas = 0;
                double scale = 1.0;
                for (std::size_t i = 0; i < m; ++i) {
                    infeas += x[n + m + i];
                    scale = std::max(scale, std::abs(s.srhs_[i]));
                }
                if (infeas > 1e-8 * scale) {
                    out.status = LpStatus::Infeasible;
                    out.iterations = iterations;
                    return out;
                }
            }
            for (std::size_t i = 0; i < m; ++i) {
                std::size_t art = n + m + i;
                up[art] = 0.0;
                cost[art] = 0.0;
                if (state[art] != State::Basic) {
                    x[art] = 0.0;
                    state[art] = State::AtLower;
                }
            }
            for (std::size_t j = 0; j < n; ++j) {
                cost[j] = s.scost_[j];
            }
            if (iterate() == Outcome::Unbounded) {
                out.status = LpStatus::Unbounded;
                out.iterations = iterations;
                return out;
            }
            refactor();

            out.status = LpStatus::Optimal;
            out.iterations = iterations;
            out.dual_residual = dual_residual() / s.obj_scale_;
            out.values.resize(n);
            for (std::size_t j = 0; j < n; ++j) {
                double v = x[j] * s.col_scale_[j];
                out.values[j] = std::clamp(v, lo[j] * s.col_scale_[j], up[j] * s.col_scale_[j]);
            }
            double z = 0;
            for (std::size_t j = 0; j < n; ++j) {
                z += s.lp_->objective[j] * out.values[j];
            }
            out.objective_w = z;
            out.primal_residual = row_residual(out.values);
            if (out.primal_residual > 1e-6) {
                throw numerical_failure("simplex: final residual " + std::to_string(out.primal_residual)
                                        + " exceeds tolerance");
            }
            return out;
        }

        double row_residual(const std::vector<double>& v) const
        {
            double worst = 0;
            for (const auto& c : s.lp_->constraints) {
                double lhs = 0, scale = std::abs(c.rhs);
                for (const auto& t : c.terms) {
                    lhs += t.coef * v[t.col];
                    scale = std::max(scale, std::abs(t.coef * v[t.col]));
                }
                double viol = c.relation == Relation::Equal ? std::abs(lhs - c.rhs) : lhs - c.rhs;
                worst = std::max(worst, viol / std::max(1.0, scale));
            }
            return worst;
        }
    };

    const MilpInstance* lp_;
    SimplexOptions opts_;
    std::size_t n_{0}, m_{0};
    std::vector<std::vector<Entry>> cols_, scols_;
    std::vector<double> row_scale_, col_scale_, srhs_, scost_;
    double obj_scale_{1};
};

/// Solve the LP relaxation of \p lp (integrality dropped) with its own bounds.
inline LpSolution simplex_solve(const MilpInstance& lp, const SimplexOptions& opts = {})
{
    return SimplexSolver(lp, opts).solve();
}

} // namespace fogbank

#endif // FOGBANK_SIMPLEX_HPP
