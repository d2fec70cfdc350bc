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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <fogbank/cli.hpp>
#include <fogbank/fogbank.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace fogbank;

namespace {

constexpr double oracle_gap_tol = 1e-6;
constexpr double oracle_budget_s = 60;
constexpr double objective_tol = 1e-6;
constexpr double sweep_budget_s = 600;
constexpr double order_tol = 1e-9;

int failures = 0;

void report(const char* name, bool ok, const std::string& detail)
{
    std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

const SweepRow& find(const SweepResults& rows, Variant v, Strategy s, double w)
{
    for (const auto& r : rows) {
        if (r.variant == v && r.strategy == s && r.workload_mips == w) {
            return r;
        }
    }
    throw lookup_error("missing sweep cell " + cell_name(v, s, w));
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int active_cloud(const Solution& sol)
{
    return static_cast<int>(std::count_if(sol.activations.begin(), sol.activations.end(),
                                          [](const std::string& id) { return id.rfind("cc", 0) == 0; }));
}

double remote_vf(const std::map<int, double>& vf, int source)
{
    double sum = 0;
    for (const auto& [id, mips] : vf) {
        sum += id == source ? 0 : mips;
    }
    return sum;
}

void oracle_exactness()
{
    OracleCheckOptions o;
    o.trials = 200;
    o.seed = 42;
    OracleCheckReport rep = oracle_check(o);
    double s = rep.runtime_ms / 1000;
    bool ok = rep.status_mismatches == 0 && rep.max_rel_gap <= oracle_gap_tol && s < oracle_budget_s;
    report("oracle-exactness", ok,
           fmt("%.0f instances, %.0f status mismatches, max rel gap %.3e, %.1f s", static_cast<double>(rep.trials.size()),
               rep.status_mismatches, rep.max_rel_gap, s));
}

void dominance(const ModelConfig& cfg, const SweepResults& rows)
{
    int pairs = 0, bad = 0;
    double best_saving = 0, worst = 0;
    for (Variant v : all_variants) {
        for (double w : cfg.sweep.points()) {
            const auto& s = find(rows, v, Strategy::Single, w);
            const auto& d = find(rows, v, Strategy::Distributed, w);
            if (!s.has_values() || !d.has_values()) {
                ++bad;
                continue;
            }
            ++pairs;
            if (d.total_w > s.total_w * (1 + order_tol)) {
                ++bad;
                worst = std::max(worst, d.total_w - s.total_w);
            }
            best_saving = std::max(best_saving, 100 * (s.total_w - d.total_w) / s.total_w);
        }
    }
    report("dominance", bad == 0 && pairs == 40,
           fmt("%.0f pairs, %.0f violations (worst excess %.3g W); largest distributed saving %.1f%%", pairs, bad, worst,
               best_saving));
}

void density(const ModelConfig& cfg, const SweepResults& rows)
{
    int checks = 0, bad = 0;
    double cf_vs_cc = 0, low_vs_cf = 0, low_vs_cc = 0, high_lo = 100, high_hi = 0;
    for (Strategy s : all_strategies) {
        for (double w : cfg.sweep.points()) {
            std::vector<double> t;
            for (Variant v : all_variants) {
                t.push_back(find(rows, v, s, w).total_w);
            }
            for (std::size_t i = 0; i + 1 < t.size(); ++i) {
                ++checks;
                if (!(t[i + 1] <= t[i] * (1 + order_tol))) {
                    ++bad;
                }
            }
            cf_vs_cc = std::max(cf_vs_cc, 100 * (t[0] - t[1]) / t[0]);
            low_vs_cf = std::max(low_vs_cf, 100 * (t[1] - t[2]) / t[1]);
            low_vs_cc = std::max(low_vs_cc, 100 * (t[0] - t[2]) / t[0]);
            double high = 100 * (t[2] - t[3]) / t[2];
            high_lo = std::min(high_lo, high);
            high_hi = std::max(high_hi, high);
        }
    }
    report("density-monotonicity", bad == 0 && checks == 60,
           fmt("%.0f orderings, %.0f violations", checks, bad));
    std::printf("      max saving: cf vs cc %.1f%%, low vs cf %.1f%%, low vs cc %.1f%%\n", cf_vs_cc, low_vs_cf, low_vs_cc);
    std::printf("      high vs low saving range: %.1f%% .. %.1f%%\n", high_lo, high_hi);
}

void cliff(const ModelConfig& cfg, const SweepResults& rows)
{
    bool ok = true;
    std::string detail;
    for (Variant v : all_variants) {
        const auto& r = find(rows, v, Strategy::Single, 3500);
        if (!r.has_values() || r.alloc_vf_total() != 0) {
            ok = false;
            detail += std::string(to_string(v)) + " single@3500 puts load on vehicles; ";
        }
    }
    for (Strategy s : all_strategies) {
        PointResult at3000 = solve_point(cfg, Variant::CCOnly, s, 3000);
        PointResult at3500 = solve_point(cfg, Variant::CCOnly, s, 3500);
        int n3000 = active_cloud(at3000.solution), n3500 = active_cloud(at3500.solution);
        ok = ok && n3000 == 1 && n3500 >= 2;
        detail += "cc/" + std::string(to_string(s)) + fmt(": %.0f server(s) at 3000, %.0f at 3500; ", n3000, n3500);
    }
    const auto& c25 = find(rows, Variant::CCOnly, Strategy::Single, 2500);
    const auto& c30 = find(rows, Variant::CCOnly, Strategy::Single, 3000);
    const auto& c35 = find(rows, Variant::CCOnly, Strategy::Single, 3500);
    double jump = c35.total_w - c30.total_w, step = c30.total_w - c25.total_w;
    ok = ok && jump > step;
    detail += fmt("jump 3000->3500 %.1f W vs 2500->3000 %.1f W", jump, step);
    report("cliff", ok, detail);
}

void calibration(const ModelConfig& cfg, const SweepResults& rows)
{
    const auto& a = find(rows, Variant::HighDensity, Strategy::Distributed, 3500);
    bool ok_a = a.has_values() && a.alloc_vf_total() > 0;

    ModelConfig b_cfg = cfg;
    b_cfg.task_count = 8;
    PointResult b = solve_point(b_cfg, Variant::LowDensity, Strategy::Single, 2000);
    auto b_vf = vf_breakdown(b.solution, b.scenario.topology);
    auto b_nodes = node_breakdown(b.solution, b.scenario.topology);
    bool ok_b = b_vf[cfg.source_vf] >= 5 * 2000 - 1e-6 && b_nodes["NF"] > 0 && remote_vf(b_vf, cfg.source_vf) == 0;

    ModelConfig c_cfg = cfg;
    c_cfg.task_count = 12;
    PointResult c = solve_point(c_cfg, Variant::LowDensity, Strategy::Single, 2000);
    auto c_vf = vf_breakdown(c.solution, c.scenario.topology);
    auto c_nodes = node_breakdown(c.solution, c.scenario.topology);
    bool ok_c = remote_vf(c_vf, cfg.source_vf) > 0 && c_nodes["LF"] == 0 && c_nodes["CC"] == 0;

    report("calibration-a", ok_a, fmt("high/distributed/3500 vehicle load %.0f MIPS", a.alloc_vf_total()));
    report("calibration-b", ok_b,
           fmt("8x2000 low/single: local %.0f, nf %.0f, remote %.0f MIPS", b_vf[cfg.source_vf], b_nodes["NF"],
               remote_vf(b_vf, cfg.source_vf)));
    report("calibration-c", ok_c,
           fmt("12x2000 low/single: remote %.0f, lf %.0f, cc %.0f MIPS", remote_vf(c_vf, cfg.source_vf), c_nodes["LF"],
               c_nodes["CC"]));
}

void two_path(const SweepResults& rows)
{
    int optimal = 0, bad = 0;
    double worst = 0;
    for (const auto& r : rows) {
        if (r.status != MilpStatus::Optimal) {
            continue;
        }
        ++optimal;
        double rel = std::abs(r.objective_w - r.total_w) / std::max(1.0, std::abs(r.total_w));
        worst = std::max(worst, rel);
        if (!(rel <= objective_tol) || !r.valid) {
            ++bad;
        }
    }
    report("two-path-objective", bad == 0 && optimal == static_cast<int>(rows.size()),
           fmt("%.0f optimal of %.0f cells, %.0f mismatches, worst rel diff %.3e", optimal,
               static_cast<double>(rows.size()), bad, worst));
}

} // namespace

int main()
{
    const ModelConfig cfg;

    oracle_exactness();

    // Sweep once through the CLI with one worker, once through the library with eight.
    namespace fs = std::filesystem;
    fs::path csv_path = fs::temp_directory_path() / "fogbank_acceptance_sweep.csv";
    std::ostringstream sink;
    const char* argv[] = {"fogbank", "sweep", "--workers", "1", "--out", nullptr};
    std::string out_arg = csv_path.string();
    argv[5] = out_arg.c_str();
    auto t0 = std::chrono::steady_clock::now();
    int code = run_cli(6, argv, sink, sink);
    double serial_s = seconds_since(t0);
    std::ifstream in(csv_path);
    std::string serial_csv((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    fs::remove(csv_path);

    RunOptions parallel;
    parallel.workers = 8;
    SweepResults rows = run_sweep(cfg, parallel);
    std::string parallel_csv = emit_csv(rows);

    long lines = std::count(serial_csv.begin(), serial_csv.end(), '\n');
    report("sweep-grid", code == 0 && rows.size() == 80 && lines == 81,
           fmt("exit %.0f, %.0f rows, %.0f CSV lines", code, static_cast<double>(rows.size()), static_cast<double>(lines)));
    report("determinism", serial_csv == parallel_csv,
           serial_csv == parallel_csv ? "workers 1 and 8 give byte-identical CSV" : "CSV differs between workers 1 and 8");
    report("runtime", serial_s < sweep_budget_s, fmt("serial default sweep %.1f s (budget %.0f s)", serial_s, sweep_budget_s));

    dominance(cfg, rows);
    density(cfg, rows);
    cliff(cfg, rows);
    calibration(cfg, rows);
    two_path(rows);

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
