// Command-line front end: seeded simulation runs, parameter sweeps, and a
// brute-force cross-check of the per-slot data solver.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ehsched/metrics.hpp"
#include "ehsched/oracle.hpp"
#include "ehsched/simulate.hpp"
#include "ehsched/svg.hpp"

namespace fs = std::filesystem;
using namespace ehsched;

namespace {

void print_summary(const SystemParams& p, SchedulerKind kind,
                   const SimulationResult& sim, double burn_in) {
    const RunSummary& s = sim.summary;
    std::printf("scheduler          %s\n", scheduler_kind_name(kind));
    std::printf("slots              %ld\n", s.slots);
    std::printf("outage slots       %ld (%.4f%%)\n", s.outages,
                100.0 * static_cast<double>(s.outages) /
                    static_cast<double>(s.slots));
    std::printf("mean battery       %.6g uJ\n", s.mean_battery * 1e6);
    std::printf("mean slot energy   %.6g uJ\n", s.mean_consumed * 1e6);
    std::printf("per-user cap       %.6g Kbit/s\n",
                per_user_backhaul_cap(p) * 1e-3);
    for (std::size_t k = 0; k < s.mean_rate.size(); ++k)
        std::printf("avg rate user %-4zu %.6g Kbit/s\n", k,
                    s.mean_rate[k] * 1e-3);
    std::printf("sum avg rate       %.6g Kbit/s\n", s.sum_rate * 1e-3);
    std::printf("min avg rate       %.6g Kbit/s\n", s.min_rate * 1e-3);
    std::printf("jain index         %.6f\n", s.jain);
    if (burn_in > 0 && burn_in < 1) {
        const RunSummary t = summarize_tail(sim.log, burn_in);
        std::printf("-- last %.0f%% of slots --\n", 100.0 * burn_in);
        std::printf("mean battery       %.6g uJ\n", t.mean_battery * 1e6);
        std::printf("sum rate           %.6g Kbit/s\n", t.sum_rate * 1e-3);
        std::printf("min rate           %.6g Kbit/s\n", t.min_rate * 1e-3);
        std::printf("jain index         %.6f\n", t.jain);
    }
    if (kind == SchedulerKind::Stochastic) {
        for (std::size_t k = 0; k < sim.duals.lambda.size(); ++k)
            std::printf("final duals user %zu  lambda %.6g  mu %.6g\n", k,
                        sim.duals.lambda[k], sim.duals.mu[k]);
    }
}

void write_run_charts(const fs::path& dir, const SystemParams& p,
                      SchedulerKind kind, const MetricsLog& log) {
    std::vector<SvgSeries> rate_series(log.data_users);
    for (std::size_t k = 0; k < log.data_users; ++k) {
        rate_series[k].label = "user " + std::to_string(k);
        rate_series[k].y.reserve(log.rows.size());
    }
    SvgSeries battery{"battery (uJ)", {}};
    for (const auto& r : log.rows) {
        for (std::size_t k = 0; k < log.data_users; ++k)
            rate_series[k].y.push_back(r.avg_rates[k] * 1e-3);
        battery.y.push_back(r.battery * 1e6);
    }
    write_svg_file((dir / "avg_rates.svg").string(),
                   render_line_chart("running average rate (Kbit/s)",
                                     rate_series));
    write_svg_file((dir / "battery.svg").string(),
                   render_line_chart("battery level (uJ)", {battery}));
    if (kind == SchedulerKind::Stochastic) {
        std::vector<SvgSeries> lam(log.data_users);
        for (std::size_t k = 0; k < log.data_users; ++k)
            lam[k].label = "lambda " + std::to_string(k);
        for (const auto& r : log.rows)
            for (std::size_t k = 0; k < log.data_users; ++k)
                lam[k].y.push_back(r.lambda[k]);
        write_svg_file((dir / "lambda.svg").string(),
                       render_line_chart("rate-target multipliers", lam));
    }
    (void)p;
}

int cmd_run(const std::string& config, const std::string& scheduler,
            long slots, std::uint64_t seed, bool seed_given,
            const std::string& out_dir, bool grid_power, bool svg,
            double burn_in) {
    const SystemParams p = load_params(read_text_file(config));
    const SchedulerKind kind = parse_scheduler_kind(scheduler);
    const std::uint64_t use_seed = seed_given ? seed : p.seed;

    const SimulationResult sim =
        run_simulation(p, kind, slots, use_seed, grid_power);

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        const fs::path dir(out_dir);
        const std::string base = std::string("run_") + scheduler;
        write_csv_file(sim.log, (dir / (base + ".csv")).string());
        if (svg) write_run_charts(dir, p, kind, sim.log);
        std::printf("wrote %s\n", (dir / (base + ".csv")).c_str());
    }
    print_summary(p, kind, sim, burn_in);
    return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_dir) {
    const fs::path spec_file(spec_path);
    const SweepSpec spec = load_sweep_spec(
        read_text_file(spec_path), spec_file.parent_path().string());
    const std::vector<SweepRow> rows = run_sweep(spec);

    fs::create_directories(out_dir);
    const fs::path out = fs::path(out_dir) / "sweep.csv";
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + out.string());
    write_sweep_csv(spec.variable, rows, f);
    f.close();
    std::printf("wrote %s\n", out.c_str());

    for (const auto& r : rows)
        std::printf("%s=%-12s %-12s sum %10.4g Kbit/s  min %10.4g Kbit/s  "
                    "jain %.4f  outages %.3f%%\n",
                    spec.variable.c_str(), r.value_text.c_str(),
                    scheduler_kind_name(r.scheduler), r.summary.sum_rate * 1e-3,
                    r.summary.min_rate * 1e-3, r.summary.jain,
                    100.0 * static_cast<double>(r.summary.outages) /
                        static_cast<double>(std::max<long>(r.summary.slots, 1)));
    return 0;
}

int cmd_oracle_check(int users, const std::string& grid_text, int trials,
                     std::uint64_t seed) {
    GridSpec grid;
    if (!grid_text.empty()) {
        const std::size_t x = grid_text.find('x');
        if (x == std::string::npos)
            throw std::invalid_argument("--grid expects POWERxCODES, e.g. 200x41");
        grid.power_points = std::stoi(grid_text.substr(0, x));
        grid.code_points = std::stoi(grid_text.substr(x + 1));
        if (grid.power_points < 2 || grid.code_points < 2)
            throw std::invalid_argument("--grid points must be >= 2");
    }

    Rng rng(seed);
    int failures = 0;
    double worst_ratio = 1e300;
    for (int t = 0; t < trials; ++t) {
        const WeightedInstance inst = random_instance(rng, users);
        const DataAllocation got = solve_inner(inst);
        const GridResult ref = brute_force_inner(inst, grid);
        const double denom = std::max(ref.objective, 1e-300);
        const double ratio = got.objective / denom;
        worst_ratio = std::min(worst_ratio, ratio);
        const bool ok = got.objective >= ref.objective * (1.0 - 1e-2);
        if (!ok) ++failures;
        std::printf("trial %2d  solver %.8e  grid %.8e  ratio %.6f  %s\n", t,
                    got.objective, ref.objective, ratio, ok ? "ok" : "LOW");
    }
    std::printf("worst solver/grid ratio over %d trials: %.6f\n", trials,
                worst_ratio);
    if (failures) {
        std::fprintf(stderr, "%d of %d trials fell below the grid value\n",
                     failures, trials);
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Energy-harvesting downlink scheduler: maximin data scheduling under "
        "an average backhaul constraint, with proportional-fair baselines"};
    app.require_subcommand(1);

    std::string config, scheduler = "stochastic", out_dir;
    long slots = 10000;
    std::uint64_t seed = 0;
    bool grid_power = false, svg = false;
    auto* run = app.add_subcommand("run", "simulate one configuration");
    run->add_option("--config", config, "key = value config file")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--scheduler", scheduler,
                    "stochastic | pf-per-user | pf-sum");
    run->add_option("--slots", slots, "number of slots")
        ->check(CLI::PositiveNumber);
    auto* seed_opt = run->add_option("--seed", seed, "RNG seed (overrides config)");
    run->add_option("--out", out_dir, "directory for the per-slot CSV");
    run->add_flag("--grid-power", grid_power,
                  "mains supply: battery pinned at b_max");
    run->add_flag("--svg", svg, "also write SVG charts next to the CSV");
    double burn_in = 0.1;
    run->add_option("--burn-in", burn_in,
                    "tail fraction used for post-transient stats")
        ->check(CLI::Range(0.0, 1.0));

    std::string spec_path, sweep_out = ".";
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep spec");
    sweep->add_option("--spec", spec_path, "sweep spec file")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("--out", sweep_out, "output directory");

    int users = 2, trials = 20;
    std::string grid_text = "200x41";
    std::uint64_t oc_seed = 7;
    auto* oracle = app.add_subcommand(
        "oracle-check", "compare the data solver against a brute-force grid");
    oracle->add_option("--users", users, "data users per instance (1 or 2)")
        ->check(CLI::Range(1, 2));
    oracle->add_option("--grid", grid_text, "grid as POWERxCODES");
    oracle->add_option("--trials", trials, "random instances")
        ->check(CLI::PositiveNumber);
    oracle->add_option("--seed", oc_seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config, scheduler, slots, seed,
                           seed_opt->count() > 0, out_dir, grid_power, svg,
                           burn_in);
        if (sweep->parsed()) return cmd_sweep(spec_path, sweep_out);
        if (oracle->parsed())
            return cmd_oracle_check(users, grid_text, trials, oc_seed);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
