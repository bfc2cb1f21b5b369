// Sweep runner: evaluates error-performance metrics of RIS-assisted SSK/SM
// links over parameter grids and writes the curve data as CSV.
//
// Exit codes: 0 = all rows ok, 2 = at least one row carries a non-ok status,
// 1 = configuration or I/O failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "risim/sweep.hpp"

int main(int argc, char** argv) {
    CLI::App app{"risim_sweep: RIS-assisted SSK/SM error-performance sweeps"};

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    int threads = 0;
    bool quiet = false;

    app.add_option("--config", config_path, "JSON sweep configuration")->required();
    app.add_option("--out", out_path, "output CSV path (overrides config)");
    app.add_option("--seed", seed, "override the simulation seed");
    app.add_option("--trials", trials, "override the Monte Carlo trial count");
    app.add_option("--threads", threads, "worker threads for grid evaluation");
    app.add_flag("--quiet", quiet, "suppress progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    risim::SweepSpec spec;
    try {
        spec = risim::load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    if (!out_path.empty()) spec.output_path = out_path;
    if (seed != 0) spec.sim.seed = seed;
    if (trials != 0) spec.sim.trials = trials;
    if (threads != 0) spec.threads = threads;

    const auto violations = risim::validate(spec);
    if (!violations.empty()) {
        std::cerr << "error: invalid configuration:\n";
        for (const auto& v : violations) std::cerr << "  - " << v << '\n';
        return 1;
    }

    std::vector<risim::ResultRow> rows;
    try {
        rows = risim::run_sweep(spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    std::ofstream out(spec.output_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file " << spec.output_path << '\n';
        return 1;
    }
    risim::write_csv(rows, out);
    out.close();
    if (!out) {
        std::cerr << "error: failed writing " << spec.output_path << '\n';
        return 1;
    }

    std::size_t bad = 0;
    for (const auto& r : rows)
        if (r.status != "ok") ++bad;
    if (!quiet) {
        std::cout << rows.size() << " rows written to " << spec.output_path;
        if (bad > 0) std::cout << " (" << bad << " with non-ok status)";
        std::cout << '\n';
    }
    return bad == 0 ? 0 : 2;
}
