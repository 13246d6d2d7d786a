#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bandqfi/runner.hpp"

namespace {

// One storage slot per flag; only the parsed subcommand writes to it, and the
// per-subcommand option pointers tell us which flags were actually given so
// they can override the config file.
struct FlagValues {
    std::string config_path;
    std::string model;
    std::vector<double> velocities;
    double cutoff = 0, lambda_c = 0, extra_band_gap = 0, extra_band_coupling = 0;
    double m_ref = 0, m_min = 0, m_max = 0, diff_ratio = 0, rg_b = 0, rg_m = 0, rel_tol = 0;
    int points_per_decade = 0, max_refinements = 0, lattice_grid_start = 0,
        lattice_max_grid = 0, threads = 0, grid_n = 0;
    unsigned seed = 0;
    std::string output_dir, input_csv;
};

using OptionMap = std::map<std::string, CLI::Option*>;

OptionMap add_common_options(CLI::App* sub, FlagValues& f) {
    OptionMap m;
    m["config"] = sub->add_option("--config", f.config_path, "JSON config file; flags override its fields");
    m["model"] = sub->add_option("--model", f.model, "ssh | chern | weyl | linearized:p=N");
    m["velocities"] = sub->add_option("--velocities", f.velocities, "linearized velocities (N positive reals)");
    m["cutoff"] = sub->add_option("--cutoff", f.cutoff, "continuum momentum cutoff");
    m["lambda_c"] = sub->add_option("--lambda-c", f.lambda_c, "quadratic mass correction");
    m["extra_band_gap"] = sub->add_option("--extra-band-gap", f.extra_band_gap, "extra flat band energy (0 = none)");
    m["extra_band_coupling"] = sub->add_option("--extra-band-coupling", f.extra_band_coupling, "extra band coupling strength");
    m["m_ref"] = sub->add_option("--m-ref", f.m_ref, "model construction parameter");
    m["m_min"] = sub->add_option("--m-min", f.m_min, "sweep lower bound (> 0)");
    m["m_max"] = sub->add_option("--m-max", f.m_max, "sweep upper bound");
    m["points_per_decade"] = sub->add_option("--points-per-decade", f.points_per_decade, "sweep grid density (>= 4)");
    m["diff_ratio"] = sub->add_option("--diff-ratio", f.diff_ratio, "differencing ratio in (0, 1)");
    m["rg_b"] = sub->add_option("--rg-b", f.rg_b, "rg-check rescaling factor (> 1)");
    m["rg_m"] = sub->add_option("--rg-m", f.rg_m, "rg-check base parameter value");
    m["rel_tol"] = sub->add_option("--rel-tol", f.rel_tol, "quadrature relative tolerance");
    m["max_refinements"] = sub->add_option("--max-refinements", f.max_refinements, "adaptive bisection depth limit");
    m["lattice_grid_start"] = sub->add_option("--lattice-grid-start", f.lattice_grid_start, "initial lattice mesh (power of two)");
    m["lattice_max_grid"] = sub->add_option("--lattice-max-grid", f.lattice_max_grid, "lattice mesh cap (0 = per-dimension default)");
    m["threads"] = sub->add_option("--threads", f.threads, "worker cap (0 = hardware)");
    m["output_dir"] = sub->add_option("--output-dir", f.output_dir, "artifact directory (BANDQFI_OUTPUT_DIR overrides the default)");
    m["input_csv"] = sub->add_option("--input-csv", f.input_csv, "fit: read this sweep CSV instead of running one");
    m["seed"] = sub->add_option("--seed", f.seed, "seed for randomized diagnostics");
    m["grid_n"] = sub->add_option("--grid-n", f.grid_n, "invariant mesh size per dimension");
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum Fisher information of Bloch bands: sweeps, singularity classification, topological invariants"};
    app.require_subcommand(1);

    FlagValues f;
    std::map<const CLI::App*, OptionMap> options;
    const std::pair<const char*, const char*> commands[] = {
        {"sweep", "integrate the metric over momentum on a geometric m-grid; write CSV + JSON"},
        {"fit", "classify the singular part of a sweep; write FitReport JSON + summary line"},
        {"rg-check", "homogeneity of the singular part under m -> b*m; write ratio table"},
        {"invariants", "print winding/Chern numbers across a symmetric m-grid"},
        {"figure1", "continuum sweeps for p = 1, 2, 3 (unit velocities, cutoff 1); one CSV per curve"},
        {"models", "list built-in models and their parameters"},
    };
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        options[sub] = add_common_options(*&sub, f);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // config error contract: exit 1
    }

    const CLI::App* sub = app.get_subcommands().front();
    const OptionMap& opts = options.at(sub);
    const auto given = [&](const char* name) { return opts.at(name)->count() > 0; };

    bandqfi::RunConfig cfg;
    try {
        cfg = bandqfi::load_config(f.config_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    cfg.command = sub->get_name();
    if (given("model")) cfg.model_id = f.model;
    if (given("velocities")) cfg.velocities = f.velocities;
    if (given("cutoff")) cfg.cutoff = f.cutoff;
    if (given("lambda_c")) cfg.lambda_c = f.lambda_c;
    if (given("extra_band_gap")) cfg.extra_band_gap = f.extra_band_gap;
    if (given("extra_band_coupling")) cfg.extra_band_coupling = f.extra_band_coupling;
    if (given("m_ref")) cfg.m_ref = f.m_ref;
    if (given("m_min")) cfg.m_min = f.m_min;
    if (given("m_max")) cfg.m_max = f.m_max;
    if (given("points_per_decade")) cfg.points_per_decade = f.points_per_decade;
    if (given("diff_ratio")) cfg.diff_ratio = f.diff_ratio;
    if (given("rg_b")) cfg.rg_b = f.rg_b;
    if (given("rg_m")) cfg.rg_m = f.rg_m;
    if (given("rel_tol")) cfg.quad.rel_tol = f.rel_tol;
    if (given("max_refinements")) cfg.quad.max_refinements = f.max_refinements;
    if (given("lattice_grid_start")) cfg.quad.lattice_grid_start = f.lattice_grid_start;
    if (given("lattice_max_grid")) cfg.quad.lattice_max_grid = f.lattice_max_grid;
    if (given("threads")) cfg.quad.threads = f.threads;
    if (given("output_dir")) cfg.output_dir = f.output_dir;
    if (given("input_csv")) cfg.input_csv = f.input_csv;
    if (given("seed")) cfg.seed = f.seed;
    if (given("grid_n")) cfg.grid_n = f.grid_n;

    return bandqfi::run(cfg, std::cout, std::cerr);
}
