#include "bandqfi/runner.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bandqfi/io.hpp"
#include "bandqfi/qgt.hpp"
#include "bandqfi/scaling.hpp"

namespace bandqfi {

namespace {

const std::set<std::string> kCommands = {"sweep",      "fit",     "rg-check",
                                         "invariants", "figure1", "models"};

double as_number(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number())
        throw std::invalid_argument("config field '" + key + "': expected a number");
    return v.get<double>();
}

int as_int(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number_integer())
        throw std::invalid_argument("config field '" + key + "': expected an integer");
    return v.get<int>();
}

std::string as_string(const nlohmann::json& v, const std::string& key) {
    if (!v.is_string())
        throw std::invalid_argument("config field '" + key + "': expected a string");
    return v.get<std::string>();
}

// Filenames derived from model ids; ':' is awkward in paths.
std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ':') c = '-';
    return s;
}

std::string effective_output_dir(const RunConfig& cfg) {
    if (cfg.output_dir != ".") return cfg.output_dir;
    if (const char* env = std::getenv("BANDQFI_OUTPUT_DIR"))
        if (*env) return env;
    return ".";
}

std::string prepare_output_dir(const RunConfig& cfg) {
    const std::string dir = effective_output_dir(cfg);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::invalid_argument("cannot create output directory '" + dir +
                                    "': " + ec.message());
    return dir;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot write '" + path + "'");
    os << text;
    if (!os) throw std::invalid_argument("write failed for '" + path + "'");
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    const ModelSpec model = model_from_config(cfg);
    const auto grid = make_m_grid(cfg.m_min, cfg.m_max, cfg.points_per_decade);
    const SweepResult sr = sweep(model, grid, cfg.quad);
    const std::string dir = prepare_output_dir(cfg);
    const std::string base = dir + "/sweep_" + sanitize(model.id());
    write_text_file(base + ".csv", sweep_csv(sr));
    write_text_file(base + ".json", sweep_json(sr));
    out << "wrote " << base << ".csv (" << sr.m_values.size() << " points)\n";
    return 0;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
    SweepResult sr;
    if (!cfg.input_csv.empty()) {
        sr = read_sweep_csv_file(cfg.input_csv);
        // A file without identity comments is labeled from the config.
        if (sr.model_id.empty()) sr.model_id = cfg.model_id;
    } else {
        const ModelSpec model = model_from_config(cfg);
        const auto grid = make_m_grid(cfg.m_min, cfg.m_max, cfg.points_per_decade);
        sr = sweep(model, grid, cfg.quad);
    }
    const FitReport report = classify_singularity(sr);

    const std::string dir = prepare_output_dir(cfg);
    const std::string base = dir + "/fit_" + sanitize(sr.model_id);
    write_text_file(base + ".json", fit_report_json(report));

    // Differenced-series diagnostic alongside the report: the background-free
    // view of the same sweep.
    const DifferenceSeries diff = difference_series(sr, cfg.diff_ratio);
    std::string csv = "m,diff,err_estimate\n";
    for (size_t i = 0; i < diff.m.size(); ++i)
        csv += format_double(diff.m[i]) + "," + format_double(diff.value[i]) + "," +
               format_double(diff.err[i]) + "\n";
    write_text_file(base + "_diff.csv", csv);

    out << report.summary() << "\n";
    return 0;
}

int cmd_rg_check(const RunConfig& cfg, std::ostream& out) {
    const ModelSpec model = model_from_config(cfg);
    const RgCheck rc = rg_check(model.codimension_p, cfg.rg_m, cfg.rg_b, cfg.cutoff, cfg.quad);

    const std::string dir = prepare_output_dir(cfg);
    std::string csv = "orientation,measured,predicted,deviation\n";
    csv += "small_over_large," + format_double(rc.measured_small_over_large) + "," +
           format_double(rc.predicted_small_over_large) + "," + format_double(rc.deviation) +
           "\n";
    csv += "large_over_small," + format_double(rc.measured_large_over_small) + "," +
           format_double(rc.predicted_large_over_small) + "," + format_double(rc.deviation) +
           "\n";
    write_text_file(dir + "/rg_check.csv", csv);

    out << "p=" << model.codimension_p << " b=" << format_double(cfg.rg_b)
        << ": S(m)/S(b m) = " << format_double(rc.measured_small_over_large) << ", predicted "
        << format_double(rc.predicted_small_over_large) << " (deviation "
        << format_double(100.0 * rc.deviation) << "%)\n";
    return 0;
}

int cmd_invariants(const RunConfig& cfg, std::ostream& out) {
    const ModelSpec model = model_from_config(cfg);
    if (model.kind != ModelKind::lattice)
        throw std::invalid_argument(
            "invariants: requires a lattice model (ssh or chern), got '" + model.id() + "'");
    const bool is_ssh = model.family == ModelFamily::ssh;

    // Symmetric grid through the transition: -m_max .. -m_min, m_min .. m_max.
    const auto half = make_m_grid(cfg.m_min, cfg.m_max, cfg.points_per_decade);
    std::vector<double> ms;
    for (double m : half) ms.push_back(-m);
    for (auto it = half.rbegin(); it != half.rend(); ++it) ms.push_back(*it);

    out << "m," << (is_ssh ? "winding_number" : "chern_number") << "\n";
    for (double m : ms) {
        const int inv = is_ssh
                            ? winding_number(model, m, cfg.grid_n)
                            : chern_number(model, m, model.occupied_default(), cfg.grid_n);
        out << format_double(m) << "," << inv << "\n";
    }
    return 0;
}

int cmd_figure1(const RunConfig& cfg, std::ostream& out) {
    const std::string dir = prepare_output_dir(cfg);
    const auto grid = make_m_grid(cfg.m_min, cfg.m_max, cfg.points_per_decade);
    std::string combined = "p,m,qfi,err_estimate\n";
    for (int p = 1; p <= 3; ++p) {
        const ModelSpec model =
            linearized_model(p, std::vector<double>(static_cast<size_t>(p), 1.0), 1.0);
        const SweepResult sr = sweep(model, grid, cfg.quad);
        write_text_file(dir + "/figure1_p" + std::to_string(p) + ".csv", sweep_csv(sr));
        for (size_t i = 0; i < sr.m_values.size(); ++i)
            combined += std::to_string(p) + "," + format_double(sr.m_values[i]) + "," +
                        format_double(sr.qfi_values[i]) + "," +
                        format_double(sr.err_estimates[i]) + "\n";
    }
    write_text_file(dir + "/figure1_all.csv", combined);
    out << "wrote figure1_p1.csv, figure1_p2.csv, figure1_p3.csv, figure1_all.csv in " << dir
        << "\n";
    return 0;
}

int cmd_models(std::ostream& out) {
    out << "built-in models:\n"
        << "  ssh              1D two-band chain, H(k) = (m+1-cos k) s1 + (sin k) s2.\n"
        << "                   Gap closes at k=0, m=0 (codimension 1); winding number\n"
        << "                   1 for m < 0, 0 for m > 0. Parameter: m_ref.\n"
        << "  chern            2D two-band model, H(k) = sin kx s1 + sin ky s2\n"
        << "                   + (m-2+cos kx+cos ky) s3. Gap closes at k=(0,0), m=0\n"
        << "                   (codimension 2); Chern number changes by 1 across m=0.\n"
        << "                   Parameters: m_ref (|m_ref| < 2).\n"
        << "  weyl             3D four-band continuum point, H(q) = sum_i q_i G_i + m G4\n"
        << "                   with doubly degenerate bands (codimension 3), cutoff 1.\n"
        << "                   Parameter: m_ref.\n"
        << "  linearized:p=N   Continuum two-band cone for codimension N in 1..7:\n"
        << "                   H(q) = sum_i v_i q_i G_i + (m + lambda_c |q|^2) G_{N+1},\n"
        << "                   |q| <= cutoff. Parameters: velocities (N positive reals,\n"
        << "                   default all 1), cutoff (default 1), lambda_c (default 0).\n"
        << "  any model        extra_band_gap/extra_band_coupling append a flat band at\n"
        << "                   energy gap, coupled to the first basis state\n"
        << "                   (requires |coupling| < gap/2).\n";
    return 0;
}

}  // namespace

void RunConfig::validate() const {
    if (kCommands.find(command) == kCommands.end())
        throw std::invalid_argument(
            "config field 'command': expected one of sweep, fit, rg-check, invariants, "
            "figure1, models; got '" +
            command + "'");
    if (!(m_min > 0)) throw std::invalid_argument("config field 'm_min': must be > 0");
    if (!(m_max > m_min))
        throw std::invalid_argument("config field 'm_max': must exceed m_min");
    if (points_per_decade < 4)
        throw std::invalid_argument("config field 'points_per_decade': must be >= 4");
    if (!(diff_ratio > 0) || !(diff_ratio < 1))
        throw std::invalid_argument("config field 'diff_ratio': must lie in (0, 1)");
    if (!(rg_b > 1)) throw std::invalid_argument("config field 'rg_b': must be > 1");
    if (!(cutoff > 0)) throw std::invalid_argument("config field 'cutoff': must be > 0");
    if (grid_n < 8) throw std::invalid_argument("config field 'grid_n': must be >= 8");
    for (double v : velocities)
        if (!(v > 0))
            throw std::invalid_argument("config field 'velocities': must all be > 0");
    quad.validate();
}

RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    if (path.empty()) return cfg;

    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config file '" + path + "': " + e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("config file '" + path + "': expected a JSON object");

    for (const auto& [key, value] : j.items()) {
        if (key == "command") cfg.command = as_string(value, key);
        else if (key == "model") cfg.model_id = as_string(value, key);
        else if (key == "velocities") {
            if (!value.is_array())
                throw std::invalid_argument("config field 'velocities': expected an array");
            cfg.velocities.clear();
            for (const auto& v : value) cfg.velocities.push_back(as_number(v, key));
        } else if (key == "cutoff") cfg.cutoff = as_number(value, key);
        else if (key == "lambda_c") cfg.lambda_c = as_number(value, key);
        else if (key == "extra_band_gap") cfg.extra_band_gap = as_number(value, key);
        else if (key == "extra_band_coupling") cfg.extra_band_coupling = as_number(value, key);
        else if (key == "m_ref") cfg.m_ref = as_number(value, key);
        else if (key == "m_min") cfg.m_min = as_number(value, key);
        else if (key == "m_max") cfg.m_max = as_number(value, key);
        else if (key == "points_per_decade") cfg.points_per_decade = as_int(value, key);
        else if (key == "diff_ratio") cfg.diff_ratio = as_number(value, key);
        else if (key == "rg_b") cfg.rg_b = as_number(value, key);
        else if (key == "rg_m") cfg.rg_m = as_number(value, key);
        else if (key == "rel_tol") cfg.quad.rel_tol = as_number(value, key);
        else if (key == "max_refinements") cfg.quad.max_refinements = as_int(value, key);
        else if (key == "lattice_grid_start") cfg.quad.lattice_grid_start = as_int(value, key);
        else if (key == "lattice_max_grid") cfg.quad.lattice_max_grid = as_int(value, key);
        else if (key == "threads") cfg.quad.threads = as_int(value, key);
        else if (key == "output_dir") cfg.output_dir = as_string(value, key);
        else if (key == "input_csv") cfg.input_csv = as_string(value, key);
        else if (key == "seed") cfg.seed = static_cast<unsigned>(as_int(value, key));
        else if (key == "grid_n") cfg.grid_n = as_int(value, key);
        else throw std::invalid_argument("config: unknown field '" + key + "'");
    }
    return cfg;
}

ModelSpec model_from_config(const RunConfig& cfg) {
    ModelSpec model;
    const std::string& id = cfg.model_id;
    if (id == "ssh") {
        model = ssh_model(cfg.m_ref);
    } else if (id == "chern") {
        model = chern_model(cfg.m_ref);
    } else if (id == "weyl") {
        model = weyl_model(cfg.m_ref);
    } else if (id.rfind("linearized:p=", 0) == 0) {
        const std::string tail = id.substr(13);
        size_t pos = 0;
        int p = 0;
        try {
            p = std::stoi(tail, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != tail.size() || tail.empty())
            throw std::invalid_argument("config field 'model': cannot parse '" + id + "'");
        std::vector<double> v = cfg.velocities;
        if (v.empty()) v.assign(static_cast<size_t>(p > 0 ? p : 1), 1.0);
        model = linearized_model(p, v, cfg.cutoff, cfg.lambda_c);
    } else {
        throw std::invalid_argument("config field 'model': unknown model '" + id +
                                    "' (see the models command)");
    }
    if (cfg.extra_band_gap != 0.0 || cfg.extra_band_coupling != 0.0)
        model = with_gapped_band(model, cfg.extra_band_gap, cfg.extra_band_coupling);
    return model;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        cfg.validate();
        if (cfg.command == "sweep") return cmd_sweep(cfg, out);
        if (cfg.command == "fit") return cmd_fit(cfg, out);
        if (cfg.command == "rg-check") return cmd_rg_check(cfg, out);
        if (cfg.command == "invariants") return cmd_invariants(cfg, out);
        if (cfg.command == "figure1") return cmd_figure1(cfg, out);
        return cmd_models(out);
    } catch (const CriticalityError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace bandqfi
