#include "bandqfi/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bandqfi {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
    // Self-describing header: a sweep file read back in (e.g. by `fit
    // --input-csv`) keeps its identity without a sidecar file.
    if (!sweep.model_id.empty()) os << "# model=" << sweep.model_id << '\n';
    os << "# codimension_p=" << sweep.codimension_p << '\n';
    os << "# cutoff=" << format_double(sweep.cutoff) << '\n';
    os << "# occupied=" << sweep.occupied << '\n';
    os << "m,qfi,err_estimate\n";
    for (size_t i = 0; i < sweep.m_values.size(); ++i) {
        os << format_double(sweep.m_values[i]) << ','
           << format_double(sweep.qfi_values[i]) << ','
           << format_double(sweep.err_estimates[i]) << '\n';
    }
}

std::string sweep_csv(const SweepResult& sweep) {
    std::ostringstream os;
    write_sweep_csv(os, sweep);
    return os.str();
}

namespace {

double parse_field(const std::string& token, int line_no, const char* name) {
    try {
        size_t pos = 0;
        const double x = std::stod(token, &pos);
        if (pos != token.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("sweep CSV line " + std::to_string(line_no) +
                                    ": cannot parse " + name + " from '" + token + "'");
    }
}

}  // namespace

SweepResult read_sweep_csv(std::istream& is) {
    SweepResult sweep;
    std::string line;
    int line_no = 0;

    // Leading "# key=value" comments carry the sweep's identity; unknown
    // keys are ignored so hand-annotated files still load.
    for (;;) {
        if (!std::getline(is, line)) {
            if (line_no == 0) throw std::invalid_argument("sweep CSV: empty input");
            throw std::invalid_argument("sweep CSV: missing 'm,qfi,err_estimate' header");
        }
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] != '#') break;
        std::string body = line.substr(1);
        if (!body.empty() && body.front() == ' ') body.erase(0, 1);
        const size_t eq = body.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = body.substr(0, eq);
        const std::string value = body.substr(eq + 1);
        if (key == "model")
            sweep.model_id = value;
        else if (key == "codimension_p")
            sweep.codimension_p = static_cast<int>(parse_field(value, line_no, "codimension_p"));
        else if (key == "cutoff")
            sweep.cutoff = parse_field(value, line_no, "cutoff");
        else if (key == "occupied")
            sweep.occupied = static_cast<int>(parse_field(value, line_no, "occupied"));
    }
    if (line != "m,qfi,err_estimate")
        throw std::invalid_argument("sweep CSV line " + std::to_string(line_no) +
                                    ": expected header 'm,qfi,err_estimate'");
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') ||
            !std::getline(row, c) || c.find(',') != std::string::npos)
            throw std::invalid_argument("sweep CSV line " + std::to_string(line_no) +
                                        ": expected 3 comma-separated fields");
        sweep.m_values.push_back(parse_field(a, line_no, "m"));
        sweep.qfi_values.push_back(parse_field(b, line_no, "qfi"));
        sweep.err_estimates.push_back(parse_field(c, line_no, "err_estimate"));
    }
    if (sweep.m_values.empty())
        throw std::invalid_argument("sweep CSV: no data rows");
    return sweep;
}

SweepResult read_sweep_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open sweep CSV '" + path + "'");
    return read_sweep_csv(is);
}

std::string sweep_json(const SweepResult& sweep) {
    nlohmann::json j;
    j["model_id"] = sweep.model_id;
    j["model_velocities"] = sweep.model_velocities;
    j["cutoff"] = sweep.cutoff;
    j["codimension_p"] = sweep.codimension_p;
    j["occupied"] = sweep.occupied;
    j["n_points"] = sweep.m_values.size();
    j["m_min"] = sweep.m_values.empty() ? 0.0 : sweep.m_values.back();
    j["m_max"] = sweep.m_values.empty() ? 0.0 : sweep.m_values.front();
    j["config"] = {{"rel_tol", sweep.config.rel_tol},
                   {"max_refinements", sweep.config.max_refinements},
                   {"lattice_grid_start", sweep.config.lattice_grid_start},
                   {"lattice_max_grid", sweep.config.lattice_max_grid},
                   {"threads", sweep.config.threads}};
    return j.dump(2) + "\n";
}

std::string fit_report_json(const FitReport& report) {
    nlohmann::json j;
    j["model_id"] = report.model_id;
    j["class"] = to_string(report.cls);
    if (report.cls != SingularityClass::log) j["alpha"] = report.alpha;
    j["c"] = report.c;
    j["c_err"] = report.c_err;
    j["A"] = report.A;
    j["rms"] = report.rms;
    j["ic"] = report.ic;
    j["m_min"] = report.m_min;
    j["m_max"] = report.m_max;
    j["n_points"] = report.n_points;
    j["summary"] = report.summary();
    return j.dump(2) + "\n";
}

}  // namespace bandqfi
