#pragma once

#include <iosfwd>
#include <string>

#include "bandqfi/integrate.hpp"
#include "bandqfi/scaling.hpp"

namespace bandqfi {

// Shortest decimal representation that round-trips to the same double;
// fixed across platforms so identical runs produce byte-identical files.
std::string format_double(double x);

// CSV with leading "# key=value" identity comments (model, codimension_p,
// cutoff, occupied), a "m,qfi,err_estimate" header, one row per sweep point.
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);
std::string sweep_csv(const SweepResult& sweep);

// Reads the CSV written by write_sweep_csv. Identity comments are optional;
// fields they don't supply (and the quadrature config) stay at defaults.
SweepResult read_sweep_csv(std::istream& is);
SweepResult read_sweep_csv_file(const std::string& path);

// Full-metadata JSON for a sweep; pairs with the CSV.
std::string sweep_json(const SweepResult& sweep);

std::string fit_report_json(const FitReport& report);

}  // namespace bandqfi
