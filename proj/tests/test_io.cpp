#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bandqfi/integrate.hpp"
#include "bandqfi/io.hpp"
#include "bandqfi/scaling.hpp"

using namespace bandqfi;

TEST_CASE("shortest round-trip float formatting") {
    const double values[] = {0.0,   1.0,    0.1,   -0.1,  1e-4, 3.4302944332840893,
                             1e300, 1e-300, -2.5e7, 1.0 / 3.0};
    for (double x : values) {
        CAPTURE(x);
        const std::string s = format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
    CHECK(format_double(0.1) == "0.1");  // shortest, not 17 digits
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("sweep CSV round trip is exact and keeps the sweep's identity") {
    SweepResult sw;
    sw.model_id = "linearized:p=1";
    sw.codimension_p = 1;
    sw.cutoff = 1.0;
    sw.occupied = 1;
    sw.m_values = {0.1, 0.01, 0.001};
    sw.qfi_values = {3.4302944332840893, 38.7699415002059, 392.199082032056};
    sw.err_estimates = {3.2e-12, 1.5e-9, 2.2e-9};

    const std::string csv = sweep_csv(sw);
    CHECK(csv.substr(0, 23) == "# model=linearized:p=1\n");
    CHECK(csv.find("m,qfi,err_estimate\n0") != std::string::npos);

    std::istringstream is(csv);
    const SweepResult back = read_sweep_csv(is);
    CHECK(back.model_id == "linearized:p=1");
    CHECK(back.codimension_p == 1);
    CHECK(back.cutoff == 1.0);
    CHECK(back.occupied == 1);
    REQUIRE(back.m_values.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(back.m_values[i] == sw.m_values[i]);
        CHECK(back.qfi_values[i] == sw.qfi_values[i]);
        CHECK(back.err_estimates[i] == sw.err_estimates[i]);
    }
}

TEST_CASE("sweep CSV without identity comments still loads") {
    std::istringstream is("m,qfi,err_estimate\n0.1,3.4,1e-9\n");
    const SweepResult back = read_sweep_csv(is);
    CHECK(back.model_id.empty());
    REQUIRE(back.m_values.size() == 1);
    CHECK(back.qfi_values[0] == 3.4);

    // Unknown comment keys are ignored rather than rejected.
    std::istringstream noted("# note=hand-edited\n# model=ssh\nm,qfi,err_estimate\n0.1,3.4,1e-9\n");
    CHECK(read_sweep_csv(noted).model_id == "ssh");
}

TEST_CASE("sweep CSV parse errors carry the line number") {
    std::istringstream bad_header("mass,qfi\n1,2\n");
    CHECK_THROWS_WITH_AS(read_sweep_csv(bad_header), doctest::Contains("line 1"),
                         std::invalid_argument);

    std::istringstream bad_field("m,qfi,err_estimate\n0.1,3.4,1e-9\n0.01,oops,1e-9\n");
    CHECK_THROWS_WITH_AS(read_sweep_csv(bad_field), doctest::Contains("line 3"),
                         std::invalid_argument);

    std::istringstream short_row("m,qfi,err_estimate\n0.1,3.4\n");
    CHECK_THROWS_AS(read_sweep_csv(short_row), std::invalid_argument);

    std::istringstream long_row("m,qfi,err_estimate\n0.1,3.4,1e-9,7\n");
    CHECK_THROWS_AS(read_sweep_csv(long_row), std::invalid_argument);

    std::istringstream empty("");
    CHECK_THROWS_AS(read_sweep_csv(empty), std::invalid_argument);

    std::istringstream no_rows("m,qfi,err_estimate\n");
    CHECK_THROWS_AS(read_sweep_csv(no_rows), std::invalid_argument);

    std::istringstream late_header("# model=ssh\nmass,qfi\n1,2\n");
    CHECK_THROWS_WITH_AS(read_sweep_csv(late_header), doctest::Contains("line 2"),
                         std::invalid_argument);

    std::istringstream comments_only("# model=ssh\n# cutoff=1\n");
    CHECK_THROWS_WITH_AS(read_sweep_csv(comments_only), doctest::Contains("missing"),
                         std::invalid_argument);

    CHECK_THROWS_AS(read_sweep_csv_file("/nonexistent/sweep.csv"), std::invalid_argument);
}

TEST_CASE("sweep metadata JSON") {
    SweepResult sw;
    sw.model_id = "chern";
    sw.codimension_p = 2;
    sw.occupied = 1;
    sw.m_values = {0.1, 0.01};
    sw.qfi_values = {1.0, 2.0};
    sw.err_estimates = {0.0, 0.0};
    sw.config.rel_tol = 1e-7;

    const auto j = nlohmann::json::parse(sweep_json(sw));
    CHECK(j.at("model_id") == "chern");
    CHECK(j.at("codimension_p") == 2);
    CHECK(j.at("n_points") == 2);
    CHECK(j.at("m_max") == 0.1);
    CHECK(j.at("config").at("rel_tol") == 1e-7);
}

TEST_CASE("fit report JSON omits the exponent only for the log class") {
    FitReport rep;
    rep.cls = SingularityClass::log;
    rep.c = 1.57;
    rep.model_id = "linearized:p=2";
    auto j = nlohmann::json::parse(fit_report_json(rep));
    CHECK(j.at("class") == "log");
    CHECK(j.count("alpha") == 0);
    CHECK(j.at("c") == 1.57);

    rep.cls = SingularityClass::power;
    rep.alpha = -1.0;
    j = nlohmann::json::parse(fit_report_json(rep));
    CHECK(j.at("class") == "power");
    CHECK(j.at("alpha") == -1.0);
    CHECK(j.at("summary").get<std::string>().find("power") != std::string::npos);
}
