#include "bandqfi/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace bandqfi {

namespace {

// Weighted least-squares line y = intercept + slope * x. Weights are
// 1/sigma^2; empty means uniform.
struct Line {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;  // unweighted residual rms
};

Line fit_line(const std::vector<double>& x, const std::vector<double>& y,
              const std::vector<double>& w) {
    const size_t n = x.size();
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double wi = w.empty() ? 1.0 : w[i];
        sw += wi;
        sx += wi * x[i];
        sy += wi * y[i];
        sxx += wi * x[i] * x[i];
        sxy += wi * x[i] * y[i];
    }
    const double det = sw * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    Line out;
    out.slope = (sw * sxy - sx * sy) / det;
    out.intercept = (sxx * sy - sx * sxy) / det;
    double rss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double r = y[i] - out.intercept - out.slope * x[i];
        rss += r * r;
    }
    out.rms = std::sqrt(rss / n);
    return out;
}

// Small-sample-corrected Akaike score from a residual sum of squares.
double aicc(double rss, int n, int k) {
    const double per = std::max(rss, 0.0) / n;
    const double base = per > 0 ? n * std::log(per) : -std::numeric_limits<double>::infinity();
    double corr = 0.0;
    if (n - k - 1 > 0) corr = 2.0 * k * (k + 1.0) / (n - k - 1.0);
    return base + 2.0 * k + corr;
}

double relative_rss(const std::vector<double>& y, const std::vector<double>& fit) {
    double rss = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        const double denom = std::max(std::abs(y[i]), 1e-300);
        const double r = (y[i] - fit[i]) / denom;
        rss += r * r;
    }
    return rss;
}

}  // namespace

std::string to_string(SingularityClass c) {
    switch (c) {
        case SingularityClass::power: return "power";
        case SingularityClass::log: return "log";
        case SingularityClass::const_plus_power: return "const_plus_power";
    }
    return "unknown";
}

DifferenceSeries difference_series(const SweepResult& sweep, double r) {
    if (!(r > 0) || !(r < 1))
        throw std::invalid_argument("difference_series: ratio must be in (0, 1)");
    const size_t n = sweep.m_values.size();
    if (n < 2) throw std::invalid_argument("difference_series: need at least 2 points");

    const double step = sweep.m_values[1] / sweep.m_values[0];
    for (size_t i = 0; i + 1 < n; ++i) {
        const double ratio = sweep.m_values[i + 1] / sweep.m_values[i];
        if (std::abs(ratio - step) > 1e-9 * step)
            throw std::invalid_argument("difference_series: grid is not geometric");
    }
    const double shift = std::log(r) / std::log(step);
    const long s = std::lround(shift);
    if (s < 1 || std::abs(shift - s) > 1e-6)
        throw std::invalid_argument("difference_series: grid is not geometric with this ratio");
    if (n <= static_cast<size_t>(s))
        throw std::invalid_argument("difference_series: grid shorter than one ratio step");

    DifferenceSeries out;
    out.ratio = r;
    for (size_t i = 0; i + s < n; ++i) {
        out.m.push_back(sweep.m_values[i]);  // the larger member of the pair
        out.value.push_back(sweep.qfi_values[i + s] - sweep.qfi_values[i]);
        const double e1 = sweep.err_estimates.empty() ? 0.0 : sweep.err_estimates[i];
        const double e2 = sweep.err_estimates.empty() ? 0.0 : sweep.err_estimates[i + s];
        out.err.push_back(std::hypot(e1, e2));
    }
    return out;
}

PowerFit fit_power(const std::vector<double>& m, const std::vector<double>& D,
                   const std::vector<double>& weights) {
    if (m.size() != D.size() || (!weights.empty() && weights.size() != D.size()))
        throw std::invalid_argument("fit_power: length mismatch");
    if (m.size() < 4) throw std::invalid_argument("fit_power: need at least 4 points");
    bool positive = D.front() > 0;
    for (double d : D) {
        if (d == 0.0 || (d > 0) != positive)
            throw std::invalid_argument(
                "fit_power: series changes sign (wrong class or noise floor)");
    }
    std::vector<double> x(m.size()), y(m.size()), w;
    for (size_t i = 0; i < m.size(); ++i) {
        x[i] = std::log(m[i]);
        y[i] = std::log(std::abs(D[i]));
    }
    // Quadrature errors propagate to ln|D| as err/|D|.
    if (!weights.empty()) {
        bool usable = true;
        for (size_t i = 0; i < weights.size(); ++i)
            if (!(weights[i] > 0)) usable = false;
        if (usable) {
            w.resize(m.size());
            for (size_t i = 0; i < m.size(); ++i) {
                const double sigma = weights[i] / std::abs(D[i]);
                w[i] = 1.0 / (sigma * sigma);
            }
        }
    }
    const Line line = fit_line(x, y, w);
    return {line.slope, line.intercept, line.rms};
}

LogFit fit_log(const std::vector<double>& m, const std::vector<double>& values) {
    if (m.size() != values.size()) throw std::invalid_argument("fit_log: length mismatch");
    if (m.size() < 4) throw std::invalid_argument("fit_log: need at least 4 points");
    std::vector<double> x(m.size());
    for (size_t i = 0; i < m.size(); ++i) x[i] = std::log(1.0 / m[i]);
    const Line line = fit_line(x, values, {});
    return {line.slope, line.intercept, line.rms};
}

std::string FitReport::summary() const {
    char buf[256];
    if (cls == SingularityClass::log)
        std::snprintf(buf, sizeof buf, "%s: log, c=%.4g+-%.2g", model_id.c_str(), c, c_err);
    else
        std::snprintf(buf, sizeof buf, "%s: %s, alpha=%.4g, c=%.4g+-%.2g, A=%.4g",
                      model_id.c_str(), to_string(cls).c_str(), alpha, c, c_err, A);
    return buf;
}

FitReport classify_singularity(const SweepResult& sw) {
    const size_t n = sw.m_values.size();
    if (n < 8) throw std::invalid_argument("classify_singularity: need at least 8 points");
    if (sw.m_values.front() / sw.m_values.back() < 100.0 * (1.0 - 1e-9))
        throw std::invalid_argument("classify_singularity: need at least 2 decades of m");

    const double r = 0.1;  // one-decade differencing
    const DifferenceSeries diff = difference_series(sw, r);

    // Fit window: drop the two largest-m differenced points (analytic
    // corrections) and anything at the quadrature noise floor.
    std::vector<double> dm, dv, de;
    for (size_t i = 2; i < diff.m.size(); ++i) {
        if (diff.err[i] > 0.1 * std::abs(diff.value[i])) continue;
        dm.push_back(diff.m[i]);
        dv.push_back(diff.value[i]);
        de.push_back(diff.err[i]);
    }
    if (dm.size() < 4)
        throw std::invalid_argument("classify_singularity: too few usable differenced points");

    const PowerFit pf = fit_power(dm, dv, de);
    const double alpha = pf.alpha;

    // Weighted mean of the differenced series (the log-class constant).
    double wsum = 0.0, dmean = 0.0;
    for (size_t i = 0; i < dv.size(); ++i) {
        const double w = de[i] > 0 ? 1.0 / (de[i] * de[i]) : 1.0;
        wsum += w;
        dmean += w * dv[i];
    }
    dmean /= wsum;
    double dvar = 0.0;
    for (double v : dv) dvar += (v - dmean) * (v - dmean);
    const double dstd = std::sqrt(dvar / dv.size());

    // Raw-series window: everything at or below the largest retained
    // differenced label, so the candidates are scored on equal data.
    const double m_hi = dm.front();
    std::vector<double> rm, rq;
    for (size_t i = 0; i < n; ++i) {
        if (sw.m_values[i] <= m_hi * (1.0 + 1e-12)) {
            rm.push_back(sw.m_values[i]);
            rq.push_back(sw.qfi_values[i]);
        }
    }
    const int nr = static_cast<int>(rm.size());

    // Candidate: log, Q = A + c ln(1/m).
    const LogFit lf = fit_log(rm, rq);
    std::vector<double> fit_vals(rm.size());
    for (size_t i = 0; i < rm.size(); ++i) fit_vals[i] = lf.A + lf.c * std::log(1.0 / rm[i]);
    const double rss_log = relative_rss(rq, fit_vals);

    // Candidate: pure power on the raw series, ln Q = I + alpha' ln m.
    const PowerFit praw = fit_power(rm, rq, {});
    for (size_t i = 0; i < rm.size(); ++i)
        fit_vals[i] = std::exp(praw.log_amplitude) * std::pow(rm[i], praw.alpha);
    const double rss_power = relative_rss(rq, fit_vals);

    // Candidate: background plus power with the differenced exponent,
    // Q = A + c m^alpha, (A, c) by linear least squares. A nearly vanishing
    // exponent makes the basis collinear with the constant; the candidate
    // then degenerates to a constant fit and loses on residuals, as it
    // should for genuinely logarithmic data.
    double cpp_A = 0.0, cpp_c = 0.0;
    if (std::abs(alpha) > 1e-8) {
        double s1 = 0, sb = 0, sbb = 0, sq = 0, sbq = 0;
        for (size_t i = 0; i < rm.size(); ++i) {
            const double b = std::pow(rm[i], alpha);
            s1 += 1;
            sb += b;
            sbb += b * b;
            sq += rq[i];
            sbq += b * rq[i];
        }
        const double det = s1 * sbb - sb * sb;
        cpp_c = (s1 * sbq - sb * sq) / det;
        cpp_A = (sbb * sq - sb * sbq) / det;
    } else {
        for (double q : rq) cpp_A += q;
        cpp_A /= nr;
        cpp_c = 0.0;
    }
    for (size_t i = 0; i < rm.size(); ++i)
        fit_vals[i] = cpp_A + cpp_c * std::pow(rm[i], alpha);
    const double rss_cpp = relative_rss(rq, fit_vals);

    FitReport report;
    report.model_id = sw.model_id;
    report.m_min = rm.back();
    report.m_max = rm.front();
    report.n_points = nr;
    report.rms["log"] = std::sqrt(rss_log / nr);
    report.rms["power"] = std::sqrt(rss_power / nr);
    report.rms["const_plus_power"] = std::sqrt(rss_cpp / nr);

    // The exponent's sign picks the power-family member: a divergent singular
    // part is reported as a pure power (any background is subdominant), a
    // vanishing one as background plus correction. The information criterion
    // then arbitrates between that member and the marginal log candidate.
    const bool divergent = alpha < 0.0;
    const double ic_log = aicc(rss_log, nr, 2);
    const double ic_family =
        divergent ? aicc(rss_power, nr, 2) : aicc(rss_cpp, nr, 3);
    report.ic["log"] = ic_log;
    report.ic[divergent ? "power" : "const_plus_power"] = ic_family;

    bool choose_log = ic_log <= ic_family;
    // Marginal exponents are the log class. Residuals cannot arbitrate here:
    // corrections to scaling sit far above the quadrature noise, so the
    // three-parameter candidate always wins an rss comparison by bending to
    // the correction, even when the window cannot distinguish m^alpha from
    // its alpha -> 0 limit. Below the marginality threshold, report log.
    if (std::abs(alpha) < 0.1) choose_log = true;

    const double amp = std::exp(pf.log_amplitude) * (dv.front() > 0 ? 1.0 : -1.0);
    if (choose_log) {
        report.cls = SingularityClass::log;
        report.alpha = 0.0;
        report.c = dmean / std::log(1.0 / r);
        report.c_err = dstd / (std::sqrt(static_cast<double>(dv.size())) * std::log(1.0 / r));
        report.A = lf.A;
    } else if (divergent) {
        report.cls = SingularityClass::power;
        report.alpha = alpha;
        report.c = amp / (std::pow(r, alpha) - 1.0);
        report.c_err = std::abs(report.c) * pf.rms / std::sqrt(static_cast<double>(dv.size()));
        report.A = cpp_A;  // diagnostic: subdominant by construction
    } else {
        report.cls = SingularityClass::const_plus_power;
        report.alpha = alpha;
        report.c = cpp_c;
        report.c_err = std::abs(report.c) * pf.rms / std::sqrt(static_cast<double>(dv.size()));
        report.A = cpp_A;
    }
    return report;
}

RgCheck rg_check(int p, double m, double b, double cutoff, const QuadratureConfig& cfg) {
    if (!(b > 1)) throw std::invalid_argument("rg_check: b must be > 1");
    if (m == 0.0) throw CriticalityError("rg_check: m = 0 is the critical point");
    const std::vector<double> v(static_cast<size_t>(p), 1.0);
    const double q0 = qfi_continuum(p, v, m, cutoff, cfg);
    const double q1 = qfi_continuum(p, v, b * m, cutoff, cfg);
    const double q2 = qfi_continuum(p, v, b * b * m, cutoff, cfg);
    // Same-ratio differencing cancels the background exactly:
    // S(m) = QFI(m) - QFI(b m) tracks the singular part at scale m.
    const double s_small = q0 - q1;
    const double s_large = q1 - q2;
    if (s_large == 0.0 || s_small == 0.0)
        throw ConvergenceError("rg_check: differenced values at the noise floor");
    RgCheck out;
    out.measured_small_over_large = s_small / s_large;
    out.predicted_small_over_large = std::pow(b, 2.0 - p);
    out.measured_large_over_small = s_large / s_small;
    out.predicted_large_over_small = std::pow(b, p - 2.0);
    out.deviation =
        std::abs(out.measured_small_over_large / out.predicted_small_over_large - 1.0);
    return out;
}

}  // namespace bandqfi
