#pragma once

#include <map>
#include <string>
#include <vector>

#include "bandqfi/integrate.hpp"

namespace bandqfi {

enum class SingularityClass { power, log, const_plus_power };

std::string to_string(SingularityClass c);

// Paired series D(m) = QFI(r m) - QFI(m): the value at the smaller mass minus
// the value at the larger, labeled by the larger mass m. Any constant
// background cancels exactly. For QFI = A + c m^alpha,
//   D(m) = c (r^alpha - 1) m^alpha   (positive when alpha < 0, r < 1);
// for QFI = A + c ln(1/m),  D = c ln(1/r), a positive constant.
struct DifferenceSeries {
    double ratio = 0.0;
    std::vector<double> m;      // larger member of each pair
    std::vector<double> value;
    std::vector<double> err;    // quadrature errors, combined in quadrature
};

// Requires the sweep grid to be geometric with ratio r (r < 1) so that both
// m and r*m lie on the grid; throws std::invalid_argument otherwise.
DifferenceSeries difference_series(const SweepResult& sweep, double r);

struct PowerFit {
    double alpha = 0.0;      // slope in (ln m, ln|D|)
    double log_amplitude = 0.0;  // intercept: ln|D| = log_amplitude + alpha ln m
    double rms = 0.0;        // residual rms in ln|D|
};

// Weighted least-squares line in (ln|m|, ln|D|). Requires >= 4 points of a
// single sign; a sign change signals a wrong class or the noise floor and is
// rejected. Weights (optional, same length) are absolute errors on D.
PowerFit fit_power(const std::vector<double>& m, const std::vector<double>& D,
                   const std::vector<double>& weights = {});

struct LogFit {
    double c = 0.0;          // slope against ln(1/m)
    double A = 0.0;          // intercept
    double rms = 0.0;
};

// Least squares of values against ln(1/m). Requires >= 4 points.
LogFit fit_log(const std::vector<double>& m, const std::vector<double>& values);

// Classification of the singular part of a sweep, per the three scaling
// regimes: divergent power law (alpha < 0), marginal log, and constant
// background plus a vanishing power correction (alpha > 0).
struct FitReport {
    SingularityClass cls = SingularityClass::power;
    double alpha = 0.0;          // exponent (0 for log)
    double c = 0.0;              // singular amplitude: c m^alpha or c ln(1/m)
    double c_err = 0.0;          // scatter-derived uncertainty on c
    double A = 0.0;              // background (meaningful for const_plus_power)
    std::map<std::string, double> rms;  // relative-residual rms, every class
    std::map<std::string, double> ic;   // information criterion, per candidate
    double m_min = 0.0, m_max = 0.0;    // fit window actually used
    int n_points = 0;
    std::string model_id;

    std::string summary() const;   // e.g. "linearized:p=2: log, c=0.785+-0.003"
};

// Fits the three candidates and selects by small-sample-corrected AIC on the
// windowed raw series (relative residuals, equal data). The exponent comes
// from the background-immune differenced series; its sign picks the power
// family member (alpha < 0: power, alpha >= 0: const_plus_power), since with
// any analytic background present the three-parameter model would always
// dominate a noiseless information criterion. Marginal tie-break: fitted
// |alpha| < 0.1 with a lower log residual reports log. The fit window drops
// the two largest-m points (contaminated by analytic corrections) and any
// differenced point whose propagated error exceeds 10% of its value.
// Requires >= 8 points spanning >= 2 decades.
FitReport classify_singularity(const SweepResult& sweep);

// Homogeneity check of the singular part under m -> b*m. The singular values
// are estimated by same-ratio differencing S(m) = QFI(m) - QFI(b m), which
// cancels the background exactly. Both ratio orientations are returned
// labeled; the prediction for small_over_large = S(m)/S(b m) is b^(2-p)
// (= 1 for p = 2, where the differenced series is asymptotically constant).
struct RgCheck {
    double measured_small_over_large = 0.0;  // S(m) / S(b m)
    double predicted_small_over_large = 0.0;  // b^(2-p)
    double measured_large_over_small = 0.0;  // S(b m) / S(m)
    double predicted_large_over_small = 0.0;  // b^(p-2)
    double deviation = 0.0;                   // |measured/predicted - 1|
};

RgCheck rg_check(int p, double m, double b, double cutoff, const QuadratureConfig& cfg = {});

}  // namespace bandqfi
