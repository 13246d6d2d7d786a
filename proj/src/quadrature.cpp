#include "bandqfi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace bandqfi {

namespace {

// 15-point Kronrod extension of 7-point Gauss (positive abscissae; the rule
// is symmetric). Gauss nodes are the odd-index entries.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double a, b;
    double value;       // Kronrod estimate
    double err;
    int depth;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b, int depth) {
    const double h = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    const double fc = f(mid);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(fc) * kWgk[7];
    double fv[7][2];
    for (int i = 0; i < 7; ++i) {
        fv[i][0] = f(mid - h * kXgk[i]);
        fv[i][1] = f(mid + h * kXgk[i]);
        const double sum = fv[i][0] + fv[i][1];
        resk += kWgk[i] * sum;
        resabs += kWgk[i] * (std::abs(fv[i][0]) + std::abs(fv[i][1]));
        if (i % 2 == 1) resg += kWg[i / 2] * sum;
    }
    // Scaled deviation from the mean: the QUADPACK error heuristic.
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kWgk[i] * (std::abs(fv[i][0] - mean) + std::abs(fv[i][1] - mean));

    Panel p;
    p.a = a;
    p.b = b;
    p.depth = depth;
    p.value = resk * h;
    double err = std::abs(resk - resg) * h;
    const double asc = resasc * h;
    if (asc != 0.0 && err != 0.0)
        err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    const double round_floor = 50.0 * 2.2e-16 * resabs * h;
    p.err = std::max(err, round_floor);
    return p;
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, int max_refinements) {
    if (!(b > a)) throw std::invalid_argument("integrate_adaptive: need b > a");
    if (!(rel_tol > 0)) throw std::invalid_argument("integrate_adaptive: rel_tol must be > 0");

    std::priority_queue<Panel> queue;
    queue.push(evaluate_panel(f, a, b, 0));
    long evals = 15;
    double total = queue.top().value;
    double total_err = queue.top().err;

    const long max_panels = 100000;
    long panels = 1;
    while (total_err > rel_tol * std::abs(total) && total_err > 1e-300) {
        Panel worst = queue.top();
        if (worst.depth >= max_refinements)
            throw ConvergenceError("integrate_adaptive: max refinement depth reached at rel_tol");
        if (panels >= max_panels)
            throw ConvergenceError("integrate_adaptive: panel budget exhausted");
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = evaluate_panel(f, worst.a, mid, worst.depth + 1);
        Panel right = evaluate_panel(f, mid, worst.b, worst.depth + 1);
        evals += 30;
        ++panels;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        queue.push(left);
        queue.push(right);
    }

    // Recompute the sums in a fixed order to shed accumulated cancellation.
    std::vector<Panel> all;
    all.reserve(panels);
    while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    QuadResult out;
    out.evaluations = evals;
    double c = 0.0;
    for (const Panel& p : all) {  // Kahan over panels left to right
        const double y = p.value - c;
        const double t = out.value + y;
        c = (t - out.value) - y;
        out.value = t;
        out.err_estimate += p.err;
    }
    return out;
}

}  // namespace bandqfi
