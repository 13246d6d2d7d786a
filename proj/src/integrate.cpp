#include "bandqfi/integrate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "bandqfi/detail/eigh2.hpp"
#include "bandqfi/qgt.hpp"
#include "bandqfi/quadrature.hpp"
#include "bandqfi/spectrum.hpp"

namespace bandqfi {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sphere_area(int p) {
    switch (p) {
        case 1: return 2.0;          // S_0
        case 2: return 2.0 * kPi;    // S_1
        case 3: return 4.0 * kPi;    // S_2
    }
    throw std::invalid_argument("sphere_area: p must be 1, 2, or 3");
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// --- deterministic parallel reduction -------------------------------------
//
// Work is cut into blocks fixed by the problem size (never by the thread
// count); each block is summed in index order and the block results are
// combined sequentially with compensated summation, so the total is
// bit-identical for any number of workers.

double kahan_total(const std::vector<double>& parts) {
    double sum = 0.0, comp = 0.0;
    for (double x : parts) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

template <class BlockFn>
std::vector<double> run_blocks(int n_blocks, int threads, BlockFn&& block) {
    std::vector<double> parts(static_cast<size_t>(n_blocks), 0.0);
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = std::min(threads, n_blocks);
    if (threads == 1) {
        for (int i = 0; i < n_blocks; ++i) parts[i] = block(i);
        return parts;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        int i;
        while ((i = next.fetch_add(1)) < n_blocks) {
            try {
                parts[i] = block(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return parts;
}

// --- continuum: radial reduction -------------------------------------------

// Integral of the closed-form metric along the rescaled radius, including the
// occupied-band multiplicity (every occupied state of a Clifford model
// contributes the same closed-form density). mass(r) = m + lambda_eff r^2.
IntegralResult radial_qfi(int p, double multiplicity, double prod_v, double m, double lambda_eff,
                          double cutoff, const QuadratureConfig& cfg) {
    auto integrand = [=](double r) {
        const double M = m + lambda_eff * r * r;
        const double denom = r * r + M * M;
        return std::pow(r, p + 1) / (4.0 * denom * denom);
    };
    const QuadResult q = integrate_adaptive(integrand, 0.0, cutoff, cfg.rel_tol, cfg.max_refinements);
    const double scale = multiplicity * sphere_area(p) / prod_v;
    IntegralResult out;
    out.value = scale * q.value;
    out.err_estimate = scale * q.err_estimate;
    out.evaluations = q.evaluations;
    return out;
}

// --- continuum: angular x radial grid --------------------------------------

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
std::vector<std::pair<double, double>> legendre_rule(int n) {
    std::vector<std::pair<double, double>> nodes(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[i] = {-x, w};
        nodes[n - 1 - i] = {x, w};
    }
    return nodes;
}

struct Ray {
    std::vector<double> direction;  // unit vector in the rescaled variable
    double weight;                  // angular measure
};

std::vector<Ray> angular_mesh(int p, int order) {
    std::vector<Ray> rays;
    if (p == 1) {
        rays.push_back({{1.0}, 1.0});
        rays.push_back({{-1.0}, 1.0});
    } else if (p == 2) {
        const int n = order;
        for (int j = 0; j < n; ++j) {
            const double th = 2.0 * kPi * j / n;
            rays.push_back({{std::cos(th), std::sin(th)}, 2.0 * kPi / n});
        }
    } else {
        const int nu = order, nphi = 2 * order;
        const auto gl = legendre_rule(nu);
        for (const auto& [u, wu] : gl) {
            const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
            for (int j = 0; j < nphi; ++j) {
                const double ph = 2.0 * kPi * j / nphi;
                rays.push_back({{su * std::cos(ph), su * std::sin(ph), u}, wu * 2.0 * kPi / nphi});
            }
        }
    }
    return rays;
}

// Integrates the perturbation-sum metric over the rescaled ball of radius
// cutoff(direction), as sum over rays of w * int dr r^{p-1} g_mm(q(r), m)
// with q_i = r n_i / v_i and jacobian 1/prod(v). Used whenever the density
// is not isotropic in the rescaled variable (extra bands; anisotropic
// quadratic correction) and for the spherical-cutoff cross-check.
template <class CutoffFn>
IntegralResult angular_qfi_at_order(const ModelSpec& model, double m, const QuadratureConfig& cfg,
                                    int order, CutoffFn&& cutoff_of) {
    const int p = model.codimension_p;
    const int occupied = model.occupied_default();
    double prod_v = 1.0;
    for (double v : model.velocities) prod_v *= v;

    const auto rays = angular_mesh(p, order);
    IntegralResult out;
    std::vector<double> parts(rays.size());
    long evals = 0;
    for (size_t i = 0; i < rays.size(); ++i) {
        const Ray& ray = rays[i];
        Momentum q(static_cast<size_t>(p), 0.0);
        auto integrand = [&](double r) {
            for (int c = 0; c < p; ++c) q[c] = r * ray.direction[c] / model.velocities[c];
            const double g = metric_mm_sum(model, q, m, occupied).value;
            return std::pow(r, p - 1) * g;
        };
        const QuadResult qr = integrate_adaptive(integrand, 0.0, cutoff_of(ray.direction),
                                                 cfg.rel_tol, cfg.max_refinements);
        parts[i] = ray.weight * qr.value;
        out.err_estimate += ray.weight * qr.err_estimate;
        evals += qr.evaluations;
    }
    out.value = kahan_total(parts) / prod_v;
    out.err_estimate /= prod_v;
    out.evaluations = evals;
    return out;
}

template <class CutoffFn>
IntegralResult angular_qfi(const ModelSpec& model, double m, const QuadratureConfig& cfg,
                           CutoffFn&& cutoff_of) {
    const int p = model.codimension_p;
    const int base_order = p == 2 ? 32 : 12;
    IntegralResult coarse = angular_qfi_at_order(model, m, cfg, base_order, cutoff_of);
    if (p == 1) return coarse;  // two exact rays: no angular discretization
    // One order doubling bounds the angular error honestly.
    IntegralResult fine = angular_qfi_at_order(model, m, cfg, 2 * base_order, cutoff_of);
    fine.err_estimate += std::abs(fine.value - coarse.value);
    fine.evaluations += coarse.evaluations;
    return fine;
}

bool isotropic(const std::vector<double>& v) {
    for (double vi : v)
        if (vi != v.front()) return false;
    return true;
}

// --- lattice mesh -----------------------------------------------------------

// Tight kernel for undecorated two-band lattice models: closed-form 2x2
// eigensystem plus the |<u1|dH|u0>|^2/(E1-E0)^2 matrix element, identical
// arithmetic to metric_mm_sum's route. DVecFn(i, j) returns the Hamiltonian
// entries (a, c, b) at grid node (i, j); for d=1 only i is used.
struct Entries2 {
    double a, c;
    complex_t b;
};

template <class DVecFn>
double mesh_metric_2x2(int N, int d, const Matrix& dH, int threads, DVecFn&& entries) {
    const complex_t d00 = dH(0, 0), d01 = dH(0, 1), d10 = dH(1, 0), d11 = dH(1, 1);
    auto point = [&](int i, int j) {
        const Entries2 e = entries(i, j);
        const detail::Eigh2 r = detail::eigh2(e.a, e.c, e.b);
        // <v1| dH |v0> / (e1 - e0)
        const complex_t w0 = d00 * r.v0[0] + d01 * r.v0[1];
        const complex_t w1 = d10 * r.v0[0] + d11 * r.v0[1];
        const complex_t me = std::conj(r.v1[0]) * w0 + std::conj(r.v1[1]) * w1;
        const double de = r.e1 - r.e0;
        return std::norm(me) / (de * de);
    };
    if (d == 1) {
        const int block_size = 1024;
        const int n_blocks = (N + block_size - 1) / block_size;
        auto parts = run_blocks(n_blocks, threads, [&](int blk) {
            const int lo = blk * block_size, hi = std::min(N, lo + block_size);
            double s = 0.0;
            for (int i = lo; i < hi; ++i) s += point(i, 0);
            return s;
        });
        return kahan_total(parts) * (2.0 * kPi / N);
    }
    auto parts = run_blocks(N, threads, [&](int i) {
        double s = 0.0;
        for (int j = 0; j < N; ++j) s += point(i, j);
        return s;
    });
    const double h = 2.0 * kPi / N;
    return kahan_total(parts) * h * h;
}

double lattice_mesh_value(const ModelSpec& model, double m, int occupied, int N, int threads) {
    const int d = model.spatial_dim_d;
    if (model.base_dim == 2 && model.extra_bands.empty()) {
        // Per-axis tables keep trig out of the inner loop.
        std::vector<double> sn(N), cs(N);
        for (int j = 0; j < N; ++j) {
            const double k = -kPi + 2.0 * kPi * j / N;
            sn[j] = std::sin(k);
            cs[j] = std::cos(k);
        }
        const Matrix dH = evaluate_dm(model, Momentum(static_cast<size_t>(d), 0.0), m);
        if (model.family == ModelFamily::ssh)
            return mesh_metric_2x2(N, 1, dH, threads, [&](int i, int) {
                return Entries2{0.0, 0.0, complex_t(m + 1.0 - cs[i], -sn[i])};
            });
        if (model.family == ModelFamily::chern)
            return mesh_metric_2x2(N, 2, dH, threads, [&](int i, int j) {
                const double dz = m - 2.0 + cs[i] + cs[j];
                return Entries2{dz, -dz, complex_t(sn[i], -sn[j])};
            });
    }
    // Generic path: any dimension, any matrix size, criticality-checked per
    // point by metric_mm_sum.
    std::vector<double> ks(N);
    for (int j = 0; j < N; ++j) ks[j] = -kPi + 2.0 * kPi * j / N;
    long n_rows = 1;
    for (int c = 0; c < d - 1; ++c) n_rows *= N;
    auto parts = run_blocks(static_cast<int>(n_rows), threads, [&](int row) {
        Momentum k(static_cast<size_t>(d), 0.0);
        long rest = row;
        for (int c = d - 2; c >= 0; --c) {
            k[c] = ks[rest % N];
            rest /= N;
        }
        double s = 0.0;
        for (int j = 0; j < N; ++j) {
            k[d - 1] = ks[j];
            s += metric_mm_sum(model, k, m, occupied).value;
        }
        return s;
    });
    return kahan_total(parts) * std::pow(2.0 * kPi / N, d);
}

}  // namespace

int QuadratureConfig::max_grid_for_dim(int d) const {
    if (lattice_max_grid > 0) return lattice_max_grid;
    switch (d) {
        case 1: return 4096;
        case 2: return 2048;
        default: return 256;
    }
}

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0) || rel_tol > 1e-2)
        throw std::invalid_argument("QuadratureConfig: rel_tol must be in (0, 1e-2]");
    if (max_refinements < 1) throw std::invalid_argument("QuadratureConfig: max_refinements >= 1");
    if (!is_power_of_two(lattice_grid_start))
        throw std::invalid_argument("QuadratureConfig: lattice_grid_start must be a power of two");
    if (lattice_max_grid != 0 && !is_power_of_two(lattice_max_grid))
        throw std::invalid_argument("QuadratureConfig: lattice_max_grid must be a power of two");
}

IntegralResult qfi_continuum_ex(int p, const std::vector<double>& velocities, double m,
                                double cutoff, const QuadratureConfig& cfg) {
    cfg.validate();
    if (m == 0.0) throw CriticalityError("qfi_continuum: m = 0 is the critical point");
    if (!(cutoff > 0)) throw std::invalid_argument("qfi_continuum: cutoff must be positive");
    if (static_cast<int>(velocities.size()) != p)
        throw std::invalid_argument("qfi_continuum: need exactly p velocities");
    double prod_v = 1.0;
    for (double v : velocities) {
        if (!(v > 0)) throw std::invalid_argument("qfi_continuum: velocities must be positive");
        prod_v *= v;
    }
    return radial_qfi(p, 1.0, prod_v, m, 0.0, cutoff, cfg);
}

double qfi_continuum(int p, const std::vector<double>& velocities, double m, double cutoff,
                     const QuadratureConfig& cfg) {
    return qfi_continuum_ex(p, velocities, m, cutoff, cfg).value;
}

IntegralResult qfi_continuum_model(const ModelSpec& model, double m, const QuadratureConfig& cfg) {
    cfg.validate();
    if (model.kind != ModelKind::continuum)
        throw std::invalid_argument("qfi_continuum_model: continuum model required");
    if (m == 0.0) throw CriticalityError("qfi_continuum_model: m = 0 is the critical point");
    const bool iso = isotropic(model.velocities);
    if (model.extra_bands.empty() && (model.lambda_c == 0.0 || iso)) {
        double prod_v = 1.0;
        for (double v : model.velocities) prod_v *= v;
        const double v0 = model.velocities.front();
        const double lambda_eff = model.lambda_c / (v0 * v0);
        return radial_qfi(model.codimension_p, model.base_dim / 2.0, prod_v, m, lambda_eff,
                          model.cutoff_lambda, cfg);
    }
    return angular_qfi(model, m, cfg, [&](const std::vector<double>&) { return model.cutoff_lambda; });
}

IntegralResult qfi_continuum_spherical(const ModelSpec& model, double m,
                                       const QuadratureConfig& cfg) {
    cfg.validate();
    if (model.kind != ModelKind::continuum)
        throw std::invalid_argument("qfi_continuum_spherical: continuum model required");
    if (m == 0.0) throw CriticalityError("qfi_continuum_spherical: m = 0 is the critical point");
    return angular_qfi(model, m, cfg, [&](const std::vector<double>& n) {
        double raw = 0.0;
        for (size_t c = 0; c < n.size(); ++c) {
            const double t = n[c] / model.velocities[c];
            raw += t * t;
        }
        return model.cutoff_lambda / std::sqrt(raw);
    });
}

IntegralResult qfi_lattice_ex(const ModelSpec& model, double m, int occupied,
                              const QuadratureConfig& cfg) {
    cfg.validate();
    if (model.kind != ModelKind::lattice)
        throw std::invalid_argument("qfi_lattice: lattice model required");
    if (m == 0.0 || std::abs(m) < 1e-13)
        throw CriticalityError("qfi_lattice: m = 0 is the critical point");
    if (occupied < 1 || occupied >= model.matrix_dim())
        throw std::invalid_argument("qfi_lattice: occupied must be in [1, D)");

    const int d = model.spatial_dim_d;
    const int max_grid = cfg.max_grid_for_dim(d);
    IntegralResult out;
    double prev = 0.0;
    bool have_prev = false;
    for (int N = cfg.lattice_grid_start; N <= max_grid; N *= 2) {
        const double value = lattice_mesh_value(model, m, occupied, N, cfg.threads);
        out.evaluations += static_cast<long>(std::pow(static_cast<double>(N), d));
        out.finest_grid = N;
        out.value = value;
        if (have_prev) {
            out.err_estimate = std::abs(value - prev);
            if (out.err_estimate <= cfg.rel_tol * std::abs(value)) {
                out.converged = true;
                return out;
            }
        }
        prev = value;
        have_prev = true;
    }
    // Budget exhausted: the finest estimate is still the best available one
    // (the periodic trapezoid rule converges faster than geometrically, so
    // extrapolation cannot improve on it); hand it back with the achieved
    // error so sweeps can weight or discard the point.
    out.converged = false;
    return out;
}

double qfi_lattice(const ModelSpec& model, double m, int occupied, const QuadratureConfig& cfg) {
    return qfi_lattice_ex(model, m, occupied, cfg).value;
}

double scaled_integral(int p, double X, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(X > 0)) throw std::invalid_argument("scaled_integral: X must be positive");
    auto integrand = [=](double x) {
        const double denom = x * x + 1.0;
        return std::pow(x, p + 1) / (4.0 * denom * denom);
    };
    const QuadResult q = integrate_adaptive(integrand, 0.0, X, cfg.rel_tol, cfg.max_refinements);
    return sphere_area(p) * q.value;
}

std::vector<double> make_m_grid(double m_min, double m_max, int points_per_decade) {
    if (!(m_min > 0) || !(m_max > m_min))
        throw std::invalid_argument("make_m_grid: need 0 < m_min < m_max");
    if (points_per_decade < 1)
        throw std::invalid_argument("make_m_grid: points_per_decade must be >= 1");
    std::vector<double> grid;
    const int n = static_cast<int>(std::lround(points_per_decade * std::log10(m_max / m_min))) + 1;
    for (int i = 0; i < n; ++i)
        grid.push_back(m_max * std::pow(10.0, -static_cast<double>(i) / points_per_decade));
    return grid;
}

SweepResult sweep(const ModelSpec& model, const std::vector<double>& m_grid,
                  const QuadratureConfig& cfg) {
    cfg.validate();
    if (m_grid.empty()) throw std::invalid_argument("sweep: empty m grid");
    for (size_t i = 0; i < m_grid.size(); ++i) {
        if (!(m_grid[i] > 0)) throw std::invalid_argument("sweep: m values must be positive");
        if (i > 0 && !(m_grid[i] < m_grid[i - 1]))
            throw std::invalid_argument("sweep: m values must be strictly decreasing");
    }

    SweepResult result;
    result.model_id = model.id();
    result.model_velocities = model.velocities;
    result.cutoff = model.cutoff_lambda;
    result.codimension_p = model.codimension_p;
    result.occupied = model.occupied_default();
    result.config = cfg;
    result.m_values = m_grid;

    for (double m : m_grid) {
        IntegralResult r;
        try {
            r = model.kind == ModelKind::continuum
                    ? qfi_continuum_model(model, m, cfg)
                    : qfi_lattice_ex(model, m, model.occupied_default(), cfg);
        } catch (const CriticalityError& e) {
            throw CriticalityError("sweep: point m=" + std::to_string(m) + ": " + e.what());
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("sweep: point m=" + std::to_string(m) + ": " + e.what());
        }
        result.qfi_values.push_back(r.value);
        result.err_estimates.push_back(r.err_estimate);
    }
    return result;
}

}  // namespace bandqfi
