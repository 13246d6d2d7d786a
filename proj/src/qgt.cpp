#include "bandqfi/qgt.hpp"

#include <cmath>
#include <stdexcept>

namespace bandqfi {

namespace {

constexpr double kPi = 3.14159265358979323846;

double min_occupied_gap(const EigenSystem& es, int occupied) {
    return es.eigenvalues[occupied] - es.eigenvalues[occupied - 1];
}

void check_occupied(int occupied, Eigen::Index D, const char* who) {
    if (occupied < 1 || occupied >= D)
        throw std::invalid_argument(std::string(who) + ": occupied must be in [1, D)");
}

Matrix occupied_projector(const ModelSpec& model, const Momentum& k, double m, int occupied) {
    const Matrix H = evaluate(model, k, m);
    const EigenSystem es = eigh(H);
    if (min_occupied_gap(es, occupied) <= degeneracy_threshold(H))
        throw CriticalityError("metric_mm_overlap: gap below degeneracy threshold");
    const Matrix V = es.eigenvectors.leftCols(occupied);
    return V * V.adjoint();
}

}  // namespace

double metric_mm_from_eigensystem(const EigenSystem& es, const Matrix& dH, int occupied,
                                  double threshold) {
    const Eigen::Index D = es.eigenvalues.size();
    check_occupied(occupied, D, "metric_mm_from_eigensystem");
    if (min_occupied_gap(es, occupied) <= threshold)
        throw CriticalityError("metric_mm_sum: gap below degeneracy threshold");
    // Only the occupied-to-empty block of <u_l| dH |u_n> enters.
    const Matrix cross = es.eigenvectors.rightCols(D - occupied).adjoint() * dH *
                         es.eigenvectors.leftCols(occupied);
    double g = 0.0;
    for (Eigen::Index n = 0; n < occupied; ++n) {
        for (Eigen::Index l = occupied; l < D; ++l) {
            const double de = es.eigenvalues[l] - es.eigenvalues[n];
            g += std::norm(cross(l - occupied, n)) / (de * de);
        }
    }
    return g;
}

MetricSample metric_mm_sum(const ModelSpec& model, const Momentum& k, double m, int occupied) {
    const Matrix H = evaluate(model, k, m);
    check_occupied(occupied, H.rows(), "metric_mm_sum");
    const EigenSystem es = eigh(H);
    const Matrix dH = evaluate_dm(model, k, m);
    MetricSample sample;
    sample.k = k;
    sample.m = m;
    sample.method = MetricMethod::sum;
    sample.value = metric_mm_from_eigensystem(es, dH, occupied, degeneracy_threshold(H));
    return sample;
}

MetricSample metric_mm_closed(int p, const std::vector<double>& velocities, const Momentum& q,
                              double m) {
    if (static_cast<int>(velocities.size()) != p || static_cast<int>(q.size()) != p)
        throw std::invalid_argument("metric_mm_closed: p velocities and p momentum components required");
    double vq2 = 0.0;
    for (int i = 0; i < p; ++i) vq2 += velocities[i] * velocities[i] * q[i] * q[i];
    const double denom = vq2 + m * m;
    if (denom == 0.0) throw std::invalid_argument("metric_mm_closed: q and m all zero");
    MetricSample sample;
    sample.k = q;
    sample.m = m;
    sample.method = MetricMethod::closed_form;
    sample.value = vq2 / (4.0 * denom * denom);
    return sample;
}

MetricSample metric_mm_overlap(const ModelSpec& model, const Momentum& k, double m, int occupied,
                               double step) {
    if (!(step > 0)) throw std::invalid_argument("metric_mm_overlap: step must be positive");
    // Gap checks happen inside occupied_projector at both evaluation points;
    // also refuse the midpoint so near-critical requests fail loudly. The
    // O(step^2) truncation argument needs step << gap: a step that strides
    // across the closing rotates the subspace by O(1) and measures nothing.
    {
        const Matrix H = evaluate(model, k, m);
        check_occupied(occupied, H.rows(), "metric_mm_overlap");
        const EigenSystem es = eigh(H);
        const double gap_here = min_occupied_gap(es, occupied);
        if (gap_here <= degeneracy_threshold(H))
            throw CriticalityError("metric_mm_overlap: gap below degeneracy threshold");
        if (gap_here <= step)
            throw CriticalityError("metric_mm_overlap: step does not resolve the gap at this point");
    }
    const Matrix P1 = occupied_projector(model, k, m - 0.5 * step, occupied);
    const Matrix P2 = occupied_projector(model, k, m + 0.5 * step, occupied);
    // occupied - Re Tr[P1 P2] = occupied - ||V1^dag V2||_F^2, an O(step^2)
    // rotation of the occupied subspace.
    const double tr = (P1 * P2).trace().real();
    MetricSample sample;
    sample.k = k;
    sample.m = m;
    sample.method = MetricMethod::overlap;
    sample.value = std::max(0.0, occupied - tr) / (step * step);
    return sample;
}

double default_overlap_step(const ModelSpec& model, const Momentum& k, double m, int occupied) {
    return 1e-4 * std::max(std::abs(m), gap(model, k, m, occupied));
}

int winding_number(const ModelSpec& model, double m, int grid_n) {
    if (model.kind != ModelKind::lattice || model.spatial_dim_d != 1 || model.base_dim != 2 ||
        !model.extra_bands.empty())
        throw std::invalid_argument("winding_number: undecorated two-band 1D lattice model required");
    if (grid_n < 8) throw std::invalid_argument("winding_number: grid_n too small");
    // Total phase advance of the chiral off-diagonal element h(k) = H(k)_{01}
    // around the zone, accumulated per link and wrapped to (-pi, pi].
    double total = 0.0;
    double prev_phase = 0.0;
    for (int j = 0; j <= grid_n; ++j) {
        const double k = -kPi + 2.0 * kPi * (j % grid_n) / grid_n;
        const Matrix H = evaluate(model, {k}, m);
        const complex_t h = H(0, 1);
        if (std::abs(h) <= degeneracy_threshold(H))
            throw CriticalityError("winding_number: gap closes on the grid");
        const double phase = std::arg(h);
        if (j > 0) {
            double d = phase - prev_phase;
            while (d > kPi) d -= 2.0 * kPi;
            while (d <= -kPi) d += 2.0 * kPi;
            total += d;
        }
        prev_phase = phase;
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

int chern_number(const ModelSpec& model, double m, int occupied, int grid_n) {
    if (model.kind != ModelKind::lattice || model.spatial_dim_d != 2)
        throw std::invalid_argument("chern_number: 2D lattice model required");
    if (grid_n < 8) throw std::invalid_argument("chern_number: grid_n too small");
    const int D = model.matrix_dim();
    check_occupied(occupied, D, "chern_number");

    // Occupied frames on the periodic grid.
    std::vector<Matrix> frames(static_cast<size_t>(grid_n) * grid_n);
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            const double kx = -kPi + 2.0 * kPi * i / grid_n;
            const double ky = -kPi + 2.0 * kPi * j / grid_n;
            const Matrix H = evaluate(model, {kx, ky}, m);
            const EigenSystem es = eigh(H);
            if (min_occupied_gap(es, occupied) <= degeneracy_threshold(H))
                throw CriticalityError("chern_number: gap closes on the grid");
            frames[static_cast<size_t>(i) * grid_n + j] = es.eigenvectors.leftCols(occupied);
        }
    }
    auto frame = [&](int i, int j) -> const Matrix& {
        return frames[static_cast<size_t>((i + grid_n) % grid_n) * grid_n + (j + grid_n) % grid_n];
    };
    // Plaquette field strength from the phases of link-overlap determinants;
    // each plaquette contributes its flux in (-pi, pi], and the total is the
    // Chern number exactly for gapped input on a moderate mesh.
    double total = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            const complex_t u1 = (frame(i, j).adjoint() * frame(i + 1, j)).determinant();
            const complex_t u2 = (frame(i + 1, j).adjoint() * frame(i + 1, j + 1)).determinant();
            const complex_t u3 = (frame(i + 1, j + 1).adjoint() * frame(i, j + 1)).determinant();
            const complex_t u4 = (frame(i, j + 1).adjoint() * frame(i, j)).determinant();
            const complex_t loop = u1 * u2 * u3 * u4;
            if (std::abs(loop) < 1e-12)
                throw CriticalityError("chern_number: singular link overlap; refine the grid");
            total += std::arg(loop);
        }
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

}  // namespace bandqfi
