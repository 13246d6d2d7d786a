#pragma once

#include "bandqfi/models.hpp"
#include "bandqfi/spectrum.hpp"
#include "bandqfi/types.hpp"

namespace bandqfi {

enum class MetricMethod { sum, closed_form, overlap };

// One evaluation of the metric density g_mm at (k, m).
struct MetricSample {
    Momentum k;
    double m = 0.0;
    double value = 0.0;       // >= 0, units 1/energy^2
    MetricMethod method = MetricMethod::sum;
};

// Occupied-subspace perturbation sum
//   g_mm = sum_{n in occ, l not in occ} |<u_l| dH/dm |u_n>|^2 / (E_l - E_n)^2.
// For a two-band model with one occupied band this is the textbook
// single-band metric. Throws CriticalityError when the gap at (k, m) is below
// the degeneracy threshold.
MetricSample metric_mm_sum(const ModelSpec& model, const Momentum& k, double m, int occupied);

// Same sum evaluated on a caller-supplied eigensystem; exposed so tests can
// rephase eigenvectors and check gauge invariance.
double metric_mm_from_eigensystem(const EigenSystem& es, const Matrix& dH, int occupied,
                                  double threshold);

// Closed form for the linearized two-band model:
//   g_mm = (sum_i v_i^2 q_i^2) / (4 (sum_i v_i^2 q_i^2 + m^2)^2).
// Throws std::invalid_argument when q and m are all zero.
MetricSample metric_mm_closed(int p, const std::vector<double>& velocities, const Momentum& q,
                              double m);

// Gauge-invariant finite-difference oracle from occupied projectors:
//   g_mm ~ (N_occ - Re Tr[P(m - d/2) P(m + d/2)]) / d^2,
// accurate to O(d^2). Independent of the perturbation sum. Throws
// CriticalityError when the gap at (k, m) is degenerate-small or does not
// exceed the step (a stride across the closing measures nothing).
MetricSample metric_mm_overlap(const ModelSpec& model, const Momentum& k, double m, int occupied,
                               double step);

// Default overlap step 1e-4 * max(|m|, gap): balances O(d^2) truncation
// against roundoff in 1e-12-accurate eigensystems.
double default_overlap_step(const ModelSpec& model, const Momentum& k, double m, int occupied);

// Phase winding of the off-diagonal element h(k) of a two-band 1D chiral
// model around the Brillouin zone, unwrapped on a grid_n-point mesh; exact
// integer for gapped input. Sign convention: the topological phase of the
// built-in 1D chain reports +1.
int winding_number(const ModelSpec& model, double m, int grid_n);

// Chern number of the occupied subspace via the plaquette link-phase
// (lattice field strength) construction on a grid_n x grid_n mesh; exact
// integer for gapped models at moderate grid_n.
int chern_number(const ModelSpec& model, double m, int occupied, int grid_n);

}  // namespace bandqfi
