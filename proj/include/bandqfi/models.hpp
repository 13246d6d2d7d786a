#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bandqfi/clifford.hpp"
#include "bandqfi/types.hpp"

namespace bandqfi {

enum class ModelKind { continuum, lattice };

enum class ModelFamily { linearized, ssh, chern, weyl };

// One additional flat band at energy `gap`, coupled with constant strength
// `coupling` to the first basis state of the undecorated Hamiltonian.
struct ExtraBand {
    double gap = 0.0;
    double coupling = 0.0;
};

// Immutable description of a Bloch Hamiltonian family. The tuning parameter m
// is always passed explicitly to evaluate(); m_ref records the value the model
// was constructed at (used for precondition checks and as a CLI default).
struct ModelSpec {
    ModelKind kind = ModelKind::continuum;
    ModelFamily family = ModelFamily::linearized;
    int codimension_p = 1;              // momentum directions with linear gap closing
    int spatial_dim_d = 1;              // = codimension_p for all built-in models
    std::vector<double> velocities;     // p positive reals
    double cutoff_lambda = 1.0;         // |q| <= cutoff (continuum only)
    double lambda_c = 0.0;              // quadratic correction along the mass direction
    std::vector<ExtraBand> extra_bands;
    // Extra-band level repulsion pulls the dressed band down by ~g^2/Delta,
    // which would move the band touching away from m = 0. with_gapped_band
    // stores the compensating offset here; evaluate() feeds the base block
    // m + mass_shift so that m keeps measuring distance to the transition.
    double mass_shift = 0.0;
    double m_ref = 0.0;

    int base_dim = 2;                   // dimension before extra-band decoration
    int matrix_dim() const { return base_dim + static_cast<int>(extra_bands.size()); }

    // Half filling of the undecorated bands; extra bands sit above the gap.
    int occupied_default() const { return base_dim / 2; }

    std::string id() const;             // "ssh", "chern", "weyl", "linearized:p=2"
};

// H(q, m) = sum_i v_i q_i G_i + (m + lambda_c |q|^2) G_{p+1} on |q| <= cutoff.
ModelSpec linearized_model(int p, const std::vector<double>& velocities, double cutoff,
                           double lambda_c = 0.0);

// Lattice H(k) = (m + 1 - cos k) s1 + (sin k) s2, k in [-pi, pi).
// Gap at k=0 is 2|m|; near k=0 this is the p=1 continuum form.
ModelSpec ssh_model(double m);

// Lattice H(k) = sin kx s1 + sin ky s2 + (m - 2 + cos kx + cos ky) s3.
// Gap closes at k=(0,0) when m=0; requires |m| < 2 so the other Dirac
// points stay gapped.
ModelSpec chern_model(double m);

// Continuum 4x4 H(q, m) = q1 G1 + q2 G2 + q3 G3 + m G4 with cutoff 1:
// the p=3 linearized model with doubly degenerate bands.
ModelSpec weyl_model(double m);

// Direct-sum extension by one flat band at energy `gap`, plus a constant
// coupling between the new band and the first original basis state. The
// occupied count is unchanged. Requires gap > 0 and |coupling| < gap/2.
//
// The coupling repels the dressed band downward, which on its own would shift
// the critical point to m ~ g^2/(2*Delta). When basis state 0 is a mass
// eigenstate (true for every built-in family except ssh), the returned model
// is recalibrated via ModelSpec::mass_shift so the band touching stays at
// m = 0; with a single extra band the offset is (sqrt(D^2 + 2g^2) - D)/2.
// A zero coupling leaves the model bit-identical to the undecorated one
// (aside from the decoupled block), including mass_shift = 0.
ModelSpec with_gapped_band(const ModelSpec& model, double gap, double coupling);

// Bloch Hamiltonian at momentum k and tuning parameter m. Hermitian by
// construction; throws std::invalid_argument when k is outside the domain
// (|q| <= cutoff for continuum, components in [-pi, pi) for lattice).
Matrix evaluate(const ModelSpec& model, const Momentum& k, double m);

// Exact dH/dm. Constant in (k, m) for every built-in family.
Matrix evaluate_dm(const ModelSpec& model, const Momentum& k, double m);

}  // namespace bandqfi
