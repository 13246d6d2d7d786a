#include "bandqfi/models.hpp"

#include <cmath>
#include <stdexcept>

namespace bandqfi {

namespace {

constexpr double kPi = 3.14159265358979323846;

// The generator sets are deterministic and tiny; build each once.
const CliffordSet& gammas(int n) {
    static const std::vector<CliffordSet> cache = [] {
        std::vector<CliffordSet> v;
        for (int i = 1; i <= 8; ++i) v.push_back(clifford_generators(i));
        return v;
    }();
    return cache.at(n - 1);
}

void check_momentum(const ModelSpec& model, const Momentum& k) {
    if (static_cast<int>(k.size()) != model.spatial_dim_d)
        throw std::invalid_argument("evaluate: momentum dimension mismatch");
    if (model.kind == ModelKind::continuum) {
        double q2 = 0.0;
        for (double qi : k) q2 += qi * qi;
        if (q2 > model.cutoff_lambda * model.cutoff_lambda * (1.0 + 1e-12))
            throw std::invalid_argument("evaluate: |q| exceeds the cutoff");
    } else {
        for (double ki : k)
            if (ki < -kPi || ki >= kPi)
                throw std::invalid_argument("evaluate: k component outside [-pi, pi)");
    }
}

// Hamiltonian of the undecorated model in the top-left block; extra bands
// fill the trailing diagonal with their flat energies plus the constant
// coupling to basis state 0.
Matrix assemble(const ModelSpec& model, const Matrix& base) {
    const int extras = static_cast<int>(model.extra_bands.size());
    if (extras == 0) return base;
    const int D = model.base_dim + extras;
    Matrix H = Matrix::Zero(D, D);
    H.topLeftCorner(model.base_dim, model.base_dim) = base;
    for (int j = 0; j < extras; ++j) {
        const int idx = model.base_dim + j;
        H(idx, idx) = model.extra_bands[j].gap;
        H(0, idx) = model.extra_bands[j].coupling;
        H(idx, 0) = model.extra_bands[j].coupling;
    }
    return H;
}

Matrix base_hamiltonian(const ModelSpec& model, const Momentum& k, double m) {
    switch (model.family) {
        case ModelFamily::linearized:
        case ModelFamily::weyl: {
            const CliffordSet& cs = gammas(model.codimension_p + 1);
            double q2 = 0.0;
            for (double qi : k) q2 += qi * qi;
            Matrix H = (m + model.lambda_c * q2) * cs.gamma[model.codimension_p];
            for (int i = 0; i < model.codimension_p; ++i)
                H += model.velocities[i] * k[i] * cs.gamma[i];
            return H;
        }
        case ModelFamily::ssh: {
            Matrix H(2, 2);
            // d1 s1 + d2 s2 puts d1 - i d2 in the upper-right corner.
            const complex_t h(m + 1.0 - std::cos(k[0]), -std::sin(k[0]));
            H << 0.0, h, std::conj(h), 0.0;
            return H;
        }
        case ModelFamily::chern: {
            Matrix H(2, 2);
            const complex_t off(std::sin(k[0]), -std::sin(k[1]));
            const double dz = m - 2.0 + std::cos(k[0]) + std::cos(k[1]);
            H << dz, off, std::conj(off), -dz;
            return H;
        }
    }
    throw std::logic_error("unknown model family");
}

Matrix base_dm(const ModelSpec& model) {
    switch (model.family) {
        case ModelFamily::linearized:
        case ModelFamily::weyl:
            return gammas(model.codimension_p + 1).gamma[model.codimension_p];
        case ModelFamily::ssh: {
            Matrix s(2, 2);
            s << 0, 1, 1, 0;
            return s;
        }
        case ModelFamily::chern: {
            Matrix s(2, 2);
            s << 1, 0, 0, -1;
            return s;
        }
    }
    throw std::logic_error("unknown model family");
}

// Offset the base-block mass so the decorated spectrum still touches at
// m = 0. At the defect momentum the dressed copy of basis state 0 sits at
// the lowest eigenvalue of the arrow matrix [[sigma*s, g_j], [g_j, Delta_j]];
// it crosses the opposite-mass level -sigma*s exactly when
//   h(t) = 2t - sum_j g_j^2 / (Delta_j + t) = 0,  t = sigma*s >= 0,
// which has a unique root since h is strictly increasing from h(0) <= 0.
// When basis state 0 is not a mass eigenstate no shift can retune the
// touching (the induced level repulsion acts orthogonally to the mass), so
// the mass origin is left alone.
double calibrate_mass_shift(const ModelSpec& model) {
    double coupling_sq = 0.0;
    for (const ExtraBand& band : model.extra_bands) coupling_sq += band.coupling * band.coupling;
    if (coupling_sq == 0.0) return 0.0;

    const Matrix M = base_dm(model);
    const double sigma = M(0, 0).real();
    if (std::abs(std::abs(sigma) - 1.0) > 1e-12) return 0.0;
    for (int r = 1; r < M.rows(); ++r)
        if (std::abs(M(r, 0)) > 1e-12) return 0.0;

    const auto h = [&model](double t) {
        double val = 2.0 * t;
        for (const ExtraBand& band : model.extra_bands)
            val -= band.coupling * band.coupling / (band.gap + t);
        return val;
    };
    double lo = 0.0;
    double hi = 1.0;
    while (h(hi) <= 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (h(mid) <= 0.0 ? lo : hi) = mid;
    }
    return sigma * 0.5 * (lo + hi);
}

}  // namespace

std::string ModelSpec::id() const {
    switch (family) {
        case ModelFamily::ssh: return "ssh";
        case ModelFamily::chern: return "chern";
        case ModelFamily::weyl: return "weyl";
        case ModelFamily::linearized: return "linearized:p=" + std::to_string(codimension_p);
    }
    return "unknown";
}

ModelSpec linearized_model(int p, const std::vector<double>& velocities, double cutoff,
                           double lambda_c) {
    if (p < 1 || p > 7) throw std::invalid_argument("linearized_model: p must be in [1, 7]");
    if (static_cast<int>(velocities.size()) != p)
        throw std::invalid_argument("linearized_model: need exactly p velocities");
    for (double v : velocities)
        if (!(v > 0)) throw std::invalid_argument("linearized_model: velocities must be positive");
    if (!(cutoff > 0)) throw std::invalid_argument("linearized_model: cutoff must be positive");

    ModelSpec spec;
    spec.kind = ModelKind::continuum;
    spec.family = ModelFamily::linearized;
    spec.codimension_p = p;
    spec.spatial_dim_d = p;
    spec.velocities = velocities;
    spec.cutoff_lambda = cutoff;
    spec.lambda_c = lambda_c;
    spec.base_dim = gammas(p + 1).dim();
    return spec;
}

ModelSpec ssh_model(double m) {
    ModelSpec spec;
    spec.kind = ModelKind::lattice;
    spec.family = ModelFamily::ssh;
    spec.codimension_p = 1;
    spec.spatial_dim_d = 1;
    spec.velocities = {1.0};
    spec.m_ref = m;
    spec.base_dim = 2;
    return spec;
}

ModelSpec chern_model(double m) {
    if (!(std::abs(m) < 2.0))
        throw std::invalid_argument("chern_model: |m| < 2 required to keep the other Dirac points gapped");
    ModelSpec spec;
    spec.kind = ModelKind::lattice;
    spec.family = ModelFamily::chern;
    spec.codimension_p = 2;
    spec.spatial_dim_d = 2;
    spec.velocities = {1.0, 1.0};
    spec.m_ref = m;
    spec.base_dim = 2;
    return spec;
}

ModelSpec weyl_model(double m) {
    ModelSpec spec;
    spec.kind = ModelKind::continuum;
    spec.family = ModelFamily::weyl;
    spec.codimension_p = 3;
    spec.spatial_dim_d = 3;
    spec.velocities = {1.0, 1.0, 1.0};
    spec.cutoff_lambda = 1.0;
    spec.m_ref = m;
    spec.base_dim = 4;
    return spec;
}

ModelSpec with_gapped_band(const ModelSpec& model, double gap, double coupling) {
    if (!(gap > 0)) throw std::invalid_argument("with_gapped_band: gap must be positive");
    if (!(std::abs(coupling) < gap / 2))
        throw std::invalid_argument("with_gapped_band: |coupling| < gap/2 required");
    ModelSpec out = model;
    out.extra_bands.push_back({gap, coupling});
    out.mass_shift = calibrate_mass_shift(out);
    return out;
}

Matrix evaluate(const ModelSpec& model, const Momentum& k, double m) {
    check_momentum(model, k);
    return assemble(model, base_hamiltonian(model, k, m + model.mass_shift));
}

Matrix evaluate_dm(const ModelSpec& model, const Momentum& k, double m) {
    check_momentum(model, k);
    (void)m;  // dH/dm is constant for every built-in family
    const int extras = static_cast<int>(model.extra_bands.size());
    Matrix dH = Matrix::Zero(model.base_dim + extras, model.base_dim + extras);
    dH.topLeftCorner(model.base_dim, model.base_dim) = base_dm(model);
    return dH;
}

}  // namespace bandqfi
