#ifndef OSCIDISSIP_LINDBLAD_HPP
#define OSCIDISSIP_LINDBLAD_HPP

#include "dynamics.hpp"
#include "linalg.hpp"

namespace oscidissip {

/// Collective emission rates Gamma_ij = Gamma_0 cos(k_s dx_ij) and Lamb
/// shifts Omega_ij = Gamma_0 sin(k_s dx_ij), with Gamma_0 = gamma/2 the
/// single-oscillator amplitude rate (gamma the intensity decay rate).
struct CollectiveRates {
    RealMatrix gamma;  // Gamma_ij
    RealMatrix lamb;   // Omega_ij
    double gamma0 = 0.0;
    double k_s = 0.0;
};

inline CollectiveRates collective_rates(const SystemConfig& config) {
    config.validate();
    const DerivedConstants d = derived_constants(config);
    const int nd = config.n_dipoles();
    CollectiveRates r;
    r.gamma0 = 0.5 * d.gamma;
    r.k_s = d.k_s;
    r.gamma.resize(nd, nd);
    r.lamb.resize(nd, nd);
    for (int i = 0; i < nd; ++i)
        for (int j = 0; j < nd; ++j) {
            const double dx = std::abs(config.dipoles.positions[i] - config.dipoles.positions[j]);
            r.gamma(i, j) = r.gamma0 * std::cos(r.k_s * dx);
            r.lamb(i, j) = r.gamma0 * std::sin(r.k_s * dx);
        }
    return r;
}

/// G_ij = Gamma_ij + i (1 - delta_ij) Omega_ij.
inline Matrix g_matrix(const CollectiveRates& r) {
    const auto nd = r.gamma.rows();
    Matrix g(nd, nd);
    for (Eigen::Index i = 0; i < nd; ++i)
        for (Eigen::Index j = 0; j < nd; ++j)
            g(i, j) = complexd(r.gamma(i, j), i == j ? 0.0 : r.lamb(i, j));
    return g;
}

/// <a_i^dag a_j>(t) = (conj(E) C0 E^T)_ij with E = exp(-G t).
inline Matrix me_normal_correlations(const Matrix& g, const Matrix& c0, double t) {
    const Matrix e = expm(-g * t);
    return e.conjugate() * c0 * e.transpose();
}

inline RealVector me_dipole_populations(const Matrix& g, const Matrix& c0, double t) {
    return me_normal_correlations(g, c0, t).diagonal().real();
}

/// N_exc(t) = sum_ij (e^{-G^dag t} e^{-G t})_ij <a_i^dag a_j>(0).
inline double me_total_excitation(const Matrix& g, const Matrix& c0, double t) {
    const Matrix e = expm(-g * t);
    const Matrix m = e.adjoint() * e;
    return (m.array() * c0.array()).sum().real();
}

struct MeIntensity {
    double total = 0.0;
    double coherent = 0.0;
    double incoherent = 0.0;
};

/// I(t) = 2 omega_s sum_ij (e^{-G^dag t} Gamma e^{-G t})_ij <a_i^dag a_j>(0),
/// split into the i = j (incoherent) and i != j (coherent) parts.
inline MeIntensity me_intensity(const Matrix& g, const RealMatrix& gamma, const Matrix& c0,
                                double omega_s, double t) {
    const Matrix e = expm(-g * t);
    const Matrix m = e.adjoint() * gamma * e;
    MeIntensity out;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double v = 2.0 * omega_s * (m(i, j) * c0(i, j)).real();
            if (i == j)
                out.incoherent += v;
            else
                out.coherent += v;
        }
    out.total = out.incoherent + out.coherent;
    return out;
}

/// Coherent product states stay coherent: alpha(t) = e^{-G t} alpha(0).
inline Vector me_coherent_amplitudes(const Matrix& g, const Vector& alpha0, double t) {
    return expm(-g * t) * alpha0;
}

/// The two nonzero decay eigenvalues of the ordered-array Gamma matrix,
/// Gamma_pm = Nd Gamma0/2 +- (Gamma0/2) sin(Nd k d)/sin(k d); the sine ratio
/// switches to its limit Nd cos(Nd k d)/cos(k d) near zeros of sin(k d).
inline std::pair<double, double> array_decay_eigenvalues(int n_d, double k, double d,
                                                         double gamma0) {
    const double s = std::sin(k * d);
    double ratio;
    if (std::abs(s) < 1e-9)
        ratio = n_d * std::cos(n_d * k * d) / std::cos(k * d);
    else
        ratio = std::sin(n_d * k * d) / s;
    const double base = 0.5 * n_d * gamma0;
    return {base + 0.5 * gamma0 * ratio, base - 0.5 * gamma0 * ratio};
}

struct Retardation {
    double t_ret = 0.0;
    double markov_ratio = 0.0;  // t_ret * gamma; << 1 for Markovian validity
};

/// Light-travel delay between two dipoles at separation dx.
inline Retardation retardation_time(const SystemConfig& config, double dx) {
    const DerivedConstants d = derived_constants(config);
    Retardation r;
    r.t_ret = std::abs(dx) / d.v_s;
    r.markov_ratio = r.t_ret * d.gamma;
    return r;
}

} // namespace oscidissip

#endif
