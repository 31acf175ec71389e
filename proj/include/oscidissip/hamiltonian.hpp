#ifndef OSCIDISSIP_HAMILTONIAN_HPP
#define OSCIDISSIP_HAMILTONIAN_HPP

#include "model.hpp"

#include <fstream>
#include <iomanip>

namespace oscidissip {

enum class Gauge { Coulomb, Dipole, QuantumOptical };

inline const char* gauge_name(Gauge g) {
    switch (g) {
        case Gauge::Coulomb: return "coulomb";
        case Gauge::Dipole: return "dipole";
        default: return "qoptical";
    }
}

inline Gauge gauge_from_name(const std::string& s) {
    if (s == "coulomb") return Gauge::Coulomb;
    if (s == "dipole") return Gauge::Dipole;
    if (s == "qoptical") return Gauge::QuantumOptical;
    throw std::invalid_argument("unknown gauge: " + s);
}

/// The 2*N_tot x 2*N_tot Hermitian matrix h of the quadratic form
/// H = (1/2) eta^dag h eta - trace_offset, with the operator vector ordered
/// as [a_1..a_Nd, R_1..R_N, a_1^dag..a_Nd^dag, R_1^dag..R_N^dag].
/// Block structure: h = [[alpha, beta], [conj(beta), conj(alpha)]] with
/// alpha Hermitian and beta symmetric.
struct QuadraticHamiltonian {
    Gauge gauge = Gauge::Coulomb;
    Matrix h;
    int n_dipoles = 0;
    int n_modes = 0;
    double trace_offset = 0.0;

    int n_total() const { return n_dipoles + n_modes; }

    double hermiticity_defect() const { return max_abs(h - h.adjoint()); }
    double particle_hole_defect() const {
        const int nt = n_total();
        double d = max_abs(h.bottomRightCorner(nt, nt) - h.topLeftCorner(nt, nt).conjugate());
        d = std::max(d, max_abs(h.bottomLeftCorner(nt, nt) - h.topRightCorner(nt, nt).conjugate()));
        d = std::max(d, max_abs(h.topRightCorner(nt, nt) -
                                h.topRightCorner(nt, nt).transpose().eval()));
        return d;
    }
};

namespace detail {

/// Accumulates a Hermitian quadratic form in canonical layout:
/// H = sum alpha_pq c_p^dag c_q + (1/2) sum (beta_pq c_p^dag c_q^dag + h.c.).
class QuadraticBuilder {
public:
    explicit QuadraticBuilder(int n_total)
        : nt_(n_total), alpha_(Matrix::Zero(nt_, nt_)), beta_(Matrix::Zero(nt_, nt_)) {}

    void add_diagonal(int p, double w) { alpha_(p, p) += w; }

    /// H += t c_p^dag c_q + conj(t) c_q^dag c_p
    void add_hopping(int p, int q, complexd t) {
        alpha_(p, q) += t;
        alpha_(q, p) += std::conj(t);
    }

    /// H += t c_p^dag c_q^dag + conj(t) c_q c_p
    void add_pairing(int p, int q, complexd t) {
        if (p == q) {
            beta_(p, p) += 2.0 * t;
        } else {
            beta_(p, q) += t;
            beta_(q, p) += t;
        }
    }

    Matrix& alpha() { return alpha_; }
    Matrix& beta() { return beta_; }

    QuadraticHamiltonian assemble(Gauge gauge, int n_dipoles, int n_modes) const {
        QuadraticHamiltonian qh;
        qh.gauge = gauge;
        qh.n_dipoles = n_dipoles;
        qh.n_modes = n_modes;
        qh.trace_offset = 0.5 * alpha_.trace().real();
        qh.h.resize(2 * nt_, 2 * nt_);
        qh.h.topLeftCorner(nt_, nt_) = alpha_;
        qh.h.topRightCorner(nt_, nt_) = beta_;
        qh.h.bottomLeftCorner(nt_, nt_) = beta_.conjugate();
        qh.h.bottomRightCorner(nt_, nt_) = alpha_.conjugate();
        return qh;
    }

private:
    int nt_;
    Matrix alpha_;
    Matrix beta_;
};

/// Mode amplitudes f_n(x_i), dipoles x modes.
inline Matrix mode_amplitude_table(const SystemConfig& config) {
    const auto& res = config.reservoir;
    const int nd = config.n_dipoles(), nm = config.n_modes();
    Matrix f(nd, nm);
    for (int i = 0; i < nd; ++i)
        for (int n = 0; n < nm; ++n) {
            const int mode_n = res.is_cavity() ? n + 1 : array_mode_number(res, n);
            f(i, n) = mode_amplitude(res, mode_n, config.dipoles.positions[i]);
        }
    return f;
}

inline void add_free_terms(QuadraticBuilder& b, const SystemConfig& config,
                           const std::vector<double>& spectrum) {
    const int nd = config.n_dipoles();
    for (int i = 0; i < nd; ++i) b.add_diagonal(i, config.dipoles.frequencies[i]);
    for (int n = 0; n < config.n_modes(); ++n) b.add_diagonal(nd + n, spectrum[n]);
}

} // namespace detail

/// Minimal-coupling (Coulomb gauge) Hamiltonian: P.A interaction with
/// g_in = g0 sqrt(omega_si/omega_n) f_n(x_i) plus the diamagnetic A^2 term
/// expanded densely over all mode pairs.
inline QuadraticHamiltonian build_coulomb(const SystemConfig& config) {
    config.validate();
    const int nd = config.n_dipoles(), nm = config.n_modes();
    const auto spectrum = reservoir_spectrum(config.reservoir);
    const Matrix f = detail::mode_amplitude_table(config);
    const double g0 = config.g0();

    detail::QuadraticBuilder b(nd + nm);
    detail::add_free_terms(b, config, spectrum);

    // -i (a_i^dag - a_i)(g_in R_n + g_in^* R_n^dag)
    for (int i = 0; i < nd; ++i) {
        const double ws = config.dipoles.frequencies[i];
        for (int n = 0; n < nm; ++n) {
            const complexd g = g0 * std::sqrt(ws / spectrum[n]) * f(i, n);
            b.add_hopping(i, nd + n, -iu * g);
            b.add_pairing(i, nd + n, -iu * std::conj(g));
        }
    }

    // g0^2 sum_i [sum_n (R_n f_n(x_i) + h.c.)/sqrt(omega_n)]^2, normal ordered:
    // 2 W_nm R_n^dag R_m + (V_nm R_n R_m + h.c.) with u_in = f_n(x_i)/sqrt(omega_n).
    Matrix u(nd, nm);
    for (int i = 0; i < nd; ++i)
        for (int n = 0; n < nm; ++n) u(i, n) = f(i, n) / std::sqrt(spectrum[n]);
    const Matrix w = g0 * g0 * (u.adjoint() * u);       // Hermitian
    const Matrix v = g0 * g0 * (u.transpose() * u);     // symmetric
    b.alpha().bottomRightCorner(nm, nm) += 2.0 * w;
    b.beta().bottomRightCorner(nm, nm) += 2.0 * v.conjugate();

    return b.assemble(Gauge::Coulomb, nd, nm);
}

/// Dipole-dipole self-interaction Omega_ij: the single-mode sum
/// sum_n gt_in^* gt_jn / omega_n plus the double-mode-sum correction, which
/// vanishes for real mode functions and for array dipoles on lattice sites.
inline Matrix dipole_self_interaction(const SystemConfig& config, bool with_correction = true) {
    const int nd = config.n_dipoles(), nm = config.n_modes();
    const auto spectrum = reservoir_spectrum(config.reservoir);
    const Matrix f = detail::mode_amplitude_table(config);
    const double g0 = config.g0();

    Matrix gt(nd, nm);
    for (int i = 0; i < nd; ++i)
        for (int n = 0; n < nm; ++n)
            gt(i, n) = g0 * std::sqrt(spectrum[n] / config.dipoles.frequencies[i]) * f(i, n);

    Matrix omega = Matrix::Zero(nd, nd);
    for (int i = 0; i < nd; ++i)
        for (int j = 0; j < nd; ++j) {
            complexd s = 0.0;
            for (int n = 0; n < nm; ++n) s += std::conj(gt(i, n)) * gt(j, n) / spectrum[n];
            omega(i, j) = s;
        }
    if (with_correction) {
        // q_il = sum_n Im(gt_in^* gt_ln)/omega_n
        RealMatrix q = RealMatrix::Zero(nd, nd);
        for (int i = 0; i < nd; ++i)
            for (int l = 0; l < nd; ++l) {
                double s = 0.0;
                for (int n = 0; n < nm; ++n)
                    s += std::imag(std::conj(gt(i, n)) * gt(l, n)) / spectrum[n];
                q(i, l) = s;
            }
        for (int i = 0; i < nd; ++i) {
            double corr = 0.0;
            for (int l = 0; l < nd; ++l)
                corr += q(i, l) * q(i, l) / config.dipoles.frequencies[l];
            for (int j = 0; j < nd; ++j) omega(i, j) += corr;
        }
    }
    return omega;
}

/// Multipolar (dipole gauge) Hamiltonian: (a^dag + a)(gt^* R^dag - gt R)
/// coupling with gt_in = g0 sqrt(omega_n/omega_si) f_n(x_i), plus the
/// self-interaction block Omega_ij.
inline QuadraticHamiltonian build_dipole_gauge(const SystemConfig& config,
                                               bool with_self_correction = true) {
    config.validate();
    const int nd = config.n_dipoles(), nm = config.n_modes();
    const auto spectrum = reservoir_spectrum(config.reservoir);
    const Matrix f = detail::mode_amplitude_table(config);
    const double g0 = config.g0();

    detail::QuadraticBuilder b(nd + nm);
    detail::add_free_terms(b, config, spectrum);

    // +i (a_i^dag + a_i)(gt_in^* R_n^dag - gt_in R_n)
    for (int i = 0; i < nd; ++i) {
        const double ws = config.dipoles.frequencies[i];
        for (int n = 0; n < nm; ++n) {
            const complexd gt = g0 * std::sqrt(spectrum[n] / ws) * f(i, n);
            b.add_hopping(i, nd + n, -iu * gt);
            b.add_pairing(i, nd + n, iu * std::conj(gt));
        }
    }

    // sum_ij Omega_ij^* (a_i^dag a_j^dag + a_i^dag a_j) + h.c.
    const Matrix omega = dipole_self_interaction(config, with_self_correction);
    b.alpha().topLeftCorner(nd, nd) += omega.conjugate() + omega.transpose();
    const Matrix s = omega.conjugate();
    b.beta().topLeftCorner(nd, nd) += s + s.transpose();

    return b.assemble(Gauge::Dipole, nd, nm);
}

/// Quantum optical dipole Hamiltonian: (a^dag + a)(gt R + gt^* R^dag) with no
/// self-interaction and no diamagnetic term. Stable only at weak coupling.
inline QuadraticHamiltonian build_quantum_optical(const SystemConfig& config) {
    config.validate();
    const int nd = config.n_dipoles(), nm = config.n_modes();
    const auto spectrum = reservoir_spectrum(config.reservoir);
    const Matrix f = detail::mode_amplitude_table(config);
    const double g0 = config.g0();

    detail::QuadraticBuilder b(nd + nm);
    detail::add_free_terms(b, config, spectrum);

    for (int i = 0; i < nd; ++i) {
        const double ws = config.dipoles.frequencies[i];
        for (int n = 0; n < nm; ++n) {
            const complexd gt = g0 * std::sqrt(spectrum[n] / ws) * f(i, n);
            b.add_hopping(i, nd + n, gt);
            b.add_pairing(i, nd + n, std::conj(gt));
        }
    }
    return b.assemble(Gauge::QuantumOptical, nd, nm);
}

inline QuadraticHamiltonian build_hamiltonian(const SystemConfig& config, Gauge gauge) {
    switch (gauge) {
        case Gauge::Coulomb: return build_coulomb(config);
        case Gauge::Dipole: return build_dipole_gauge(config);
        default: return build_quantum_optical(config);
    }
}

/// Text dump of h with a self-describing header.
inline void write_matrix_dump(const std::string& path, const QuadraticHamiltonian& qh) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    const auto n = qh.h.rows();
    out << "# oscidissip quadratic hamiltonian dump v1\n";
    out << "# gauge " << gauge_name(qh.gauge) << "\n";
    out << "# n_dipoles " << qh.n_dipoles << " n_modes " << qh.n_modes << "\n";
    out << "# ordering annihilators-then-creators, dipoles-then-modes\n";
    out << "# rows " << n << " cols " << n << " entries re im\n";
    out << std::setprecision(17);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            out << qh.h(r, c).real() << ' ' << qh.h(r, c).imag();
            out << (c + 1 == n ? '\n' : ' ');
        }
    }
}

} // namespace oscidissip

#endif
