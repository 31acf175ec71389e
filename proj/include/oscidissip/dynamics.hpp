#ifndef OSCIDISSIP_DYNAMICS_HPP
#define OSCIDISSIP_DYNAMICS_HPP

#include "bogoliubov.hpp"

#include <iostream>

namespace oscidissip {

enum class Frame { Bare, Polariton };

/// Second moments C_pq = <eta_p^dag eta_q> (bare frame) or the zeta analog
/// (polariton frame). C is Hermitian positive semidefinite; the commutator
/// shows up blockwise as <c c^dag> = <c^dag c> + 1.
struct CorrelationState {
    Frame frame = Frame::Bare;
    Matrix c;
    double time = 0.0;
};

struct InitialStateSpec {
    enum class Kind { FockProduct, CoherentProduct, TwoModeBell };
    Kind kind = Kind::FockProduct;
    std::vector<double> fock_n;
    std::vector<complexd> alpha;
    int bell_sign = +1;
    int bell_i = 0, bell_j = 1;

    static InitialStateSpec fock(std::vector<double> n) {
        InitialStateSpec s;
        s.kind = Kind::FockProduct;
        s.fock_n = std::move(n);
        return s;
    }
    static InitialStateSpec coherent(std::vector<complexd> a) {
        InitialStateSpec s;
        s.kind = Kind::CoherentProduct;
        s.alpha = std::move(a);
        return s;
    }
    static InitialStateSpec bell(int sign, int i = 0, int j = 1) {
        InitialStateSpec s;
        s.kind = Kind::TwoModeBell;
        s.bell_sign = sign >= 0 ? +1 : -1;
        s.bell_i = i;
        s.bell_j = j;
        return s;
    }

    void validate(int n_dipoles) const {
        switch (kind) {
            case Kind::FockProduct:
                if (static_cast<int>(fock_n.size()) != n_dipoles)
                    throw std::invalid_argument("initial state: fock occupation list length");
                for (double n : fock_n)
                    if (n < 0) throw std::invalid_argument("initial state: fock n_i must be >= 0");
                break;
            case Kind::CoherentProduct:
                if (static_cast<int>(alpha.size()) != n_dipoles)
                    throw std::invalid_argument("initial state: alpha list length");
                break;
            case Kind::TwoModeBell:
                if (n_dipoles < 2)
                    throw std::invalid_argument("initial state: Bell state needs two dipoles");
                if (bell_i == bell_j || bell_i < 0 || bell_j < 0 || bell_i >= n_dipoles ||
                    bell_j >= n_dipoles)
                    throw std::invalid_argument("initial state: Bell dipole indices");
                break;
        }
    }
};

/// <a_i^dag a_j> block of the initial state (used by the Lindblad solver too).
inline Matrix dipole_normal_correlations(const InitialStateSpec& spec, int n_dipoles) {
    spec.validate(n_dipoles);
    Matrix c = Matrix::Zero(n_dipoles, n_dipoles);
    switch (spec.kind) {
        case InitialStateSpec::Kind::FockProduct:
            for (int i = 0; i < n_dipoles; ++i) c(i, i) = spec.fock_n[i];
            break;
        case InitialStateSpec::Kind::CoherentProduct:
            for (int i = 0; i < n_dipoles; ++i)
                for (int j = 0; j < n_dipoles; ++j)
                    c(i, j) = std::conj(spec.alpha[i]) * spec.alpha[j];
            break;
        case InitialStateSpec::Kind::TwoModeBell:
            c(spec.bell_i, spec.bell_i) = 0.5;
            c(spec.bell_j, spec.bell_j) = 0.5;
            c(spec.bell_i, spec.bell_j) = 0.5 * spec.bell_sign;
            c(spec.bell_j, spec.bell_i) = 0.5 * spec.bell_sign;
            break;
    }
    return c;
}

/// Dipoles in the requested product/Bell state, reservoir in vacuum.
inline CorrelationState initial_correlations(const InitialStateSpec& spec,
                                             const SystemConfig& config) {
    const int nd = config.n_dipoles(), nt = config.n_total();
    spec.validate(nd);
    CorrelationState st;
    st.frame = Frame::Bare;
    st.time = 0.0;
    st.c = Matrix::Zero(2 * nt, 2 * nt);

    const Matrix cn = dipole_normal_correlations(spec, nd);
    st.c.topLeftCorner(nd, nd) = cn;
    // <c_p c_q^dag> = delta_pq + <c_q^dag c_p>
    st.c.block(nt, nt, nd, nd) = Matrix::Identity(nd, nd) + cn.transpose();
    for (int n = 0; n < config.n_modes(); ++n) st.c(nt + nd + n, nt + nd + n) = 1.0;

    if (spec.kind == InitialStateSpec::Kind::CoherentProduct) {
        for (int i = 0; i < nd; ++i)
            for (int j = 0; j < nd; ++j) {
                st.c(i, nt + j) = std::conj(spec.alpha[i] * spec.alpha[j]);
                st.c(nt + i, j) = spec.alpha[i] * spec.alpha[j];
            }
    }
    return st;
}

inline CorrelationState to_polariton_frame(const CorrelationState& corr,
                                           const BogoliubovDecomposition& d) {
    require_stable(d, "to_polariton_frame");
    if (corr.frame != Frame::Bare)
        throw std::invalid_argument("to_polariton_frame: expected a bare-frame state");
    if (corr.c.rows() != 2 * d.n_total)
        throw std::invalid_argument("to_polariton_frame: dimension mismatch");
    CorrelationState out;
    out.frame = Frame::Polariton;
    out.time = corr.time;
    out.c = d.t.conjugate() * corr.c * d.t.transpose();
    return out;
}

inline CorrelationState to_bare_frame(const CorrelationState& corr,
                                      const BogoliubovDecomposition& d) {
    require_stable(d, "to_bare_frame");
    if (corr.frame != Frame::Polariton)
        throw std::invalid_argument("to_bare_frame: expected a polariton-frame state");
    CorrelationState out;
    out.frame = Frame::Bare;
    out.time = corr.time;
    out.c = d.a.conjugate() * corr.c * d.a.transpose();
    return out;
}

namespace detail {

/// Heisenberg phases: zeta_k(t) picks up e^{-i lambda_k t}, the dagger
/// sector the conjugate.
inline Vector polariton_phases(const BogoliubovDecomposition& d, double t) {
    const int nt = d.n_total;
    Vector p(2 * nt);
    for (int k = 0; k < nt; ++k) {
        p[k] = std::exp(-iu * d.frequencies[k] * t);
        p[k + nt] = std::conj(p[k]);
    }
    return p;
}

inline void warn_clamped_population() {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true))
        std::cerr << "oscidissip: clamped sub-tolerance negative population to zero\n";
}

/// Negative dust within rounding of zero is clamped (with a one-time note);
/// anything larger is a hard error. The threshold follows the state scale so
/// the huge decoupled-regime populations do not trip it on roundoff.
inline double clamp_population(double v, const char* who, double scale = 1.0) {
    const double tol = std::max(1e-10, 1e-13 * std::abs(scale));
    if (v < -tol) throw std::runtime_error(std::string(who) + ": population below tolerance");
    if (v < 0.0) {
        warn_clamped_population();
        return 0.0;
    }
    return v;
}

inline double diagonal_scale(const Matrix& c) {
    double s = 1.0;
    for (Eigen::Index k = 0; k < c.rows(); ++k) s = std::max(s, std::abs(c(k, k).real()));
    return s;
}

} // namespace detail

/// Exact evolution: phase-rotate the polariton correlations, then congruence
/// back to the bare frame with A. O(N^2) phase work per sample after the
/// O(N^3) transforms.
inline CorrelationState evolve(const CorrelationState& corr0_zeta,
                               const BogoliubovDecomposition& d, double t) {
    require_stable(d, "evolve");
    if (corr0_zeta.frame != Frame::Polariton)
        throw std::invalid_argument("evolve: expected a polariton-frame state");
    const Vector p = detail::polariton_phases(d, t);
    CorrelationState out;
    out.frame = Frame::Bare;
    out.time = corr0_zeta.time + t;
    Matrix cz = p.conjugate().asDiagonal() * corr0_zeta.c * p.asDiagonal();
    out.c = d.a.conjugate() * cz * d.a.transpose();
    return out;
}

inline double dipole_population(const CorrelationState& corr, int i) {
    if (corr.frame != Frame::Bare)
        throw std::invalid_argument("dipole_population: expected a bare-frame state");
    if (i < 0 || 2 * i >= corr.c.rows())
        throw std::out_of_range("dipole_population: dipole index");
    return detail::clamp_population(corr.c(i, i).real(), "dipole_population",
                                    detail::diagonal_scale(corr.c));
}

inline double total_excitation(const CorrelationState& corr, int n_dipoles) {
    double s = 0.0;
    for (int i = 0; i < n_dipoles; ++i) s += dipole_population(corr, i);
    return s;
}

/// I(t) = -omega_s dN_exc/dt by central differences.
inline std::vector<double> radiated_intensity(const std::vector<double>& times,
                                              const std::vector<double>& nexc,
                                              double omega_s) {
    const std::size_t n = times.size();
    if (n < 3 || nexc.size() != n)
        throw std::invalid_argument("radiated_intensity: need >= 3 uniform samples");
    const double dt = times[1] - times[0];
    std::vector<double> out(n);
    out[0] = -omega_s * (nexc[1] - nexc[0]) / dt;
    out[n - 1] = -omega_s * (nexc[n - 1] - nexc[n - 2]) / dt;
    for (std::size_t k = 1; k + 1 < n; ++k)
        out[k] = -omega_s * (nexc[k + 1] - nexc[k - 1]) / (2.0 * dt);
    return out;
}

/// Normal-ordered electric field intensity inside the cavity,
/// I(x,t) = sum_nm E_n E_m f_n^*(x) f_m(x) <R_n^dag R_m>, with the overall
/// constant fixed by the epsilon_0 * area = 1 convention.
inline double field_intensity(const CorrelationState& corr, double x, const SystemConfig& config) {
    if (!config.reservoir.is_cavity())
        throw std::domain_error("field_intensity: cavity reservoirs only (use site_photon_number)");
    if (corr.frame != Frame::Bare)
        throw std::invalid_argument("field_intensity: expected a bare-frame state");
    const int nd = config.n_dipoles(), nm = config.n_modes(), nt = config.n_total();
    const auto spectrum = reservoir_spectrum(config.reservoir);
    const double l = config.reservoir.length();
    Vector v(nm);
    for (int n = 0; n < nm; ++n)
        v[n] = std::sqrt(spectrum[n] / (2.0 * l)) * mode_amplitude(config.reservoir, n + 1, x);
    const complexd val = v.dot(corr.c.block(nd, nd, nm, nm) * v);
    return detail::clamp_population(val.real(), "field_intensity",
                                    detail::diagonal_scale(corr.c));
}

/// On-site photon number <R_x^dag R_x> of the cavity array at site index s.
inline double site_photon_number(const CorrelationState& corr, int site,
                                 const SystemConfig& config) {
    if (config.reservoir.is_cavity())
        throw std::domain_error("site_photon_number: array reservoirs only (use field_intensity)");
    if (corr.frame != Frame::Bare)
        throw std::invalid_argument("site_photon_number: expected a bare-frame state");
    const int nd = config.n_dipoles(), nm = config.n_modes();
    if (site < 0 || site >= nm) throw std::out_of_range("site_photon_number: site index");
    const double x = site * config.reservoir.spacing;
    Vector u(nm);
    for (int n = 0; n < nm; ++n) {
        const double k = array_wave_number(config.reservoir, array_mode_number(config.reservoir, n));
        u[n] = std::exp(-iu * k * x) / std::sqrt(double(nm));
    }
    const complexd val = u.dot(corr.c.block(nd, nd, nm, nm) * u);
    return detail::clamp_population(val.real(), "site_photon_number",
                                    detail::diagonal_scale(corr.c));
}

/// Stationary polariton occupations <zeta_i^dag zeta_i>.
inline RealVector polariton_occupations(const CorrelationState& corr_zeta) {
    if (corr_zeta.frame != Frame::Polariton)
        throw std::invalid_argument("polariton_occupations: expected a polariton-frame state");
    const int nt = static_cast<int>(corr_zeta.c.rows()) / 2;
    return corr_zeta.c.diagonal().head(nt).real();
}

/// <H> from a bare-frame state; constant along exact trajectories. The sum
/// cancels across scales at strong coupling, so it is accumulated in
/// compensated arithmetic.
inline double mean_energy(const CorrelationState& corr, const QuadraticHamiltonian& qh) {
    if (corr.frame != Frame::Bare)
        throw std::invalid_argument("mean_energy: expected a bare-frame state");
    dd_accum acc;
    for (Eigen::Index q = 0; q < qh.h.cols(); ++q)
        for (Eigen::Index p = 0; p < qh.h.rows(); ++p) {
            acc.add_prod(qh.h(p, q).real(), corr.c(p, q).real());
            acc.add_prod(-qh.h(p, q).imag(), corr.c(p, q).imag());
        }
    return 0.5 * acc.value() - qh.trace_offset;
}

/// Field profile of the single-polariton Fock state zeta_j^dag |vac~>, in
/// excess of the dressed vacuum. Cavity: the squared electric-field profile
/// of normal mode j, |(A^T chi)_j|^2 with chi the coefficient vector of the
/// Hermitian E(x) over both operator sectors (the co/counter-rotating
/// interference is what carves the strong-coupling node at the dipole).
/// Array: the excess on-site photon number of the single-polariton state.
inline double polariton_fock_observable(const BogoliubovDecomposition& d, int j, double x,
                                        const SystemConfig& config) {
    require_stable(d, "polariton_fock_observable");
    const int nd = config.n_dipoles(), nm = config.n_modes(), nt = d.n_total;
    if (j < 0 || j >= nt) throw std::out_of_range("polariton_fock_observable: polariton index");
    const auto spectrum = reservoir_spectrum(config.reservoir);
    if (config.reservoir.is_cavity()) {
        const double l = config.reservoir.length();
        Vector chi = Vector::Zero(2 * nt);
        for (int n = 0; n < nm; ++n) {
            const complexd e_coeff = iu * std::sqrt(spectrum[n] / (2.0 * l)) *
                                     mode_amplitude(config.reservoir, n + 1, x);
            chi[nd + n] = e_coeff;
            chi[nt + nd + n] = std::conj(e_coeff);
        }
        const complexd b = (d.a.transpose().row(j) * chi).value();
        return std::norm(b);
    }
    const int site = static_cast<int>(std::llround(x / config.reservoir.spacing));
    if (site < 0 || site >= nm)
        throw std::out_of_range("polariton_fock_observable: site index");
    Vector phi = Vector::Zero(2 * nt);
    for (int n = 0; n < nm; ++n) {
        const double k =
            array_wave_number(config.reservoir, array_mode_number(config.reservoir, n));
        phi[nd + n] =
            std::exp(-iu * k * (site * config.reservoir.spacing)) / std::sqrt(double(nm));
    }
    const Vector psi = d.a.transpose() * phi;
    return std::norm(psi[j]) + std::norm(psi[j + nt]);
}

/// Precomputed exact propagator for time series: populations in O(N^2) per
/// sample, batched through GEMM.
class Propagator {
public:
    Propagator(const BogoliubovDecomposition& d, const CorrelationState& corr0_bare,
               const SystemConfig& config)
        : d_(&d), nd_(config.n_dipoles()), nm_(config.n_modes()), nt_(d.n_total) {
        require_stable(d, "Propagator");
        czeta0_ = to_polariton_frame(corr0_bare, d).c;
        a_dipole_ = d.a.topRows(nd_);
        scale_ = detail::diagonal_scale(czeta0_);
    }

    const Matrix& initial_polariton_correlations() const { return czeta0_; }

    /// n_i(t) for every dipole: n_i = w^dag C0 w with w = A_i-row * phases.
    RealVector populations(double t) const {
        const Vector p = detail::polariton_phases(*d_, t);
        Matrix w = (a_dipole_ * p.asDiagonal()).transpose();  // 2nt x nd
        Matrix m = czeta0_ * w;
        RealVector out(nd_);
        for (int i = 0; i < nd_; ++i)
            out[i] = detail::clamp_population(w.col(i).dot(m.col(i)).real(), "Propagator",
                                              scale_);
        return out;
    }

    /// Rows: time samples; columns: dipoles.
    RealMatrix population_series(const std::vector<double>& times) const {
        const std::size_t batch = 128;
        RealMatrix out(times.size(), nd_);
        for (std::size_t lo = 0; lo < times.size(); lo += batch) {
            const std::size_t hi = std::min(times.size(), lo + batch);
            Matrix w(2 * nt_, (hi - lo) * nd_);
            for (std::size_t s = lo; s < hi; ++s) {
                const Vector p = detail::polariton_phases(*d_, times[s]);
                w.middleCols((s - lo) * nd_, nd_) = (a_dipole_ * p.asDiagonal()).transpose();
            }
            Matrix m = czeta0_ * w;
            for (std::size_t s = lo; s < hi; ++s)
                for (int i = 0; i < nd_; ++i) {
                    const auto col = (s - lo) * nd_ + i;
                    out(s, i) = detail::clamp_population(w.col(col).dot(m.col(col)).real(),
                                                         "Propagator", scale_);
                }
        }
        return out;
    }

    CorrelationState state_at(double t) const {
        CorrelationState z{Frame::Polariton, czeta0_, 0.0};
        return evolve(z, *d_, t);
    }

    /// Reservoir block <R_n^dag R_m>(t) without forming the full state.
    Matrix reservoir_correlations(double t) const {
        const Vector p = detail::polariton_phases(*d_, t);
        Matrix ar = d_->a.middleRows(nd_, nm_) * p.asDiagonal();
        return ar.conjugate() * czeta0_ * ar.transpose();
    }

private:
    const BogoliubovDecomposition* d_;
    int nd_, nm_, nt_;
    Matrix czeta0_;
    Matrix a_dipole_;
    double scale_ = 1.0;
};

} // namespace oscidissip

#endif
