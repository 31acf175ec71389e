#ifndef OSCIDISSIP_BOGOLIUBOV_HPP
#define OSCIDISSIP_BOGOLIUBOV_HPP

#include "hamiltonian.hpp"
#include "linalg.hpp"

#include <algorithm>

namespace oscidissip {

struct BogoliubovResiduals {
    double symplectic_defect = 0.0;   // ||T Sigma T^dag - Sigma||_inf
    double reconstruction_rel = 0.0;  // ||T^dag Lambda T - H||_inf / ||H||_inf
    double min_eig_h = 0.0;
};

/// Normal modes of a stable quadratic Hamiltonian: zeta = T eta with
/// T Sigma T^dag = Sigma, Sigma = diag(+I, -I), H = T^dag (D (+) D) T.
/// Frequencies ascend; row i + N_tot is the daggered partner of row i.
struct BogoliubovDecomposition {
    RealVector frequencies;  // lambda_1..lambda_Ntot, ascending
    Matrix t;
    Matrix a;  // T^{-1}
    bool stable = false;
    BogoliubovResiduals residuals;
    int n_total = 0;
};

struct DynamicalSpectrum {
    Vector values;  // eigenvalues of Sigma H, sorted by (Re, Im)
    double max_imag = 0.0;
};

namespace detail {

inline void apply_sigma_rows(Matrix& m, int nt) { m.bottomRows(nt) *= -1.0; }

/// Swap-conjugate partner: (X conj(v))_k = conj(v_{k+nt mod 2nt}).
inline Vector swap_conj(const Vector& v, int nt) {
    Vector w(2 * nt);
    w.head(nt) = v.tail(nt).conjugate();
    w.tail(nt) = v.head(nt).conjugate();
    return w;
}

/// sum_k sigma_k T(i,k) conj(T(j,k)) in compensated arithmetic.
inline complexd sigma_inner_dd(const Matrix& t, int i, int j, int nt) {
    dd_accum re, im;
    for (int k = 0; k < 2 * nt; ++k) {
        const double s = k < nt ? 1.0 : -1.0;
        const double ar = t(i, k).real(), ai = t(i, k).imag();
        const double br = t(j, k).real(), bi = t(j, k).imag();
        re.add_prod(s * ar, br);
        re.add_prod(s * ai, bi);
        im.add_prod(s * ai, br);
        im.add_prod(-s * ar, bi);
    }
    return {re.value(), im.value()};
}

/// E = T Sigma T^dag - Sigma. Entries whose plain-double rounding bound
/// exceeds `entry_tol` are recomputed with compensated dot products.
inline Matrix symplectic_defect_matrix(const Matrix& t, int nt, double entry_tol) {
    Matrix ts = t;
    ts.rightCols(nt) *= -1.0;
    Matrix e = ts * t.adjoint();
    for (int k = 0; k < nt; ++k) e(k, k) -= 1.0;
    for (int k = nt; k < 2 * nt; ++k) e(k, k) += 1.0;

    RealVector rn = t.rowwise().norm();
    const double eps = std::numeric_limits<double>::epsilon();
    const double cfac = 8.0 * std::sqrt(double(2 * nt)) * eps;
    for (int i = 0; i < 2 * nt; ++i)
        for (int j = 0; j <= i; ++j)
            if (cfac * rn[i] * rn[j] > entry_tol) {
                complexd v = sigma_inner_dd(t, i, j, nt);
                if (i == j) v -= (i < nt ? 1.0 : -1.0);
                e(i, j) = v;
                e(j, i) = std::conj(v);
            }
    return e;
}

} // namespace detail

/// Bogoliubov diagonalization of a positive-definite quadratic form:
///   (i)  Hermitian eigendecomposition of H; indefinite H is reported via
///        stable=false (dynamical_spectrum covers that regime).
///   (ii) Hbar = H^{1/2} Sigma H^{1/2}; its spectrum is {+lambda} u {-lambda}.
///   (iii) T = (D^{-1/2} (+) D^{-1/2}) U H^{1/2} from the eigenbasis U of Hbar,
///        with the dagger sector constructed as the swap-conjugate of the
///        positive sector so that zeta_{i+Ntot} = zeta_i^dag exactly.
/// A final Newton polish (T <- (I - E Sigma/2) T on the measured defect
/// E = T Sigma T^dag - Sigma) restores paraunitarity to near the double
/// rounding floor; without it the soft-mode rows lose several digits when
/// the spectrum spans many decades.
inline BogoliubovDecomposition diagonalize(const QuadraticHamiltonian& qh) {
    const int nt = qh.n_total();
    const int n2 = 2 * nt;
    if (qh.h.rows() != n2) throw std::invalid_argument("diagonalize: dimension mismatch");
    const double hnorm = max_abs(qh.h);
    if (qh.hermiticity_defect() > 1e-12 * hnorm)
        throw std::invalid_argument("diagonalize: matrix is not Hermitian");

    BogoliubovDecomposition out;
    out.n_total = nt;

    const Matrix h = 0.5 * (qh.h + qh.h.adjoint());
    HermitianEig eh = hermitian_eig(h);
    out.residuals.min_eig_h = eh.values.minCoeff();
    const double eps_pd = 1e-13 * eh.values.cwiseAbs().maxCoeff();
    if (out.residuals.min_eig_h <= -eps_pd) {
        out.stable = false;
        return out;
    }

    // H^{1/2}; eigenvalue dust below the definiteness threshold clamps to 0
    Matrix hhalf = eh.vectors *
                   eh.values.cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                   eh.vectors.adjoint();
    hhalf = 0.5 * (hhalf + hhalf.adjoint()).eval();

    Matrix hbar;
    {
        Matrix hs = hhalf;
        hs.rightCols(nt) *= -1.0;
        hbar = hs * hhalf;
        hbar = 0.5 * (hbar + hbar.adjoint()).eval();
    }
    HermitianEig eb = hermitian_eig(hbar);

    // positive half of the +-paired spectrum, ascending
    out.frequencies.resize(nt);
    Matrix vpos(n2, nt);
    for (int i = 0; i < nt; ++i) {
        out.frequencies[i] = eb.values[nt + i];
        vpos.col(i) = eb.vectors.col(nt + i);
    }
    if (out.frequencies[0] <= 0.0) {
        out.stable = false;
        return out;
    }

    // deterministic basis inside degenerate clusters
    const double degtol = 1e-12 * std::max(1.0, out.frequencies[nt - 1]);
    for (int lo = 0; lo < nt;) {
        int hi = lo + 1;
        while (hi < nt && out.frequencies[hi] - out.frequencies[hi - 1] <= degtol) ++hi;
        for (int c = lo + 1; c < hi; ++c) {
            Vector v = vpos.col(c);
            for (int p = lo; p < c; ++p) v -= vpos.col(p).dot(v) * vpos.col(p);
            vpos.col(c) = v / v.norm();
        }
        lo = hi;
    }

    // soft pairs: +lambda and -lambda crowd together as lambda -> 0, so
    // re-orthogonalize against the swap-conjugate partner
    const double soft_cut = 1e-3 * out.frequencies[nt - 1];
    for (int i = 0; i < nt && out.frequencies[i] < soft_cut; ++i) {
        for (int pass = 0; pass < 2; ++pass) {
            Vector partner = detail::swap_conj(vpos.col(i), nt);
            complexd c = partner.dot(vpos.col(i));
            Vector v = vpos.col(i) - c * partner;
            vpos.col(i) = v / v.norm();
        }
    }

    // T rows: lambda^{-1/2} v^dag H^{1/2}; dagger sector by swap-conjugation
    out.t.resize(n2, n2);
    out.t.topRows(nt) = out.frequencies.cwiseSqrt().cwiseInverse().asDiagonal() *
                        (vpos.adjoint() * hhalf);
    out.t.bottomLeftCorner(nt, nt) = out.t.topRightCorner(nt, nt).conjugate();
    out.t.bottomRightCorner(nt, nt) = out.t.topLeftCorner(nt, nt).conjugate();

    // Newton polish of the paraunitarity defect
    const double defect_target = 3e-11;
    Matrix e = detail::symplectic_defect_matrix(out.t, nt, defect_target / 4);
    for (int iter = 0; iter < 4 && max_abs(e) > defect_target; ++iter) {
        e = 0.5 * (e + e.adjoint()).eval();
        Matrix es = e;  // structure projection: X conj(E) X = -E
        for (int i = 0; i < n2; ++i)
            for (int j = 0; j < n2; ++j)
                es(i, j) = 0.5 * (e(i, j) - std::conj(e((i + nt) % n2, (j + nt) % n2)));
        Matrix st = out.t;
        detail::apply_sigma_rows(st, nt);
        out.t -= 0.5 * es * st;
        e = detail::symplectic_defect_matrix(out.t, nt, defect_target / 4);
    }
    out.residuals.symplectic_defect = max_abs(e);

    // canonical row phases: first significant entry of each row real positive
    for (int i = 0; i < nt; ++i) {
        const double rmax = out.t.row(i).cwiseAbs().maxCoeff();
        for (int k = 0; k < n2; ++k) {
            const complexd z = out.t(i, k);
            if (std::abs(z) > 1e-12 * rmax) {
                const complexd ph = std::conj(z) / std::abs(z);
                out.t.row(i) *= ph;
                out.t.row(i + nt) *= std::conj(ph);
                break;
            }
        }
    }

    // symplectic inverse A = Sigma T^dag Sigma
    out.a = out.t.adjoint();
    out.a.topRightCorner(nt, nt) *= -1.0;
    out.a.bottomLeftCorner(nt, nt) *= -1.0;

    {
        Matrix lt = out.t;
        lt.topRows(nt) = out.frequencies.asDiagonal() * lt.topRows(nt);
        lt.bottomRows(nt) = out.frequencies.asDiagonal() * lt.bottomRows(nt);
        out.residuals.reconstruction_rel = max_abs(out.t.adjoint() * lt - h) / hnorm;
    }
    out.stable = true;
    return out;
}

/// Eigenvalues of Sigma H: the dynamical normal-mode frequencies, defined for
/// stable and unstable quadratic forms alike and paired as (mu, -conj(mu)).
inline DynamicalSpectrum dynamical_spectrum(const QuadraticHamiltonian& qh) {
    const int nt = qh.n_total();
    const double hnorm = max_abs(qh.h);
    if (hnorm > 0 && qh.hermiticity_defect() > 1e-12 * hnorm)
        throw std::invalid_argument("dynamical_spectrum: matrix is not Hermitian");
    Matrix m = qh.h;
    detail::apply_sigma_rows(m, nt);
    DynamicalSpectrum out;
    out.values = general_eigenvalues(m);
    std::sort(out.values.begin(), out.values.end(), [](complexd a, complexd b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    out.max_imag = 0.0;
    for (Eigen::Index k = 0; k < out.values.size(); ++k)
        out.max_imag = std::max(out.max_imag, std::abs(out.values[k].imag()));
    return out;
}

inline void require_stable(const BogoliubovDecomposition& d, const char* who) {
    if (!d.stable) throw std::domain_error(std::string(who) + ": decomposition is not stable");
}

/// Normalized matter weight of polariton i over the dipole columns of T.
inline double matter_fraction(const BogoliubovDecomposition& d, int i, int n_dipoles) {
    require_stable(d, "matter_fraction");
    const int nt = d.n_total;
    if (i < 0 || i >= nt) throw std::out_of_range("matter_fraction: polariton index");
    double num = 0.0;
    for (int j = 0; j < n_dipoles; ++j)
        num += std::norm(d.t(i, j)) + std::norm(d.t(i, j + nt));
    const double den = d.t.row(i).squaredNorm();
    return num / den;
}

/// Normalized inverse participation ratio of dipole i over polaritons,
/// built from the matter expansion a_i = sum_n A_in zeta_n + A_i(n+Nt) zeta_n^dag.
inline double participation_ratio(const BogoliubovDecomposition& d, int i) {
    require_stable(d, "participation_ratio");
    const int nt = d.n_total;
    if (i < 0 || i >= nt) throw std::out_of_range("participation_ratio: dipole index");
    double p4 = 0.0, p2 = 0.0;
    for (int n = 0; n < nt; ++n) {
        const double w1 = std::norm(d.a(i, n)), w2 = std::norm(d.a(i, n + nt));
        p4 += w1 * w1 + w2 * w2;
        p2 += w1 + w2;
    }
    return p4 / (p2 * p2);
}

} // namespace oscidissip

#endif
