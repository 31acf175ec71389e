#ifndef OSCIDISSIP_LINALG_HPP
#define OSCIDISSIP_LINALG_HPP

#include "core.hpp"

#ifdef OSCIDISSIP_USE_LAPACKE
#include <lapacke.h>
#endif

namespace oscidissip {

struct HermitianEig {
    RealVector values;  // ascending
    Matrix vectors;     // columns
};

/// Dense Hermitian eigendecomposition (ascending eigenvalues).
inline HermitianEig hermitian_eig(const Matrix& h) {
    const auto n = h.rows();
    if (h.cols() != n) throw std::invalid_argument("hermitian_eig: matrix not square");
#ifdef OSCIDISSIP_USE_LAPACKE
    HermitianEig out;
    out.vectors = h;
    out.values.resize(n);
    int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                              reinterpret_cast<lapack_complex_double*>(out.vectors.data()),
                              static_cast<lapack_int>(n), out.values.data());
    if (info != 0) throw std::runtime_error("zheevd failed, info=" + std::to_string(info));
    return out;
#else
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("hermitian eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
#endif
}

/// Eigenvalues of a general complex matrix.
inline Vector general_eigenvalues(const Matrix& m) {
    const auto n = m.rows();
    if (m.cols() != n) throw std::invalid_argument("general_eigenvalues: matrix not square");
#ifdef OSCIDISSIP_USE_LAPACKE
    Matrix a = m;
    Vector w(n);
    int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', static_cast<lapack_int>(n),
                             reinterpret_cast<lapack_complex_double*>(a.data()),
                             static_cast<lapack_int>(n),
                             reinterpret_cast<lapack_complex_double*>(w.data()),
                             nullptr, 1, nullptr, 1);
    if (info != 0) throw std::runtime_error("zgeev failed, info=" + std::to_string(info));
    return w;
#else
    Eigen::ComplexEigenSolver<Matrix> es(m, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("complex eigensolver failed");
    return es.eigenvalues();
#endif
}

/// exp(M) by Pade-13 scaling and squaring (Higham 2005). Intended for the
/// small dissipator matrices; accuracy near machine precision.
inline Matrix expm(const Matrix& m) {
    const auto n = m.rows();
    if (m.cols() != n) throw std::invalid_argument("expm: matrix not square");
    static const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                               1187353796428800.,  129060195264000.,   10559470521600.,
                               670442572800.,      33522128640.,       1323241920.,
                               40840800.,          960960.,            16380.,
                               182.,               1.};
    const double theta13 = 5.371920351148152;
    double nrm = m.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    Matrix a = m;
    if (nrm > theta13) {
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / theta13))));
        a /= std::pow(2.0, squarings);
    }
    const Matrix ident = Matrix::Identity(n, n);
    Matrix a2 = a * a;
    Matrix a4 = a2 * a2;
    Matrix a6 = a2 * a4;
    Matrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                    b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
    Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
               b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
    Matrix r = (v - u).partialPivLu().solve(v + u);
    for (int s = 0; s < squarings; ++s) r = r * r;
    return r;
}

} // namespace oscidissip

#endif
