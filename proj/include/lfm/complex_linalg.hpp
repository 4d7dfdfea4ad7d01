#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lfm/errors.hpp"

namespace lfm {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using CMatrixXd = CMatrix<double>;
using CVectorXd = CVector<double>;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m)
{
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const auto v = m(i, j);
            if (!std::isfinite(std::real(v)) || !std::isfinite(std::imag(v)))
                return false;
        }
    return true;
}

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real max_abs(const Eigen::MatrixBase<Derived>& m)
{
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    if (m.size() == 0)
        return Real(0);
    return m.cwiseAbs().maxCoeff();
}

template <typename Real>
CMatrix<Real> matmul(const CMatrix<Real>& a, const CMatrix<Real>& b)
{
    if (a.cols() != b.rows())
        throw ShapeError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times "
                         + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    return a * b;
}

/// Gauss-Jordan inverse with partial pivoting.
///
/// A pivot smaller than 1e-12 times the largest row norm of `a` raises
/// SingularityError carrying that pivot's magnitude.
template <typename Real>
CMatrix<Real> inverse(const CMatrix<Real>& a)
{
    if (a.rows() != a.cols() || a.rows() == 0)
        throw ShapeError("inverse: matrix must be square and non-empty");

    const Eigen::Index n = a.rows();
    const Real scale = a.rowwise().norm().maxCoeff();
    const Real threshold = Real(1e-12) * scale;

    CMatrix<Real> work = a;
    CMatrix<Real> inv = CMatrix<Real>::Identity(n, n);

    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot_row = col;
        Real best = std::abs(work(col, col));
        for (Eigen::Index r = col + 1; r < n; ++r) {
            const Real v = std::abs(work(r, col));
            if (v > best) {
                best = v;
                pivot_row = r;
            }
        }
        if (!(best > threshold) || scale == Real(0))
            throw SingularityError("inverse: pivot " + std::to_string(double(best)) + " in column "
                                       + std::to_string(col) + " below singularity threshold",
                                   double(best));
        if (pivot_row != col) {
            work.row(col).swap(work.row(pivot_row));
            inv.row(col).swap(inv.row(pivot_row));
        }
        const Complex<Real> p = work(col, col);
        work.row(col) /= p;
        inv.row(col) /= p;
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == col)
                continue;
            const Complex<Real> f = work(r, col);
            if (f == Complex<Real>(0))
                continue;
            work.row(r) -= f * work.row(col);
            inv.row(r) -= f * inv.row(col);
        }
    }
    return inv;
}

template <typename Real>
bool is_hermitian(const CMatrix<Real>& h, Real tol = Real(1e-12))
{
    if (h.rows() != h.cols())
        return false;
    const Real scale = std::max(Real(1), max_abs(h));
    return max_abs(CMatrix<Real>(h - h.adjoint())) <= tol * scale;
}

template <typename Real>
bool is_unitary(const CMatrix<Real>& u, Real tol = Real(1e-10))
{
    if (u.rows() != u.cols())
        return false;
    const auto n = u.rows();
    return max_abs(CMatrix<Real>(u.adjoint() * u - CMatrix<Real>::Identity(n, n))) <= tol;
}

/// Real eigenvalues of a Hermitian matrix, ascending.
template <typename Real>
RVector<Real> hermitian_eigenvalues(const CMatrix<Real>& h)
{
    if (!is_hermitian(h))
        throw ContractViolation("hermitian_eigenvalues: input is not Hermitian within 1e-12");
    // Only the lower triangle is read; symmetrize so tiny asymmetries average out.
    const CMatrix<Real> sym = (h + h.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

template <typename Real>
struct Svd {
    CMatrix<Real> W;     ///< left singular vectors (unitary)
    RVector<Real> sigma; ///< singular values, descending
    CMatrix<Real> V;     ///< right singular vectors (unitary); a = W diag(sigma) V*
};

template <typename Real>
Svd<Real> svd(const CMatrix<Real>& a)
{
    if (a.rows() != a.cols() || a.rows() == 0)
        throw ShapeError("svd: matrix must be square and non-empty");
    Eigen::JacobiSVD<CMatrix<Real>> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

template <typename Real>
struct Polar {
    CMatrix<Real> P; ///< Hermitian positive semidefinite
    CMatrix<Real> U; ///< unitary
};

/// Left polar decomposition a = P * U.
template <typename Real>
Polar<Real> polar_decompose(const CMatrix<Real>& a)
{
    const auto s = svd(a);
    Polar<Real> out;
    out.P = s.W * s.sigma.template cast<Complex<Real>>().asDiagonal() * s.W.adjoint();
    out.P = (out.P + out.P.adjoint()).eval() / Real(2);
    out.U = s.W * s.V.adjoint();
    return out;
}

} // namespace lfm
