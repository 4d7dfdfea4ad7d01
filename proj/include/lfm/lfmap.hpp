#pragma once

#include <cmath>
#include <string>

#include "lfm/complex_linalg.hpp"

namespace lfm {

/// A linear fractional map z -> (A z + B) / (<z, C> + D) on C^N.
///
/// The inner product is linear in its first slot, <z, C> = sum z_k conj(C_k),
/// so the denominator is C^* z + D. Instances are always one-to-one: the
/// associated matrix [[A, B], [C^*, D]] is checked for invertibility on
/// construction. Coefficients are stored as given; no projective
/// normalization happens here.
template <typename Real>
class LFMap {
public:
    using Scalar = Complex<Real>;

    static LFMap make(CMatrix<Real> A, CVector<Real> B, CVector<Real> C, Scalar D);

    Eigen::Index dim() const { return A_.rows(); }
    const CMatrix<Real>& A() const { return A_; }
    const CVector<Real>& B() const { return B_; }
    const CVector<Real>& C() const { return C_; }
    const Scalar& D() const { return D_; }

    /// |D|^2 > |C|^2, i.e. the denominator has no zero on the closed ball.
    bool pole_free_on_ball() const { return std::norm(D_) > C_.squaredNorm(); }

    bool is_affine() const { return C_.isZero(Real(0)); }

private:
    LFMap() = default;

    CMatrix<Real> A_;
    CVector<Real> B_;
    CVector<Real> C_;
    Scalar D_{};
};

template <typename Real>
CMatrix<Real> assemble_associated_matrix(const CMatrix<Real>& A, const CVector<Real>& B, const CVector<Real>& C,
                                         Complex<Real> D)
{
    const auto n = A.rows();
    CMatrix<Real> m(n + 1, n + 1);
    m.topLeftCorner(n, n) = A;
    m.topRightCorner(n, 1) = B;
    m.bottomLeftCorner(1, n) = C.adjoint();
    m(n, n) = D;
    return m;
}

template <typename Real>
LFMap<Real> LFMap<Real>::make(CMatrix<Real> A, CVector<Real> B, CVector<Real> C, Scalar D)
{
    const auto n = A.rows();
    if (n < 1 || A.cols() != n || B.size() != n || C.size() != n)
        throw ShapeError("make_lfmap: A must be NxN and B, C of length N");
    if (!all_finite(A) || !all_finite(B) || !all_finite(C) || !std::isfinite(D.real()) || !std::isfinite(D.imag()))
        throw ShapeError("make_lfmap: non-finite coefficient");
    try {
        (void)inverse(assemble_associated_matrix<Real>(A, B, C, D));
    } catch (const SingularityError& e) {
        throw DegenerateMapError(std::string("associated matrix is singular: ") + e.what());
    }
    LFMap out;
    out.A_ = std::move(A);
    out.B_ = std::move(B);
    out.C_ = std::move(C);
    out.D_ = D;
    return out;
}

template <typename Real>
LFMap<Real> make_lfmap(CMatrix<Real> A, CVector<Real> B, CVector<Real> C, Complex<Real> D)
{
    return LFMap<Real>::make(std::move(A), std::move(B), std::move(C), D);
}

template <typename Real>
LFMap<Real> identity_map(Eigen::Index n)
{
    return make_lfmap<Real>(CMatrix<Real>::Identity(n, n), CVector<Real>::Zero(n), CVector<Real>::Zero(n),
                            Complex<Real>(1));
}

template <typename Real>
Complex<Real> denominator(const LFMap<Real>& phi, const CVector<Real>& z)
{
    return phi.C().dot(z) + phi.D();
}

template <typename Real>
CVector<Real> evaluate(const LFMap<Real>& phi, const CVector<Real>& z)
{
    if (z.size() != phi.dim())
        throw ShapeError("evaluate: point has wrong dimension");
    const Complex<Real> den = denominator(phi, z);
    const Real floor = Real(1e-14) * (std::abs(phi.D()) + phi.C().norm() * z.norm());
    if (!(std::abs(den) > floor))
        throw PoleError("evaluate: denominator " + std::to_string(double(std::abs(den))) + " at a pole");
    return (phi.A() * z + phi.B()) / den;
}

template <typename Real>
CMatrix<Real> associated_matrix(const LFMap<Real>& phi)
{
    return assemble_associated_matrix<Real>(phi.A(), phi.B(), phi.C(), phi.D());
}

/// Reads [[A, B], [C^*, D]] back into a map, scaling so that D = 1 unless
/// |D| <= 1e-12 max|m|.
template <typename Real>
LFMap<Real> from_associated_matrix(const CMatrix<Real>& m)
{
    if (m.rows() != m.cols() || m.rows() < 2)
        throw ShapeError("from_associated_matrix: need a square matrix of size >= 2");
    const auto n = m.rows() - 1;
    CMatrix<Real> scaled = m;
    const Complex<Real> d = m(n, n);
    if (std::abs(d) > Real(1e-12) * max_abs(m))
        scaled /= d;
    return make_lfmap<Real>(scaled.topLeftCorner(n, n), scaled.topRightCorner(n, 1),
                            scaled.bottomLeftCorner(1, n).adjoint(), scaled(n, n));
}

template <typename Real>
LFMap<Real> compose(const LFMap<Real>& phi, const LFMap<Real>& psi)
{
    if (phi.dim() != psi.dim())
        throw ShapeError("compose: dimension mismatch");
    return from_associated_matrix<Real>(associated_matrix(phi) * associated_matrix(psi));
}

template <typename Real>
LFMap<Real> invert(const LFMap<Real>& phi)
{
    try {
        return from_associated_matrix<Real>(inverse(associated_matrix(phi)));
    } catch (const SingularityError& e) {
        throw DegenerateMapError(std::string("invert: ") + e.what());
    }
}

template <typename Real>
struct DiskCriterion {
    bool selfmap;
    Real margin; ///< (|d|^2 - |c|^2) - (|b conj(d) - a conj(c)| + |ad - bc|)
};

/// Classical one-variable test for (a z + b) / (c z + d) mapping the disk into itself.
///
/// For an LFMap with N = 1 the denominator coefficient is c = conj(C).
template <typename Real>
DiskCriterion<Real> classical_disk_criterion(const LFMap<Real>& phi)
{
    if (phi.dim() != 1)
        throw ContractViolation("classical_disk_criterion: requires N = 1");
    const Complex<Real> a = phi.A()(0, 0);
    const Complex<Real> b = phi.B()(0);
    const Complex<Real> c = std::conj(phi.C()(0));
    const Complex<Real> d = phi.D();
    const Real rhs = std::norm(d) - std::norm(c);
    const Real lhs = std::abs(b * std::conj(d) - a * std::conj(c)) + std::abs(a * d - b * c);
    const Real margin = rhs - lhs;
    return {margin >= -Real(1e-12) * std::abs(rhs), margin};
}

} // namespace lfm
