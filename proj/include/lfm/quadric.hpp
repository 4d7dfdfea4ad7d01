#pragma once

#include <cmath>
#include <vector>

#include "lfm/decomposition.hpp"

namespace lfm {

/// Real quadric { x in R^{2N} : x^T S x + b^T x + c = 0 } with
/// z_k = x_{2k} + i x_{2k+1} (0-based). Overall real scale is irrelevant.
template <typename Real>
class Quadric {
public:
    static Quadric make(RMatrix<Real> S, RVector<Real> b, Real c)
    {
        const auto m = S.rows();
        if (m == 0 || m % 2 != 0 || S.cols() != m || b.size() != m)
            throw ShapeError("Quadric: S must be 2N x 2N and b of length 2N");
        if (!S.allFinite() || !b.allFinite() || !std::isfinite(c))
            throw ShapeError("Quadric: non-finite coefficient");
        RMatrix<Real> sym = (S + S.transpose()) / Real(2);
        if (sym.isZero(Real(0)) && b.isZero(Real(0)) && c == Real(0))
            throw ContractViolation("Quadric: all coefficients are zero");
        return Quadric(std::move(sym), std::move(b), c);
    }

    Eigen::Index dim() const { return S_.rows() / 2; }
    const RMatrix<Real>& S() const { return S_; }
    const RVector<Real>& b() const { return b_; }
    Real c() const { return c_; }

    Real largest_coefficient() const
    {
        return std::max({S_.cwiseAbs().maxCoeff(), b_.cwiseAbs().maxCoeff(), std::abs(c_)});
    }

private:
    Quadric(RMatrix<Real> S, RVector<Real> b, Real c) : S_(std::move(S)), b_(std::move(b)), c_(c) {}

    RMatrix<Real> S_;
    RVector<Real> b_;
    Real c_;
};

template <typename Real>
RVector<Real> to_real(const CVector<Real>& z)
{
    RVector<Real> x(2 * z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        x(2 * k) = z(k).real();
        x(2 * k + 1) = z(k).imag();
    }
    return x;
}

/// Real 2N x 2N matrix of the complex-linear map z -> A z.
template <typename Real>
RMatrix<Real> to_real(const CMatrix<Real>& A)
{
    RMatrix<Real> L(2 * A.rows(), 2 * A.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            const Real u = A(i, j).real(), v = A(i, j).imag();
            L(2 * i, 2 * j) = u;
            L(2 * i, 2 * j + 1) = -v;
            L(2 * i + 1, 2 * j) = v;
            L(2 * i + 1, 2 * j + 1) = u;
        }
    return L;
}

/// sum alpha_i |z_i|^2 + sum beta_i Re z_i + sum gamma_i Im z_i + delta = 0.
template <typename Real>
Quadric<Real> from_standard_form(const std::vector<Real>& alphas, const std::vector<Real>& betas,
                                 const std::vector<Real>& gammas, Real delta)
{
    const auto n = static_cast<Eigen::Index>(alphas.size());
    if (n == 0 || betas.size() != alphas.size() || gammas.size() != alphas.size())
        throw ShapeError("from_standard_form: alphas, betas, gammas must have the same nonzero length");
    RMatrix<Real> S = RMatrix<Real>::Zero(2 * n, 2 * n);
    RVector<Real> b(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        S(2 * i, 2 * i) = alphas[i];
        S(2 * i + 1, 2 * i + 1) = alphas[i];
        b(2 * i) = betas[i];
        b(2 * i + 1) = gammas[i];
    }
    return Quadric<Real>::make(std::move(S), std::move(b), delta);
}

template <typename Real>
Real evaluate(const Quadric<Real>& q, const CVector<Real>& z)
{
    if (z.size() != q.dim())
        throw ShapeError("quadric evaluate: dimension mismatch");
    const RVector<Real> x = to_real(z);
    return x.dot(q.S() * x) + q.b().dot(x) + q.c();
}

template <typename Real>
Real residual(const Quadric<Real>& q, const std::vector<CVector<Real>>& points)
{
    Real worst = 0;
    for (const auto& z : points)
        worst = std::max(worst, std::abs(evaluate(q, z)));
    return worst;
}

/// q scaled so its largest-magnitude coefficient is +1.
template <typename Real>
Quadric<Real> normalized(const Quadric<Real>& q)
{
    Real big = 0, signed_big = 0;
    auto visit = [&](Real v) {
        if (std::abs(v) > big) {
            big = std::abs(v);
            signed_big = v;
        }
    };
    for (Eigen::Index j = 0; j < q.S().cols(); ++j)
        for (Eigen::Index i = 0; i <= j; ++i)
            visit(q.S()(i, j));
    for (Eigen::Index i = 0; i < q.b().size(); ++i)
        visit(q.b()(i));
    visit(q.c());
    return Quadric<Real>::make(q.S() / signed_big, q.b() / signed_big, q.c() / signed_big);
}

/// Max coefficient difference after normalizing both quadrics.
template <typename Real>
Real projective_distance(const Quadric<Real>& p, const Quadric<Real>& q)
{
    if (p.dim() != q.dim())
        throw ShapeError("projective_distance: dimension mismatch");
    const auto a = normalized(p), b = normalized(q);
    return std::max({(a.S() - b.S()).cwiseAbs().maxCoeff(), (a.b() - b.b()).cwiseAbs().maxCoeff(),
                     std::abs(a.c() - b.c())});
}

/// Exact substitution q'(z) = q(m(z)) for an affine map m (C = 0).
template <typename Real>
Quadric<Real> pullback_affine(const Quadric<Real>& q, const LFMap<Real>& m)
{
    if (!m.is_affine())
        throw ContractViolation("pullback_affine: map is not affine (C != 0)");
    if (m.dim() != q.dim())
        throw ShapeError("pullback_affine: dimension mismatch");
    const RMatrix<Real> L = to_real<Real>(CMatrix<Real>(m.A() / m.D()));
    const RVector<Real> t = to_real<Real>(CVector<Real>(m.B() / m.D()));
    const RVector<Real> St = q.S() * t;
    return Quadric<Real>::make(L.transpose() * q.S() * L, L.transpose() * (Real(2) * St + q.b()),
                               t.dot(St) + q.b().dot(t) + q.c());
}

template <typename Real>
Quadric<Real> pullback_affine(const Quadric<Real>& q, const FactorMap<Real>& f)
{
    if (f.kind != FactorKind::MultiLinear)
        throw ContractViolation("pullback_affine: factor is a reflection");
    return pullback_affine(q, f.map);
}

/// True when S is the real form of a Hermitian matrix, i.e. x^T S x = z^* H z.
template <typename Real>
bool has_hermitian_structure(const Quadric<Real>& q, Real tol = Real(1e-12))
{
    const Real scale = std::max(Real(1), q.S().cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < q.dim(); ++i)
        for (Eigen::Index j = 0; j < q.dim(); ++j) {
            const auto blk = q.S().template block<2, 2>(2 * i, 2 * j);
            if (std::abs(blk(0, 0) - blk(1, 1)) > tol * scale || std::abs(blk(0, 1) + blk(1, 0)) > tol * scale)
                return false;
        }
    return true;
}

/// Pullback through the inversion-type reflection
///   f(z) = (z_1 / z_N, ..., z_{N-1} / z_N, 1 / z_N),
/// cleared of denominators: q'(z) = |z_N|^2 q(f(z)).
///
/// Writing q(y) = y^* H y + Re(g^* y) + c, the cleared form is
///   w^* H w + Re(g^* w conj(z_N)) + c |z_N|^2,   w = (z_1, ..., z_{N-1}, 1),
/// which is again a quadric in z with cross terms Re(z_i conj(z_N)) and
/// Im(z_i conj(z_N)). Requires S to carry a Hermitian H; generalized
/// ellipsoids and all their pullbacks do.
template <typename Real>
Quadric<Real> pullback_reflection(const Quadric<Real>& q, Eigen::Index n)
{
    if (q.dim() != n)
        throw ShapeError("pullback_reflection: dimension mismatch");
    if (!has_hermitian_structure(q))
        throw ContractViolation("pullback_reflection: quadric is not of Hermitian type");
    const Eigen::Index last = n - 1;

    // x^T S x = z^* H z with H_ij = S(2i,2j) + i S(2i+1,2j); b^T x = Re(g^* z)
    CMatrix<Real> H(n, n);
    CVector<Real> g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j)
            H(i, j) = Complex<Real>(q.S()(2 * i, 2 * j), q.S()(2 * i + 1, 2 * j));
        g(i) = Complex<Real>(q.b()(2 * i), q.b()(2 * i + 1));
    }

    CMatrix<Real> Hp = CMatrix<Real>::Zero(n, n);
    CVector<Real> gp = CVector<Real>::Zero(n);
    Hp.topLeftCorner(last, last) = H.topLeftCorner(last, last);
    // w^* H w: cross terms with the constant slot become linear in z
    gp.head(last) = Real(2) * H.col(last).head(last);
    const Real cp = H(last, last).real();
    // Re(conj(g_i) z_i conj(z_N)) for i < N
    for (Eigen::Index i = 0; i < last; ++i) {
        Hp(last, i) += std::conj(g(i)) / Real(2);
        Hp(i, last) += g(i) / Real(2);
    }
    // Re(conj(g_N) conj(z_N)) = Re(g_N z_N)
    gp(last) += std::conj(g(last));
    Hp(last, last) += Complex<Real>(q.c());

    RMatrix<Real> S(2 * n, 2 * n);
    RVector<Real> b(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Real u = Hp(i, j).real(), v = Hp(i, j).imag();
            S(2 * i, 2 * j) = u;
            S(2 * i, 2 * j + 1) = -v;
            S(2 * i + 1, 2 * j) = v;
            S(2 * i + 1, 2 * j + 1) = u;
        }
        b(2 * i) = gp(i).real();
        b(2 * i + 1) = gp(i).imag();
    }
    return Quadric<Real>::make(std::move(S), std::move(b), cp);
}

template <typename Real>
LFMap<Real> coordinate_swap(Eigen::Index n, Eigen::Index i, Eigen::Index j)
{
    CMatrix<Real> P = CMatrix<Real>::Identity(n, n);
    P.row(i).swap(P.row(j));
    return make_lfmap<Real>(P, CVector<Real>::Zero(n), CVector<Real>::Zero(n), Complex<Real>(1));
}

/// Pullback through any decomposition factor. A reflection between two
/// coordinates is affine; one involving the homogeneous slot is conjugated
/// to the canonical N-swap by a coordinate swap.
template <typename Real>
Quadric<Real> pullback(const Quadric<Real>& q, const FactorMap<Real>& f)
{
    if (f.kind == FactorKind::MultiLinear)
        return pullback_affine(q, f.map);
    const Eigen::Index n = q.dim();
    if (f.i < n && f.j < n)
        return pullback_affine(q, f.map);
    const Eigen::Index k = f.i < n ? f.i : f.j;
    if (k == n - 1)
        return pullback_reflection(q, n);
    const auto swap = coordinate_swap<Real>(n, k, n - 1);
    return pullback_affine(pullback_reflection(pullback_affine(q, swap), n), swap);
}

/// Pullback of q through an arbitrary map via its decomposition:
/// q o (f_1 o ... o f_k), up to a positive factor clearing denominators.
template <typename Real>
Quadric<Real> pullback_map(const Quadric<Real>& q, const LFMap<Real>& phi)
{
    if (q.dim() != phi.dim())
        throw ShapeError("pullback_map: dimension mismatch");
    Quadric<Real> out = q;
    for (const auto& f : decompose(phi))
        out = pullback(out, f);
    return out;
}

} // namespace lfm
