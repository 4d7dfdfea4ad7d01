#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "lfm/lfmap.hpp"

namespace lfm {

/// Orthogonal split z = P_alpha(z) + Q_alpha(z) onto span{alpha} and its
/// complement. For alpha = 0 the projection is zero and Q is the identity.
template <typename Real>
std::pair<CVector<Real>, CVector<Real>> project_alpha(const CVector<Real>& alpha, const CVector<Real>& z)
{
    if (alpha.size() != z.size())
        throw ShapeError("project_alpha: dimension mismatch");
    const Real a2 = alpha.squaredNorm();
    if (a2 == Real(0))
        return {CVector<Real>::Zero(z.size()), z};
    const CVector<Real> p = (alpha.dot(z) / a2) * alpha;
    const CVector<Real> q = z - p;
    return {p, q};
}

/// Automorphism U o phi_alpha of the unit ball.
template <typename Real>
class BallAutomorphism {
public:
    static BallAutomorphism make(CVector<Real> alpha, CMatrix<Real> U)
    {
        if (U.rows() != alpha.size() || U.cols() != alpha.size())
            throw ShapeError("BallAutomorphism: U must be NxN with N = len(alpha)");
        if (!(alpha.norm() < Real(1)))
            throw ContractViolation("BallAutomorphism: |alpha| must be < 1");
        if (!is_unitary(U))
            throw ContractViolation("BallAutomorphism: U is not unitary within 1e-10");
        return BallAutomorphism(std::move(alpha), std::move(U));
    }

    static BallAutomorphism involution(CVector<Real> alpha)
    {
        const auto n = alpha.size();
        return make(std::move(alpha), CMatrix<Real>::Identity(n, n));
    }

    const CVector<Real>& alpha() const { return alpha_; }
    const CMatrix<Real>& U() const { return U_; }
    Real s() const { return std::sqrt(Real(1) - alpha_.squaredNorm()); }

private:
    BallAutomorphism(CVector<Real> a, CMatrix<Real> u) : alpha_(std::move(a)), U_(std::move(u)) {}

    CVector<Real> alpha_;
    CMatrix<Real> U_;
};

/// U (alpha - P_alpha z - s_alpha Q_alpha z) / (1 - <z, alpha>).
template <typename Real>
CVector<Real> automorphism_eval(const BallAutomorphism<Real>& a, const CVector<Real>& z)
{
    if (z.size() != a.alpha().size())
        throw ShapeError("automorphism_eval: dimension mismatch");
    if (z.norm() > Real(1) + Real(1e-12))
        throw ContractViolation("automorphism_eval: point outside the closed ball");
    const auto [p, q] = project_alpha(a.alpha(), z);
    const Complex<Real> den = Complex<Real>(1) - a.alpha().dot(z);
    if (std::abs(den) == Real(0))
        throw PoleError("automorphism_eval: 1 - <z, alpha> vanished");
    return a.U() * ((a.alpha() - p - a.s() * q) / den);
}

/// The same automorphism as an LFMap: A = -U (s I + (1 - s) alpha alpha^* / |alpha|^2),
/// B = U alpha, C = -alpha, D = 1.
template <typename Real>
LFMap<Real> automorphism_map(const BallAutomorphism<Real>& a)
{
    const auto n = a.alpha().size();
    const Real a2 = a.alpha().squaredNorm();
    const Real s = a.s();
    CMatrix<Real> K = s * CMatrix<Real>::Identity(n, n);
    if (a2 > Real(0))
        K += ((Real(1) - s) / a2) * (a.alpha() * a.alpha().adjoint());
    return make_lfmap<Real>(-a.U() * K, a.U() * a.alpha(), -a.alpha(), Complex<Real>(1));
}

/// s beta - s I - beta with beta = alpha alpha^* / |alpha|^2.
template <typename Real>
CMatrix<Real> omega(const CVector<Real>& alpha)
{
    const auto n = alpha.size();
    const Real a2 = alpha.squaredNorm();
    if (!(a2 > Real(0)) || !(a2 < Real(1)))
        throw ContractViolation("omega: need 0 < |alpha| < 1");
    const Real s = std::sqrt(Real(1) - a2);
    const CMatrix<Real> beta = (alpha * alpha.adjoint()) / a2;
    return s * beta - s * CMatrix<Real>::Identity(n, n) - beta;
}

/// Closed form of omega(alpha)^{-1}: -(|alpha|^2 I + (s - 1) alpha alpha^*) / (s |alpha|^2).
template <typename Real>
CMatrix<Real> omega_inverse(const CVector<Real>& alpha)
{
    const auto n = alpha.size();
    const Real a2 = alpha.squaredNorm();
    if (!(a2 > Real(0)) || !(a2 < Real(1)))
        throw ContractViolation("omega_inverse: need 0 < |alpha| < 1");
    const Real s = std::sqrt(Real(1) - a2);
    return -(a2 * CMatrix<Real>::Identity(n, n) + (s - Real(1)) * (alpha * alpha.adjoint())) / (s * a2);
}

/// phi(closed ball) = { M + RU v : |v| <= 1 }.
template <typename Real>
struct EllipsoidImage {
    CVector<Real> M;
    CMatrix<Real> RU;
};

/// A, B, C, D divided through so that D = 1; C picks up conj(D) because
/// <z, C> / D = <z, C / conj(D)>.
template <typename Real>
struct NormalizedCoefficients {
    CMatrix<Real> A;
    CVector<Real> B;
    CVector<Real> C;
};

template <typename Real>
NormalizedCoefficients<Real> normalize_to_unit_d(const LFMap<Real>& phi)
{
    const Complex<Real> d = phi.D();
    if (std::abs(d) == Real(0))
        throw PoleError("normalize: D = 0, the map has a pole at the origin");
    return {phi.A() / d, phi.B() / d, phi.C() / std::conj(d)};
}

/// Center and shape of the image of the ball.
///
/// Works in the D = 1 normalization: with s = sqrt(1 - |C|^2),
///   M  = (B - A C) / (1 - |C|^2)
///   RU = (B C^* - A (s I + (1 - s) C C^* / |C|^2)) / (1 - |C|^2).
/// Affine maps (C = 0) give M = B, RU = A directly.
template <typename Real>
EllipsoidImage<Real> image_ellipsoid(const LFMap<Real>& phi)
{
    if (!phi.pole_free_on_ball())
        throw PoleError("image_ellipsoid: |D|^2 <= |C|^2, the map has a pole on the closed ball");
    const auto n = phi.dim();
    const auto [A, B, C] = normalize_to_unit_d(phi);
    const Real c2 = C.squaredNorm();

    EllipsoidImage<Real> e;
    if (c2 == Real(0)) {
        e.M = B;
        e.RU = A;
    } else {
        const Real s = std::sqrt(Real(1) - c2);
        const Real w = Real(1) - c2;
        const CMatrix<Real> K = s * CMatrix<Real>::Identity(n, n) + ((Real(1) - s) / c2) * (C * C.adjoint());
        e.M = (B - A * C) / w;
        e.RU = (B * C.adjoint() - A * K) / w;
    }
    const auto sv = svd(e.RU);
    if (!(sv.sigma(n - 1) > Real(1e-14) * sv.sigma(0)))
        throw DegenerateMapError("image_ellipsoid: RU is singular");
    return e;
}

template <typename Real>
struct SupResult {
    Real value;
    CVector<Real> maximizer; ///< unit vector v attaining |M + RU v| = value
};

/// sup { |M + RU v| : |v| <= 1 } by the secular equation.
///
/// With RU = W S V^* and c = W^* M, the maximizer is u = V^* v with
/// u_i = s_i c_i / (lambda - s_i^2), where lambda > s_max^2 solves
/// sum s_i^2 |c_i|^2 / (lambda - s_i^2)^2 = 1. When c vanishes on the top
/// singular directions and the deflated secular sum at s_max^2 is <= 1, the
/// root sits at s_max^2 and the leftover mass of u goes to a top direction.
template <typename Real>
SupResult<Real> ellipsoid_sup(const EllipsoidImage<Real>& e)
{
    const auto n = e.M.size();
    if (e.RU.rows() != n || e.RU.cols() != n)
        throw ShapeError("ellipsoid_sup: RU must be NxN");
    const auto sv = svd(e.RU);
    const CVector<Real> c = sv.W.adjoint() * e.M;
    const RVector<Real>& sigma = sv.sigma;
    const Real smax = sigma(0);
    const Real top = smax * smax;
    const Real cnorm = c.norm();

    auto finish = [&](CVector<Real> u) {
        const Real un = u.norm();
        if (un > Real(0))
            u /= un;
        else
            u(0) = Complex<Real>(1);
        const CVector<Real> image = c + sigma.template cast<Complex<Real>>().cwiseProduct(u);
        return SupResult<Real>{image.norm(), sv.V * u};
    };

    if (cnorm == Real(0) || smax == Real(0)) {
        CVector<Real> u = CVector<Real>::Zero(n);
        if (smax == Real(0)) {
            // RU = 0: the set is the single point M
            return {e.M.norm(), CVector<Real>::Unit(n, 0)};
        }
        u(0) = Complex<Real>(1);
        return finish(u);
    }

    // indices that take part in the secular sum; components of c that are
    // numerically zero in the top cluster are deflated
    const Real eps = std::numeric_limits<Real>::epsilon();
    std::vector<bool> active(static_cast<std::size_t>(n), true);
    bool top_deflated = true;
    for (Eigen::Index i = 0; i < n; ++i) {
        const bool in_top = sigma(i) >= smax * (Real(1) - Real(64) * eps);
        if (!in_top)
            continue;
        if (std::abs(c(i)) <= Real(16) * eps * cnorm)
            active[static_cast<std::size_t>(i)] = false;
        else
            top_deflated = false;
    }

    auto secular = [&](Real lambda) {
        Real f = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!active[static_cast<std::size_t>(i)])
                continue;
            const Real g = sigma(i) * std::abs(c(i)) / (lambda - sigma(i) * sigma(i));
            f += g * g;
        }
        return f;
    };
    auto u_at = [&](Real lambda) {
        CVector<Real> u = CVector<Real>::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i)
            if (active[static_cast<std::size_t>(i)])
                u(i) = sigma(i) * c(i) / (lambda - sigma(i) * sigma(i));
        return u;
    };

    if (top_deflated && secular(top) <= Real(1)) {
        CVector<Real> u = u_at(top);
        const Real rest = std::sqrt(std::max(Real(0), Real(1) - u.squaredNorm()));
        for (Eigen::Index i = 0; i < n; ++i)
            if (!active[static_cast<std::size_t>(i)]) {
                u(i) = Complex<Real>(rest);
                break;
            }
        return finish(u);
    }

    Real lo = top;
    Real hi = top + (smax + cnorm) * (smax + cnorm);
    for (int it = 0; it < 200 && hi - lo > eps * hi; ++it) {
        const Real mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi)
            break;
        if (secular(mid) > Real(1))
            lo = mid;
        else
            hi = mid;
    }
    return finish(u_at(hi));
}

template <typename Real>
Real ellipsoid_sup_norm(const EllipsoidImage<Real>& e)
{
    return ellipsoid_sup(e).value;
}

} // namespace lfm
