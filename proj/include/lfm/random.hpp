#pragma once

#include <cstdint>
#include <random>

#include "lfm/ball_geometry.hpp"

namespace lfm {

using Rng = std::mt19937_64;

/// Independent engine for (seed, stream); used to keep sampled results
/// identical no matter how the work is chunked or scheduled.
inline Rng substream(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x6c666du};
    return Rng(seq);
}

template <typename Real>
Complex<Real> gaussian_complex(Rng& rng)
{
    std::normal_distribution<Real> g(Real(0), Real(1));
    const Real re = g(rng);
    const Real im = g(rng);
    return {re, im};
}

template <typename Real>
CMatrix<Real> gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols)
{
    CMatrix<Real> m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = gaussian_complex<Real>(rng);
    return m;
}

template <typename Real>
CVector<Real> gaussian_vector(Rng& rng, Eigen::Index n)
{
    return gaussian_matrix<Real>(rng, n, 1);
}

/// Uniform point on the unit sphere S^{2N-1} (normalized Gaussian).
template <typename Real>
CVector<Real> sphere_point(Rng& rng, Eigen::Index n)
{
    CVector<Real> z = gaussian_vector<Real>(rng, n);
    Real r = z.norm();
    while (r == Real(0)) {
        z = gaussian_vector<Real>(rng, n);
        r = z.norm();
    }
    return z / r;
}

/// Uniform point in the ball of the given radius.
template <typename Real>
CVector<Real> ball_point(Rng& rng, Eigen::Index n, Real radius = Real(1))
{
    std::uniform_real_distribution<Real> u(Real(0), Real(1));
    const Real r = radius * std::pow(u(rng), Real(1) / Real(2 * n));
    return r * sphere_point<Real>(rng, n);
}

/// Haar-distributed unitary (QR of a Gaussian matrix with phase fix).
template <typename Real>
CMatrix<Real> random_unitary(Rng& rng, Eigen::Index n)
{
    const CMatrix<Real> g = gaussian_matrix<Real>(rng, n, n);
    Eigen::HouseholderQR<CMatrix<Real>> qr(g);
    CMatrix<Real> q = qr.householderQ();
    const CMatrix<Real> r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        const Real a = std::abs(r(j, j));
        if (a > Real(0))
            q.col(j) *= r(j, j) / a;
    }
    return q;
}

template <typename Real>
BallAutomorphism<Real> random_automorphism(Rng& rng, Eigen::Index n, Real max_radius = Real(0.95))
{
    return BallAutomorphism<Real>::make(ball_point<Real>(rng, n, max_radius), random_unitary<Real>(rng, n));
}

/// The affine map v -> RU v + M as an LFMap.
template <typename Real>
LFMap<Real> affine_map(const CMatrix<Real>& linear, const CVector<Real>& shift)
{
    const auto n = linear.rows();
    return make_lfmap<Real>(linear, shift, CVector<Real>::Zero(n), Complex<Real>(1));
}

/// A self-map R U phi_alpha + M whose image sits inside the ball by construction:
/// R is Hermitian with spectrum in (0, 1) and |M| + max spec(R) <= fill <= 1.
template <typename Real>
LFMap<Real> random_selfmap(Rng& rng, Eigen::Index n, Real fill = Real(1))
{
    std::uniform_real_distribution<Real> u(Real(0), Real(1));
    const auto aut = random_automorphism<Real>(rng, n, Real(0.9));
    const CMatrix<Real> Q = random_unitary<Real>(rng, n);
    RVector<Real> spec(n);
    for (Eigen::Index i = 0; i < n; ++i)
        spec(i) = Real(0.05) + Real(0.95) * u(rng);
    const Real top = spec.maxCoeff();
    const Real radius = (fill - top) > Real(0) ? (fill - top) * u(rng) : Real(0);
    const CVector<Real> M = radius * sphere_point<Real>(rng, n);
    const CMatrix<Real> R = Q * spec.template cast<Complex<Real>>().asDiagonal() * Q.adjoint();
    return compose(affine_map<Real>(R, M), automorphism_map(aut));
}

/// Generic one-to-one map with |D| > |C|; Gaussian coefficients, no
/// guarantee of being a self-map.
template <typename Real>
LFMap<Real> random_pole_free_map(Rng& rng, Eigen::Index n, Real coeff_scale = Real(0.5))
{
    std::uniform_real_distribution<Real> u(Real(0), Real(1));
    for (;;) {
        const CMatrix<Real> A = coeff_scale * gaussian_matrix<Real>(rng, n, n);
        const CVector<Real> B = coeff_scale * gaussian_vector<Real>(rng, n);
        const CVector<Real> C = coeff_scale * gaussian_vector<Real>(rng, n);
        const Real mag = C.norm() * (Real(1.05) + u(rng));
        const Real phase = Real(2) * Real(3.14159265358979323846) * u(rng);
        const Complex<Real> D = std::polar(mag, phase);
        try {
            return make_lfmap<Real>(A, B, C, D);
        } catch (const DegenerateMapError&) {
        }
    }
}

} // namespace lfm
