#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lfm/ball_geometry.hpp"
#include "lfm/random.hpp"

namespace lfm {

/// Thresholds shared by the three self-map tests.
struct Tolerances {
    double row_rel = 1e-10;      ///< row test: LHS_i <= RHS (1 + row_rel)
    double oracle = 1e-9;        ///< containment: sup <= 1 + oracle
    double krein_psd = 1e-10;    ///< Krein: min eigenvalue >= -krein_psd
    double contact = 1e-9;       ///< |sup - 1| <= contact counts as boundary contact
    double fixed_step = 1e-12;   ///< iteration has converged once a step is this short
    int max_iterations = 10000;  ///< orbit length when locating fixed points
    int krein_grid = 121;        ///< logarithmic grid points for t in [1e-6, 1e6]
    double krein_golden = 1e-12; ///< golden-section relative bracket width
};

template <typename Real>
struct RowCriterion {
    std::vector<Real> row_lhs; ///< per-row LHS at the scale (|D|^2 - |C|^2)^2
    Real rhs;                  ///< (|D|^2 - |C|^2)^2
    std::vector<bool> row_verdict;
    bool selfmap;
    bool linear; ///< C = 0 branch
};

namespace detail {

template <typename Real>
RowCriterion<Real> rows_against(const CVector<Real>& M, const CMatrix<Real>& RU, Real scale, bool linear,
                                const Tolerances& tol)
{
    RowCriterion<Real> out;
    out.rhs = scale;
    out.linear = linear;
    out.selfmap = true;
    for (Eigen::Index i = 0; i < RU.rows(); ++i) {
        const CVector<Real> r = RU.row(i).adjoint();
        // |M|^2 + |r_i|^2 - 2 Re<M, r_i>, the squared distance from M to r_i
        const Real lhs = M.squaredNorm() + r.squaredNorm() - Real(2) * std::real(r.dot(M));
        out.row_lhs.push_back(lhs * scale);
        const bool ok = lhs * scale <= scale * (Real(1) + Real(tol.row_rel));
        out.row_verdict.push_back(ok);
        out.selfmap = out.selfmap && ok;
    }
    return out;
}

} // namespace detail

/// Row test for affine maps: |B|^2 + |A_i|^2 - 2 Re<B, A_i> <= 1 after D = 1.
template <typename Real>
RowCriterion<Real> linear_criterion(const LFMap<Real>& phi, const Tolerances& tol = {})
{
    if (!phi.is_affine())
        throw ContractViolation("linear_criterion: requires C = 0");
    const Complex<Real> d = phi.D();
    if (std::abs(d) == Real(0))
        throw PoleError("linear_criterion: D = 0");
    const Real scale = std::norm(d) * std::norm(d);
    return detail::rows_against<Real>(phi.B() / d, phi.A() / d, scale, true, tol);
}

/// Coefficient test on each row of RU against the center M.
///
/// LHS_i = |M|^2 + |r_i|^2 - 2 Re<M, r_i> with r_i the conjugate transpose of
/// row i of RU, reported at the scale (|D|^2 - |C|^2)^2 so the right-hand
/// side is (|D|^2 - |C|^2)^2.
template <typename Real>
RowCriterion<Real> row_criterion(const LFMap<Real>& phi, const Tolerances& tol = {})
{
    if (!phi.pole_free_on_ball())
        throw PoleError("row_criterion: requires |D|^2 > |C|^2");
    if (phi.is_affine())
        return linear_criterion(phi, tol);
    const auto e = image_ellipsoid(phi);
    const Real gap = std::norm(phi.D()) - phi.C().squaredNorm();
    return detail::rows_against<Real>(e.M, e.RU, gap * gap, false, tol);
}

template <typename Real>
Real krein_min_eigenvalue(const CMatrix<Real>& J, const CMatrix<Real>& G, Real t)
{
    const CMatrix<Real> H = J - (t * t) * G;
    return hermitian_eigenvalues<Real>((H + H.adjoint()) / Real(2))(0);
}

/// Searches t > 0 with J - t^2 m^* J m positive semidefinite, J = diag(I, -1).
///
/// The search runs on m scaled to D = 1 (when D != 0) so the grid
/// [1e-6, 1e6] is meaningful; the returned t refers to the associated
/// matrix exactly as stored.
template <typename Real>
std::optional<Real> krein_check(const LFMap<Real>& phi, const Tolerances& tol = {})
{
    const auto n = phi.dim();
    CMatrix<Real> m = associated_matrix(phi);
    Real rescale = Real(1);
    if (std::abs(phi.D()) > Real(1e-12) * max_abs(m)) {
        rescale = std::abs(phi.D());
        m /= phi.D();
    } else {
        rescale = max_abs(m);
        m /= rescale;
    }
    CMatrix<Real> J = CMatrix<Real>::Identity(n + 1, n + 1);
    J(n, n) = Complex<Real>(-1);
    CMatrix<Real> G = m.adjoint() * J * m;
    G = (G + G.adjoint()).eval() / Real(2);

    const int grid = std::max(tol.krein_grid, 3);
    const Real lo_exp = Real(-6), hi_exp = Real(6);
    auto t_of = [&](Real e) { return std::pow(Real(10), e); };
    auto f = [&](Real e) { return krein_min_eigenvalue<Real>(J, G, t_of(e)); };

    int best = 0;
    Real best_val = -std::numeric_limits<Real>::infinity();
    std::vector<Real> exps(static_cast<std::size_t>(grid));
    for (int k = 0; k < grid; ++k) {
        exps[k] = lo_exp + (hi_exp - lo_exp) * Real(k) / Real(grid - 1);
        const Real v = f(exps[k]);
        if (v > best_val) {
            best_val = v;
            best = k;
        }
    }
    if (best_val >= -Real(tol.krein_psd))
        return t_of(exps[best]) / rescale;

    // lambda_min(J - mu G) is concave in mu = t^2, hence unimodal in log t
    Real a = exps[std::max(best - 1, 0)];
    Real b = exps[std::min(best + 1, grid - 1)];
    const Real phi_g = (std::sqrt(Real(5)) - Real(1)) / Real(2);
    Real x1 = b - phi_g * (b - a), x2 = a + phi_g * (b - a);
    Real f1 = f(x1), f2 = f(x2);
    const Real width = std::log10(Real(1) + Real(tol.krein_golden));
    for (int it = 0; it < 400 && (b - a) > width; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi_g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi_g * (b - a);
            f1 = f(x1);
        }
    }
    const Real x = f1 >= f2 ? x1 : x2;
    const Real v = std::max(f1, f2);
    if (v >= -Real(tol.krein_psd))
        return t_of(x) / rescale;
    return std::nullopt;
}

template <typename Real>
struct OracleVerdict {
    Real sup;
    bool selfmap;
};

/// Exact containment test: sup of |phi| over the closed ball via the image ellipsoid.
template <typename Real>
OracleVerdict<Real> oracle_is_selfmap(const LFMap<Real>& phi, const Tolerances& tol = {})
{
    if (!phi.pole_free_on_ball())
        throw PoleError("oracle_is_selfmap: requires |D|^2 > |C|^2");
    const Real sup = ellipsoid_sup_norm(image_ellipsoid(phi));
    return {sup, sup <= Real(1) + Real(tol.oracle)};
}

/// Max of |phi(z)| over n points drawn uniformly on the unit sphere.
///
/// Samples are generated in fixed chunks of 4096, each from its own
/// substream of `seed`, so the result depends only on (phi, n, seed).
template <typename Real>
Real monte_carlo_sup(const LFMap<Real>& phi, std::size_t n, std::uint64_t seed)
{
    if (n < 1)
        throw ContractViolation("monte_carlo_sup: need n >= 1");
    constexpr std::size_t chunk = 4096;
    Real best = 0;
    for (std::size_t start = 0, c = 0; start < n; start += chunk, ++c) {
        Rng rng = substream(seed, c);
        const std::size_t stop = std::min(n, start + chunk);
        for (std::size_t k = start; k < stop; ++k) {
            const CVector<Real> z = sphere_point<Real>(rng, phi.dim());
            try {
                best = std::max(best, evaluate(phi, z).norm());
            } catch (const PoleError&) {
                std::string where;
                for (Eigen::Index i = 0; i < z.size(); ++i)
                    where += (i ? ", " : "") + std::to_string(double(z(i).real())) + "+"
                             + std::to_string(double(z(i).imag())) + "i";
                throw PoleError("monte_carlo_sup: pole at sample " + std::to_string(k) + " z = (" + where + ")");
            }
        }
    }
    return best;
}

enum class FixedPointClass { InteriorFixedPoint, BoundaryDenjoyWolff, NotSelfmap };

inline const char* to_string(FixedPointClass c)
{
    switch (c) {
    case FixedPointClass::InteriorFixedPoint:
        return "interior_fixed_point";
    case FixedPointClass::BoundaryDenjoyWolff:
        return "boundary_denjoy_wolff";
    case FixedPointClass::NotSelfmap:
        return "not_selfmap";
    }
    return "unknown";
}

template <typename Real>
struct FixedPointReport {
    FixedPointClass classification;
    std::optional<CVector<Real>> point;
    int iterations = 0;
};

namespace detail {

/// Limit of phi^k(0) by repeated squaring of the associated matrix. Scaling
/// by powers of two keeps integer-valued matrices exact for many squarings,
/// which matters for parabolic maps where plain iteration converges like 1/k.
template <typename Real>
std::optional<CVector<Real>> orbit_limit_by_squaring(const LFMap<Real>& phi)
{
    const auto n = phi.dim();
    CMatrix<Real> p = associated_matrix(phi);
    std::optional<CVector<Real>> last;
    for (int k = 0; k < 64; ++k) {
        int ex = 0;
        std::frexp(double(max_abs(p)), &ex);
        p *= Real(std::ldexp(1.0, -ex));
        const CVector<Real> w = p.col(n);
        if (!(std::abs(w(n)) > Real(1e-300)))
            return last;
        const CVector<Real> z = w.head(n) / w(n);
        if (!all_finite(z))
            return last;
        if (last && (z - *last).norm() == Real(0))
            return z;
        last = z;
        p = (p * p).eval();
    }
    return last;
}

/// Fixed points of phi read off the eigenvectors of its associated matrix.
template <typename Real>
std::vector<CVector<Real>> eigen_fixed_points(const LFMap<Real>& phi)
{
    const auto n = phi.dim();
    Eigen::ComplexEigenSolver<CMatrix<Real>> solver(associated_matrix(phi));
    std::vector<CVector<Real>> out;
    if (solver.info() != Eigen::Success)
        return out;
    for (Eigen::Index k = 0; k <= n; ++k) {
        const CVector<Real> v = solver.eigenvectors().col(k);
        if (std::abs(v(n)) <= Real(1e-12) * v.norm())
            continue;
        out.push_back(v.head(n) / v(n));
    }
    return out;
}

} // namespace detail

/// Locates the attracting fixed point of a self-map.
///
/// A sup strictly below 1 means the image is compactly inside the ball and
/// the fixed point is interior. At boundary contact the orbit of 0 decides:
/// convergence to an interior point, or an interior eigen fixed point (e.g.
/// for elliptic automorphisms whose orbits cycle), gives
/// interior_fixed_point; otherwise the orbit limit on the sphere is the
/// Denjoy-Wolff point.
template <typename Real>
FixedPointReport<Real> classify_fixed_point(const LFMap<Real>& phi, Real oracle_sup, const Tolerances& tol = {})
{
    FixedPointReport<Real> out;
    if (oracle_sup > Real(1) + Real(tol.oracle)) {
        out.classification = FixedPointClass::NotSelfmap;
        return out;
    }
    const auto n = phi.dim();
    CVector<Real> z = CVector<Real>::Zero(n);
    bool converged = false;
    int k = 0;
    for (; k < tol.max_iterations; ++k) {
        const CVector<Real> next = evaluate(phi, z);
        const Real step = (next - z).norm();
        z = next;
        if (step < Real(tol.fixed_step)) {
            converged = true;
            ++k;
            break;
        }
    }
    out.iterations = k;

    if (oracle_sup < Real(1) - Real(tol.contact) || (converged && z.norm() < Real(1) - Real(tol.contact))) {
        out.classification = FixedPointClass::InteriorFixedPoint;
        out.point = z;
        return out;
    }

    for (const auto& p : detail::eigen_fixed_points(phi)) {
        if (p.norm() < Real(1) - Real(1e-6)) {
            const Real scale = Real(1) + p.norm();
            if ((evaluate(phi, p) - p).norm() <= Real(1e-9) * scale) {
                out.classification = FixedPointClass::InteriorFixedPoint;
                out.point = p;
                return out;
            }
        }
    }

    out.classification = FixedPointClass::BoundaryDenjoyWolff;
    out.point = z;
    if (!converged) {
        if (auto limit = detail::orbit_limit_by_squaring(phi)) {
            const Real r = limit->norm();
            if (std::abs(r - Real(1)) <= Real(1e-6) && (evaluate(phi, *limit) - *limit).norm() <= Real(1e-6))
                out.point = *limit;
        }
    }
    return out;
}

template <typename Real>
struct CriterionReport {
    std::vector<Real> row_lhs;
    Real rhs;
    std::vector<bool> row_verdict;
    bool criterion_selfmap;
    bool linear;
    Real oracle_sup;
    bool oracle_selfmap;
    std::optional<Real> krein_t;
    FixedPointClass classification;
    std::optional<CVector<Real>> fixed_point;
    bool discrepancy_flag;
};

/// Runs the row test, the containment oracle, the Krein search and the
/// fixed-point classification on one map.
template <typename Real>
CriterionReport<Real> check(const LFMap<Real>& phi, const Tolerances& tol = {})
{
    const auto rows = row_criterion(phi, tol);
    const auto oracle = oracle_is_selfmap(phi, tol);
    CriterionReport<Real> r;
    r.row_lhs = rows.row_lhs;
    r.rhs = rows.rhs;
    r.row_verdict = rows.row_verdict;
    r.criterion_selfmap = rows.selfmap;
    r.linear = rows.linear;
    r.oracle_sup = oracle.sup;
    r.oracle_selfmap = oracle.selfmap;
    r.krein_t = krein_check(phi, tol);
    const auto fp = classify_fixed_point(phi, oracle.sup, tol);
    r.classification = fp.classification;
    r.fixed_point = fp.point;
    r.discrepancy_flag = rows.selfmap != oracle.selfmap;
    return r;
}

} // namespace lfm
