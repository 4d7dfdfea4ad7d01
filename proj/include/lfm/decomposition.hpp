#pragma once

#include <utility>
#include <vector>

#include "lfm/lfmap.hpp"

namespace lfm {

/// Permutation of {0, ..., n-1} stored as images: column j of the
/// permutation matrix carries its 1 in row perm[j].
using Permutation = std::vector<Eigen::Index>;

template <typename Real>
CMatrix<Real> permutation_matrix(const Permutation& perm)
{
    const auto n = static_cast<Eigen::Index>(perm.size());
    CMatrix<Real> p = CMatrix<Real>::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        p(perm[j], j) = Complex<Real>(1);
    return p;
}

/// m = u1 * P(perm) * diag * u2 with u1, u2 unipotent upper triangular.
template <typename Real>
struct BruhatFactors {
    CMatrix<Real> u1;
    Permutation perm;
    CMatrix<Real> diag;
    CMatrix<Real> u2;

    CMatrix<Real> recompose() const { return u1 * permutation_matrix<Real>(perm) * diag * u2; }
};

/// Bruhat factorization by two-sided elimination.
///
/// Columns are processed left to right. In each column the pivot is the
/// lowest row not yet claimed whose entry exceeds 1e-12 max|m|. Rows above
/// the pivot are cleared with row operations (accumulated in u1) and the
/// pivot row is cleared to the right with column operations (accumulated in
/// u2), leaving a monomial matrix P * diag.
template <typename Real>
BruhatFactors<Real> bruhat_factorize(const CMatrix<Real>& m)
{
    if (m.rows() != m.cols() || m.rows() == 0)
        throw ShapeError("bruhat_factorize: matrix must be square and non-empty");
    const Eigen::Index n = m.rows();
    const Real threshold = Real(1e-12) * max_abs(m);

    CMatrix<Real> work = m;
    CMatrix<Real> u1 = CMatrix<Real>::Identity(n, n);
    CMatrix<Real> u2 = CMatrix<Real>::Identity(n, n);
    std::vector<bool> claimed(static_cast<std::size_t>(n), false);
    Permutation perm(static_cast<std::size_t>(n));

    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot = -1;
        for (Eigen::Index r = n - 1; r >= 0; --r) {
            if (!claimed[r] && std::abs(work(r, col)) > threshold) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0)
            throw DegenerateMapError("bruhat_factorize: no pivot in column " + std::to_string(col));
        claimed[pivot] = true;
        perm[col] = pivot;
        const Complex<Real> p = work(pivot, col);

        // row_r -= f row_pivot for r above the pivot; u1 absorbs the inverse.
        for (Eigen::Index r = 0; r < pivot; ++r) {
            const Complex<Real> f = work(r, col) / p;
            if (f == Complex<Real>(0))
                continue;
            work.row(r) -= f * work.row(pivot);
            work(r, col) = Complex<Real>(0);
            u1.col(pivot) += f * u1.col(r);
        }
        // rows below the pivot may still hold sub-threshold noise in this column
        for (Eigen::Index r = pivot + 1; r < n; ++r)
            if (!claimed[r])
                work(r, col) = Complex<Real>(0);

        // col_k -= f col_col for k right of the pivot; u2 absorbs the inverse.
        for (Eigen::Index k = col + 1; k < n; ++k) {
            const Complex<Real> f = work(pivot, k) / p;
            if (f == Complex<Real>(0))
                continue;
            work.col(k) -= f * work.col(col);
            work(pivot, k) = Complex<Real>(0);
            u2.row(col) += f * u2.row(k);
        }
    }

    BruhatFactors<Real> out;
    out.u1 = std::move(u1);
    out.perm = perm;
    out.diag = CMatrix<Real>::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        out.diag(j, j) = work(perm[j], j);
    out.u2 = std::move(u2);
    return out;
}

/// Transpositions t_1, ..., t_k with perm = t_1 o t_2 o ... o t_k.
///
/// Repeatedly sends the largest misplaced index home, so the output is
/// canonical and has at most n - 1 entries.
inline std::vector<std::pair<Eigen::Index, Eigen::Index>> permutation_to_transpositions(const Permutation& perm)
{
    const auto n = static_cast<Eigen::Index>(perm.size());
    std::vector<bool> seen(perm.size(), false);
    for (auto p : perm) {
        if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)])
            throw ContractViolation("permutation_to_transpositions: not a permutation");
        seen[static_cast<std::size_t>(p)] = true;
    }

    Permutation q = perm;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
    for (Eigen::Index x = n - 1; x >= 0; --x) {
        if (q[x] == x)
            continue;
        const Eigen::Index y = q[x];
        // q = (x y) o q'
        for (auto& v : q) {
            if (v == x)
                v = y;
            else if (v == y)
                v = x;
        }
        out.emplace_back(std::min(x, y), std::max(x, y));
    }
    return out;
}

inline Permutation compose_transpositions(Eigen::Index n, const std::vector<std::pair<Eigen::Index, Eigen::Index>>& ts)
{
    Permutation p(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        p[i] = i;
    // apply the rightmost transposition first
    for (auto it = ts.rbegin(); it != ts.rend(); ++it)
        for (auto& v : p) {
            if (v == it->first)
                v = it->second;
            else if (v == it->second)
                v = it->first;
        }
    return p;
}

enum class FactorKind { Reflection, MultiLinear };

/// One atomic factor of a decomposed map.
///
/// Reflection(i, j) swaps homogeneous coordinates i and j (0-based; index N is
/// the homogeneous slot). MultiLinear factors have an upper-triangular
/// associated matrix, hence affine components.
template <typename Real>
struct FactorMap {
    FactorKind kind;
    Eigen::Index i = 0;
    Eigen::Index j = 0;
    LFMap<Real> map;
};

template <typename Real>
LFMap<Real> reflection_map(Eigen::Index n, Eigen::Index i, Eigen::Index j)
{
    Permutation p(static_cast<std::size_t>(n + 1));
    for (Eigen::Index k = 0; k <= n; ++k)
        p[k] = k;
    std::swap(p[i], p[j]);
    return from_associated_matrix<Real>(permutation_matrix<Real>(p));
}

template <typename Real>
bool is_transposition_matrix(const CMatrix<Real>& m)
{
    const auto n = m.rows();
    Eigen::Index off = 0;
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            const auto v = m(r, c);
            if (v != Complex<Real>(0) && v != Complex<Real>(1))
                return false;
        }
    if (!(m.cwiseAbs().rowwise().sum().array() == Real(1)).all() ||
        !(m.cwiseAbs().colwise().sum().array() == Real(1)).all())
        return false;
    for (Eigen::Index r = 0; r < n; ++r)
        if (m(r, r) == Complex<Real>(0))
            ++off;
    return off == 2;
}

template <typename Real>
bool is_upper_triangular(const CMatrix<Real>& m)
{
    for (Eigen::Index r = 1; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < r && c < m.cols(); ++c)
            if (m(r, c) != Complex<Real>(0))
                return false;
    return true;
}

/// Structural check of a factor against its declared kind.
template <typename Real>
bool factor_is_well_formed(const FactorMap<Real>& f)
{
    const CMatrix<Real> m = associated_matrix(f.map);
    if (f.kind == FactorKind::Reflection)
        return is_transposition_matrix(m) && m(f.i, f.j) == Complex<Real>(1) && f.i != f.j;
    return is_upper_triangular(m);
}

/// Ordered factor list f_1, ..., f_k with phi = f_1 o ... o f_k.
///
/// u1 contributes a leading multi-linear factor (omitted when it is the
/// identity), the permutation contributes reflections, and diag * u2 is
/// always emitted as the trailing multi-linear factor.
template <typename Real>
std::vector<FactorMap<Real>> factors_to_maps(const BruhatFactors<Real>& f)
{
    const auto n1 = f.u1.rows();
    const auto n = n1 - 1;
    std::vector<FactorMap<Real>> out;
    if (!f.u1.isIdentity(Real(0)))
        out.push_back({FactorKind::MultiLinear, 0, 0, from_associated_matrix<Real>(f.u1)});
    for (const auto& [i, j] : permutation_to_transpositions(f.perm))
        out.push_back({FactorKind::Reflection, i, j, reflection_map<Real>(n, i, j)});
    out.push_back({FactorKind::MultiLinear, 0, 0, from_associated_matrix<Real>(CMatrix<Real>(f.diag * f.u2))});
    return out;
}

template <typename Real>
std::vector<FactorMap<Real>> decompose(const LFMap<Real>& phi)
{
    return factors_to_maps(bruhat_factorize(associated_matrix(phi)));
}

/// Composes f_1 o ... o f_k back into a single map.
template <typename Real>
LFMap<Real> recompose(const std::vector<FactorMap<Real>>& factors)
{
    if (factors.empty())
        throw ContractViolation("recompose: empty factor list");
    CMatrix<Real> m = associated_matrix(factors.front().map);
    for (std::size_t k = 1; k < factors.size(); ++k)
        m = m * associated_matrix(factors[k].map);
    return from_associated_matrix<Real>(m);
}

/// Max entrywise error of b against a after fitting the best complex scalar,
/// relative to max|a|.
template <typename Real>
Real projective_residual(const CMatrix<Real>& a, const CMatrix<Real>& b)
{
    const Complex<Real> denom = b.cwiseAbs2().sum();
    if (std::abs(denom) == Real(0))
        return a.isZero(Real(0)) ? Real(0) : Real(1);
    // least-squares scalar lambda minimizing |a - lambda b|
    const Complex<Real> lambda = (b.adjoint() * a).trace() / denom;
    return max_abs(CMatrix<Real>(a - lambda * b)) / std::max(max_abs(a), std::numeric_limits<Real>::min());
}

} // namespace lfm
