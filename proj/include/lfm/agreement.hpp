#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lfm/selfmap.hpp"

namespace lfm {

template <typename Real>
struct AgreementRow {
    std::size_t index;
    Eigen::Index dim;
    std::string family; ///< "constructed_selfmap" or "gaussian"
    bool criterion_selfmap;
    Real oracle_sup;
    bool oracle_selfmap;
    bool agree;
};

template <typename Real>
struct AgreementSummary {
    std::vector<AgreementRow<Real>> rows;
    std::size_t agree = 0;
    std::size_t criterion_only = 0; ///< row test accepts, oracle rejects
    std::size_t oracle_only = 0;    ///< oracle accepts, row test rejects
};

/// Map number `index` of the agreement ensemble. Even indices are
/// constructed self-maps R U phi_alpha + M, odd ones Gaussian pole-free
/// maps; N cycles through 1..4. Each map has its own substream, so the
/// ensemble is reproducible for a given seed.
template <typename Real>
LFMap<Real> ensemble_map(std::uint64_t seed, std::size_t index, std::string* family = nullptr)
{
    Rng rng = substream(seed, index);
    const Eigen::Index n = static_cast<Eigen::Index>(1 + index % 4);
    if (index % 2 == 0) {
        std::uniform_real_distribution<Real> u(Real(0.5), Real(1));
        if (family)
            *family = "constructed_selfmap";
        return random_selfmap<Real>(rng, n, u(rng));
    }
    if (family)
        *family = "gaussian";
    return random_pole_free_map<Real>(rng, n);
}

/// Row-criterion verdict against the containment oracle over `count` maps.
template <typename Real>
AgreementSummary<Real> agreement_report(std::size_t count, std::uint64_t seed, const Tolerances& tol = {})
{
    AgreementSummary<Real> out;
    out.rows.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        AgreementRow<Real> row;
        row.index = k;
        const auto phi = ensemble_map<Real>(seed, k, &row.family);
        row.dim = phi.dim();
        row.criterion_selfmap = row_criterion(phi, tol).selfmap;
        const auto oracle = oracle_is_selfmap(phi, tol);
        row.oracle_sup = oracle.sup;
        row.oracle_selfmap = oracle.selfmap;
        row.agree = row.criterion_selfmap == row.oracle_selfmap;
        if (row.agree)
            ++out.agree;
        else if (row.criterion_selfmap)
            ++out.criterion_only;
        else
            ++out.oracle_only;
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace lfm
