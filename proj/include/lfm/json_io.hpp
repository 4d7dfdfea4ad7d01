#pragma once

#include <string>

#include <json.hpp>

#include "lfm/agreement.hpp"
#include "lfm/quadric.hpp"
#include "lfm/selfmap.hpp"

namespace lfm::io {

using json = nlohmann::ordered_json;

/// Malformed input file (exit code 2 in the CLI).
class ParseError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "malformed_input"; }
};

json to_json(const std::complex<double>& z);
json to_json(const CVectorXd& v);
json to_json(const CMatrixXd& m);
json to_json(const RVector<double>& v);
json to_json(const RMatrix<double>& m);

std::complex<double> complex_from_json(const json& j);
CVectorXd vector_from_json(const json& j, Eigen::Index n);
CMatrixXd matrix_from_json(const json& j, Eigen::Index n);

/// {"N": n, "A": [[[re, im], ...], ...], "B": [...], "C": [...], "D": [re, im]}
LFMap<double> map_from_json(const json& j);
json map_to_json(const LFMap<double>& phi);

/// Accepts {"alphas", "betas", "gammas", "delta"} or {"S", "b", "c"}.
Quadric<double> quadric_from_json(const json& j);
json quadric_to_json(const Quadric<double>& q);

json tolerances_to_json(const Tolerances& tol);
json report_to_json(const CriterionReport<double>& r);
json factors_to_json(const std::vector<FactorMap<double>>& factors);
json agreement_to_json(const AgreementSummary<double>& summary);

json read_json_file(const std::string& path);

/// Serializes with every floating-point number printed using 17 significant
/// digits, so output is lossless and byte-stable for identical inputs.
std::string dump(const json& j, int indent = 2);

} // namespace lfm::io
