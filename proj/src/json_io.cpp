#include "lfm/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lfm::io {

json to_json(const std::complex<double>& z)
{
    return json::array({z.real(), z.imag()});
}

json to_json(const CVectorXd& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(to_json(v(i)));
    return out;
}

json to_json(const CMatrixXd& m)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(to_json(std::complex<double>(m(i, j))));
        out.push_back(std::move(row));
    }
    return out;
}

json to_json(const RVector<double>& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

json to_json(const RMatrix<double>& m)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

namespace {

double number(const json& j, const char* what)
{
    if (!j.is_number())
        throw ParseError(std::string(what) + ": expected a number");
    return j.get<double>();
}

const json& field(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw ParseError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::vector<double> reals(const json& j, const char* what)
{
    if (!j.is_array())
        throw ParseError(std::string(what) + ": expected an array");
    std::vector<double> out;
    for (const auto& v : j)
        out.push_back(number(v, what));
    return out;
}

} // namespace

std::complex<double> complex_from_json(const json& j)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2)
        throw ParseError("complex number must be [re, im]");
    return {number(j[0], "re"), number(j[1], "im")};
}

CVectorXd vector_from_json(const json& j, Eigen::Index n)
{
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n)
        throw ParseError("vector must be an array of " + std::to_string(n) + " complex entries");
    CVectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = complex_from_json(j[static_cast<std::size_t>(i)]);
    return v;
}

CMatrixXd matrix_from_json(const json& j, Eigen::Index n)
{
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n)
        throw ParseError("matrix must have " + std::to_string(n) + " rows");
    CMatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            throw ParseError("matrix row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
        for (Eigen::Index k = 0; k < n; ++k)
            m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
    return m;
}

LFMap<double> map_from_json(const json& j)
{
    const json& jn = field(j, "N");
    if (!jn.is_number_integer() || jn.get<long long>() < 1 || jn.get<long long>() > 4096)
        throw ParseError("N must be a positive integer");
    const auto n = static_cast<Eigen::Index>(jn.get<long long>());
    auto A = matrix_from_json(field(j, "A"), n);
    auto B = vector_from_json(field(j, "B"), n);
    auto C = vector_from_json(field(j, "C"), n);
    const auto D = complex_from_json(field(j, "D"));
    try {
        return make_lfmap<double>(std::move(A), std::move(B), std::move(C), D);
    } catch (const ShapeError& e) {
        throw ParseError(e.what());
    }
}

json map_to_json(const LFMap<double>& phi)
{
    json out;
    out["N"] = phi.dim();
    out["A"] = to_json(phi.A());
    out["B"] = to_json(phi.B());
    out["C"] = to_json(phi.C());
    out["D"] = to_json(phi.D());
    return out;
}

Quadric<double> quadric_from_json(const json& j)
{
    if (!j.is_object())
        throw ParseError("quadric must be a JSON object");
    try {
        if (j.contains("alphas")) {
            return from_standard_form<double>(reals(field(j, "alphas"), "alphas"), reals(field(j, "betas"), "betas"),
                                              reals(field(j, "gammas"), "gammas"),
                                              number(field(j, "delta"), "delta"));
        }
        const json& js = field(j, "S");
        if (!js.is_array())
            throw ParseError("S must be an array of rows");
        const auto m = static_cast<Eigen::Index>(js.size());
        RMatrix<double> S(m, m);
        for (Eigen::Index r = 0; r < m; ++r) {
            const auto row = reals(js[static_cast<std::size_t>(r)], "S row");
            if (static_cast<Eigen::Index>(row.size()) != m)
                throw ParseError("S must be square");
            for (Eigen::Index c = 0; c < m; ++c)
                S(r, c) = row[static_cast<std::size_t>(c)];
        }
        const auto bv = reals(field(j, "b"), "b");
        RVector<double> b = Eigen::Map<const RVector<double>>(bv.data(), static_cast<Eigen::Index>(bv.size()));
        return Quadric<double>::make(std::move(S), std::move(b), number(field(j, "c"), "c"));
    } catch (const ShapeError& e) {
        throw ParseError(e.what());
    } catch (const ContractViolation& e) {
        throw ParseError(e.what());
    }
}

json quadric_to_json(const Quadric<double>& q)
{
    json out;
    out["N"] = q.dim();
    out["S"] = to_json(q.S());
    out["b"] = to_json(q.b());
    out["c"] = q.c();
    return out;
}

json tolerances_to_json(const Tolerances& tol)
{
    json out;
    out["row_rel"] = tol.row_rel;
    out["oracle"] = tol.oracle;
    out["krein_psd"] = tol.krein_psd;
    out["contact"] = tol.contact;
    out["fixed_step"] = tol.fixed_step;
    out["max_iterations"] = tol.max_iterations;
    out["krein_grid"] = tol.krein_grid;
    out["krein_golden"] = tol.krein_golden;
    return out;
}

json report_to_json(const CriterionReport<double>& r)
{
    json out;
    out["row_lhs"] = r.row_lhs;
    out["rhs"] = r.rhs;
    out["row_verdict"] = r.row_verdict;
    out["criterion_selfmap"] = r.criterion_selfmap;
    out["linear"] = r.linear;
    out["oracle_sup"] = r.oracle_sup;
    out["oracle_selfmap"] = r.oracle_selfmap;
    out["krein_t"] = r.krein_t ? json(*r.krein_t) : json(nullptr);
    out["classification"] = to_string(r.classification);
    out["fixed_point"] = r.fixed_point ? to_json(*r.fixed_point) : json(nullptr);
    out["discrepancy_flag"] = r.discrepancy_flag;
    return out;
}

json factors_to_json(const std::vector<FactorMap<double>>& factors)
{
    json out = json::array();
    for (const auto& f : factors) {
        json item;
        if (f.kind == FactorKind::Reflection) {
            item["kind"] = "reflection";
            item["swap"] = json::array({f.i, f.j});
        } else {
            item["kind"] = "multilinear";
        }
        item["map"] = map_to_json(f.map);
        out.push_back(std::move(item));
    }
    return out;
}

json agreement_to_json(const AgreementSummary<double>& summary)
{
    json out;
    out["count"] = summary.rows.size();
    out["agree"] = summary.agree;
    out["criterion_only"] = summary.criterion_only;
    out["oracle_only"] = summary.oracle_only;
    out["columns"] = json::array({"index", "N", "family", "criterion_selfmap", "oracle_sup", "oracle_selfmap", "agree"});
    json rows = json::array();
    for (const auto& r : summary.rows)
        rows.push_back(json::array({r.index, r.dim, r.family, r.criterion_selfmap, r.oracle_sup, r.oracle_selfmap, r.agree}));
    out["rows"] = std::move(rows);
    return out;
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

namespace {

void write_number(std::ostream& os, double v)
{
    if (!std::isfinite(v)) {
        os << "null";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

void write(std::ostream& os, const json& j, int indent, int depth)
{
    const auto pad = [&](int d) {
        if (indent >= 0) {
            os << '\n';
            os << std::string(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    const bool leaf_array = j.is_array() && std::all_of(j.begin(), j.end(), [](const json& e) {
                                return e.is_primitive();
                            });
    if (j.is_object()) {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first)
                os << ',';
            first = false;
            pad(depth + 1);
            os << json(it.key()).dump() << (indent >= 0 ? ": " : ":");
            write(os, it.value(), indent, depth + 1);
        }
        pad(depth);
        os << '}';
    } else if (j.is_array()) {
        if (j.empty()) {
            os << "[]";
            return;
        }
        os << '[';
        bool first = true;
        for (const auto& e : j) {
            if (!first)
                os << (leaf_array && indent >= 0 ? ", " : ",");
            first = false;
            if (!leaf_array)
                pad(depth + 1);
            write(os, e, indent, depth + 1);
        }
        if (!leaf_array)
            pad(depth);
        os << ']';
    } else if (j.is_number_float()) {
        write_number(os, j.get<double>());
    } else {
        os << j.dump();
    }
}

} // namespace

std::string dump(const json& j, int indent)
{
    std::ostringstream os;
    write(os, j, indent, 0);
    return os.str();
}

} // namespace lfm::io
