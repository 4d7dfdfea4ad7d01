// lfm: command-line front end for linear fractional maps of the unit ball.
//
// Exit codes: 0 success, 2 malformed input, 3 degenerate or pole-violating
// map. Failures print one line "lfm: error: <kind>: <message>" to stderr.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lfm/agreement.hpp"
#include "lfm/json_io.hpp"

namespace {

using lfm::io::json;
using Map = lfm::LFMap<double>;

constexpr const char* kVersion = "1.0.0";

json metadata(const lfm::Tolerances& tol, std::optional<std::uint64_t> seed = std::nullopt)
{
    json meta;
    meta["tool"] = "lfm";
    meta["version"] = kVersion;
    meta["seed"] = seed ? json(*seed) : json(nullptr);
    meta["tolerances"] = lfm::io::tolerances_to_json(tol);
    return meta;
}

void emit(const json& j)
{
    std::cout << lfm::io::dump(j) << '\n';
}

Map load_map(const std::string& path)
{
    return lfm::io::map_from_json(lfm::io::read_json_file(path));
}

int fail(const char* kind, const std::string& what, int code)
{
    std::string line = what;
    for (auto& ch : line)
        if (ch == '\n')
            ch = ' ';
    std::cerr << "lfm: error: " << kind << ": " << line << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Linear fractional maps of the complex unit ball"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    lfm::Tolerances tol;
    std::string map_path, second_path, quadric_path;
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    std::size_t count = 1000;

    auto add_tolerances = [&](CLI::App* cmd) {
        cmd->add_option("--row-tol", tol.row_rel, "relative slack in the row test")->capture_default_str();
        cmd->add_option("--oracle-tol", tol.oracle, "containment slack: sup <= 1 + tol")->capture_default_str();
        cmd->add_option("--krein-tol", tol.krein_psd, "PSD slack for the Krein search")->capture_default_str();
        cmd->add_option("--contact-tol", tol.contact, "|sup - 1| band counted as boundary contact")
            ->capture_default_str();
        cmd->add_option("--step-tol", tol.fixed_step, "orbit convergence step")->capture_default_str();
        cmd->add_option("--max-iter", tol.max_iterations, "orbit length for fixed-point location")
            ->capture_default_str();
        cmd->add_option("--krein-grid", tol.krein_grid, "logarithmic grid size for t")->capture_default_str();
    };

    auto* check = app.add_subcommand("check", "row criterion, containment oracle, Krein search, classification");
    check->add_option("map", map_path, "map file")->required();
    add_tolerances(check);

    auto* image = app.add_subcommand("image", "center M and shape RU of the image ellipsoid, with polar factors");
    image->add_option("map", map_path, "map file")->required();

    auto* supnorm = app.add_subcommand("supnorm", "exact sup of |phi| over the closed ball");
    supnorm->add_option("map", map_path, "map file")->required();
    add_tolerances(supnorm);

    auto* decompose = app.add_subcommand("decompose", "factor into reflections and multi-linear maps");
    decompose->add_option("map", map_path, "map file")->required();

    auto* compose = app.add_subcommand("compose", "f o g");
    compose->add_option("f", map_path, "outer map file")->required();
    compose->add_option("g", second_path, "inner map file")->required();

    auto* invert = app.add_subcommand("invert", "inverse map");
    invert->add_option("map", map_path, "map file")->required();

    auto* krein = app.add_subcommand("krein", "search t with J - t^2 m^* J m >= 0");
    krein->add_option("map", map_path, "map file")->required();
    add_tolerances(krein);

    auto* sample = app.add_subcommand("sample", "Monte Carlo sup of |phi| on the unit sphere");
    sample->add_option("map", map_path, "map file")->required();
    sample->add_option("--n", samples, "number of samples")->capture_default_str();
    sample->add_option("--seed", seed, "random seed")->capture_default_str();

    auto* quadric = app.add_subcommand("quadric", "pull a quadric back through the map");
    quadric->add_option("map", map_path, "map file")->required();
    quadric->add_option("--quadric", quadric_path, "quadric file")->required();

    auto* agreement = app.add_subcommand("agreement", "row criterion vs oracle over a random ensemble");
    agreement->add_option("--n", count, "number of maps")->capture_default_str();
    agreement->add_option("--seed", seed, "random seed")->capture_default_str();
    add_tolerances(agreement);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) {
            const auto phi = load_map(map_path);
            json out;
            out["meta"] = metadata(tol);
            out["report"] = lfm::io::report_to_json(lfm::check(phi, tol));
            emit(out);
        } else if (image->parsed()) {
            const auto phi = load_map(map_path);
            const auto e = lfm::image_ellipsoid(phi);
            const auto polar = lfm::polar_decompose<double>(e.RU);
            json out;
            out["M"] = lfm::io::to_json(e.M);
            out["RU"] = lfm::io::to_json(e.RU);
            out["R"] = lfm::io::to_json(polar.P);
            out["U"] = lfm::io::to_json(polar.U);
            emit(out);
        } else if (supnorm->parsed()) {
            const auto v = lfm::oracle_is_selfmap(load_map(map_path), tol);
            json out;
            out["sup"] = v.sup;
            out["selfmap"] = v.selfmap;
            emit(out);
        } else if (decompose->parsed()) {
            const auto phi = load_map(map_path);
            const auto factors = lfm::decompose(phi);
            const auto back = lfm::recompose(factors);
            json out;
            out["factors"] = lfm::io::factors_to_json(factors);
            out["recomposition_residual"] =
                lfm::projective_residual<double>(lfm::associated_matrix(phi), lfm::associated_matrix(back));
            emit(out);
        } else if (compose->parsed()) {
            emit(lfm::io::map_to_json(lfm::compose(load_map(map_path), load_map(second_path))));
        } else if (invert->parsed()) {
            emit(lfm::io::map_to_json(lfm::invert(load_map(map_path))));
        } else if (krein->parsed()) {
            const auto t = lfm::krein_check(load_map(map_path), tol);
            json out;
            out["t"] = t ? json(*t) : json(nullptr);
            emit(out);
        } else if (sample->parsed()) {
            const auto phi = load_map(map_path);
            json out;
            out["n"] = samples;
            out["seed"] = seed;
            out["sup"] = lfm::monte_carlo_sup(phi, samples, seed);
            emit(out);
        } else if (quadric->parsed()) {
            const auto phi = load_map(map_path);
            const auto q = lfm::io::quadric_from_json(lfm::io::read_json_file(quadric_path));
            emit(lfm::io::quadric_to_json(lfm::pullback_map(q, phi)));
        } else if (agreement->parsed()) {
            json out;
            out["meta"] = metadata(tol, seed);
            out["table"] = lfm::io::agreement_to_json(lfm::agreement_report<double>(count, seed, tol));
            emit(out);
        }
    } catch (const lfm::io::ParseError& e) {
        return fail(e.kind(), e.what(), 2);
    } catch (const lfm::ShapeError& e) {
        return fail("malformed_input", e.what(), 2);
    } catch (const lfm::DegenerateMapError& e) {
        return fail(e.kind(), e.what(), 3);
    } catch (const lfm::PoleError& e) {
        return fail(e.kind(), e.what(), 3);
    } catch (const lfm::SingularityError& e) {
        return fail(e.kind(), e.what(), 3);
    } catch (const lfm::ContractViolation& e) {
        return fail(e.kind(), e.what(), 2);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 1);
    }
    return 0;
}
