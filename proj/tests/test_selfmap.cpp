#include <doctest.h>

#include "lfm/selfmap.hpp"
#include "test_support.hpp"

using namespace lfm;
using namespace lfm::test;

namespace {

LFMap<double> linear(const Mat& A, const Vec& B)
{
    return make_lfmap<double>(A, B, Vec::Zero(B.size()), cd(1));
}

/// min eigenvalue of J - t^2 m^* J m, computed without the library helpers
double krein_margin(const LFMap<double>& phi, double t)
{
    const auto n = phi.dim();
    const Mat m = associated_matrix(phi);
    Mat J = Mat::Identity(n + 1, n + 1);
    J(n, n) = -1;
    Mat H = J - t * t * m.adjoint() * J * m;
    H = (H + H.adjoint()).eval() / 2.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    return es.eigenvalues().minCoeff();
}

} // namespace

TEST_CASE("row criterion on the worked example")
{
    const auto r = row_criterion(example_map());
    REQUIRE(r.row_lhs.size() == 2);
    CHECK(r.rhs == doctest::Approx(64.0).epsilon(1e-12));
    CHECK(std::abs(r.row_lhs[0] - 64.0) <= 1e-9 * 64.0);
    // 16 + 32 - 0
    CHECK(std::abs(r.row_lhs[1] - 48.0) <= 1e-9 * 64.0);
    CHECK(r.row_verdict[0]);
    CHECK(r.row_verdict[1]);
    CHECK(r.selfmap);
    CHECK_FALSE(r.linear);
}

TEST_CASE("row criterion: automorphisms sit on the equality case")
{
    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_automorphism<double>(rng, 1 + trial % 5);
        const auto r = row_criterion(automorphism_map(a));
        for (const double lhs : r.row_lhs)
            CHECK(std::abs(lhs - r.rhs) <= 1e-9 * r.rhs);
        const auto o = oracle_is_selfmap(automorphism_map(a));
        CHECK(std::abs(o.sup - 1.0) <= 1e-9);
    }
}

TEST_CASE("row criterion rejects maps with a pole on the closed ball")
{
    const auto pole = make_lfmap<double>(Mat::Identity(2, 2), vec({0, 0}), vec({1, 0}), cd(1));
    CHECK_THROWS_AS(row_criterion(pole), PoleError);
    CHECK_THROWS_AS(oracle_is_selfmap(pole), PoleError);
}

TEST_CASE("linear criterion")
{
    const auto id = linear_criterion(identity_map<double>(2));
    CHECK(id.row_lhs == std::vector<double>{1.0, 1.0});
    CHECK(id.selfmap);
    CHECK(id.linear);

    const auto half = linear_criterion(linear(Mat(0.5 * Mat::Identity(2, 2)), vec({0, 0})));
    CHECK(half.row_lhs == std::vector<double>{0.25, 0.25});
    CHECK(half.selfmap);

    // translation by e1: row 1 gives 1 + 1 - 2 = 0, row 2 gives 1 + 1 - 0 = 2
    const auto shift = linear(Mat::Identity(2, 2), vec({1, 0}));
    const auto rs = linear_criterion(shift);
    CHECK(rs.row_lhs[0] == doctest::Approx(0.0));
    CHECK(rs.row_lhs[1] == doctest::Approx(2.0));
    CHECK_FALSE(rs.selfmap);
    CHECK(oracle_is_selfmap(shift).sup == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_FALSE(check(shift).discrepancy_flag);

    CHECK_THROWS_AS(linear_criterion(example_map()), ContractViolation);

    // D != 1 is reported at the |D|^4 scale
    const auto scaled = make_lfmap<double>(Mat(2.0 * Mat::Identity(2, 2)), vec({0, 0}), vec({0, 0}), cd(2));
    const auto rd = row_criterion(scaled);
    CHECK(rd.linear);
    CHECK(rd.rhs == doctest::Approx(16.0));
    CHECK(rd.row_lhs[0] == doctest::Approx(16.0));
}

TEST_CASE("linear criterion can pass on a map that leaves the ball")
{
    // z + (1/2, 1/2): both rows give |B|^2 + 1 - 1 = 1/2, but the image
    // reaches |B| + 1 = 1 + sqrt(1/2)
    const auto phi = linear(Mat::Identity(2, 2), vec({0.5, 0.5}));
    const auto r = check(phi);
    CHECK(r.row_lhs[0] == doctest::Approx(0.5));
    CHECK(r.row_lhs[1] == doctest::Approx(0.5));
    CHECK(r.criterion_selfmap);
    CHECK(r.oracle_sup == doctest::Approx(1.0 + std::sqrt(0.5)).epsilon(1e-12));
    CHECK_FALSE(r.oracle_selfmap);
    CHECK(r.discrepancy_flag);
    CHECK(r.classification == FixedPointClass::NotSelfmap);
}

TEST_CASE("krein check examples")
{
    const auto id = krein_check(identity_map<double>(2));
    REQUIRE(id.has_value());
    CHECK(std::abs(*id - 1.0) <= 1e-12);

    const auto ex = example_map();
    const auto t = krein_check(ex);
    REQUIRE(t.has_value());
    CHECK(krein_margin(ex, *t) >= -1e-10);
    // for the stored matrix (D = 3) the feasible set is the single point t = 1/2
    CHECK(std::abs(*t - 0.5) <= 1e-4);
    CHECK(krein_margin(ex, 0.45) < -1e-3);
    CHECK(krein_margin(ex, 0.55) < -1e-3);

    const auto dil = linear(Mat(2.0 * Mat::Identity(2, 2)), vec({0, 0}));
    CHECK_FALSE(krein_check(dil).has_value());
}

TEST_CASE("krein feasibility implies containment")
{
    Rng rng(42);
    int feasible = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = 1 + trial % 4;
        const auto phi = trial % 2 ? random_map(rng, n) : random_selfmap<double>(rng, n, 0.98);
        const auto o = oracle_is_selfmap(phi);
        const auto t = krein_check(phi);
        if (t) {
            ++feasible;
            CHECK(krein_margin(phi, *t) >= -1e-9);
        }
        if (std::abs(o.sup - 1.0) <= 1e-6)
            continue;
        CHECK(t.has_value() == o.selfmap);
    }
    CHECK(feasible >= 50);
}

TEST_CASE("containment oracle examples")
{
    const auto id = oracle_is_selfmap(identity_map<double>(3));
    CHECK(std::abs(id.sup - 1.0) <= 1e-15);
    CHECK(id.selfmap);

    const auto ex = oracle_is_selfmap(example_map());
    CHECK(std::abs(ex.sup - 1.0) <= 1e-9);
    CHECK(ex.selfmap);

    const auto off = oracle_is_selfmap(linear(Mat(0.5 * Mat::Identity(2, 2)), vec({0.75, 0})));
    CHECK(std::abs(off.sup - 1.25) <= 1e-12);
    CHECK_FALSE(off.selfmap);
}

TEST_CASE("monte carlo sup")
{
    CHECK(std::abs(monte_carlo_sup(identity_map<double>(3), 1000, 7) - 1.0) <= 1e-12);

    const double ex = monte_carlo_sup(example_map(), 100000, 1);
    CHECK(ex >= 0.99);
    CHECK(ex <= 1.0 + 1e-9);

    // deterministic per seed, and a prefix of the same stream for smaller n
    const auto phi = example_map();
    CHECK(monte_carlo_sup(phi, 5000, 3) == monte_carlo_sup(phi, 5000, 3));
    CHECK(monte_carlo_sup(phi, 4096, 3) <= monte_carlo_sup(phi, 9000, 3));
    CHECK_THROWS_AS(monte_carlo_sup(phi, 0, 3), ContractViolation);
}

TEST_CASE("monte carlo sup never exceeds the oracle")
{
    Rng rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index n = 1 + trial % 4;
        const auto phi = trial % 2 ? random_map(rng, n) : random_selfmap<double>(rng, n);
        const auto o = oracle_is_selfmap(phi);
        const double mc = monte_carlo_sup(phi, 20000, static_cast<std::uint64_t>(trial));
        CHECK(mc <= o.sup + 1e-9);
        if (o.selfmap)
            CHECK(mc <= 1.0 + 1e-9);
    }
}

TEST_CASE("fixed point classification")
{
    SUBCASE("contraction toward the origin")
    {
        const auto phi = linear(Mat(0.5 * Mat::Identity(2, 2)), vec({0, 0}));
        const auto r = check(phi);
        CHECK(r.classification == FixedPointClass::InteriorFixedPoint);
        REQUIRE(r.fixed_point.has_value());
        CHECK(r.fixed_point->norm() <= 1e-12);
    }
    SUBCASE("worked example: boundary Denjoy-Wolff point (1, 0)")
    {
        const auto r = check(example_map());
        CHECK(r.classification == FixedPointClass::BoundaryDenjoyWolff);
        REQUIRE(r.fixed_point.has_value());
        CHECK(max_diff(*r.fixed_point, vec({1, 0})) <= 1e-9);
        // row 1 equality and boundary contact co-occur
        CHECK(std::abs(r.row_lhs[0] - r.rhs) <= 1e-9 * r.rhs);
        CHECK(std::abs(r.oracle_sup - 1.0) <= 1e-9);
        CHECK_FALSE(r.discrepancy_flag);
        CHECK(r.krein_t.has_value());
    }
    SUBCASE("involutions fix a point inside the ball")
    {
        const auto phi = automorphism_map(BallAutomorphism<double>::involution(vec({0.5, cd(0, 0.3)})));
        const auto r = check(phi);
        CHECK(r.classification == FixedPointClass::InteriorFixedPoint);
        REQUIRE(r.fixed_point.has_value());
        CHECK(r.fixed_point->norm() < 1.0);
        CHECK(max_diff(evaluate(phi, *r.fixed_point), *r.fixed_point) <= 1e-9);
    }
    SUBCASE("rotation")
    {
        const auto phi = linear(diag({std::polar(1.0, 0.7), std::polar(1.0, -1.9)}), vec({0, 0}));
        const auto r = check(phi);
        CHECK(r.classification == FixedPointClass::InteriorFixedPoint);
        CHECK(r.fixed_point->norm() <= 1e-12);
    }
    SUBCASE("hyperbolic automorphism of the disc")
    {
        // (z + a) / (1 + a z) pushes every orbit to 1
        const double a = 0.5;
        const auto phi = make_lfmap<double>(Mat::Identity(1, 1), vec({a}), vec({a}), cd(1));
        const auto r = check(phi);
        CHECK(r.classification == FixedPointClass::BoundaryDenjoyWolff);
        CHECK(std::abs((*r.fixed_point)(0) - 1.0) <= 1e-9);
    }
    SUBCASE("not a self-map")
    {
        const auto r = check(linear(Mat(2.0 * Mat::Identity(2, 2)), vec({0, 0})));
        CHECK(r.classification == FixedPointClass::NotSelfmap);
        CHECK_FALSE(r.fixed_point.has_value());
        CHECK(std::string(to_string(r.classification)) == "not_selfmap");
    }
}

TEST_CASE("interior classification matches a located fixed point")
{
    Rng rng(44);
    for (int trial = 0; trial < 40; ++trial) {
        const auto phi = random_selfmap<double>(rng, 1 + trial % 4, 0.9);
        const auto r = check(phi);
        REQUIRE(r.oracle_selfmap);
        CHECK(r.classification == FixedPointClass::InteriorFixedPoint);
        REQUIRE(r.fixed_point.has_value());
        CHECK(r.fixed_point->norm() < 1.0);
        CHECK(max_diff(evaluate(phi, *r.fixed_point), *r.fixed_point) <= 1e-9);
    }
}
