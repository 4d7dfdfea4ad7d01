#include <doctest.h>

#include <numbers>

#include "lfm/lfmap.hpp"
#include "test_support.hpp"

using namespace lfm;
using namespace lfm::test;

TEST_CASE("make_lfmap validation")
{
    const auto id = identity_map<double>(2);
    CHECK(id.pole_free_on_ball());

    const auto ex = example_map();
    CHECK(ex.pole_free_on_ball());

    const auto edge = make_lfmap<double>(Mat::Identity(2, 2), vec({0, 0}), vec({1, 0}), cd(1));
    CHECK_FALSE(edge.pole_free_on_ball());

    // [[1, 1], [1, 1]]: z -> (z + 1) / (z + 1) is constant
    CHECK_THROWS_AS(make_lfmap<double>(Mat::Ones(1, 1), vec({1}), vec({1}), cd(1)), DegenerateMapError);
    CHECK_THROWS_AS(make_lfmap<double>(Mat::Identity(2, 2), vec({0}), vec({0, 0}), cd(1)), ShapeError);
    CHECK_THROWS_AS(make_lfmap<double>(Mat::Identity(1, 1), vec({std::nan("")}), vec({0}), cd(1)), ShapeError);
}

TEST_CASE("evaluate")
{
    Rng rng(11);
    const auto id = identity_map<double>(3);
    const Vec z = ball_point<double>(rng, 3);
    CHECK(max_diff(evaluate(id, z), z) == 0.0);

    const auto ex = example_map();
    CHECK(max_diff(evaluate(ex, vec({0, 0})), vec({1.0 / 3.0, 0})) <= 1e-16);
    // (1, 0) is a boundary fixed point
    CHECK(max_diff(evaluate(ex, vec({1, 0})), vec({1, 0})) <= 1e-16);
    // the denominator 3 - z1 vanishes at z1 = 3
    CHECK_THROWS_AS(evaluate(ex, vec({3, 0})), PoleError);
    CHECK_THROWS_AS(evaluate(ex, vec({0})), ShapeError);
}

TEST_CASE("inner product convention: <z, C> is conjugate-linear in C")
{
    // z -> z / (<z, C> + 1) with C = i: denominator is conj(i) z + 1 = 1 - i z
    const auto phi = make_lfmap<double>(Mat::Identity(1, 1), vec({0}), vec({cd(0, 1)}), cd(2));
    const cd z(0.3, -0.2);
    const cd expected = z / (std::conj(cd(0, 1)) * z + cd(2));
    CHECK(std::abs(evaluate(phi, vec({z}))(0) - expected) <= 1e-16);
}

TEST_CASE("associated matrix")
{
    CHECK(max_diff(associated_matrix(identity_map<double>(2)), Mat::Identity(3, 3)) == 0.0);
    Mat m(3, 3);
    m << 1, 0, 1, 0, 2, 0, -1, 0, 3;
    CHECK(max_diff(associated_matrix(example_map()), m) == 0.0);

    // complex C lands in the bottom row as C^*
    const auto phi = make_lfmap<double>(Mat::Identity(1, 1), vec({0}), vec({cd(0, 1)}), cd(2));
    CHECK(associated_matrix(phi)(1, 0) == cd(0, -1));
}

TEST_CASE("from_associated_matrix normalizes D and preserves evaluation")
{
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const auto phi = random_map(rng, 1 + trial % 4);
        const Mat m = associated_matrix(phi);
        const auto back = from_associated_matrix<double>(m);
        CHECK(std::abs(back.D() - cd(1)) <= 1e-15);
        const auto scaled = from_associated_matrix<double>(Mat(cd(2.0, -1.5) * m));
        for (int k = 0; k < 20; ++k) {
            const Vec z = ball_point<double>(rng, phi.dim());
            const Vec w = evaluate(phi, z);
            CHECK(max_diff(evaluate(back, z), w) <= 1e-12 * std::max(1.0, w.norm()));
            CHECK(max_diff(evaluate(scaled, z), w) <= 1e-12 * std::max(1.0, w.norm()));
        }
    }
    // D = 0 is left unscaled
    Mat swap(2, 2);
    swap << 0, 1, 1, 0;
    const auto inv = from_associated_matrix<double>(swap);
    CHECK(inv.D() == cd(0));
    CHECK(std::abs(evaluate(inv, vec({0.5}))(0) - 2.0) <= 1e-15);
    CHECK_THROWS_AS(from_associated_matrix<double>(Mat::Ones(2, 2)), DegenerateMapError);
}

TEST_CASE("projective invariance of evaluation")
{
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const auto phi = random_map(rng, 2);
        const cd lambda = gaussian_complex<double>(rng);
        // <z, C> is conjugate-linear in C, so C scales by conj(lambda)
        const auto psi =
            make_lfmap<double>(lambda * phi.A(), lambda * phi.B(), std::conj(lambda) * phi.C(), lambda * phi.D());
        const Vec z = ball_point<double>(rng, 2);
        const Vec w = evaluate(phi, z);
        CHECK(max_diff(evaluate(psi, z), w) <= 1e-12 * std::max(1.0, w.norm()));
    }
}

TEST_CASE("compose")
{
    Rng rng(14);
    const auto ex = example_map();
    const auto with_id = compose(ex, identity_map<double>(2));
    const auto round = compose(ex, invert(ex));
    for (int k = 0; k < 20; ++k) {
        const Vec z = ball_point<double>(rng, 2);
        CHECK(max_diff(evaluate(with_id, z), evaluate(ex, z)) <= 1e-12);
        CHECK(max_diff(evaluate(round, z), z) <= 1e-12);
    }
    CHECK_THROWS_AS(compose(ex, identity_map<double>(3)), ShapeError);
}

TEST_CASE("compose agrees with pointwise composition and multiplies associated matrices")
{
    Rng rng(15);
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index n = 1 + trial % 4;
        const auto phi = random_map(rng, n);
        const auto psi = random_map(rng, n);
        const auto comp = compose(phi, psi);

        const Mat prod = associated_matrix(phi) * associated_matrix(psi);
        const Mat got = associated_matrix(comp);
        // ratio of corresponding entries is a single constant
        Eigen::Index bi = 0, bj = 0;
        prod.cwiseAbs().maxCoeff(&bi, &bj);
        const cd ratio = got(bi, bj) / prod(bi, bj);
        CHECK(max_diff(Mat(ratio * prod), got) <= 1e-10 * got.cwiseAbs().maxCoeff());

        int used = 0;
        for (int k = 0; k < 200 && used < 50; ++k) {
            const Vec z = ball_point<double>(rng, n);
            Vec inner, expected;
            try {
                inner = evaluate(psi, z);
                expected = evaluate(phi, inner);
            } catch (const PoleError&) {
                continue;
            }
            if (std::abs(denominator(psi, z)) < 1e-3 || std::abs(denominator(phi, inner)) < 1e-3)
                continue;
            ++used;
            CHECK(max_diff(evaluate(comp, z), expected) <= 1e-10 * std::max(1.0, expected.norm()));
        }
    }
}

TEST_CASE("invert")
{
    Rng rng(16);
    const auto id = identity_map<double>(2);
    CHECK(max_diff(associated_matrix(invert(id)), Mat::Identity(3, 3)) == 0.0);

    const auto dil = make_lfmap<double>(2.0 * Mat::Identity(2, 2), vec({0, 0}), vec({0, 0}), cd(1));
    CHECK(max_diff(invert(dil).A(), Mat(0.5 * Mat::Identity(2, 2))) <= 1e-16);

    const auto ex = example_map();
    const auto inv = invert(ex);
    for (int k = 0; k < 20; ++k) {
        const Vec z = ball_point<double>(rng, 2);
        CHECK(max_diff(evaluate(inv, evaluate(ex, z)), z) <= 1e-9);
    }
}

TEST_CASE("classical disk criterion examples")
{
    auto scalar = [](cd a, cd b, cd c, cd d) {
        // c is the coefficient of z in the denominator, so C = conj(c)
        return make_lfmap<double>(Mat::Constant(1, 1, a), vec({b}), vec({std::conj(c)}), d);
    };
    const auto id = classical_disk_criterion(scalar(1, 0, 0, 1));
    CHECK(id.selfmap);
    CHECK(id.margin == 0.0);

    const auto half = classical_disk_criterion(scalar(0.5, 0, 0, 1));
    CHECK(half.selfmap);
    CHECK(half.margin == doctest::Approx(0.5));

    const auto shift = classical_disk_criterion(scalar(1, 1, 0, 1));
    CHECK_FALSE(shift.selfmap);
    CHECK(shift.margin == doctest::Approx(-1.0));

    CHECK_THROWS_AS(classical_disk_criterion(example_map()), ContractViolation);
}

TEST_CASE("classical disk criterion matches boundary sampling")
{
    // sup over the circle of |phi| decides self-mapping for pole-free maps
    Rng rng(17);
    int tested = 0;
    for (int trial = 0; trial < 400 && tested < 150; ++trial) {
        const auto phi = random_pole_free_map<double>(rng, 1, 0.8);
        const auto crit = classical_disk_criterion(phi);
        if (std::abs(crit.margin) <= 1e-6)
            continue;
        ++tested;
        auto modulus = [&](double theta) { return std::abs(evaluate(phi, vec({std::polar(1.0, theta)}))(0)); };
        const int samples = 10000;
        const double h = 2.0 * std::numbers::pi / samples;
        int best = 0;
        double sup = 0;
        for (int k = 0; k < samples; ++k) {
            const double v = modulus(h * k);
            if (v > sup) {
                sup = v;
                best = k;
            }
        }
        // refine the sampled max by ternary search around the best sample
        double lo = h * (best - 1), hi = h * (best + 1);
        for (int it = 0; it < 200; ++it) {
            const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
            if (modulus(m1) < modulus(m2))
                lo = m1;
            else
                hi = m2;
        }
        sup = std::max(sup, modulus((lo + hi) / 2));
        CHECK(crit.selfmap == (sup <= 1.0 + 1e-9));
    }
    CHECK(tested >= 100);
}
