#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "livsic/maps.hpp"
#include "livsic/util.hpp"

using namespace livsic;
using maps::AnalyticCircleMap;
using maps::BetaTransformation;
using maps::MapModel;
using maps::TsujiiSkewProduct;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("evaluate on the three map families") {
    const MapModel doubling = AnalyticCircleMap(2, 0.0);
    CHECK(maps::evaluate(doubling, 0.3) == doctest::Approx(0.6).epsilon(1e-15));

    const MapModel beta = BetaTransformation(2.5);
    CHECK(maps::evaluate(beta, 0.9) == doctest::Approx(0.25).epsilon(1e-13));

    const TsujiiSkewProduct skew(3);
    const Eigen::Vector2d image = skew.apply({0.25, 0.1});
    CHECK(image.x() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(image.y() == doctest::Approx(0.1).epsilon(1e-12));  // cos(pi/2) = 0
}

TEST_CASE("beta endpoint convention") {
    CHECK(BetaTransformation(2.5).apply(1.0) == doctest::Approx(0.5));
    CHECK(BetaTransformation(2.0).apply(1.0) == doctest::Approx(0.0));
}

TEST_CASE("inverse branches: closed forms") {
    const MapModel doubling = AnalyticCircleMap(2, 0.0);
    const auto branches = maps::inverse_branches(doubling, 0.5);
    REQUIRE(branches.size() == 2);
    CHECK(branches[0].preimage == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(branches[1].preimage == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(branches[0].derivative == doctest::Approx(2.0));

    const MapModel beta = BetaTransformation(2.5);
    const auto bb = maps::inverse_branches(beta, 0.9);
    REQUIRE(bb.size() == 2);  // j=2 would give 1.16 > 1
    CHECK(bb[0].preimage == doctest::Approx(0.36).epsilon(1e-14));
    CHECK(bb[1].preimage == doctest::Approx(0.76).epsilon(1e-14));
    CHECK(bb[0].derivative == doctest::Approx(2.5));
}

TEST_CASE("inverse branches: Newton residual on the perturbed map") {
    const AnalyticCircleMap map(2, 0.05);
    const auto branches = maps::inverse_branches(map, 0.4);
    REQUIRE(branches.size() == 2);
    for (const auto& br : branches) CHECK(std::abs(map.apply(br.preimage) - 0.4) <= 1e-13);
}

TEST_CASE("2D inverse branches and derivative structure") {
    const TsujiiSkewProduct skew(3);
    const Eigen::Vector2d p{0.3, 0.7};
    const auto branches = maps::inverse_branches(skew, p);
    REQUIRE(branches.size() == 3);
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const auto image = skew.apply(branches[i].preimage);
        CHECK(maps::circle_distance(image.x(), p.x()) <= 1e-12);
        CHECK(maps::circle_distance(image.y(), p.y()) <= 1e-12);
        CHECK(branches[i].derivative(0, 0) == doctest::Approx(3.0));
        CHECK(branches[i].derivative(0, 1) == doctest::Approx(0.0));
        CHECK(branches[i].derivative(1, 1) == doctest::Approx(1.0));
        if (i > 0) CHECK(branches[i].preimage.x() > branches[i - 1].preimage.x());
    }
}

TEST_CASE("branch completeness over random points") {
    util::Rng rng(7);
    const std::vector<MapModel> models = {AnalyticCircleMap(2, 0.0), AnalyticCircleMap(3, 0.08),
                                          BetaTransformation(2.5),
                                          BetaTransformation(0.5 * (1.0 + std::sqrt(5.0)))};
    for (const auto& model : models) {
        for (int i = 0; i < 200; ++i) {
            const double x = rng.uniform();
            for (const auto& br : maps::inverse_branches(model, x))
                CHECK(maps::circle_distance(maps::evaluate(model, br.preimage), x) <= 1e-12);
        }
    }
}

TEST_CASE("beta branch counts and image tiling") {
    const double beta = 2.5;
    const BetaTransformation map(beta);
    // interior branch count is floor(beta - x) + 1
    for (int i = 0; i < 10000; ++i) {
        const double x = (i + 0.5) / 10000.0;
        const auto expected = static_cast<std::size_t>(std::floor(beta - x)) + 1;
        CHECK(maps::inverse_branches(map, x).size() == expected);
    }
    // branch images tile [0, 1]: total measure 1
    double total = 0.0;
    for (int j = 0; j < map.branch_count_max(); ++j) {
        const double lo = j / beta;
        const double hi = std::min((j + 1) / beta, 1.0);
        if (hi > lo) total += hi - lo;
    }
    CHECK(std::abs(total - 1.0) <= 1e-10);
}

TEST_CASE("derivative consistency against finite differences") {
    util::Rng rng(11);
    const std::vector<MapModel> models = {AnalyticCircleMap(2, 0.05), AnalyticCircleMap(4, -0.1),
                                          BetaTransformation(3.3)};
    const double h = 1e-6;
    for (const auto& model : models) {
        for (int i = 0; i < 100; ++i) {
            const double x = rng.uniform(0.05, 0.95);
            double lift_plus, lift_minus;
            if (const auto* c = std::get_if<AnalyticCircleMap>(&model)) {
                lift_plus = c->lift(x + h);
                lift_minus = c->lift(x - h);
            } else {
                const double beta = std::get<BetaTransformation>(model).beta();
                lift_plus = beta * (x + h);
                lift_minus = beta * (x - h);
            }
            const double fd = (lift_plus - lift_minus) / (2.0 * h);
            CHECK(fd == doctest::Approx(maps::derivative(model, x)).epsilon(1e-6));
        }
    }
}

TEST_CASE("periodic points of the doubling map, n = 2") {
    const MapModel doubling = AnalyticCircleMap(2, 0.0);
    const auto orbits = maps::periodic_points(doubling, 2);
    REQUIRE(orbits.size() == 2);
    CHECK(orbits[0].period == 1);
    CHECK(orbits[0].points[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(orbits[1].period == 2);
    REQUIRE(orbits[1].points.size() == 2);
    CHECK(orbits[1].points[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(orbits[1].points[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("fixed points of the degree-3 map") {
    const MapModel map = AnalyticCircleMap(3, 0.0);
    const auto orbits = maps::periodic_points(map, 1);
    REQUIRE(orbits.size() == 2);
    CHECK(orbits[0].points[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(orbits[1].points[0] == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("periodic points continue in eps: count and closure") {
    const MapModel map = AnalyticCircleMap(2, 0.05);
    const auto orbits = maps::periodic_points(map, 3);
    std::size_t points = 0;
    for (const auto& orbit : orbits) {
        points += orbit.points.size();
        double x = orbit.points[0];
        for (int i = 0; i < orbit.period; ++i) x = maps::evaluate(map, x);
        CHECK(maps::circle_distance(x, orbit.points[0]) <= 1e-12);
        CHECK(orbit.closure_residual <= 1e-12);
    }
    CHECK(points == 7);  // 2^3 - 1
}

TEST_CASE("periodic point count matches k^n - 1 with orbits minimal") {
    const MapModel map = AnalyticCircleMap(2, 0.0);
    for (const int n : {1, 2, 3, 4, 6}) {
        const auto orbits = maps::periodic_points(map, n);
        std::size_t count = 0;
        for (const auto& orbit : orbits) {
            CHECK(n % orbit.period == 0);
            // points are pairwise distinct
            for (std::size_t i = 0; i < orbit.points.size(); ++i)
                for (std::size_t j = i + 1; j < orbit.points.size(); ++j)
                    CHECK(maps::circle_distance(orbit.points[i], orbit.points[j]) > 1e-9);
            count += orbit.points.size();
        }
        CHECK(count == (1u << n) - 1);
    }
}

TEST_CASE("beta periodic points validate against the orbit") {
    const MapModel map = BetaTransformation(0.5 * (1.0 + std::sqrt(5.0)));
    const auto orbits = maps::periodic_points(map, 4);
    CHECK(!orbits.empty());
    for (const auto& orbit : orbits) {
        double x = orbit.points[0];
        for (int i = 0; i < orbit.period; ++i) x = maps::evaluate(map, x);
        CHECK(maps::circle_distance(x, orbit.points[0]) <= 1e-10);
    }
}

TEST_CASE("error paths") {
    CHECK_THROWS_AS(AnalyticCircleMap(1, 0.0), Error);
    CHECK_THROWS_AS(AnalyticCircleMap(2, 0.2), Error);  // 2 pi 0.2 > 1
    CHECK_THROWS_AS(BetaTransformation(1.0), Error);
    const MapModel map = AnalyticCircleMap(2, 0.0);
    CHECK_THROWS_AS(maps::periodic_points(map, 21), EnumerationOverflow);
    const MapModel skew = TsujiiSkewProduct(2);
    CHECK_THROWS_AS(maps::periodic_points(skew, 2), IncompatiblePair);
    CHECK_THROWS_AS(maps::evaluate(skew, 0.5), IncompatiblePair);
}

TEST_CASE("tsujii jacobian and chain rule at random points") {
    const TsujiiSkewProduct skew(5);
    util::Rng rng(23);
    for (int i = 0; i < 20; ++i) {
        const Eigen::Vector2d p{rng.uniform(), rng.uniform()};
        const Eigen::Matrix2d d = skew.derivative(p);
        CHECK(d.determinant() == doctest::Approx(5.0).epsilon(1e-14));
        CHECK(d(1, 0) == doctest::Approx(-kTwoPi * 5.0 * std::sin(kTwoPi * p.x())).epsilon(1e-12));
    }
}
