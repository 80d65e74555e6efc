#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "livsic/basis.hpp"
#include "livsic/util.hpp"

using namespace livsic;
using basis::BasisSpec;
using basis::cd;
using basis::Family;
using basis::FourierRep;
using basis::FunctionRep;
using basis::UlamRep;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

FunctionRep random_trig(int order, int degree, util::Rng& rng) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * order + 1);
    for (int n = 1; n <= degree; ++n) {
        const cd a{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        c(order + n) = a;
        c(order - n) = std::conj(a);
    }
    c(order) = cd{rng.uniform(-1.0, 1.0), 0.0};
    return FourierRep(order, std::move(c), true);
}
} // namespace

TEST_CASE("projection of cos(2 pi x) has exact low modes") {
    const BasisSpec spec{Family::fourier, 8};
    const auto rep = basis::project([](double x) { return std::cos(kTwoPi * x); }, spec);
    const auto& f = std::get<FourierRep>(rep);
    for (int n = -8; n <= 8; ++n) {
        const cd expected = std::abs(n) == 1 ? cd{0.5, 0.0} : cd{0.0, 0.0};
        CHECK(std::abs(f.coef(n) - expected) <= 1e-14);
    }
    CHECK(f.real_valued());
}

TEST_CASE("projection of the constant on Ulam cells") {
    const BasisSpec spec{Family::ulam, 16};
    const auto rep = basis::project([](double) { return 1.0; }, spec);
    const auto& u = std::get<UlamRep>(rep);
    for (int i = 0; i < 16; ++i) CHECK(u.values()(i) == cd{1.0, 0.0});
}

TEST_CASE("indicator projection error is the exact boundary-cell remainder") {
    const double beta = 0.5 * (1.0 + std::sqrt(5.0));
    const double edge = 1.0 / beta;
    const int n = 4096;
    const BasisSpec spec{Family::ulam, n};
    const auto rep =
        basis::project([edge](double x) { return x < edge ? 1.0 : 0.0; }, spec);
    const auto& u = std::get<UlamRep>(rep);

    // the projection differs from the indicator only inside the cell holding
    // the jump; integrate the mismatch there in closed form
    const int cell = static_cast<int>(edge * n);
    const double lo = static_cast<double>(cell) / n;
    const double hi = static_cast<double>(cell + 1) / n;
    const bool cell_is_one = u.values()(cell).real() > 0.5;
    const double expected = cell_is_one ? hi - edge : edge - lo;

    double l1 = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == cell) continue;
        const double mid = (i + 0.5) / n;
        l1 += std::abs(u.values()(i).real() - (mid < edge ? 1.0 : 0.0)) / n;
    }
    CHECK(l1 == 0.0);  // all interior cells project exactly
    CHECK(expected <= 1.0 / n);
}

TEST_CASE("multiply: unit exponentials cancel") {
    const BasisSpec spec{Family::fourier, 8};
    Eigen::VectorXcd cp = Eigen::VectorXcd::Zero(17);
    cp(9) = cd{1.0, 0.0};  // e^{2 pi i x}
    Eigen::VectorXcd cm = Eigen::VectorXcd::Zero(17);
    cm(7) = cd{1.0, 0.0};  // e^{-2 pi i x}
    const auto prod = basis::multiply(FourierRep(8, cp), FourierRep(8, cm));
    const auto& p = std::get<FourierRep>(prod);
    for (int n = -8; n <= 8; ++n) {
        const cd expected = n == 0 ? cd{1.0, 0.0} : cd{0.0, 0.0};
        CHECK(std::abs(p.coef(n) - expected) <= 1e-13);
    }
}

TEST_CASE("multiply by a constant scales coefficients") {
    util::Rng rng(5);
    const auto a = random_trig(16, 10, rng);
    const auto c = basis::project([](double) { return 2.5; }, BasisSpec{Family::fourier, 16});
    const auto prod = basis::multiply(a, c);
    const auto diff = basis::sub(prod, basis::scale(a, cd{2.5, 0.0}));
    CHECK(basis::norm_l2(diff) <= 1e-13);
}

TEST_CASE("multiply agrees with the direct pointwise product") {
    util::Rng rng(17);
    const auto a = random_trig(64, 10, rng);
    const auto b = random_trig(64, 10, rng);
    const auto prod = basis::multiply(a, b);
    for (int i = 0; i < 100; ++i) {
        const double x = rng.uniform();
        const cd direct = basis::eval(a, x) * basis::eval(b, x);
        CHECK(std::abs(basis::eval(prod, x) - direct) <= 1e-12);
    }
}

TEST_CASE("integrate") {
    const BasisSpec fspec{Family::fourier, 8};
    CHECK(std::abs(basis::integrate(
              basis::project([](double x) { return std::cos(kTwoPi * x); }, fspec))) <= 1e-15);
    CHECK(std::abs(basis::integrate(basis::project([](double) { return 7.0; }, fspec)) -
                   cd{7.0, 0.0}) <= 1e-14);

    // two-level density rep normalizes to unit integral
    const double beta = 0.5 * (1.0 + std::sqrt(5.0));
    const BasisSpec uspec{Family::ulam, 4096};
    auto parry = basis::project(
        [beta](double x) { return x < 1.0 / beta ? 1.0 + 1.0 / beta : 1.0; }, uspec);
    const cd mass = basis::integrate(parry);
    const auto normalized = basis::scale(parry, cd{1.0, 0.0} / mass);
    CHECK(std::abs(basis::integrate(normalized) - cd{1.0, 0.0}) <= 1e-10);
}

TEST_CASE("exp_scale basics") {
    const BasisSpec spec{Family::fourier, 16};
    const auto f = basis::project([](double x) { return std::cos(kTwoPi * x); }, spec);

    const auto at_zero = basis::exp_scale(f, cd{0.0, 0.0});
    const auto& z = std::get<FourierRep>(at_zero);
    CHECK(std::abs(z.coef(0) - cd{1.0, 0.0}) <= 1e-14);
    for (int n = 1; n <= 16; ++n) {
        CHECK(std::abs(z.coef(n)) <= 1e-14);
        CHECK(std::abs(z.coef(-n)) <= 1e-14);
    }

    const auto c = basis::project([](double) { return 0.7; }, spec);
    const auto ec = basis::exp_scale(c, cd{1.3, 0.0});
    CHECK(std::abs(basis::eval(ec, 0.42) - std::exp(cd{0.0, 1.3 * 0.7})) <= 1e-13);
}

TEST_CASE("exp_scale has unit modulus for real t") {
    const BasisSpec spec{Family::fourier, 64};
    const auto f = basis::project([](double x) { return std::cos(kTwoPi * x); }, spec);
    const auto e = basis::exp_scale(f, cd{0.3, 0.0});
    util::Rng rng(29);
    for (int i = 0; i < 100; ++i) {
        const double x = rng.uniform();
        CHECK(std::abs(std::abs(basis::eval(e, x)) - 1.0) <= 1e-10);
    }
}

TEST_CASE("exp_scale matches its power series at small t") {
    const BasisSpec spec{Family::fourier, 32};
    const auto f = basis::project([](double x) { return std::cos(kTwoPi * x); }, spec);
    const cd t{0.05, 0.0};
    const cd it{0.0, 0.05};

    // series sum_k (i t f)^k / k!
    FunctionRep series = basis::project([](double) { return 1.0; }, spec);
    FunctionRep term = series;
    for (int k = 1; k <= 12; ++k) {
        term = basis::scale(basis::multiply(term, f), it / static_cast<double>(k));
        series = basis::add(series, term);
    }
    const auto direct = basis::exp_scale(f, t);
    CHECK(basis::norm_l2(basis::sub(series, direct)) <= 1e-12);
}

TEST_CASE("exp_scale rejects non-real observables") {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(17);
    c(9) = cd{1.0, 0.0};  // e^{2 pi i x} alone is not real-valued
    const FunctionRep f = FourierRep(8, std::move(c));
    CHECK_THROWS_AS(basis::exp_scale(f, cd{0.1, 0.0}), NonRealObservable);
}

TEST_CASE("Parseval: coefficient norm matches quadrature") {
    util::Rng rng(31);
    const auto f = random_trig(32, 16, rng);
    const double coef_norm = basis::norm_l2(f);
    const int q = 1 << 12;
    double quad = 0.0;
    for (int i = 0; i < q; ++i) quad += std::norm(basis::eval(f, (i + 0.5) / q)) / q;
    CHECK(std::abs(coef_norm - std::sqrt(quad)) <= 1e-10);
}

TEST_CASE("projection idempotence on band-limited inputs") {
    util::Rng rng(37);
    const auto f = random_trig(32, 16, rng);
    const auto again = basis::project_complex(
        [&f](double x) { return basis::eval(f, x); }, BasisSpec{Family::fourier, 32});
    CHECK(basis::norm_l2(basis::sub(f, again)) <= 1e-13);
}

TEST_CASE("Ulam variation of a monotone step equals total jump") {
    Eigen::VectorXcd v(8);
    const double steps[] = {0.0, 0.0, 1.0, 1.0, 2.5, 2.5, 4.0, 4.0};
    for (int i = 0; i < 8; ++i) v(i) = cd{steps[i], 0.0};
    const UlamRep u(std::move(v));
    CHECK(u.variation() == 4.0);
    CHECK(u.l1_norm() == doctest::Approx((0.0 + 0.0 + 1 + 1 + 2.5 + 2.5 + 4 + 4) / 8.0));
}

TEST_CASE("multiply is commutative and associative") {
    util::Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_trig(48, 8, rng);
        const auto b = random_trig(48, 8, rng);
        const auto c = random_trig(48, 8, rng);
        CHECK(basis::norm_l2(basis::sub(basis::multiply(a, b), basis::multiply(b, a))) <= 1e-12);
        const auto left = basis::multiply(basis::multiply(a, b), c);
        const auto right = basis::multiply(a, basis::multiply(b, c));
        CHECK(basis::norm_l2(basis::sub(left, right)) <= 1e-12);
    }
}

TEST_CASE("basis mismatch is rejected") {
    const auto a = basis::project([](double) { return 1.0; }, BasisSpec{Family::fourier, 8});
    const auto b = basis::project([](double) { return 1.0; }, BasisSpec{Family::fourier, 16});
    const auto u = basis::project([](double) { return 1.0; }, BasisSpec{Family::ulam, 17});
    CHECK_THROWS_AS(basis::multiply(a, b), BasisMismatch);
    CHECK_THROWS_AS(basis::multiply(a, u), BasisMismatch);
    CHECK_THROWS_AS(basis::inner(a, b), BasisMismatch);
}

TEST_CASE("real flag propagates through products") {
    util::Rng rng(43);
    const auto a = random_trig(16, 8, rng);
    const auto b = random_trig(16, 8, rng);
    CHECK(basis::real_hint(a));
    CHECK(basis::real_hint(basis::multiply(a, b)));
    CHECK(basis::real_valued(basis::multiply(a, b)));
}

TEST_CASE("Rep2D projection and evaluation round-trip") {
    const auto f = [](double x, double y) {
        return std::cos(kTwoPi * x) + 0.5 * std::sin(kTwoPi * y) + 0.25 * std::cos(kTwoPi * (x + y));
    };
    const auto rep = basis::Rep2D::project(f, 4, 4);
    util::Rng rng(47);
    for (int i = 0; i < 50; ++i) {
        const double x = rng.uniform();
        const double y = rng.uniform();
        CHECK(std::abs(rep.eval(x, y) - cd{f(x, y), 0.0}) <= 1e-12);
    }
    CHECK(std::abs(rep.integral()) <= 1e-14);
}
