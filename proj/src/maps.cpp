#include "livsic/maps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace livsic::maps {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBranchResidualTol = 1e-13;
constexpr double kPeriodicResidualTol = 1e-12;
constexpr double kOrbitMergeTol = 1e-9;
constexpr int kNewtonCap = 50;
constexpr double kEnumerationGuard = 1e6;

/// Newton solve of lift(y) = target for an analytic circle map. The lift is
/// strictly increasing with derivative > 1, so the iteration is globally
/// convergent; steps are damped when the derivative drops below 1.1.
double newton_branch(const AnalyticCircleMap& map, double target, double seed) {
    double y = seed;
    for (int it = 0; it < kNewtonCap; ++it) {
        const double r = map.lift(y) - target;
        if (std::abs(r) <= kBranchResidualTol) return y;
        const double d = map.derivative(y);
        double step = r / d;
        if (std::abs(d) < 1.1) step *= 0.5;
        y -= step;
    }
    if (std::abs(map.lift(y) - target) <= kBranchResidualTol) return y;
    throw NewtonDivergence("inverse branch solve did not reach residual 1e-13 in 50 iterations");
}

} // namespace

double wrap_unit(double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y -= 1.0;
    if (y < 0.0) y = 0.0;
    return y;
}

double circle_distance(double a, double b) {
    const double d = std::abs(wrap_unit(a) - wrap_unit(b));
    return std::min(d, 1.0 - d);
}

AnalyticCircleMap::AnalyticCircleMap(int degree, double eps) : degree_(degree), eps_(eps) {
    if (degree < 2) throw Error("circle map degree must be >= 2");
    if (kTwoPi * std::abs(eps) >= degree - 1)
        throw Error("circle map not expanding: need 2*pi*|eps| < k-1");
}

double AnalyticCircleMap::apply(double x) const { return wrap_unit(lift(x)); }

double AnalyticCircleMap::lift(double x) const {
    return degree_ * x + eps_ * std::sin(kTwoPi * x);
}

double AnalyticCircleMap::derivative(double x) const {
    return degree_ + kTwoPi * eps_ * std::cos(kTwoPi * x);
}

BetaTransformation::BetaTransformation(double beta) : beta_(beta) {
    if (!(beta > 1.0)) throw Error("beta transformation needs beta > 1");
}

int BetaTransformation::branch_count_max() const {
    return static_cast<int>(std::ceil(beta_));
}

double BetaTransformation::apply(double x) const {
    if (x >= 1.0) return beta_ - std::floor(beta_);
    return wrap_unit(beta_ * x);
}

TsujiiSkewProduct::TsujiiSkewProduct(int m) : m_(m) {
    if (m < 2) throw Error("skew product needs m >= 2");
}

Eigen::Vector2d TsujiiSkewProduct::apply(const Eigen::Vector2d& p) const {
    return {wrap_unit(m_ * p.x()), wrap_unit(p.y() + m_ * std::cos(kTwoPi * p.x()))};
}

Eigen::Matrix2d TsujiiSkewProduct::derivative(const Eigen::Vector2d& p) const {
    Eigen::Matrix2d d;
    d << static_cast<double>(m_), 0.0, -kTwoPi * m_ * std::sin(kTwoPi * p.x()), 1.0;
    return d;
}

bool is_one_dimensional(const MapModel& map) {
    return !std::holds_alternative<TsujiiSkewProduct>(map);
}

double evaluate(const MapModel& map, double x) {
    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, TsujiiSkewProduct>) {
                throw IncompatiblePair("scalar evaluate called on a 2D map");
            } else {
                return m.apply(x);
            }
        },
        map);
}

Eigen::Vector2d evaluate(const TsujiiSkewProduct& map, const Eigen::Vector2d& p) {
    return map.apply(p);
}

double derivative(const MapModel& map, double x) {
    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, TsujiiSkewProduct>) {
                throw IncompatiblePair("scalar derivative called on a 2D map");
            } else {
                return m.derivative(x);
            }
        },
        map);
}

std::vector<Branch1D> inverse_branches(const AnalyticCircleMap& map, double x) {
    std::vector<Branch1D> out;
    out.reserve(map.degree());
    for (int j = 0; j < map.degree(); ++j) {
        const double target = x + j;
        const double seed = target / map.degree();
        const double y = newton_branch(map, target, seed);
        out.push_back({y, std::abs(map.derivative(y))});
    }
    return out;
}

std::vector<Branch1D> inverse_branches(const BetaTransformation& map, double x) {
    std::vector<Branch1D> out;
    for (int j = 0; j < map.branch_count_max(); ++j) {
        const double y = (x + j) / map.beta();
        if (y <= 1.0) out.push_back({y, map.beta()});
    }
    return out;
}

std::vector<Branch1D> inverse_branches(const MapModel& map, double x) {
    return std::visit(
        [&](const auto& m) -> std::vector<Branch1D> {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, TsujiiSkewProduct>) {
                throw IncompatiblePair("1D inverse_branches called on a 2D map");
            } else {
                return inverse_branches(m, x);
            }
        },
        map);
}

std::vector<Branch2D> inverse_branches(const TsujiiSkewProduct& map, const Eigen::Vector2d& p) {
    std::vector<Branch2D> out;
    out.reserve(map.m());
    for (int j = 0; j < map.m(); ++j) {
        const double xp = (p.x() + j) / map.m();
        const double yp = wrap_unit(p.y() - map.m() * std::cos(kTwoPi * xp));
        const Eigen::Vector2d pre{xp, yp};
        out.push_back({pre, map.derivative(pre)});
    }
    return out;
}

namespace {

/// F^n and (F^n)' for the eps-lift of an analytic circle map.
std::pair<double, double> lift_iterate(int k, double eps, double x, int n) {
    double v = x;
    double d = 1.0;
    for (int i = 0; i < n; ++i) {
        d *= k + kTwoPi * eps * std::cos(kTwoPi * v);
        v = k * v + eps * std::sin(kTwoPi * v);
    }
    return {v, d};
}

/// Period-n point candidates of an analytic circle map: roots of
/// F^n(x) - x = j for j = 0 .. k^n - 2, continued in eps from the
/// closed-form eps=0 solutions j / (k^n - 1).
std::vector<double> circle_period_candidates(const AnalyticCircleMap& map, int n) {
    const double total = std::pow(static_cast<double>(map.degree()), n);
    if (total > kEnumerationGuard)
        throw EnumerationOverflow("branch_count^n exceeds the 1e6 enumeration guard");
    const auto count = static_cast<std::int64_t>(std::llround(total)) - 1;

    std::vector<double> points;
    points.reserve(static_cast<std::size_t>(count));
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(map.eps()) / 0.01)));
    for (std::int64_t j = 0; j < count; ++j) {
        double x = static_cast<double>(j) / static_cast<double>(count);
        if (map.eps() != 0.0) {
            for (int s = 1; s <= steps; ++s) {
                const double eps_s = map.eps() * s / steps;
                for (int it = 0; it < kNewtonCap; ++it) {
                    const auto [fx, dfx] = lift_iterate(map.degree(), eps_s, x, n);
                    const double g = fx - x - static_cast<double>(j);
                    if (std::abs(g) <= 0.5 * kPeriodicResidualTol) break;
                    x -= g / (dfx - 1.0);
                }
            }
            const auto [fx, dfx] = lift_iterate(map.degree(), map.eps(), x, n);
            (void)dfx;
            if (std::abs(fx - x - static_cast<double>(j)) > kPeriodicResidualTol)
                throw NewtonDivergence("periodic point continuation did not converge");
        }
        points.push_back(wrap_unit(x));
    }
    return points;
}

/// Period-n point candidates of a beta transformation: fixed points of the
/// branch-word compositions x -> beta x - j_i, validated against the actual
/// orbit of the map.
std::vector<double> beta_period_candidates(const BetaTransformation& map, int n) {
    const int nb = map.branch_count_max();
    const double total = std::pow(static_cast<double>(nb), n);
    if (total > kEnumerationGuard)
        throw EnumerationOverflow("branch_count^n exceeds the 1e6 enumeration guard");

    const double beta = map.beta();
    const double denom = std::pow(beta, n) - 1.0;
    std::vector<int> word(static_cast<std::size_t>(n), 0);
    std::vector<double> points;
    const auto words = static_cast<std::int64_t>(std::llround(total));
    for (std::int64_t w = 0; w < words; ++w) {
        std::int64_t rem = w;
        for (int i = 0; i < n; ++i) {
            word[static_cast<std::size_t>(i)] = static_cast<int>(rem % nb);
            rem /= nb;
        }
        double num = 0.0;
        for (int i = 0; i < n; ++i) num = num * beta + word[static_cast<std::size_t>(i)];
        const double x0 = num / denom;
        if (x0 < 0.0 || x0 > 1.0) continue;
        // validate the word against the actual orbit
        bool ok = true;
        double x = x0;
        for (int i = 0; i < n && ok; ++i) {
            const double next = beta * x - word[static_cast<std::size_t>(i)];
            if (next < -1e-12 || next > 1.0 + 1e-12) {
                ok = false;
                break;
            }
            if (std::abs(map.apply(x) - wrap_unit(next)) > 1e-10) ok = false;
            x = next;
        }
        if (ok && std::abs(x - x0) <= kPeriodicResidualTol) points.push_back(wrap_unit(x0));
    }
    return points;
}

std::vector<int> divisors_of(int n) {
    std::vector<int> d;
    for (int i = 1; i <= n; ++i)
        if (n % i == 0) d.push_back(i);
    return d;
}

} // namespace

std::vector<PeriodicOrbit> periodic_points(const MapModel& map, int n) {
    if (!is_one_dimensional(map)) throw IncompatiblePair("periodic_points supports 1D maps only");
    if (n < 1) throw Error("periodic_points needs n >= 1");

    std::vector<double> points;
    if (const auto* c = std::get_if<AnalyticCircleMap>(&map)) {
        points = circle_period_candidates(*c, n);
    } else {
        points = beta_period_candidates(std::get<BetaTransformation>(map), n);
    }

    std::sort(points.begin(), points.end());
    // merge near-coincident candidates (0 and 1 identify on the circle)
    std::vector<double> unique;
    for (double p : points) {
        if (unique.empty() || circle_distance(unique.back(), p) > kOrbitMergeTol) unique.push_back(p);
    }
    if (unique.size() > 1 && circle_distance(unique.front(), unique.back()) <= kOrbitMergeTol)
        unique.pop_back();

    const auto divisors = divisors_of(n);
    std::vector<bool> used(unique.size(), false);
    std::vector<PeriodicOrbit> orbits;

    auto find_index = [&](double x) -> std::ptrdiff_t {
        auto it = std::lower_bound(unique.begin(), unique.end(), x - kOrbitMergeTol);
        for (; it != unique.end() && *it <= x + kOrbitMergeTol; ++it) {
            if (circle_distance(*it, x) <= kOrbitMergeTol) return it - unique.begin();
        }
        // wrap-around match at the 0/1 seam
        if (x > 1.0 - kOrbitMergeTol && !unique.empty() &&
            circle_distance(unique.front(), x) <= kOrbitMergeTol)
            return 0;
        if (x < kOrbitMergeTol && !unique.empty() &&
            circle_distance(unique.back(), x) <= kOrbitMergeTol)
            return static_cast<std::ptrdiff_t>(unique.size()) - 1;
        return -1;
    };

    for (std::size_t i = 0; i < unique.size(); ++i) {
        if (used[i]) continue;
        const double x0 = unique[i];
        // minimal period among divisors of n
        int period = n;
        for (int d : divisors) {
            double x = x0;
            for (int s = 0; s < d; ++s) x = evaluate(map, x);
            if (circle_distance(x, x0) <= kOrbitMergeTol) {
                period = d;
                break;
            }
        }
        PeriodicOrbit orbit;
        orbit.period = period;
        double x = x0;
        for (int s = 0; s < period; ++s) {
            orbit.points.push_back(x);
            const auto idx = find_index(x);
            if (idx >= 0) used[static_cast<std::size_t>(idx)] = true;
            x = evaluate(map, x);
        }
        orbit.closure_residual = circle_distance(x, x0);
        // canonical start: smallest point of the orbit, dynamical order kept
        const auto smallest =
            std::min_element(orbit.points.begin(), orbit.points.end()) - orbit.points.begin();
        std::rotate(orbit.points.begin(), orbit.points.begin() + smallest, orbit.points.end());
        orbits.push_back(std::move(orbit));
    }

    std::sort(orbits.begin(), orbits.end(),
              [](const PeriodicOrbit& a, const PeriodicOrbit& b) { return a.points[0] < b.points[0]; });
    return orbits;
}

std::string map_id(const MapModel& map) {
    char buf[64];
    if (const auto* c = std::get_if<AnalyticCircleMap>(&map)) {
        std::snprintf(buf, sizeof(buf), "circle(k=%d,eps=%.17g)", c->degree(), c->eps());
    } else if (const auto* b = std::get_if<BetaTransformation>(&map)) {
        std::snprintf(buf, sizeof(buf), "beta(%.17g)", b->beta());
    } else {
        std::snprintf(buf, sizeof(buf), "tsujii(m=%d)", std::get<TsujiiSkewProduct>(map).m());
    }
    return buf;
}

} // namespace livsic::maps
