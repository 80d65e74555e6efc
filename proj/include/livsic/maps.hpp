#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "livsic/errors.hpp"

namespace livsic::maps {

/// x mod 1 folded into [0, 1). Negative inputs land in [0, 1) as well.
double wrap_unit(double x);

/// Distance on the circle R/Z.
double circle_distance(double a, double b);

/// T(x) = k x + eps sin(2 pi x) mod 1 on S^1. Expanding: 2 pi |eps| < k - 1,
/// so inf T' = k - 2 pi |eps| > 1 and there are exactly k inverse branches.
class AnalyticCircleMap {
public:
    AnalyticCircleMap(int degree, double eps);

    int degree() const { return degree_; }
    double eps() const { return eps_; }

    double apply(double x) const;
    /// Lift to R: F(x) = k x + eps sin(2 pi x), F(x+1) = F(x) + k.
    double lift(double x) const;
    double derivative(double x) const;

private:
    int degree_;
    double eps_;
};

/// T(x) = beta x mod 1 on [0, 1], beta > 1. Every branch derivative equals
/// beta. Endpoint convention: T(1) = beta - floor(beta) for non-integer beta,
/// T(1) = 0 otherwise (right-continuous choice, measure-zero either way).
class BetaTransformation {
public:
    explicit BetaTransformation(double beta);

    double beta() const { return beta_; }
    int branch_count_max() const;  // ceil(beta)

    double apply(double x) const;
    double derivative(double) const { return beta_; }

private:
    double beta_;
};

/// T(x, y) = (m x mod 1, y + m cos(2 pi x) mod 1) on the 2-torus.
/// Derivative [[m, 0], [-2 pi m sin(2 pi x), 1]]; Jacobian determinant = m.
class TsujiiSkewProduct {
public:
    explicit TsujiiSkewProduct(int m);

    int m() const { return m_; }

    Eigen::Vector2d apply(const Eigen::Vector2d& p) const;
    Eigen::Matrix2d derivative(const Eigen::Vector2d& p) const;
    double jacobian(const Eigen::Vector2d&) const { return static_cast<double>(m_); }

private:
    int m_;
};

using MapModel = std::variant<AnalyticCircleMap, BetaTransformation, TsujiiSkewProduct>;

struct Branch1D {
    double preimage;    // y with T(y) = x
    double derivative;  // |T'(y)|
};

struct Branch2D {
    Eigen::Vector2d preimage;
    Eigen::Matrix2d derivative;  // DT at the preimage
};

struct PeriodicOrbit {
    int period;                  // minimal period
    std::vector<double> points;  // dynamical order, starting at the smallest point
    double closure_residual;     // circle distance |T^period(x0) - x0|
};

bool is_one_dimensional(const MapModel& map);

/// T(x) for 1D maps. Throws IncompatiblePair on 2D maps.
double evaluate(const MapModel& map, double x);
Eigen::Vector2d evaluate(const TsujiiSkewProduct& map, const Eigen::Vector2d& p);

/// T'(x) for 1D maps.
double derivative(const MapModel& map, double x);

/// All y with T(y) = x together with |T'(y)|, sorted by y. Analytic-map
/// branches are solved by Newton to residual <= 1e-13 (NewtonDivergence
/// otherwise); beta branches are closed-form.
std::vector<Branch1D> inverse_branches(const MapModel& map, double x);
std::vector<Branch1D> inverse_branches(const AnalyticCircleMap& map, double x);
std::vector<Branch1D> inverse_branches(const BetaTransformation& map, double x);
/// 2D branches, sorted lexicographically by preimage.
std::vector<Branch2D> inverse_branches(const TsujiiSkewProduct& map, const Eigen::Vector2d& p);

/// All points of period dividing n, grouped into minimal-period orbits and
/// sorted by smallest point. Guard: branch_count^n <= 10^6
/// (EnumerationOverflow). 1D maps only.
std::vector<PeriodicOrbit> periodic_points(const MapModel& map, int n);

/// Short human-readable id for provenance, e.g. "circle(k=2,eps=0.05)".
std::string map_id(const MapModel& map);

} // namespace livsic::maps
