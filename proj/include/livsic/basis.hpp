#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <variant>

#include "livsic/errors.hpp"

namespace livsic::basis {

using cd = std::complex<double>;

enum class Family { fourier, ulam };

struct BasisSpec {
    Family family;
    int size;  // Fourier: truncation order N (modes -N..N); Ulam: cell count

    int dim() const { return family == Family::fourier ? 2 * size + 1 : size; }
    bool operator==(const BasisSpec&) const = default;
};

std::string family_name(Family f);

/// Trigonometric representation phi(x) = sum_{|n| <= N} c_n e^{2 pi i n x}.
/// A rep flagged real-valued satisfies c_{-n} = conj(c_n) within 1e-14;
/// its integral against Lebesgue is c_0.
class FourierRep {
public:
    FourierRep(int order, Eigen::VectorXcd coef, bool real_hint = false);

    int order() const { return order_; }
    const Eigen::VectorXcd& coef() const { return coef_; }
    cd coef(int n) const { return coef_(n + order_); }
    bool real_hint() const { return real_hint_; }

    cd eval(double x) const;
    cd integral() const { return coef_(order_); }
    /// Verifies hermitian coefficient symmetry (the real-valuedness witness).
    bool real_valued(double tol = 1e-14) const;

private:
    int order_;
    Eigen::VectorXcd coef_;
    bool real_hint_;
};

/// Piecewise-constant representation on cells [i/N, (i+1)/N).
class UlamRep {
public:
    explicit UlamRep(Eigen::VectorXcd values, bool real_hint = false);

    int cells() const { return static_cast<int>(values_.size()); }
    const Eigen::VectorXcd& values() const { return values_; }
    bool real_hint() const { return real_hint_; }

    cd eval(double x) const;
    cd integral() const { return values_.mean(); }
    double l1_norm() const;
    /// Total jump variation sum_i |v_{i+1} - v_i|.
    double variation() const;
    bool real_valued(double tol = 1e-12) const;

private:
    Eigen::VectorXcd values_;
    bool real_hint_;
};

using FunctionRep = std::variant<FourierRep, UlamRep>;

BasisSpec spec_of(const FunctionRep& rep);
bool real_hint(const FunctionRep& rep);
bool real_valued(const FunctionRep& rep);

/// Collocation grid used for products, exponentials and projections:
/// 2x oversampling relative to the 2N+1 coefficients.
int collocation_size(int order);

/// Projection into the basis. Fourier: discrete Fourier transform of 4N
/// equispaced samples (exact for band-limited inputs of order <= N);
/// Ulam: midpoint value per cell.
FunctionRep project(const std::function<double(double)>& f, const BasisSpec& spec);
FunctionRep project_complex(const std::function<cd(double)>& f, const BasisSpec& spec);

/// Pointwise product in the common basis. Fourier: collocation product on the
/// oversampled grid, transformed back and truncated; Ulam: cellwise product.
FunctionRep multiply(const FunctionRep& a, const FunctionRep& b);

cd integrate(const FunctionRep& rep);
cd eval(const FunctionRep& rep, double x);

/// e^{i t f}, computed pointwise on the collocation grid. Requires f
/// real-valued (NonRealObservable otherwise). For real t the result has unit
/// modulus at the collocation nodes.
FunctionRep exp_scale(const FunctionRep& f, cd t);

/// L2(mu) pairing <a, b> = int a conj(b) dmu (Parseval sum for Fourier,
/// cell mean for Ulam).
cd inner(const FunctionRep& a, const FunctionRep& b);
double norm_l2(const FunctionRep& a);

// Coordinate-vector view used by the operator machinery.
const Eigen::VectorXcd& coords(const FunctionRep& rep);
FunctionRep rep_from_coords(const BasisSpec& spec, Eigen::VectorXcd v, bool real_hint = false);

FunctionRep add(const FunctionRep& a, const FunctionRep& b);
FunctionRep sub(const FunctionRep& a, const FunctionRep& b);
FunctionRep scale(const FunctionRep& a, cd factor);
/// Projects away the numerically-zero imaginary part and sets the real flag.
FunctionRep force_real(const FunctionRep& a);

/// Double Fourier representation on the 2-torus; diagnostic helper for the
/// skew-product module.
class Rep2D {
public:
    Rep2D(int order_x, int order_y, Eigen::MatrixXcd coef);

    static Rep2D project(const std::function<double(double, double)>& f, int order_x, int order_y);

    int order_x() const { return nx_; }
    int order_y() const { return ny_; }
    cd eval(double x, double y) const;
    cd integral() const { return coef_(nx_, ny_); }

private:
    int nx_, ny_;
    Eigen::MatrixXcd coef_;  // (2nx+1) x (2ny+1)
};

} // namespace livsic::basis
