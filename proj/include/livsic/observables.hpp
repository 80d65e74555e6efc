#pragma once

#include "livsic/basis.hpp"

namespace livsic::observables {

/// cos(2 pi x): exact coefficients c_{+-1} = 1/2 on a Fourier basis, midpoint
/// projection on an Ulam basis.
basis::FunctionRep cos1(const basis::BasisSpec& spec);

/// cos(4 pi x) - cos(2 pi x), a constructed coboundary of cos(2 pi x) over
/// the doubling map.
basis::FunctionRep cos2_minus_cos1(const basis::BasisSpec& spec);

basis::FunctionRep constant(const basis::BasisSpec& spec, double c);

/// Indicator of [a, b).
basis::FunctionRep indicator(const basis::BasisSpec& spec, double a, double b);

/// Real trigonometric polynomial sum_d (a_d cos(2 pi d x) + b_d sin(2 pi d x))
/// with exact Fourier coefficients (d = index into the arrays, starting at 1).
basis::FunctionRep trig_polynomial(const basis::BasisSpec& spec, const std::vector<double>& cos_amp,
                                   const std::vector<double>& sin_amp);

} // namespace livsic::observables
