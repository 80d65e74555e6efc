#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "livsic/basis.hpp"
#include "livsic/maps.hpp"
#include "livsic/spectral.hpp"

namespace livsic::coboundary {

using cd = basis::cd;

enum class Verdict { coboundary, not_coboundary, inconclusive };

std::string verdict_name(Verdict v);

/// Decision thresholds. A Coboundary verdict needs every diagnostic at or
/// below its threshold; NotCoboundary needs at least one diagnostic beyond
/// 10x its threshold; anything between is Inconclusive.
struct Tolerances {
    double drift = 1e-8;
    double variance = 1e-6;
    double lambda_dev = 1e-6;

    /// Analytic/Fourier defaults as above; Ulam thresholds relax to N^{-1/2}
    /// to sit above the cell-discretization error while staying well below
    /// genuine obstructions.
    static Tolerances defaults_for(const basis::BasisSpec& spec);
};

/// Symmetric real twist grid [-t_max, t_max].
struct TGrid {
    double t_max = 0.5;
    int points = 21;

    void validate() const;
    std::vector<double> values() const;
};

struct ResidualStats {
    double max = 0.0;
    double mean = 0.0;
};

struct LambdaSample {
    double t;
    cd lambda;
    double eigen_residual;
    double projection_defect;
};

struct CoboundaryReport {
    cd drift;                  // int f chi dmu
    double variance;           // -Re lambda''(0)
    double lambda_deviation;   // max over the t-grid of |lambda(t) - 1|
    std::vector<LambdaSample> lambda_curve;
    std::optional<double> periodic_obstruction_max;
    std::optional<basis::FunctionRep> recovered_h;
    std::optional<double> cocycle_residual;       // sup over the sample grid
    std::optional<double> cocycle_residual_mean;  // mean (cell-averaged for Ulam)
    Verdict verdict = Verdict::inconclusive;
    Tolerances tolerances;
};

/// Fills drift, variance, the lambda-curve deviation and the verdict; does
/// not attempt recovery.
CoboundaryReport detect(const maps::MapModel& map, const basis::FunctionRep& f,
                        const basis::BasisSpec& spec, const TGrid& grid,
                        const Tolerances& tolerances);

enum class RecoveryMethod { cauchy, resolvent };

struct Recovery {
    basis::FunctionRep h;
    ResidualStats residual;          // pointwise cocycle residual on 512 samples
    double cell_averaged_residual;   // mean residual; exact cell averages for Ulam
};

/// Reconstructs the transfer function h with int h chi dmu = 0.
/// cauchy: h = -i chi'_0 / chi from the Cauchy-integral derivative of the
/// perturbed eigenfunction family; resolvent: solve (I - L) v = i L(f chi) on
/// the zero-integral complement and take h = -i v / chi.
Recovery recover(const maps::MapModel& map, const basis::FunctionRep& f,
                 const basis::BasisSpec& spec, RecoveryMethod method);

struct Obstructions {
    std::vector<std::pair<maps::PeriodicOrbit, cd>> birkhoff_sums;
    double max_abs = 0.0;
};

/// Birkhoff sums of f along every periodic orbit of period <= n_max. For
/// cell-valued observables the check is heuristic (pointwise values of an
/// a.e. identity need not vanish on orbits).
Obstructions periodic_obstructions(const maps::MapModel& map, const basis::FunctionRep& f,
                                   int n_max);

/// max / mean of |h(Tx) - h(x) - f(x)| over the deterministic midpoint grid.
ResidualStats verify(const maps::MapModel& map, const basis::FunctionRep& f,
                     const basis::FunctionRep& h, int samples);

} // namespace livsic::coboundary
