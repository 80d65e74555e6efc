#include "livsic/coboundary.hpp"

#include <Eigen/SparseLU>
#include <cmath>

#include "livsic/transfer.hpp"
#include "livsic/util.hpp"

namespace livsic::coboundary {

namespace {

constexpr double kDensityFloor = 1e-6;
constexpr int kVerifySamples = 512;
constexpr int kDenseSolveLimit = 600;
constexpr double kConditionLimit = 1e12;

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

double min_density(const basis::FunctionRep& chi) {
    if (const auto* u = std::get_if<basis::UlamRep>(&chi)) return u->values().real().minCoeff();
    double lo = std::numeric_limits<double>::infinity();
    const auto& f = std::get<basis::FourierRep>(chi);
    for (int i = 0; i < kVerifySamples; ++i)
        lo = std::min(lo, f.eval((i + 0.5) / kVerifySamples).real());
    return lo;
}

/// Pointwise quotient num/den in the common basis: collocation for Fourier,
/// cellwise for Ulam.
basis::FunctionRep divide_pointwise(const basis::FunctionRep& num, const basis::FunctionRep& den) {
    if (const auto* fn = std::get_if<basis::FourierRep>(&num)) {
        const auto& fd = std::get<basis::FourierRep>(den);
        return basis::project_complex(
            [&](double x) { return fn->eval(x) / fd.eval(x); }, basis::spec_of(num));
    }
    const auto& un = std::get<basis::UlamRep>(num);
    const auto& ud = std::get<basis::UlamRep>(den);
    return basis::UlamRep(un.values().cwiseQuotient(ud.values()));
}

/// Subtracts the chi-weighted mean so that int h chi dmu = 0.
basis::FunctionRep normalize_gauge(const basis::FunctionRep& h, const basis::FunctionRep& chi) {
    const cd mean = basis::integrate(basis::multiply(h, chi));
    VectorXcd coords = basis::coords(h);
    if (basis::spec_of(h).family == basis::Family::fourier) {
        coords(basis::spec_of(h).size) -= mean;
    } else {
        coords.array() -= mean;
    }
    return basis::rep_from_coords(basis::spec_of(h), std::move(coords));
}

/// Zero-integral solve of (I - L) v = b through the bordered system
/// [[I - L, chi], [integration row, 0]]; the multiplier absorbs the component
/// of b along the cokernel so v satisfies the projected equation exactly.
VectorXcd restricted_resolvent_solve(const transfer::OperatorMatrix& plain,
                                     const basis::FunctionRep& chi, const VectorXcd& b) {
    const int n = plain.dim();
    const auto spec = plain.spec();
    VectorXcd weights(n);  // integration functional in coordinates
    if (spec.family == basis::Family::fourier) {
        weights.setZero();
        weights(spec.size) = cd{1.0, 0.0};
    } else {
        weights.setConstant(cd{1.0 / spec.size, 0.0});
    }
    const VectorXcd& chi_coords = basis::coords(chi);

    VectorXcd rhs(n + 1);
    rhs.head(n) = b;
    rhs(n) = cd{0.0, 0.0};

    if (n <= kDenseSolveLimit) {
        MatrixXcd a = MatrixXcd::Zero(n + 1, n + 1);
        a.topLeftCorner(n, n) = MatrixXcd::Identity(n, n) - plain.dense();
        a.col(n).head(n) = chi_coords;
        a.row(n).head(n) = weights.transpose();
        Eigen::PartialPivLU<MatrixXcd> lu(a);
        const VectorXcd sol = lu.solve(rhs);
        const double cond = a.cwiseAbs().rowwise().sum().maxCoeff() *
                            lu.inverse().cwiseAbs().rowwise().sum().maxCoeff();
        if (!sol.allFinite() || cond > kConditionLimit)
            throw SingularResolvent("restricted (I - L) solve is ill-conditioned");
        return sol.head(n);
    }

    std::vector<Eigen::Triplet<cd>> trip;
    const auto& l = plain.sparse();
    trip.reserve(static_cast<std::size_t>(l.nonZeros()) + 3 * static_cast<std::size_t>(n) + 1);
    for (int k = 0; k < l.outerSize(); ++k)
        for (Eigen::SparseMatrix<cd>::InnerIterator it(l, k); it; ++it)
            trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), -it.value());
    for (int i = 0; i < n; ++i) {
        trip.emplace_back(i, i, cd{1.0, 0.0});
        trip.emplace_back(i, n, chi_coords(i));
        trip.emplace_back(n, i, weights(i));
    }
    Eigen::SparseMatrix<cd> a(n + 1, n + 1);
    a.setFromTriplets(trip.begin(), trip.end());
    a.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<cd>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success)
        throw SingularResolvent("restricted (I - L) factorization failed");
    const VectorXcd sol = lu.solve(rhs);
    if (!sol.allFinite()) throw SingularResolvent("restricted (I - L) solve returned non-finite values");
    return sol.head(n);
}

} // namespace

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::coboundary: return "Coboundary";
        case Verdict::not_coboundary: return "NotCoboundary";
        default: return "Inconclusive";
    }
}

Tolerances Tolerances::defaults_for(const basis::BasisSpec& spec) {
    if (spec.family == basis::Family::fourier) return {};
    const double scale = 1.0 / std::sqrt(static_cast<double>(spec.size));
    return {scale, scale, scale};
}

void TGrid::validate() const {
    if (!(t_max > 0.0)) throw Error("t grid needs t_max > 0");
    if (points < 3 || points % 2 == 0)
        throw Error("t grid needs an odd point count >= 3 (symmetric about 0)");
}

std::vector<double> TGrid::values() const {
    validate();
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        out[static_cast<std::size_t>(i)] = -t_max + 2.0 * t_max * i / (points - 1);
    out[static_cast<std::size_t>(points / 2)] = 0.0;
    return out;
}

CoboundaryReport detect(const maps::MapModel& map, const basis::FunctionRep& f,
                        const basis::BasisSpec& spec, const TGrid& grid,
                        const Tolerances& tolerances) {
    grid.validate();
    if (!basis::real_valued(f)) throw NonRealObservable("detect requires a real-valued observable");

    const auto ws = spectral::Workspace::make(map, spec);
    CoboundaryReport report;
    report.tolerances = tolerances;
    report.drift = basis::integrate(basis::multiply(f, ws.eig.density));

    const auto derivs = spectral::eigen_derivatives_at_zero(ws, f);
    report.variance = -derivs.lambda_second.real();

    report.lambda_curve.reserve(static_cast<std::size_t>(grid.points));
    double dev = 0.0;
    for (double t : grid.values()) {
        const auto ped = spectral::perturbed_eigendata(ws, f, cd{t, 0.0});
        dev = std::max(dev, std::abs(ped.lambda - cd{1.0, 0.0}));
        report.lambda_curve.push_back({t, ped.lambda, ped.eigen_residual, ped.projection_defect});
    }
    report.lambda_deviation = dev;

    const bool small_drift = std::abs(report.drift) <= tolerances.drift;
    const bool small_var = report.variance <= tolerances.variance;
    const bool small_dev = report.lambda_deviation <= tolerances.lambda_dev;
    if (small_drift && small_var && small_dev) {
        report.verdict = Verdict::coboundary;
    } else if (std::abs(report.drift) > 10.0 * tolerances.drift ||
               report.variance > 10.0 * tolerances.variance ||
               report.lambda_deviation > 10.0 * tolerances.lambda_dev) {
        report.verdict = Verdict::not_coboundary;
    } else {
        report.verdict = Verdict::inconclusive;
    }
    return report;
}

Recovery recover(const maps::MapModel& map, const basis::FunctionRep& f,
                 const basis::BasisSpec& spec, RecoveryMethod method) {
    if (!basis::real_valued(f)) throw NonRealObservable("recover requires a real-valued observable");
    const auto ws = spectral::Workspace::make(map, spec);
    const auto& chi = ws.eig.density;

    if (min_density(chi) <= kDensityFloor)
        throw DensityVanishes("density minimum at or below 1e-6; cannot divide by chi");

    basis::FunctionRep h_raw = chi;  // placeholder, overwritten below
    if (method == RecoveryMethod::cauchy) {
        const auto derivs = spectral::eigen_derivatives_at_zero(ws, f);
        h_raw = basis::scale(divide_pointwise(derivs.chi_prime, chi), cd{0.0, -1.0});
    } else {
        const VectorXcd b =
            cd{0.0, 1.0} * ws.plain.apply(basis::coords(basis::multiply(f, chi)));
        const VectorXcd v = restricted_resolvent_solve(ws.plain, chi, b);
        h_raw = basis::scale(divide_pointwise(basis::rep_from_coords(spec, v), chi), cd{0.0, -1.0});
    }

    auto h = normalize_gauge(h_raw, chi);
    // recovered transfer functions of real cocycles are real; keep the
    // numerically-real representative
    auto cleaned = basis::force_real(h);
    if (basis::norm_l2(basis::sub(cleaned, h)) <= 1e-8 * std::max(1.0, basis::norm_l2(h)))
        h = std::move(cleaned);

    const ResidualStats stats = verify(map, f, h, kVerifySamples);
    double cell_avg = stats.mean;
    if (spec.family == basis::Family::ulam) {
        // exact cell averages: the transpose action of the cell-transfer
        // matrix gives the cell average of h o T
        const VectorXcd averaged = ws.plain.sparse().transpose() * basis::coords(h);
        const VectorXcd residual = averaged - basis::coords(h) - basis::coords(f);
        cell_avg = residual.cwiseAbs().mean();
    }
    return Recovery{std::move(h), stats, cell_avg};
}

Obstructions periodic_obstructions(const maps::MapModel& map, const basis::FunctionRep& f,
                                   int n_max) {
    Obstructions out;
    for (int n = 1; n <= n_max; ++n) {
        for (auto& orbit : maps::periodic_points(map, n)) {
            if (orbit.period != n) continue;  // already reported at its minimal period
            cd sum{0.0, 0.0};
            for (double x : orbit.points) sum += basis::eval(f, x);
            out.max_abs = std::max(out.max_abs, std::abs(sum));
            out.birkhoff_sums.emplace_back(std::move(orbit), sum);
        }
    }
    return out;
}

ResidualStats verify(const maps::MapModel& map, const basis::FunctionRep& f,
                     const basis::FunctionRep& h, int samples) {
    ResidualStats stats;
    double total = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = (i + 0.5) / samples;
        const double r =
            std::abs(basis::eval(h, maps::evaluate(map, x)) - basis::eval(h, x) - basis::eval(f, x));
        stats.max = std::max(stats.max, r);
        total += r;
    }
    stats.mean = samples > 0 ? total / samples : 0.0;
    return stats;
}

} // namespace livsic::coboundary
