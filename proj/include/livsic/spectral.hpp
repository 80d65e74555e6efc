#pragma once

#include <Eigen/Dense>
#include <optional>

#include "livsic/basis.hpp"
#include "livsic/transfer.hpp"

namespace livsic::spectral {

using cd = basis::cd;

/// Leading eigendata of a plain transfer operator matrix.
struct EigenData {
    cd eigenvalue;
    basis::FunctionRep density;  // eigenvector normalized to integral 1
    double residual;             // ||L chi - lambda chi|| / ||chi||
    double gap;                  // 1 - |second largest eigenvalue|
};

/// Anticlockwise circular contour centred at 1.
struct ContourSpec {
    double radius = 0.25;
    int nodes = 32;

    void validate() const;
    /// Also checks the contour stays inside the unperturbed spectral gap.
    void validate(double gap) const;
    static ContourSpec fit_to_gap(double gap);  // radius = min(0.25, gap/2), 32 nodes
};

/// Riesz projection P_t = (1/2 pi i) contour-integral of the resolvent,
/// evaluated by trapezoidal quadrature. Stored dense for small problems and
/// in factored rank-revealing form Q C (probe capture) for large sparse ones;
/// both variants report the same health diagnostics.
class RieszProjection {
public:
    double defect() const { return defect_; }        // ||P^2 - P||_2
    double rank_witness() const { return witness_; }  // second singular value
    cd trace() const { return trace_; }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
    bool factored() const { return factored_; }
    const Eigen::MatrixXcd& dense() const;

    static RieszProjection from_dense(Eigen::MatrixXcd p);
    static RieszProjection from_factors(Eigen::MatrixXcd q, Eigen::MatrixXcd c,
                                        Eigen::VectorXcd chi_image);
    void set_probe_image(Eigen::VectorXcd img) { chi_image_ = std::move(img); }

    /// Exact image of the probe vector supplied to riesz_projection (computed
    /// directly from the quadrature, bypassing the captured factors).
    const Eigen::VectorXcd& probe_image() const;

private:
    bool factored_ = false;
    Eigen::MatrixXcd p_;        // dense path
    Eigen::MatrixXcd q_, c_;    // factored path: P ~ Q C
    Eigen::VectorXcd chi_image_;
    double defect_ = 0.0;
    double witness_ = 0.0;
    cd trace_{0.0, 0.0};

    void compute_health();
};

struct PerturbedEigenData {
    cd t;
    cd lambda;
    basis::FunctionRep chi_t;  // P_t chi, not re-normalized
    double eigen_residual;     // ||L_t chi_t - lambda chi_t|| / ||chi_t||
    double projection_defect;
    double rank_witness;
};

struct EigenDerivatives {
    cd lambda_prime;               // lambda'(0)
    cd lambda_second;              // lambda''(0)
    basis::FunctionRep chi_prime;  // chi'_0 by Cauchy integral
    basis::FunctionRep chi_prime_fd;  // central finite difference cross-check
    double fd_deviation;
};

/// Spectral radius ordering of the full spectrum; throws
/// DegenerateLeadingEigenvalue when the two largest moduli are closer than
/// 1e-8. Dense decomposition up to a size threshold, implicitly restarted
/// Arnoldi above it.
EigenData leading_eigen(const transfer::OperatorMatrix& op);

RieszProjection riesz_projection(const transfer::OperatorMatrix& op_t, const ContourSpec& contour,
                                 const Eigen::VectorXcd* probe = nullptr);

/// Caches the plain operator, its leading eigendata, and a fitted contour so
/// repeated perturbed evaluations share the setup.
struct Workspace {
    maps::MapModel map;
    basis::BasisSpec spec;
    transfer::OperatorMatrix plain;
    EigenData eig;
    ContourSpec contour;

    static Workspace make(const maps::MapModel& map, const basis::BasisSpec& spec,
                          std::optional<ContourSpec> contour = std::nullopt);
};

PerturbedEigenData perturbed_eigendata(const Workspace& ws, const basis::FunctionRep& f, cd t);
PerturbedEigenData perturbed_eigendata(const maps::MapModel& map, const basis::FunctionRep& f,
                                       cd t, const ContourSpec& contour,
                                       const basis::BasisSpec& spec);

/// Cauchy-integral derivatives of t -> lambda(t) and t -> chi_t over the
/// circle |t| = rho (nodes must be even; the finite-difference cross-check
/// reuses the nodes at +rho and -rho).
EigenDerivatives eigen_derivatives_at_zero(const Workspace& ws, const basis::FunctionRep& f,
                                           double rho = 1e-2, int nodes = 16);

} // namespace livsic::spectral
