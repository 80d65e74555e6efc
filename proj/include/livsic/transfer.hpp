#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <string>

#include "livsic/basis.hpp"
#include "livsic/maps.hpp"

namespace livsic::transfer {

using cd = basis::cd;

/// Finite-rank matrix of the transfer operator (or a twisted variant) in a
/// chosen basis. Columns are the images of basis vectors, so the matrix acts
/// on coordinate vectors by plain multiplication. Fourier matrices are dense;
/// Ulam matrices are assembled sparse (a handful of entries per row) with a
/// lazily materialized dense view.
class OperatorMatrix {
public:
    OperatorMatrix(basis::BasisSpec spec, Eigen::MatrixXcd dense, cd twist, std::string map_id,
                   std::string observable_id);
    OperatorMatrix(basis::BasisSpec spec, Eigen::SparseMatrix<cd> sparse, cd twist,
                   std::string map_id, std::string observable_id);

    const basis::BasisSpec& spec() const { return spec_; }
    int dim() const { return spec_.dim(); }
    cd twist() const { return twist_; }
    const std::string& map_id() const { return map_id_; }
    const std::string& observable_id() const { return observable_id_; }

    bool is_sparse() const { return is_sparse_; }
    const Eigen::SparseMatrix<cd>& sparse() const;
    /// Dense view; materialized on first use for sparse matrices.
    const Eigen::MatrixXcd& dense() const;

    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
    basis::FunctionRep apply(const basis::FunctionRep& rep) const;

private:
    basis::BasisSpec spec_;
    cd twist_;
    std::string map_id_;
    std::string observable_id_;
    bool is_sparse_;
    Eigen::SparseMatrix<cd> sparse_;
    mutable Eigen::MatrixXcd dense_;
    mutable bool dense_ready_;
};

/// Plain transfer operator matrix. Compatible pairs: analytic circle map with
/// a Fourier basis (collocation at 2(2N+1) nodes), beta transformation with an
/// Ulam basis (exact closed-form cell-transfer entries). IncompatiblePair
/// otherwise.
OperatorMatrix assemble(const maps::MapModel& map, const basis::BasisSpec& spec);

/// Twisted operator phi -> L(e^{i t f} phi). Requires f real-flagged in the
/// same basis; t may be complex.
OperatorMatrix assemble_twisted(const maps::MapModel& map, const basis::BasisSpec& spec,
                                const basis::FunctionRep& f, cd t);

/// Matrix of the pointwise multiplication operator phi -> f * phi.
Eigen::MatrixXcd multiplication_matrix(const basis::FunctionRep& f);

enum class TestFunctionFamily { automatic, trig, cell_indicator };

/// Empirical duality check: max over random pairs (psi, basis element phi) of
/// |int (psi o T) phi dmu - int psi (L phi) dmu|, both integrals by 2^14-point
/// midpoint quadrature. Deterministic for a given seed.
double duality_residual(const maps::MapModel& map, const OperatorMatrix& op, int trials,
                        std::uint64_t seed,
                        TestFunctionFamily family = TestFunctionFamily::automatic);

/// Integral-preservation residual of a plain operator (duality with psi == 1):
/// Fourier: deviation of row n=0 from the unit vector on c_0; Ulam: deviation
/// of the column-sum pairing from the cell integral.
double o4_unit_residual(const OperatorMatrix& op);

} // namespace livsic::transfer
