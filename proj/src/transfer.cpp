#include "livsic/transfer.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "livsic/util.hpp"

namespace livsic::transfer {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kQuadraturePoints = 1 << 14;

/// Collocation assembly for an analytic circle map: evaluate the weighted
/// branch sum (L_w phi)(x_j) = sum_{Ty=x_j} w(y) phi(y) / |T'(y)| at
/// M = 2(2N+1) nodes for every basis vector, then transform rows back to
/// coefficients and truncate.
Eigen::MatrixXcd fourier_assemble(const maps::AnalyticCircleMap& map, int order,
                                  const std::function<cd(double)>& weight) {
    const int dim = 2 * order + 1;
    const int m = 2 * dim;

    // branch values at the nodes: samples(j, col) = (L_w e_col)(x_j)
    Eigen::MatrixXcd samples(m, dim);
    util::parallel_for(static_cast<std::size_t>(m), [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            const double x = static_cast<double>(j) / m;
            const auto branches = inverse_branches(map, x);
            Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(dim);
            for (const auto& br : branches) {
                const cd factor = weight(br.preimage) / br.derivative;
                const cd w = std::polar(1.0, kTwoPi * br.preimage);
                cd p = std::polar(1.0, -kTwoPi * order * br.preimage);
                for (int col = 0; col < dim; ++col) {
                    row(col) += factor * p;
                    p *= w;
                }
            }
            samples.row(static_cast<Eigen::Index>(j)) = row;
        }
    });

    // row transform: O(row, col) = (1/M) sum_j e^{-2 pi i (row-N) j / M} samples(j, col)
    Eigen::MatrixXcd transform(dim, m);
    for (int r = 0; r < dim; ++r) {
        const int freq = r - order;
        for (int j = 0; j < m; ++j) {
            std::int64_t phase = -static_cast<std::int64_t>(freq) * j % m;
            if (phase < 0) phase += m;
            transform(r, j) =
                std::polar(1.0 / m, kTwoPi * static_cast<double>(phase) / static_cast<double>(m));
        }
    }
    return transform * samples;
}

/// Exact Ulam cell-transfer matrix for a beta transformation. Row j collects
/// N * Leb(A_i intersect T^{-1} A_j) over source cells i; branches are affine
/// so the intersections are closed-form interval overlaps.
Eigen::SparseMatrix<cd> ulam_assemble(const maps::BetaTransformation& map, int cells) {
    const double beta = map.beta();
    const int nb = map.branch_count_max();
    std::vector<Eigen::Triplet<cd>> triplets;
    triplets.reserve(static_cast<std::size_t>(cells) * (nb + 2));
    for (int j = 0; j < cells; ++j) {
        const double a = static_cast<double>(j) / cells;
        const double b = static_cast<double>(j + 1) / cells;
        for (int l = 0; l < nb; ++l) {
            double ylo = (a + l) / beta;
            double yhi = (b + l) / beta;
            ylo = std::max(ylo, 0.0);
            yhi = std::min(yhi, 1.0);
            if (yhi <= ylo) continue;
            int i0 = static_cast<int>(ylo * cells);
            int i1 = static_cast<int>(yhi * cells);
            i0 = std::min(i0, cells - 1);
            i1 = std::min(i1, cells - 1);
            for (int i = i0; i <= i1; ++i) {
                const double lo = std::max(ylo, static_cast<double>(i) / cells);
                const double hi = std::min(yhi, static_cast<double>(i + 1) / cells);
                if (hi > lo) triplets.emplace_back(j, i, cd{cells * (hi - lo), 0.0});
            }
        }
    }
    Eigen::SparseMatrix<cd> out(cells, cells);
    out.setFromTriplets(triplets.begin(), triplets.end());
    out.makeCompressed();
    return out;
}

} // namespace

OperatorMatrix::OperatorMatrix(basis::BasisSpec spec, Eigen::MatrixXcd dense, cd twist,
                               std::string map_id, std::string observable_id)
    : spec_(spec),
      twist_(twist),
      map_id_(std::move(map_id)),
      observable_id_(std::move(observable_id)),
      is_sparse_(false),
      dense_(std::move(dense)),
      dense_ready_(true) {}

OperatorMatrix::OperatorMatrix(basis::BasisSpec spec, Eigen::SparseMatrix<cd> sparse, cd twist,
                               std::string map_id, std::string observable_id)
    : spec_(spec),
      twist_(twist),
      map_id_(std::move(map_id)),
      observable_id_(std::move(observable_id)),
      is_sparse_(true),
      sparse_(std::move(sparse)),
      dense_ready_(false) {}

const Eigen::SparseMatrix<cd>& OperatorMatrix::sparse() const {
    if (!is_sparse_) throw Error("operator is stored dense");
    return sparse_;
}

const Eigen::MatrixXcd& OperatorMatrix::dense() const {
    if (!dense_ready_) {
        dense_ = Eigen::MatrixXcd(sparse_);
        dense_ready_ = true;
    }
    return dense_;
}

Eigen::VectorXcd OperatorMatrix::apply(const Eigen::VectorXcd& v) const {
    if (is_sparse_) return sparse_ * v;
    return dense_ * v;
}

basis::FunctionRep OperatorMatrix::apply(const basis::FunctionRep& rep) const {
    if (!(basis::spec_of(rep) == spec_)) throw BasisMismatch("operator/rep basis mismatch");
    return basis::rep_from_coords(spec_, apply(basis::coords(rep)));
}

OperatorMatrix assemble(const maps::MapModel& map, const basis::BasisSpec& spec) {
    if (const auto* c = std::get_if<maps::AnalyticCircleMap>(&map)) {
        if (spec.family != basis::Family::fourier)
            throw IncompatiblePair("circle maps pair with the Fourier basis");
        auto m = fourier_assemble(*c, spec.size, [](double) { return cd{1.0, 0.0}; });
        return {spec, std::move(m), cd{0.0, 0.0}, maps::map_id(map), ""};
    }
    if (const auto* b = std::get_if<maps::BetaTransformation>(&map)) {
        if (spec.family != basis::Family::ulam)
            throw IncompatiblePair("beta transformations pair with the Ulam basis");
        auto m = ulam_assemble(*b, spec.size);
        return {spec, std::move(m), cd{0.0, 0.0}, maps::map_id(map), ""};
    }
    throw IncompatiblePair("no operator discretization for 2D skew products");
}

OperatorMatrix assemble_twisted(const maps::MapModel& map, const basis::BasisSpec& spec,
                                const basis::FunctionRep& f, cd t) {
    if (!(basis::spec_of(f) == spec)) throw BasisMismatch("observable basis does not match");
    if (!basis::real_valued(f))
        throw NonRealObservable("twisted assembly requires a real-valued observable");
    const cd it{-t.imag(), t.real()};  // i * t

    if (const auto* c = std::get_if<maps::AnalyticCircleMap>(&map)) {
        if (spec.family != basis::Family::fourier)
            throw IncompatiblePair("circle maps pair with the Fourier basis");
        const auto& ff = std::get<basis::FourierRep>(f);
        auto m = fourier_assemble(*c, spec.size,
                                  [&](double y) { return std::exp(it * ff.eval(y).real()); });
        return {spec, std::move(m), t, maps::map_id(map), "twisted"};
    }
    if (const auto* b = std::get_if<maps::BetaTransformation>(&map)) {
        if (spec.family != basis::Family::ulam)
            throw IncompatiblePair("beta transformations pair with the Ulam basis");
        const auto& uf = std::get<basis::UlamRep>(f);
        Eigen::SparseMatrix<cd> m = ulam_assemble(*b, spec.size);
        // L_t = L o (multiplication by e^{i t f}): scale column i by the cell value
        Eigen::VectorXcd diag(spec.size);
        for (int i = 0; i < spec.size; ++i) diag(i) = std::exp(it * uf.values()(i).real());
        for (int k = 0; k < m.outerSize(); ++k)
            for (Eigen::SparseMatrix<cd>::InnerIterator iter(m, k); iter; ++iter)
                iter.valueRef() *= diag(iter.col());
        return {spec, std::move(m), t, maps::map_id(map), "twisted"};
    }
    throw IncompatiblePair("no operator discretization for 2D skew products");
}

Eigen::MatrixXcd multiplication_matrix(const basis::FunctionRep& f) {
    const auto spec = basis::spec_of(f);
    const int dim = spec.dim();
    Eigen::MatrixXcd out(dim, dim);
    for (int col = 0; col < dim; ++col) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
        e(col) = cd{1.0, 0.0};
        const auto prod = basis::multiply(f, basis::rep_from_coords(spec, std::move(e)));
        out.col(col) = basis::coords(prod);
    }
    return out;
}

double duality_residual(const maps::MapModel& map, const OperatorMatrix& op, int trials,
                        std::uint64_t seed, TestFunctionFamily family) {
    if (trials < 1) throw Error("duality_residual needs trials >= 1");
    if (family == TestFunctionFamily::automatic)
        family = op.spec().family == basis::Family::fourier ? TestFunctionFamily::trig
                                                            : TestFunctionFamily::cell_indicator;
    util::Rng rng(seed);
    const int dim = op.dim();
    const int q = kQuadraturePoints;

    // quadrature nodes and their images, shared across trials
    std::vector<double> nodes(q), images(q);
    for (int i = 0; i < q; ++i) {
        nodes[i] = (i + 0.5) / q;
        images[i] = maps::evaluate(map, nodes[i]);
    }

    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        // psi: bounded test function
        std::function<double(double)> psi;
        if (family == TestFunctionFamily::trig) {
            constexpr int kDeg = 6;
            std::vector<double> ac(kDeg + 1), bc(kDeg + 1);
            for (int d = 0; d <= kDeg; ++d) {
                ac[d] = rng.uniform(-1.0, 1.0);
                bc[d] = rng.uniform(-1.0, 1.0);
            }
            psi = [ac, bc](double x) {
                double v = ac[0];
                for (std::size_t d = 1; d < ac.size(); ++d)
                    v += ac[d] * std::cos(kTwoPi * d * x) + bc[d] * std::sin(kTwoPi * d * x);
                return v;
            };
        } else {
            const int n = op.spec().size;
            const auto i1 = rng.uniform_int(0, n - 1);
            const auto i2 = rng.uniform_int(i1 + 1, n);
            const double lo = static_cast<double>(i1) / n;
            const double hi = static_cast<double>(i2) / n;
            psi = [lo, hi](double x) { return (x >= lo && x < hi) ? 1.0 : 0.0; };
        }

        // phi: a basis element
        const auto col = rng.uniform_int(0, dim - 1);
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
        e(col) = cd{1.0, 0.0};
        const auto phi = basis::rep_from_coords(op.spec(), e);
        const auto lphi = op.apply(phi);

        cd lhs{0.0, 0.0}, rhs{0.0, 0.0};
        for (int i = 0; i < q; ++i) {
            lhs += psi(images[i]) * basis::eval(phi, nodes[i]);
            rhs += psi(nodes[i]) * basis::eval(lphi, nodes[i]);
        }
        worst = std::max(worst, std::abs(lhs - rhs) / q);
    }
    return worst;
}

double o4_unit_residual(const OperatorMatrix& op) {
    if (op.spec().family == basis::Family::fourier) {
        const int order = op.spec().size;
        const auto& m = op.dense();
        double worst = 0.0;
        for (int col = 0; col < op.dim(); ++col) {
            const cd expected = col == order ? cd{1.0, 0.0} : cd{0.0, 0.0};
            worst = std::max(worst, std::abs(m(order, col) - expected));
        }
        return worst;
    }
    const int n = op.spec().size;
    Eigen::VectorXcd colsum = Eigen::VectorXcd::Zero(n);
    const auto& m = op.sparse();
    for (int k = 0; k < m.outerSize(); ++k)
        for (Eigen::SparseMatrix<cd>::InnerIterator iter(m, k); iter; ++iter)
            colsum(iter.col()) += iter.value();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(colsum(i) - 1.0) / n);
    return worst;
}

} // namespace livsic::transfer
