#include "livsic/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "livsic/util.hpp"

namespace livsic::spectral {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kDenseEigLimit = 320;        // dense decomposition below, Arnoldi above
constexpr int kDenseProjectionLimit = 600; // explicit P_t below, factored capture above
constexpr double kDegenerateTol = 1e-8;
constexpr double kTraceTol = 1e-6;
constexpr double kConditionLimit = 1e12;
constexpr int kProbeCount = 4;

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// ---------------------------------------------------------------------------
// small iterative helpers (deterministic start vectors)

VectorXcd ones_vector(int n) { return VectorXcd::Ones(n) / std::sqrt(static_cast<double>(n)); }

/// Largest singular value of a linear map given its action and adjoint action.
double top_singular(const std::function<VectorXcd(const VectorXcd&)>& apply,
                    const std::function<VectorXcd(const VectorXcd&)>& apply_h, int n,
                    VectorXcd* right_vec = nullptr, int iters = 100) {
    VectorXcd v = ones_vector(n);
    double sigma = 0.0;
    for (int it = 0; it < iters; ++it) {
        VectorXcd w = apply_h(apply(v));
        const double nw = w.norm();
        if (nw == 0.0) {
            sigma = 0.0;
            break;
        }
        v = w / nw;
        const double next = std::sqrt(nw);
        if (it > 4 && std::abs(next - sigma) <= 1e-13 * std::max(1.0, next)) {
            sigma = next;
            break;
        }
        sigma = next;
    }
    if (right_vec != nullptr) *right_vec = v;
    return sigma;
}

struct SpectrumOrder {
    std::vector<Eigen::Index> idx;  // indices sorted by |eigenvalue| descending
};

SpectrumOrder order_by_modulus(const VectorXcd& eigenvalues) {
    SpectrumOrder o;
    o.idx.resize(static_cast<std::size_t>(eigenvalues.size()));
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) o.idx[static_cast<std::size_t>(i)] = i;
    std::stable_sort(o.idx.begin(), o.idx.end(), [&](Eigen::Index a, Eigen::Index b) {
        return std::abs(eigenvalues(a)) > std::abs(eigenvalues(b));
    });
    return o;
}

struct ArnoldiOut {
    cd lambda1;
    cd lambda2;
    VectorXcd vec;
    double residual;
};

/// Restarted Arnoldi iteration for the dominant eigenpair (plus a Ritz
/// estimate of the runner-up modulus for the gap).
ArnoldiOut arnoldi_leading(const transfer::OperatorMatrix& op) {
    const int n = op.dim();
    const int m = std::min(n, 120);
    VectorXcd start = ones_vector(n);
    ArnoldiOut best{};
    best.residual = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < 8; ++restart) {
        MatrixXcd v(n, m + 1);
        MatrixXcd h = MatrixXcd::Zero(m + 1, m);
        v.col(0) = start;
        int k = m;
        for (int j = 0; j < m; ++j) {
            VectorXcd w = op.apply(v.col(j));
            for (int pass = 0; pass < 2; ++pass) {  // MGS with one reorthogonalization
                for (int i = 0; i <= j; ++i) {
                    const cd hij = v.col(i).dot(w);
                    w -= hij * v.col(i);
                    h(i, j) += hij;
                }
            }
            const double nb = w.norm();
            h(j + 1, j) = nb;
            if (nb < 1e-13) {  // invariant subspace reached
                k = j + 1;
                break;
            }
            v.col(j + 1) = w / nb;
        }

        Eigen::ComplexEigenSolver<MatrixXcd> es(h.topLeftCorner(k, k));
        const auto order = order_by_modulus(es.eigenvalues());
        const cd theta1 = es.eigenvalues()(order.idx[0]);
        VectorXcd x = v.leftCols(k) * es.eigenvectors().col(order.idx[0]);
        x.normalize();
        const double res = (op.apply(x) - theta1 * x).norm();

        if (res < best.residual) {
            best.lambda1 = theta1;
            best.lambda2 = order.idx.size() > 1 ? es.eigenvalues()(order.idx[1]) : cd{0.0, 0.0};
            best.vec = x;
            best.residual = res;
        }
        if (best.residual <= 1e-12 || k < m) break;
        start = x;
    }
    return best;
}

MatrixXcd shifted_dense(const transfer::OperatorMatrix& op, cd s) {
    MatrixXcd a = -op.dense();
    a.diagonal().array() += s;
    return a;
}

Eigen::SparseMatrix<cd> shifted_sparse(const transfer::OperatorMatrix& op, cd s) {
    Eigen::SparseMatrix<cd> id(op.dim(), op.dim());
    id.setIdentity();
    Eigen::SparseMatrix<cd> a = (id * s - op.sparse()).eval();
    a.makeCompressed();
    return a;
}

double inf_norm_sparse(const Eigen::SparseMatrix<cd>& a) {
    Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(a.rows());
    for (int k = 0; k < a.outerSize(); ++k)
        for (Eigen::SparseMatrix<cd>::InnerIterator it(a, k); it; ++it)
            rowsum(it.row()) += std::abs(it.value());
    return rowsum.maxCoeff();
}

} // namespace

// ---------------------------------------------------------------------------
// ContourSpec

void ContourSpec::validate() const {
    if (nodes < 16) throw Error("contour needs at least 16 quadrature nodes");
    if (!(radius > 0.0)) throw Error("contour radius must be positive");
}

void ContourSpec::validate(double gap) const {
    validate();
    if (!(radius < gap))
        throw ContourCrossesSpectrum("contour radius reaches the estimated spectral gap");
}

ContourSpec ContourSpec::fit_to_gap(double gap) {
    ContourSpec c;
    c.radius = std::min(0.25, 0.5 * gap);
    c.nodes = 32;
    return c;
}

// ---------------------------------------------------------------------------
// RieszProjection

RieszProjection RieszProjection::from_dense(MatrixXcd p) {
    RieszProjection out;
    out.factored_ = false;
    out.p_ = std::move(p);
    out.compute_health();
    return out;
}

RieszProjection RieszProjection::from_factors(MatrixXcd q, MatrixXcd c, VectorXcd chi_image) {
    RieszProjection out;
    out.factored_ = true;
    out.q_ = std::move(q);
    out.c_ = std::move(c);
    out.chi_image_ = std::move(chi_image);
    out.compute_health();
    return out;
}

void RieszProjection::compute_health() {
    if (!factored_) {
        trace_ = p_.trace();
        const int n = static_cast<int>(p_.rows());
        auto ap = [this](const VectorXcd& x) { return VectorXcd(p_ * x); };
        auto ah = [this](const VectorXcd& x) { return VectorXcd(p_.adjoint() * x); };
        // defect ||P^2 - P||
        auto dp = [this](const VectorXcd& x) { return VectorXcd(p_ * (p_ * x) - p_ * x); };
        auto dh = [this](const VectorXcd& x) {
            return VectorXcd(p_.adjoint() * (p_.adjoint() * x) - p_.adjoint() * x);
        };
        defect_ = top_singular(dp, dh, n);
        // second singular value by deflating the top pair
        VectorXcd v1;
        const double s1 = top_singular(ap, ah, n, &v1);
        if (s1 == 0.0) {
            witness_ = 0.0;
            return;
        }
        const VectorXcd u1 = (p_ * v1) / s1;
        auto d2p = [&](const VectorXcd& x) { return VectorXcd(p_ * x - s1 * u1 * v1.dot(x)); };
        auto d2h = [&](const VectorXcd& x) {
            return VectorXcd(p_.adjoint() * x - s1 * v1 * u1.dot(x));
        };
        witness_ = top_singular(d2p, d2h, n);
        return;
    }
    // factored path: P ~ Q C with Q orthonormal, so the singular values of P
    // are those of C and ||P^2 - P|| = ||C Q C - C||.
    trace_ = (c_ * q_).trace();
    const MatrixXcd defect_block = c_ * q_ * c_ - c_;
    Eigen::JacobiSVD<MatrixXcd> svd_def(defect_block);
    defect_ = svd_def.singularValues().size() > 0 ? svd_def.singularValues()(0) : 0.0;
    Eigen::JacobiSVD<MatrixXcd> svd_c(c_);
    witness_ = svd_c.singularValues().size() > 1 ? svd_c.singularValues()(1) : 0.0;
}

VectorXcd RieszProjection::apply(const VectorXcd& v) const {
    if (factored_) return q_ * (c_ * v);
    return p_ * v;
}

const MatrixXcd& RieszProjection::dense() const {
    if (factored_) throw Error("factored Riesz projection has no dense view");
    return p_;
}

const VectorXcd& RieszProjection::probe_image() const {
    if (chi_image_.size() == 0) throw Error("no probe vector was supplied to the projection");
    return chi_image_;
}

// ---------------------------------------------------------------------------

RieszProjection riesz_projection(const transfer::OperatorMatrix& op_t, const ContourSpec& contour,
                                 const VectorXcd* probe) {
    contour.validate();
    const int n = op_t.dim();
    const int k = contour.nodes;
    const double r = contour.radius;

    const bool dense_path = n <= kDenseProjectionLimit;

    if (dense_path) {
        MatrixXcd p = MatrixXcd::Zero(n, n);
        const MatrixXcd identity = MatrixXcd::Identity(n, n);
        for (int j = 0; j < k; ++j) {  // fixed node order for determinism
            const double theta = kTwoPi * j / k;
            const cd s = cd{1.0, 0.0} + std::polar(r, theta);
            const MatrixXcd a = shifted_dense(op_t, s);
            Eigen::PartialPivLU<MatrixXcd> lu(a);
            const MatrixXcd resolvent = lu.solve(identity);
            const double cond = a.cwiseAbs().rowwise().sum().maxCoeff() *
                                resolvent.cwiseAbs().rowwise().sum().maxCoeff();
            if (!resolvent.allFinite() || cond > kConditionLimit)
                throw ContourCrossesSpectrum("resolvent solve ill-conditioned on the contour");
            p += std::polar(r / k, theta) * resolvent;
        }
        VectorXcd chi_image;
        if (probe != nullptr) chi_image = p * (*probe);
        RieszProjection out = RieszProjection::from_dense(std::move(p));
        out.set_probe_image(std::move(chi_image));
        if (std::abs(out.trace() - cd{1.0, 0.0}) > kTraceTol)
            throw WrongEnclosedCount("contour does not enclose exactly one eigenvalue");
        return out;
    }

    // factored path: capture the (numerically rank-one) projection from a
    // probe block, with a second quadrature pass for the adjoint action.
    const int p_cols = kProbeCount;
    MatrixXcd w(n, p_cols);
    w.col(0) = probe != nullptr ? *probe : ones_vector(n);
    util::Rng rng(0x5EED2024ULL + static_cast<std::uint64_t>(n));
    for (int c = 1; c < p_cols; ++c)
        for (int i = 0; i < n; ++i)
            w(i, c) = cd{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};

    MatrixXcd y = MatrixXcd::Zero(n, p_cols);
    for (int j = 0; j < k; ++j) {
        const double theta = kTwoPi * j / k;
        const cd s = cd{1.0, 0.0} + std::polar(r, theta);
        const auto a = shifted_sparse(op_t, s);
        Eigen::SparseLU<Eigen::SparseMatrix<cd>> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success)
            throw ContourCrossesSpectrum("sparse resolvent factorization failed on the contour");
        const VectorXcd probe_v = ones_vector(n);
        const double inv_norm_est = lu.solve(probe_v).norm();
        if (!std::isfinite(inv_norm_est) || inf_norm_sparse(a) * inv_norm_est > kConditionLimit)
            throw ContourCrossesSpectrum("resolvent solve ill-conditioned on the contour");
        y += std::polar(r / k, theta) * MatrixXcd(lu.solve(w));
    }

    Eigen::HouseholderQR<MatrixXcd> qr(y);
    MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(n, p_cols);

    MatrixXcd z = MatrixXcd::Zero(n, p_cols);  // P^H Q
    for (int j = 0; j < k; ++j) {
        const double theta = kTwoPi * j / k;
        const cd s = cd{1.0, 0.0} + std::polar(r, theta);
        const auto a = shifted_sparse(op_t, s);
        Eigen::SparseLU<Eigen::SparseMatrix<cd>> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success)
            throw ContourCrossesSpectrum("sparse resolvent factorization failed on the contour");
        z += std::conj(std::polar(r / k, theta)) * MatrixXcd(lu.adjoint().solve(q));
    }

    RieszProjection out = RieszProjection::from_factors(std::move(q), z.adjoint(), y.col(0));
    if (std::abs(out.trace() - cd{1.0, 0.0}) > kTraceTol)
        throw WrongEnclosedCount("contour does not enclose exactly one eigenvalue");
    return out;
}

// ---------------------------------------------------------------------------

EigenData leading_eigen(const transfer::OperatorMatrix& op) {
    if (op.twist() != cd{0.0, 0.0}) throw Error("leading_eigen expects a plain (t=0) operator");
    const int n = op.dim();

    cd lambda1, lambda2;
    VectorXcd vec;
    if (n <= kDenseEigLimit) {
        Eigen::ComplexEigenSolver<MatrixXcd> es(op.dense());
        if (es.info() != Eigen::Success) throw Error("dense eigendecomposition failed");
        const auto order = order_by_modulus(es.eigenvalues());
        lambda1 = es.eigenvalues()(order.idx[0]);
        lambda2 = order.idx.size() > 1 ? es.eigenvalues()(order.idx[1]) : cd{0.0, 0.0};
        vec = es.eigenvectors().col(order.idx[0]);
    } else {
        const auto arn = arnoldi_leading(op);
        lambda1 = arn.lambda1;
        lambda2 = arn.lambda2;
        vec = arn.vec;
    }

    if (std::abs(lambda1) - std::abs(lambda2) < kDegenerateTol)
        throw DegenerateLeadingEigenvalue("two leading eigenvalue moduli are within 1e-8");

    auto rep = basis::rep_from_coords(op.spec(), vec);
    const cd integral = basis::integrate(rep);
    if (std::abs(integral) < 1e-12 * vec.norm())
        throw DegenerateLeadingEigenvalue("leading eigenvector has numerically zero integral");
    rep = basis::scale(rep, cd{1.0, 0.0} / integral);
    // integral normalization already rotates the phase of a real-up-to-phase
    // vector; adopt the symmetrized rep when it is numerically identical
    auto candidate = basis::force_real(rep);
    if (basis::norm_l2(basis::sub(candidate, rep)) <= 1e-10 * basis::norm_l2(rep))
        rep = std::move(candidate);

    const auto applied = op.apply(rep);
    const double residual =
        basis::norm_l2(basis::sub(applied, basis::scale(rep, lambda1))) / basis::norm_l2(rep);

    EigenData out{lambda1, std::move(rep), residual, 1.0 - std::abs(lambda2)};
    return out;
}

// ---------------------------------------------------------------------------

Workspace Workspace::make(const maps::MapModel& map, const basis::BasisSpec& spec,
                          std::optional<ContourSpec> contour) {
    auto plain = transfer::assemble(map, spec);
    auto eig = leading_eigen(plain);
    ContourSpec c = contour.has_value() ? *contour : ContourSpec::fit_to_gap(eig.gap);
    c.validate(eig.gap);
    return Workspace{map, spec, std::move(plain), std::move(eig), c};
}

PerturbedEigenData perturbed_eigendata(const Workspace& ws, const basis::FunctionRep& f, cd t) {
    const auto op_t = transfer::assemble_twisted(ws.map, ws.spec, f, t);
    const VectorXcd& chi = basis::coords(ws.eig.density);
    const auto proj = riesz_projection(op_t, ws.contour, &chi);
    VectorXcd chi_t_coords = proj.probe_image();

    auto chi_t = basis::rep_from_coords(ws.spec, std::move(chi_t_coords));
    if (basis::norm_l2(chi_t) < 1e-8)
        throw ProjectionKilledChi("Riesz projection annihilated the reference density");

    const auto applied = op_t.apply(chi_t);
    const cd lambda = basis::inner(applied, chi_t) / basis::inner(chi_t, chi_t);
    const double residual =
        basis::norm_l2(basis::sub(applied, basis::scale(chi_t, lambda))) / basis::norm_l2(chi_t);

    return PerturbedEigenData{t,        lambda,         std::move(chi_t),
                              residual, proj.defect(),  proj.rank_witness()};
}

PerturbedEigenData perturbed_eigendata(const maps::MapModel& map, const basis::FunctionRep& f,
                                       cd t, const ContourSpec& contour,
                                       const basis::BasisSpec& spec) {
    auto ws = Workspace::make(map, spec, contour);
    return perturbed_eigendata(ws, f, t);
}

EigenDerivatives eigen_derivatives_at_zero(const Workspace& ws, const basis::FunctionRep& f,
                                           double rho, int nodes) {
    if (nodes < 4 || nodes % 2 != 0) throw Error("derivative extraction needs an even node count >= 4");
    if (!(rho > 0.0)) throw Error("derivative radius must be positive");

    const int dim = ws.spec.dim();
    std::vector<cd> lambdas(static_cast<std::size_t>(nodes));
    std::vector<VectorXcd> chis(static_cast<std::size_t>(nodes));
    for (int j = 0; j < nodes; ++j) {
        const double theta = kTwoPi * j / nodes;
        const cd t = std::polar(rho, theta);
        auto ped = perturbed_eigendata(ws, f, t);
        lambdas[static_cast<std::size_t>(j)] = ped.lambda;
        chis[static_cast<std::size_t>(j)] = basis::coords(ped.chi_t);
    }

    cd l1{0.0, 0.0}, l2{0.0, 0.0};
    VectorXcd chi_prime = VectorXcd::Zero(dim);
    for (int j = 0; j < nodes; ++j) {
        const double theta = kTwoPi * j / nodes;
        const cd w1 = std::polar(1.0 / (nodes * rho), -theta);
        const cd w2 = std::polar(2.0 / (nodes * rho * rho), -2.0 * theta);
        l1 += lambdas[static_cast<std::size_t>(j)] * w1;
        l2 += lambdas[static_cast<std::size_t>(j)] * w2;
        chi_prime += chis[static_cast<std::size_t>(j)] * w1;
    }

    VectorXcd fd = (chis[0] - chis[static_cast<std::size_t>(nodes / 2)]) / (2.0 * rho);
    const double dev = (fd - chi_prime).norm() / std::max(1.0, chi_prime.norm());

    return EigenDerivatives{l1, l2, basis::rep_from_coords(ws.spec, std::move(chi_prime)),
                            basis::rep_from_coords(ws.spec, std::move(fd)), dev};
}

} // namespace livsic::spectral
