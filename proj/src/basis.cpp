#include "livsic/basis.hpp"

#include <cmath>
#include <numbers>

namespace livsic::basis {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Root of unity e^{2 pi i r / M} with exact integer phase reduction.
cd unit_root(std::int64_t r, std::int64_t m) {
    r %= m;
    if (r < 0) r += m;
    return std::polar(1.0, kTwoPi * static_cast<double>(r) / static_cast<double>(m));
}

/// c_n = (1/M) sum_j s_j e^{-2 pi i n j / M} for n = -N..N.
Eigen::VectorXcd coeffs_from_samples(const Eigen::VectorXcd& s, int order) {
    const auto m = s.size();
    Eigen::VectorXcd c(2 * order + 1);
    for (int n = -order; n <= order; ++n) {
        cd acc{0.0, 0.0};
        for (Eigen::Index j = 0; j < m; ++j)
            acc += s(j) * unit_root(-static_cast<std::int64_t>(n) * j, m);
        c(n + order) = acc / static_cast<double>(m);
    }
    return c;
}

Eigen::VectorXcd samples_on_grid(const FourierRep& rep, int m) {
    Eigen::VectorXcd s(m);
    for (int j = 0; j < m; ++j) {
        cd acc{0.0, 0.0};
        for (int n = -rep.order(); n <= rep.order(); ++n)
            acc += rep.coef(n) * unit_root(static_cast<std::int64_t>(n) * j, m);
        s(j) = acc;
    }
    return s;
}

void check_same_spec(const FunctionRep& a, const FunctionRep& b, const char* ctx) {
    if (!(spec_of(a) == spec_of(b)))
        throw BasisMismatch(std::string(ctx) + ": operands use different bases");
}

} // namespace

std::string family_name(Family f) { return f == Family::fourier ? "fourier" : "ulam"; }

FourierRep::FourierRep(int order, Eigen::VectorXcd coef, bool real_hint)
    : order_(order), coef_(std::move(coef)), real_hint_(real_hint) {
    if (order_ < 0) throw Error("Fourier order must be >= 0");
    if (coef_.size() != 2 * order_ + 1) throw Error("Fourier coefficient count must be 2N+1");
}

cd FourierRep::eval(double x) const {
    const cd w = std::polar(1.0, kTwoPi * x);
    cd p = std::polar(1.0, -kTwoPi * order_ * x);
    cd acc{0.0, 0.0};
    for (Eigen::Index i = 0; i < coef_.size(); ++i) {
        acc += coef_(i) * p;
        p *= w;
    }
    return acc;
}

bool FourierRep::real_valued(double tol) const {
    const double scale = std::max(1.0, coef_.cwiseAbs().maxCoeff());
    for (int n = 0; n <= order_; ++n) {
        if (std::abs(coef(-n) - std::conj(coef(n))) > tol * scale) return false;
    }
    return true;
}

UlamRep::UlamRep(Eigen::VectorXcd values, bool real_hint)
    : values_(std::move(values)), real_hint_(real_hint) {
    if (values_.size() < 1) throw Error("Ulam rep needs at least one cell");
}

cd UlamRep::eval(double x) const {
    const int n = cells();
    auto i = static_cast<Eigen::Index>(std::floor(x * n));
    if (i < 0) i = 0;
    if (i >= n) i = n - 1;
    return values_(i);
}

double UlamRep::l1_norm() const { return values_.cwiseAbs().mean(); }

double UlamRep::variation() const {
    double v = 0.0;
    for (Eigen::Index i = 0; i + 1 < values_.size(); ++i) v += std::abs(values_(i + 1) - values_(i));
    return v;
}

bool UlamRep::real_valued(double tol) const {
    const double scale = std::max(1.0, values_.cwiseAbs().maxCoeff());
    return values_.imag().cwiseAbs().maxCoeff() <= tol * scale;
}

BasisSpec spec_of(const FunctionRep& rep) {
    if (const auto* f = std::get_if<FourierRep>(&rep)) return {Family::fourier, f->order()};
    return {Family::ulam, std::get<UlamRep>(rep).cells()};
}

bool real_hint(const FunctionRep& rep) {
    return std::visit([](const auto& r) { return r.real_hint(); }, rep);
}

bool real_valued(const FunctionRep& rep) {
    return std::visit([](const auto& r) { return r.real_valued(); }, rep);
}

int collocation_size(int order) { return std::max(4 * order, 8); }

FunctionRep project_complex(const std::function<cd(double)>& f, const BasisSpec& spec) {
    if (spec.family == Family::fourier) {
        const int m = collocation_size(spec.size);
        Eigen::VectorXcd s(m);
        for (int j = 0; j < m; ++j) s(j) = f(static_cast<double>(j) / m);
        return FourierRep(spec.size, coeffs_from_samples(s, spec.size));
    }
    Eigen::VectorXcd v(spec.size);
    for (int i = 0; i < spec.size; ++i) v(i) = f((i + 0.5) / spec.size);
    return UlamRep(std::move(v));
}

FunctionRep project(const std::function<double(double)>& f, const BasisSpec& spec) {
    FunctionRep rep = project_complex([&f](double x) { return cd{f(x), 0.0}; }, spec);
    if (auto* fr = std::get_if<FourierRep>(&rep)) return FourierRep(fr->order(), fr->coef(), true);
    return UlamRep(std::get<UlamRep>(rep).values(), true);
}

FunctionRep multiply(const FunctionRep& a, const FunctionRep& b) {
    check_same_spec(a, b, "multiply");
    const bool hint = real_hint(a) && real_hint(b);
    if (const auto* fa = std::get_if<FourierRep>(&a)) {
        const auto& fb = std::get<FourierRep>(b);
        const int m = collocation_size(fa->order());
        const Eigen::VectorXcd sa = samples_on_grid(*fa, m);
        const Eigen::VectorXcd sb = samples_on_grid(fb, m);
        return FourierRep(fa->order(), coeffs_from_samples(sa.cwiseProduct(sb), fa->order()), hint);
    }
    const auto& ua = std::get<UlamRep>(a);
    const auto& ub = std::get<UlamRep>(b);
    return UlamRep(ua.values().cwiseProduct(ub.values()), hint);
}

cd integrate(const FunctionRep& rep) {
    return std::visit([](const auto& r) { return r.integral(); }, rep);
}

cd eval(const FunctionRep& rep, double x) {
    return std::visit([x](const auto& r) { return r.eval(x); }, rep);
}

FunctionRep exp_scale(const FunctionRep& f, cd t) {
    if (!real_valued(f))
        throw NonRealObservable("exp_scale requires a real-valued observable");
    const cd it{-t.imag(), t.real()};  // i * t
    if (const auto* ff = std::get_if<FourierRep>(&f)) {
        const int m = collocation_size(ff->order());
        Eigen::VectorXcd s(m);
        for (int j = 0; j < m; ++j)
            s(j) = std::exp(it * ff->eval(static_cast<double>(j) / m).real());
        return FourierRep(ff->order(), coeffs_from_samples(s, ff->order()));
    }
    const auto& uf = std::get<UlamRep>(f);
    Eigen::VectorXcd w(uf.cells());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(it * uf.values()(i).real());
    return UlamRep(std::move(w));
}

cd inner(const FunctionRep& a, const FunctionRep& b) {
    check_same_spec(a, b, "inner");
    if (const auto* fa = std::get_if<FourierRep>(&a)) {
        const auto& fb = std::get<FourierRep>(b);
        return fa->coef().dot(fb.coef());  // Eigen dot conjugates the first argument
    }
    const auto& ua = std::get<UlamRep>(a);
    const auto& ub = std::get<UlamRep>(b);
    return ua.values().dot(ub.values()) / static_cast<double>(ua.cells());
}

double norm_l2(const FunctionRep& a) { return std::sqrt(std::abs(inner(a, a))); }

const Eigen::VectorXcd& coords(const FunctionRep& rep) {
    if (const auto* f = std::get_if<FourierRep>(&rep)) return f->coef();
    return std::get<UlamRep>(rep).values();
}

FunctionRep rep_from_coords(const BasisSpec& spec, Eigen::VectorXcd v, bool real_hint) {
    if (v.size() != spec.dim()) throw Error("coordinate vector size does not match basis");
    if (spec.family == Family::fourier) return FourierRep(spec.size, std::move(v), real_hint);
    return UlamRep(std::move(v), real_hint);
}

FunctionRep add(const FunctionRep& a, const FunctionRep& b) {
    check_same_spec(a, b, "add");
    return rep_from_coords(spec_of(a), coords(a) + coords(b), real_hint(a) && real_hint(b));
}

FunctionRep sub(const FunctionRep& a, const FunctionRep& b) {
    check_same_spec(a, b, "sub");
    return rep_from_coords(spec_of(a), coords(a) - coords(b), real_hint(a) && real_hint(b));
}

FunctionRep scale(const FunctionRep& a, cd factor) {
    return rep_from_coords(spec_of(a), factor * coords(a),
                           real_hint(a) && factor.imag() == 0.0);
}

FunctionRep force_real(const FunctionRep& a) {
    if (const auto* f = std::get_if<FourierRep>(&a)) {
        Eigen::VectorXcd c = f->coef();
        const int n = f->order();
        for (int k = 0; k <= n; ++k) {
            const cd sym = 0.5 * (c(n + k) + std::conj(c(n - k)));
            c(n + k) = sym;
            c(n - k) = std::conj(sym);
        }
        return FourierRep(n, std::move(c), true);
    }
    const auto& u = std::get<UlamRep>(a);
    return UlamRep(u.values().real().cast<cd>(), true);
}

Rep2D::Rep2D(int order_x, int order_y, Eigen::MatrixXcd coef)
    : nx_(order_x), ny_(order_y), coef_(std::move(coef)) {
    if (coef_.rows() != 2 * nx_ + 1 || coef_.cols() != 2 * ny_ + 1)
        throw Error("Rep2D coefficient block must be (2Nx+1) x (2Ny+1)");
}

Rep2D Rep2D::project(const std::function<double(double, double)>& f, int order_x, int order_y) {
    const int mx = collocation_size(order_x);
    const int my = collocation_size(order_y);
    Eigen::MatrixXcd s(mx, my);
    for (int j = 0; j < mx; ++j)
        for (int l = 0; l < my; ++l)
            s(j, l) = f(static_cast<double>(j) / mx, static_cast<double>(l) / my);
    Eigen::MatrixXcd c(2 * order_x + 1, 2 * order_y + 1);
    for (int nx = -order_x; nx <= order_x; ++nx) {
        for (int ny = -order_y; ny <= order_y; ++ny) {
            cd acc{0.0, 0.0};
            for (int j = 0; j < mx; ++j)
                for (int l = 0; l < my; ++l)
                    acc += s(j, l) * unit_root(-static_cast<std::int64_t>(nx) * j, mx) *
                           unit_root(-static_cast<std::int64_t>(ny) * l, my);
            c(nx + order_x, ny + order_y) = acc / static_cast<double>(mx * my);
        }
    }
    return Rep2D(order_x, order_y, std::move(c));
}

cd Rep2D::eval(double x, double y) const {
    cd acc{0.0, 0.0};
    for (int nx = -nx_; nx <= nx_; ++nx) {
        cd row{0.0, 0.0};
        for (int ny = -ny_; ny <= ny_; ++ny)
            row += coef_(nx + nx_, ny + ny_) * std::polar(1.0, kTwoPi * ny * y);
        acc += row * std::polar(1.0, kTwoPi * nx * x);
    }
    return acc;
}

} // namespace livsic::basis
