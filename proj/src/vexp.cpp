#include "livsic/vexp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "livsic/util.hpp"

namespace livsic::vexp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBranchGuard = 1e6;
constexpr double kGridDrift = 1e-3;  // refinement allowance for positive certificates

void check_branch_guard(double per_step, int n) {
    if (std::pow(per_step, n) > kBranchGuard)
        throw BranchExplosion("branch_count^n exceeds the 1e6 enumeration guard");
}

/// Composed-derivative data of the skew product along every n-step branch
/// word over base x. Each one-step derivative is [[m, 0], [c, 1]], so the
/// n-step transpose is [[m^n, C], [0, 1]] with a scalar C per word.
std::vector<double> skew_word_offsets(const maps::TsujiiSkewProduct& map, double x, int n) {
    const int m = map.m();
    std::vector<double> xs{x};  // current level of preimage x-coordinates
    std::vector<double> cs{0.0};
    // depth d consumes preimage points p_{n-d}; its one-step column entry is
    // scaled by m^{n-d} in the composed product
    double power = 1.0;  // m^{n-d} accumulates from the x-end downward: d=1 -> m^{n-1}
    power = std::pow(static_cast<double>(m), n - 1);
    for (int depth = 1; depth <= n; ++depth) {
        std::vector<double> next_xs;
        std::vector<double> next_cs;
        next_xs.reserve(xs.size() * static_cast<std::size_t>(m));
        next_cs.reserve(xs.size() * static_cast<std::size_t>(m));
        for (std::size_t i = 0; i < xs.size(); ++i) {
            for (int j = 0; j < m; ++j) {
                const double xp = (xs[i] + j) / m;
                const double c = -kTwoPi * m * std::sin(kTwoPi * xp);
                next_xs.push_back(xp);
                next_cs.push_back(cs[i] + c * power);
            }
        }
        xs.swap(next_xs);
        cs.swap(next_cs);
        power /= m;
    }
    return cs;
}

double skew_value(const maps::TsujiiSkewProduct& map, double s, int n,
                  const std::vector<double>& offsets, double angle, WeightVariant variant) {
    const double mn = std::pow(static_cast<double>(map.m()), n);
    const double inv_jac = 1.0 / mn;  // |JT^n| = m^n exactly
    const double cosv = std::cos(angle);
    const double sinv = std::sin(angle);
    const bool quadratic = s == 2.0;
    double total = 0.0;
    if (variant == WeightVariant::reciprocal_pullback) {
        for (const double c : offsets) {
            const double a = mn * cosv + c * sinv;
            const double norm2 = a * a + sinv * sinv;  // ||(D^T) v||^2
            total += quadratic ? inv_jac / norm2 : inv_jac * std::pow(norm2, -0.5 * s);
        }
    } else {
        for (const double c : offsets) {
            const double a = (cosv - c * sinv) / mn;
            const double norm2 = a * a + sinv * sinv;  // ||(D^T)^{-1} v||^2
            total += quadratic ? inv_jac * norm2 : inv_jac * std::pow(norm2, 0.5 * s);
        }
    }
    return total;
}

/// 1D branch sum: the derivative is scalar, so both weight readings equal
/// |(T^n)'(y)|^{-1} and the summand is |(T^n)'(y)|^{-(1+s)}. The two variants
/// keep their own arithmetic so their agreement stays an observable check.
double conformal_value(const maps::MapModel& map, double s, int n, double x,
                       WeightVariant variant) {
    std::vector<double> xs{x};
    std::vector<double> ds{1.0};
    for (int depth = 1; depth <= n; ++depth) {
        std::vector<double> next_xs, next_ds;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            for (const auto& br : maps::inverse_branches(map, xs[i])) {
                next_xs.push_back(br.preimage);
                next_ds.push_back(ds[i] * br.derivative);
            }
        }
        if (next_xs.size() > static_cast<std::size_t>(kBranchGuard))
            throw BranchExplosion("branch_count^n exceeds the 1e6 enumeration guard");
        xs.swap(next_xs);
        ds.swap(next_ds);
    }
    double total = 0.0;
    if (variant == WeightVariant::reciprocal_pullback) {
        for (const double d : ds) total += std::pow(d * d, -0.5 * s) / std::abs(d);
    } else {
        for (const double d : ds) {
            const double inv = 1.0 / d;
            total += std::pow(inv * inv, 0.5 * s) / std::abs(d);
        }
    }
    return total;
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          int iters = 60) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? fc : fd;
}

} // namespace

std::string variant_name(WeightVariant v) {
    return v == WeightVariant::reciprocal_pullback ? "reciprocal-pullback" : "printed";
}

void CriterionQuery::validate() const {
    if (!(s > 0.0)) throw Error("criterion exponent must satisfy s > 0");
    if (word_length < 1) throw Error("criterion word length must be >= 1");
    if (x_resolution < 64 || angle_resolution < 64)
        throw Error("criterion grid resolutions must be >= 64");
}

double covector_value(const maps::MapModel& map, double s, int n, double x, double angle,
                      WeightVariant variant) {
    if (const auto* t = std::get_if<maps::TsujiiSkewProduct>(&map)) {
        check_branch_guard(t->m(), n);
        const auto offsets = skew_word_offsets(*t, x, n);
        return skew_value(*t, s, n, offsets, angle, variant);
    }
    return conformal_value(map, s, n, x, variant);
}

CriterionValue criterion_value(const CriterionQuery& q) {
    q.validate();

    if (const auto* t = std::get_if<maps::TsujiiSkewProduct>(&q.map)) {
        check_branch_guard(t->m(), q.word_length);
        const int rx = q.x_resolution;
        const int rt = q.angle_resolution;
        std::vector<CriterionValue> chunk_best(static_cast<std::size_t>(rx), {0.0, 0.0, 0.0});
        util::parallel_for(static_cast<std::size_t>(rx), [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                const double x = static_cast<double>(i) / rx;
                const auto offsets = skew_word_offsets(*t, x, q.word_length);
                CriterionValue best{0.0, x, 0.0};
                for (int l = 0; l < rt; ++l) {
                    const double angle = std::numbers::pi * l / rt;
                    const double v = skew_value(*t, q.s, q.word_length, offsets, angle, q.variant);
                    if (v > best.value) best = {v, x, angle};
                }
                chunk_best[i] = best;
            }
        });
        CriterionValue best{0.0, 0.0, 0.0};
        for (const auto& cand : chunk_best)
            if (cand.value > best.value) best = cand;

        // refine the covector angle around the grid argmax
        const auto offsets = skew_word_offsets(*t, best.x_star, q.word_length);
        const double step = std::numbers::pi / rt;
        const double refined = golden_section_max(
            [&](double angle) {
                return skew_value(*t, q.s, q.word_length, offsets, angle, q.variant);
            },
            best.angle_star - step, best.angle_star + step);
        if (refined > best.value) best.value = refined;
        return best;
    }

    // conformal 1D case: no covector dependence
    CriterionValue best{0.0, 0.0, 0.0};
    const int rx = q.x_resolution;
    for (int i = 0; i < rx; ++i) {
        const double x = static_cast<double>(i) / rx;
        const double v = conformal_value(q.map, q.s, q.word_length, x, q.variant);
        if (v > best.value) best = {v, x, 0.0};
    }
    return best;
}

Certificate certify(const maps::MapModel& map, double s, int n_max, WeightVariant variant,
                    int x_resolution, int angle_resolution) {
    Certificate best;
    best.s = s;
    best.variant = variant;
    best.value = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= n_max; ++n) {
        CriterionQuery q{map, s, n, x_resolution, angle_resolution, variant};
        const auto cv = criterion_value(q);
        if (cv.value < best.value) {
            best.value = cv.value;
            best.margin = 1.0 - cv.value;
            best.n = n;
            best.x_star = cv.x_star;
            best.angle_star = cv.angle_star;
        }
        if (cv.value < 1.0 - kGridDrift) {
            best = {cv.value, 1.0 - cv.value, n, s, variant, cv.x_star, cv.angle_star, true};
            return best;
        }
    }
    best.positive = false;
    return best;
}

std::pair<int, Certificate> min_expanding_m(const std::function<maps::MapModel(int)>& family,
                                            double s, int n_max, int m_lo, int m_hi,
                                            WeightVariant variant, int x_resolution,
                                            int angle_resolution) {
    for (int m = m_lo; m <= m_hi; ++m) {
        const auto cert = certify(family(m), s, n_max, variant, x_resolution, angle_resolution);
        if (cert.positive) return {m, cert};
    }
    throw NoneCertified("no parameter in the scanned range produced a positive certificate");
}

} // namespace livsic::vexp
