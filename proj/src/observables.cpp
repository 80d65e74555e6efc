#include "livsic/observables.hpp"

#include <cmath>
#include <numbers>

namespace livsic::observables {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

basis::FunctionRep from_modes(const basis::BasisSpec& spec,
                              const std::vector<std::pair<int, basis::cd>>& modes) {
    if (spec.family == basis::Family::fourier) {
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(spec.dim());
        for (const auto& [n, a] : modes) {
            if (std::abs(n) > spec.size) throw Error("mode exceeds the Fourier truncation order");
            c(n + spec.size) += a;
        }
        return basis::FourierRep(spec.size, std::move(c), true);
    }
    return basis::project(
        [&modes](double x) {
            basis::cd acc{0.0, 0.0};
            for (const auto& [n, a] : modes) acc += a * std::polar(1.0, kTwoPi * n * x);
            return acc.real();
        },
        spec);
}

} // namespace

basis::FunctionRep cos1(const basis::BasisSpec& spec) {
    return from_modes(spec, {{1, {0.5, 0.0}}, {-1, {0.5, 0.0}}});
}

basis::FunctionRep cos2_minus_cos1(const basis::BasisSpec& spec) {
    return from_modes(spec,
                      {{2, {0.5, 0.0}}, {-2, {0.5, 0.0}}, {1, {-0.5, 0.0}}, {-1, {-0.5, 0.0}}});
}

basis::FunctionRep constant(const basis::BasisSpec& spec, double c) {
    return from_modes(spec, {{0, {c, 0.0}}});
}

basis::FunctionRep indicator(const basis::BasisSpec& spec, double a, double b) {
    return basis::project([a, b](double x) { return (x >= a && x < b) ? 1.0 : 0.0; }, spec);
}

basis::FunctionRep trig_polynomial(const basis::BasisSpec& spec, const std::vector<double>& cos_amp,
                                   const std::vector<double>& sin_amp) {
    std::vector<std::pair<int, basis::cd>> modes;
    for (std::size_t i = 0; i < cos_amp.size(); ++i) {
        const int d = static_cast<int>(i) + 1;
        modes.push_back({d, {0.5 * cos_amp[i], 0.0}});
        modes.push_back({-d, {0.5 * cos_amp[i], 0.0}});
    }
    for (std::size_t i = 0; i < sin_amp.size(); ++i) {
        const int d = static_cast<int>(i) + 1;
        modes.push_back({d, {0.0, -0.5 * sin_amp[i]}});
        modes.push_back({-d, {0.0, 0.5 * sin_amp[i]}});
    }
    return from_modes(spec, modes);
}

} // namespace livsic::observables
