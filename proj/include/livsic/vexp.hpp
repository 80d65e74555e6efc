#pragma once

#include <functional>
#include <string>
#include <utility>

#include "livsic/maps.hpp"

namespace livsic::vexp {

/// Reading of the cotangent weight in the branch sum.
/// reciprocal_pullback: w = ||v|| / ||(D_y T^n)^T v||  (default; agrees with
/// the printed form on conformal maps and certifies the skew-product family).
/// printed: w = ||((D_y T^n)^T)^{-1} v|| / ||v||  (kept selectable; its
/// vertical-covector weight is >= 1 on every skew-product branch).
enum class WeightVariant { reciprocal_pullback, printed };

std::string variant_name(WeightVariant v);

struct CriterionQuery {
    maps::MapModel map;
    double s = 2.0;
    int word_length = 1;  // iterate count n
    int x_resolution = 256;
    int angle_resolution = 256;
    WeightVariant variant = WeightVariant::reciprocal_pullback;

    void validate() const;  // s > 0, n >= 1, resolutions >= 64
};

struct CriterionValue {
    double value;
    double x_star;
    double angle_star;  // covector angle (0 for 1D maps)
};

/// sup over base points and unit covectors of
/// sum_{T^n y = x} |JT^n(y)|^{-1} w(y, v)^s, estimated on the grid and refined
/// by golden-section search in the covector angle around the grid argmax.
/// The reported number is a lower bound on the true sup.
CriterionValue criterion_value(const CriterionQuery& q);

/// Branch sum at a single base point and covector angle.
double covector_value(const maps::MapModel& map, double s, int n, double x, double angle,
                      WeightVariant variant);

struct Certificate {
    double value = 0.0;
    double margin = 0.0;  // 1 - value
    int n = 0;
    double s = 0.0;
    WeightVariant variant = WeightVariant::reciprocal_pullback;
    double x_star = 0.0;
    double angle_star = 0.0;
    bool positive = false;
};

/// Smallest n <= n_max whose criterion value sits below 1 by more than the
/// grid-refinement drift (1e-3); otherwise a negative certificate carrying
/// the best value found.
Certificate certify(const maps::MapModel& map, double s, int n_max, WeightVariant variant,
                    int x_resolution = 256, int angle_resolution = 256);

/// Linear scan m = m_lo..m_hi over a map family (first positive certificate
/// wins). Throws NoneCertified when the scan is empty or never certifies.
std::pair<int, Certificate> min_expanding_m(
    const std::function<maps::MapModel(int)>& family, double s, int n_max, int m_lo, int m_hi,
    WeightVariant variant, int x_resolution = 256, int angle_resolution = 256);

} // namespace livsic::vexp
