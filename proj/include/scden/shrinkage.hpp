#pragma once

#include "scden/plane.hpp"

#include <cstddef>
#include <optional>
#include <string_view>

namespace scden {

enum class ThresholdKind { soft, hard, semisoft };

std::string_view to_string(ThresholdKind kind) noexcept;

struct ThresholdRule {
    ThresholdKind kind = ThresholdKind::soft;
    // Semisoft upper threshold; defaults to 2T when unset.
    std::optional<double> upper;

    friend bool operator==(const ThresholdRule&, const ThresholdRule&) = default;
};

// MAD noise estimate median(|cdd|) / 0.6745.
double estimate_sigma(const Plane& cdd);

// hard:     x if |x| > T, else 0
// soft:     sign(x) max(|x| - T, 0)
// semisoft: 0 for |x| <= T; sign(x) t2 (|x| - T) / (t2 - T) for T < |x| <= t2; x above t2
double apply_threshold(double x, double threshold, const ThresholdRule& rule);
Plane apply_threshold(const Plane& plane, double threshold, const ThresholdRule& rule);

// Universal threshold sigma * sqrt(2 ln n).
double visu_threshold(std::size_t n, double sigma);

// SURE-minimizing threshold over {0} U {|x_i|}, smallest on ties, capped
// at visu_threshold(plane.size(), sigma).
double sure_threshold(const Plane& plane, double sigma);

// sigma^2 / sigma_x, sigma_x = sqrt(max(var - sigma^2, 0)); max|plane| when
// sigma_x = 0. Returns 0 when sigma = 0.
double bayes_threshold(const Plane& plane, double sigma);

// beta sigma^2 / sigma_y, beta = sqrt(ln(L / levels)), sigma_y the subband
// standard deviation; max|plane| when sigma_y = 0. Returns 0 when sigma = 0.
double normal_threshold(const Plane& plane, double sigma, std::size_t levels = 1);

// Threshold from {0} U {|noisy_i|} minimizing the squared error of the
// thresholded plane against `clean`; smallest on ties.
double oracle_threshold(const Plane& noisy, const Plane& clean, const ThresholdRule& rule);

} // namespace scden
