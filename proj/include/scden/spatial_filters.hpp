#pragma once

#include "scden/plane.hpp"

#include <optional>
#include <string_view>

namespace scden {

// Odd square window, 3x3 through 33x33.
class WindowSpec {
public:
    explicit WindowSpec(int size = 3);
    int size() const noexcept { return size_; }
    int radius() const noexcept { return size_ / 2; }
    friend bool operator==(const WindowSpec&, const WindowSpec&) = default;

private:
    int size_;
};

enum class StatFilter { median, lee, enhanced_lee, kuan, frost, enhanced_frost, gamma_map, wiener };

std::string_view to_string(StatFilter kind) noexcept;

struct FilterKind {
    FilterKind(StatFilter kind = StatFilter::median, double damping = 1.0);
    StatFilter kind;
    double damping; // Frost family and enhanced Lee
    friend bool operator==(const FilterKind&, const FilterKind&) = default;
};

// 3x3 directional smoothing. At each interior pixel the four 3-sample
// averages through the center (d1 horizontal, d2 vertical, d3 main
// diagonal, d4 anti-diagonal) are formed and the one closest to the center
// value is output; ties go to the lowest direction index. The one-pixel
// border is copied. Reads only from the input plane.
Plane directional_smooth(const Plane& plane);

// Median of the coefficient of variation sqrt(var)/|mean| over all full
// windows. Windows with zero mean contribute +inf.
double estimate_noise_cv(const Plane& plane, WindowSpec window);

// Sliding-window statistical filters. Window statistics are the population
// mean mu and variance var; C_I = sqrt(var)/|mu| and C_u = noise_cv
// (estimated when not given), C_max = sqrt(3) * C_u.
//
//   median          window median
//   lee             mu + k (x - mu),  k = max(0, 1 - C_u^2 / C_I^2)
//   kuan            mu + k (x - mu),  k = max(0, (1 - C_u^2 / C_I^2) / (1 + C_u^2))
//   frost           sum w x / sum w,  w = exp(-damping C_I^2 dist)
//   enhanced_lee    mu if C_I <= C_u; x if C_I >= C_max; otherwise
//                   mu W + x (1 - W),  W = exp(-damping (C_I - C_u) / (C_max - C_I))
//   enhanced_frost  same zones; middle zone weights
//                   w = exp(-damping (C_I - C_u) / (C_max - C_I) dist)
//   gamma_map       same zones; middle zone is the positive root of the
//                   Gamma-MAP quadratic with looks L = 1/C_u^2
//   wiener          see wiener_local (noise_cv unused)
//
// dist is the Chebyshev distance to the window center. A window whose
// values all equal the center returns the center unchanged; the
// coefficient-of-variation filters pass the center through when mu = 0.
// The (size-1)/2 border ring is copied from the input.
Plane local_statistical_filter(const Plane& plane, FilterKind kind, WindowSpec window,
                               std::optional<double> noise_cv = std::nullopt);

// Adaptive Wiener: nu^2 = mean of the local variances over all full
// windows; y = mu + max(var - nu^2, 0) / max(var, 1e-12) (x - mu).
Plane wiener_local(const Plane& plane, WindowSpec window);

} // namespace scden
