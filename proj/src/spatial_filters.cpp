#include "scden/spatial_filters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace scden {

WindowSpec::WindowSpec(int size) : size_(size) {
    if (size < 3 || size > 33 || size % 2 == 0) {
        throw std::invalid_argument("window size must be odd and within [3, 33], got " +
                                    std::to_string(size));
    }
}

FilterKind::FilterKind(StatFilter k, double d) : kind(k), damping(d) {
    if (!(damping > 0.0)) {
        throw std::invalid_argument("damping factor must be positive");
    }
}

std::string_view to_string(StatFilter kind) noexcept {
    switch (kind) {
    case StatFilter::median: return "median";
    case StatFilter::lee: return "lee";
    case StatFilter::enhanced_lee: return "enhanced-lee";
    case StatFilter::kuan: return "kuan";
    case StatFilter::frost: return "frost";
    case StatFilter::enhanced_frost: return "enhanced-frost";
    case StatFilter::gamma_map: return "gamma";
    case StatFilter::wiener: return "wiener";
    }
    return "?";
}

Plane directional_smooth(const Plane& plane) {
    if (plane.rows() < 3 || plane.cols() < 3) {
        throw std::invalid_argument("directional_smooth: plane must be at least 3x3");
    }
    Plane out = plane;
    for (std::size_t r = 1; r + 1 < plane.rows(); ++r) {
        for (std::size_t c = 1; c + 1 < plane.cols(); ++c) {
            const double x = plane(r, c);
            const double avg[4] = {
                (plane(r, c - 1) + x + plane(r, c + 1)) / 3.0,
                (plane(r - 1, c) + x + plane(r + 1, c)) / 3.0,
                (plane(r - 1, c - 1) + x + plane(r + 1, c + 1)) / 3.0,
                (plane(r - 1, c + 1) + x + plane(r + 1, c - 1)) / 3.0,
            };
            double best = avg[0];
            double best_dist = std::abs(x - avg[0]);
            for (int i = 1; i < 4; ++i) {
                const double dist = std::abs(x - avg[i]);
                if (dist < best_dist) {
                    best = avg[i];
                    best_dist = dist;
                }
            }
            out(r, c) = best;
        }
    }
    return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_fits(const Plane& plane, WindowSpec window, const char* who) {
    const auto n = static_cast<std::size_t>(window.size());
    if (plane.rows() < n || plane.cols() < n) {
        throw std::invalid_argument(std::string(who) + ": plane " + std::to_string(plane.rows()) +
                                    "x" + std::to_string(plane.cols()) + " is smaller than the " +
                                    std::to_string(n) + "x" + std::to_string(n) + " window");
    }
}

struct WindowStats {
    double mean = 0.0;
    double var = 0.0;
    bool uniform = false; // every value equals the center
};

// Copies the window centered at (r, c) into buf (raster order) and returns
// its population statistics.
WindowStats gather(const Plane& plane, std::size_t r, std::size_t c, int radius,
                   std::vector<double>& buf) {
    buf.clear();
    const double center = plane(r, c);
    bool uniform = true;
    double sum = 0.0;
    for (int dr = -radius; dr <= radius; ++dr) {
        for (int dc = -radius; dc <= radius; ++dc) {
            const double v = plane(r + dr, c + dc);
            uniform = uniform && v == center;
            sum += v;
            buf.push_back(v);
        }
    }
    const double n = static_cast<double>(buf.size());
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : buf) ss += (v - mean) * (v - mean);
    return {mean, ss / n, uniform};
}

double coefficient_of_variation(const WindowStats& s) {
    if (s.mean == 0.0) return kInf;
    return std::sqrt(s.var) / std::abs(s.mean);
}

template <typename PerPixel>
Plane for_each_interior(const Plane& plane, WindowSpec window, PerPixel&& fn) {
    Plane out = plane;
    const auto radius = static_cast<std::size_t>(window.radius());
    std::vector<double> buf;
    buf.reserve(static_cast<std::size_t>(window.size() * window.size()));
    for (std::size_t r = radius; r + radius < plane.rows(); ++r) {
        for (std::size_t c = radius; c + radius < plane.cols(); ++c) {
            const WindowStats s = gather(plane, r, c, window.radius(), buf);
            out(r, c) = s.uniform ? plane(r, c) : fn(r, c, s, buf);
        }
    }
    return out;
}

// Weighted mean with weights exp(-rate * chebyshev_distance); buf is the
// window in raster order.
double distance_weighted_mean(const std::vector<double>& buf, int radius, double rate) {
    double num = 0.0;
    double den = 0.0;
    std::size_t i = 0;
    for (int dr = -radius; dr <= radius; ++dr) {
        for (int dc = -radius; dc <= radius; ++dc, ++i) {
            const double dist = std::max(std::abs(dr), std::abs(dc));
            const double w = std::exp(-rate * dist);
            num += w * buf[i];
            den += w;
        }
    }
    return num / den;
}

double gamma_map_estimate(double x, double mean, double ci, double cu) {
    // Solved on the positive half-line; negative-mean windows are mirrored.
    const double sign = mean < 0.0 ? -1.0 : 1.0;
    const double m = sign * mean;
    const double xs = sign * x;
    const double looks = 1.0 / (cu * cu);
    const double alpha = (1.0 + cu * cu) / (ci * ci - cu * cu);
    const double b = alpha - looks - 1.0;
    const double disc = std::max(m * m * b * b + 4.0 * alpha * looks * m * xs, 0.0);
    return sign * (b * m + std::sqrt(disc)) / (2.0 * alpha);
}

// mean + gain (x - mean), written so that gain = 1 returns x exactly.
double blend(double x, double mean, double gain) {
    return x + (1.0 - gain) * (mean - x);
}

enum class Zone { smooth, filter, keep };

Zone classify(double ci, double cu, double cmax) {
    if (ci <= cu) return Zone::smooth;
    if (ci >= cmax) return Zone::keep;
    return Zone::filter;
}

} // namespace

double estimate_noise_cv(const Plane& plane, WindowSpec window) {
    require_fits(plane, window, "estimate_noise_cv");
    const auto radius = static_cast<std::size_t>(window.radius());
    std::vector<double> cvs;
    std::vector<double> buf;
    for (std::size_t r = radius; r + radius < plane.rows(); ++r) {
        for (std::size_t c = radius; c + radius < plane.cols(); ++c) {
            cvs.push_back(coefficient_of_variation(gather(plane, r, c, window.radius(), buf)));
        }
    }
    std::sort(cvs.begin(), cvs.end());
    const std::size_t n = cvs.size();
    return n % 2 == 1 ? cvs[n / 2] : 0.5 * (cvs[n / 2 - 1] + cvs[n / 2]);
}

Plane wiener_local(const Plane& plane, WindowSpec window) {
    require_fits(plane, window, "wiener_local");
    const auto radius = static_cast<std::size_t>(window.radius());
    std::vector<double> buf;
    double var_sum = 0.0;
    std::size_t windows = 0;
    for (std::size_t r = radius; r + radius < plane.rows(); ++r) {
        for (std::size_t c = radius; c + radius < plane.cols(); ++c) {
            var_sum += gather(plane, r, c, window.radius(), buf).var;
            ++windows;
        }
    }
    const double noise_var = var_sum / static_cast<double>(windows);
    return for_each_interior(plane, window, [&](std::size_t r, std::size_t c, const WindowStats& s,
                                                const std::vector<double>&) {
        const double gain = std::max(s.var - noise_var, 0.0) / std::max(s.var, 1e-12);
        return blend(plane(r, c), s.mean, gain);
    });
}

Plane local_statistical_filter(const Plane& plane, FilterKind kind, WindowSpec window,
                               std::optional<double> noise_cv) {
    require_fits(plane, window, "local_statistical_filter");
    if (noise_cv && !(*noise_cv >= 0.0)) {
        throw std::invalid_argument("local_statistical_filter: noise_cv must be >= 0");
    }
    const int radius = window.radius();

    if (kind.kind == StatFilter::wiener) {
        return wiener_local(plane, window);
    }
    if (kind.kind == StatFilter::median) {
        return for_each_interior(plane, window, [](std::size_t, std::size_t, const WindowStats&,
                                                   const std::vector<double>& buf) {
            std::vector<double> tmp = buf;
            auto mid = tmp.begin() + static_cast<std::ptrdiff_t>(tmp.size() / 2);
            std::nth_element(tmp.begin(), mid, tmp.end());
            return *mid;
        });
    }

    const double cu = noise_cv ? *noise_cv : estimate_noise_cv(plane, window);
    const double cmax = std::numbers::sqrt3 * cu;
    const double damping = kind.damping;

    return for_each_interior(plane, window, [&](std::size_t r, std::size_t c, const WindowStats& s,
                                                const std::vector<double>& buf) {
        const double x = plane(r, c);
        const double ci = coefficient_of_variation(s);
        if (!std::isfinite(ci)) return x;
        switch (kind.kind) {
        case StatFilter::lee: {
            const double k = ci == 0.0 ? 0.0 : std::max(0.0, 1.0 - (cu * cu) / (ci * ci));
            return blend(x, s.mean, k);
        }
        case StatFilter::kuan: {
            const double k =
                ci == 0.0 ? 0.0 : std::max(0.0, (1.0 - (cu * cu) / (ci * ci)) / (1.0 + cu * cu));
            return blend(x, s.mean, k);
        }
        case StatFilter::frost:
            return distance_weighted_mean(buf, radius, damping * ci * ci);
        case StatFilter::enhanced_lee:
            switch (classify(ci, cu, cmax)) {
            case Zone::smooth: return s.mean;
            case Zone::keep: return x;
            case Zone::filter: {
                const double w = std::exp(-damping * (ci - cu) / (cmax - ci));
                return s.mean * w + x * (1.0 - w);
            }
            }
            break;
        case StatFilter::enhanced_frost:
            switch (classify(ci, cu, cmax)) {
            case Zone::smooth: return s.mean;
            case Zone::keep: return x;
            case Zone::filter:
                return distance_weighted_mean(buf, radius, damping * (ci - cu) / (cmax - ci));
            }
            break;
        case StatFilter::gamma_map:
            switch (classify(ci, cu, cmax)) {
            case Zone::smooth: return s.mean;
            case Zone::keep: return x;
            case Zone::filter: return gamma_map_estimate(x, s.mean, ci, cu);
            }
            break;
        case StatFilter::median:
        case StatFilter::wiener:
            break;
        }
        return x;
    });
}

} // namespace scden
