#include "scden/shrinkage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace scden {

std::string_view to_string(ThresholdKind kind) noexcept {
    switch (kind) {
    case ThresholdKind::soft: return "soft";
    case ThresholdKind::hard: return "hard";
    case ThresholdKind::semisoft: return "semisoft";
    }
    return "?";
}

namespace {

void require_nonempty(const Plane& p, const char* who) {
    if (p.empty()) {
        throw std::invalid_argument(std::string(who) + ": empty plane");
    }
}

void require_sigma(double sigma, const char* who) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument(std::string(who) + ": sigma must be finite and >= 0");
    }
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double max_abs(const Plane& p) {
    double m = 0.0;
    for (double v : p.values()) m = std::max(m, std::abs(v));
    return m;
}

double population_variance(const Plane& p) {
    const auto v = p.values();
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size());
}

// Candidate thresholds {0} U {|x_i|}, ascending and de-duplicated.
std::vector<double> candidate_thresholds(const std::vector<double>& sorted_abs) {
    std::vector<double> cands;
    cands.reserve(sorted_abs.size() + 1);
    cands.push_back(0.0);
    for (double a : sorted_abs) {
        if (a != cands.back()) cands.push_back(a);
    }
    return cands;
}

} // namespace

double estimate_sigma(const Plane& cdd) {
    require_nonempty(cdd, "estimate_sigma");
    std::vector<double> mags(cdd.size());
    std::transform(cdd.values().begin(), cdd.values().end(), mags.begin(),
                   [](double v) { return std::abs(v); });
    return median_of(std::move(mags)) / 0.6745;
}

double apply_threshold(double x, double threshold, const ThresholdRule& rule) {
    const double ax = std::abs(x);
    switch (rule.kind) {
    case ThresholdKind::hard:
        return ax > threshold ? x : 0.0;
    case ThresholdKind::soft:
        if (ax <= threshold) return 0.0;
        return x > 0.0 ? x - threshold : x + threshold;
    case ThresholdKind::semisoft: {
        const double upper = rule.upper.value_or(2.0 * threshold);
        if (ax <= threshold) return 0.0;
        if (ax > upper) return x;
        const double mag = upper * (ax - threshold) / (upper - threshold);
        return x > 0.0 ? mag : -mag;
    }
    }
    return x;
}

Plane apply_threshold(const Plane& plane, double threshold, const ThresholdRule& rule) {
    if (!(threshold >= 0.0)) {
        throw std::invalid_argument("apply_threshold: threshold must be >= 0");
    }
    if (rule.kind == ThresholdKind::semisoft && rule.upper && !(*rule.upper > threshold)) {
        throw std::invalid_argument("apply_threshold: semisoft upper threshold must exceed T");
    }
    Plane out = plane;
    for (double& v : out.values()) v = apply_threshold(v, threshold, rule);
    return out;
}

double visu_threshold(std::size_t n, double sigma) {
    if (n == 0) {
        throw std::invalid_argument("visu_threshold: n must be positive");
    }
    require_sigma(sigma, "visu_threshold");
    return sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

double sure_threshold(const Plane& plane, double sigma) {
    require_nonempty(plane, "sure_threshold");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("sure_threshold: sigma must be positive");
    }
    const std::size_t n = plane.size();
    std::vector<double> mags(n);
    std::transform(plane.values().begin(), plane.values().end(), mags.begin(),
                   [](double v) { return std::abs(v); });
    std::sort(mags.begin(), mags.end());

    // SURE(t) = n s^2 - 2 s^2 #{|x| <= t} + sum_{|x| <= t} x^2 + #{|x| > t} t^2
    const double var = sigma * sigma;
    const double base = static_cast<double>(n) * var;
    double best_t = 0.0;
    double best_risk = 0.0;
    bool first = true;
    double below_sq = 0.0;
    std::size_t below = 0;
    for (double t : candidate_thresholds(mags)) {
        while (below < n && mags[below] <= t) {
            below_sq += mags[below] * mags[below];
            ++below;
        }
        const double risk = base - 2.0 * var * static_cast<double>(below) + below_sq +
                            static_cast<double>(n - below) * t * t;
        if (first || risk < best_risk) {
            best_risk = risk;
            best_t = t;
            first = false;
        }
    }
    return std::min(best_t, visu_threshold(n, sigma));
}

double bayes_threshold(const Plane& plane, double sigma) {
    require_nonempty(plane, "bayes_threshold");
    require_sigma(sigma, "bayes_threshold");
    if (sigma == 0.0) return 0.0;
    const double signal_sd = std::sqrt(std::max(population_variance(plane) - sigma * sigma, 0.0));
    if (signal_sd == 0.0) return max_abs(plane);
    return sigma * sigma / signal_sd;
}

double normal_threshold(const Plane& plane, double sigma, std::size_t levels) {
    require_nonempty(plane, "normal_threshold");
    require_sigma(sigma, "normal_threshold");
    if (levels == 0 || plane.size() <= levels) {
        throw std::invalid_argument("normal_threshold: subband size must exceed the level count");
    }
    if (sigma == 0.0) return 0.0;
    const double beta =
        std::sqrt(std::log(static_cast<double>(plane.size()) / static_cast<double>(levels)));
    const double sd = std::sqrt(population_variance(plane));
    if (sd == 0.0) return max_abs(plane);
    return beta * sigma * sigma / sd;
}

double oracle_threshold(const Plane& noisy, const Plane& clean, const ThresholdRule& rule) {
    require_same_shape(noisy, clean, "oracle_threshold");
    require_nonempty(noisy, "oracle_threshold");
    const std::size_t n = noisy.size();
    const auto x = noisy.values();
    const auto y = clean.values();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::abs(x[a]) < std::abs(x[b]); });
    std::vector<double> mags(n);
    for (std::size_t i = 0; i < n; ++i) mags[i] = std::abs(x[order[i]]);
    const std::vector<double> cands = candidate_thresholds(mags);

    double best_t = 0.0;
    double best_err = 0.0;
    bool first = true;
    auto consider = [&](double t, double err) {
        if (first || err < best_err) {
            best_err = err;
            best_t = t;
            first = false;
        }
    };

    if (rule.kind == ThresholdKind::semisoft) {
        // The middle zone depends on both T and t2, so evaluate directly.
        for (double t : cands) {
            if (rule.upper && !(*rule.upper > t)) continue;
            double err = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = apply_threshold(x[i], t, rule) - y[i];
                err += d * d;
            }
            consider(t, err);
        }
        return best_t;
    }

    // Coefficients with |x| <= t are zeroed (error y^2); the rest contribute
    // (x - y)^2 for hard, (x - y)^2 - 2 t s (x - y) + t^2 for soft (s = sign x).
    std::vector<double> tail_sq(n + 1, 0.0);
    std::vector<double> tail_lin(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        const std::size_t k = order[i];
        const double d = x[k] - y[k];
        tail_sq[i] = tail_sq[i + 1] + d * d;
        tail_lin[i] = tail_lin[i + 1] + (x[k] > 0.0 ? d : -d);
    }
    double zeroed = 0.0;
    std::size_t below = 0;
    for (double t : cands) {
        while (below < n && mags[below] <= t) {
            const double c = y[order[below]];
            zeroed += c * c;
            ++below;
        }
        double err = zeroed + tail_sq[below];
        if (rule.kind == ThresholdKind::soft) {
            err += -2.0 * t * tail_lin[below] + static_cast<double>(n - below) * t * t;
        }
        consider(t, err);
    }
    return best_t;
}

} // namespace scden
