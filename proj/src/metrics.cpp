#include "scden/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace scden {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sums {
    double abs_diff = 0.0;
    double sq_diff = 0.0;
    double clean_sq = 0.0;
    double clean_sum = 0.0;
    double test_sq = 0.0;
    double cross = 0.0;
    double clean_max_sq = 0.0;
};

Sums accumulate(const Image& clean, const Image& test, const char* who) {
    require_same_shape(clean.pixels(), test.pixels(), who);
    const auto a = clean.pixels().values();
    const auto b = test.pixels().values();
    Sums s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s.abs_diff += std::abs(d);
        s.sq_diff += d * d;
        s.clean_sq += a[i] * a[i];
        s.clean_sum += a[i];
        s.test_sq += b[i] * b[i];
        s.cross += a[i] * b[i];
        s.clean_max_sq = std::max(s.clean_max_sq, a[i] * a[i]);
    }
    return s;
}

double pixel_count(const Image& img) {
    return static_cast<double>(img.rows() * img.cols());
}

double snr_from(const Sums& s) {
    return s.sq_diff == 0.0 ? kInf : s.clean_sq / s.sq_diff;
}

double psnr_from(const Sums& s, double n) {
    return s.sq_diff == 0.0 ? kInf : n * s.clean_max_sq / s.sq_diff;
}

double ify_from_snr(double ratio) {
    if (ratio == kInf) return 1.0;
    if (ratio == 0.0) {
        throw DegenerateInputError("IFy undefined: SNR is zero (clean image is all zeros)");
    }
    return 1.0 - 1.0 / ratio;
}

double cqy_from(const Sums& s) {
    if (s.clean_sum == 0.0) {
        throw DegenerateInputError("CQy undefined: clean image sums to zero");
    }
    return s.cross / s.clean_sum;
}

double sct_from(const Sums& s) {
    if (s.test_sq == 0.0) {
        throw DegenerateInputError("SCt undefined: test image has zero energy");
    }
    return s.clean_sq / s.test_sq;
}

std::int64_t floor_div(std::int64_t num, std::int64_t den) {
    std::int64_t q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    return q;
}

} // namespace

double aad(const Image& clean, const Image& test) {
    return accumulate(clean, test, "aad").abs_diff / pixel_count(clean);
}

double snr(const Image& clean, const Image& test) {
    return snr_from(accumulate(clean, test, "snr"));
}

double psnr(const Image& clean, const Image& test) {
    return psnr_from(accumulate(clean, test, "psnr"), pixel_count(clean));
}

double ify(const Image& clean, const Image& test) {
    return ify_from_snr(snr(clean, test));
}

double cqy(const Image& clean, const Image& test) {
    return cqy_from(accumulate(clean, test, "cqy"));
}

double sct(const Image& clean, const Image& test) {
    return sct_from(accumulate(clean, test, "sct"));
}

double to_decibels(double ratio) {
    return ratio == kInf ? kInf : 10.0 * std::log10(ratio);
}

std::size_t EdgeMap::count() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

EdgeMap edge_map(const Image& img) {
    const Plane& p = img.pixels();
    if (p.rows() < 3 || p.cols() < 3) {
        throw std::invalid_argument("edge_map: image must be at least 3x3");
    }
    Plane mag(p.rows(), p.cols(), 0.0);
    double peak = 0.0;
    for (std::size_t r = 1; r + 1 < p.rows(); ++r) {
        for (std::size_t c = 1; c + 1 < p.cols(); ++c) {
            const double gx = (p(r - 1, c + 1) + 2.0 * p(r, c + 1) + p(r + 1, c + 1)) -
                              (p(r - 1, c - 1) + 2.0 * p(r, c - 1) + p(r + 1, c - 1));
            const double gy = (p(r + 1, c - 1) + 2.0 * p(r + 1, c) + p(r + 1, c + 1)) -
                              (p(r - 1, c - 1) + 2.0 * p(r - 1, c) + p(r - 1, c + 1));
            mag(r, c) = std::sqrt(gx * gx + gy * gy);
            peak = std::max(peak, mag(r, c));
        }
    }
    EdgeMap out{p.rows(), p.cols(), std::vector<std::uint8_t>(p.size(), 0)};
    const double threshold = 0.25 * peak;
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.mask[i] = mag.values()[i] > threshold ? 1 : 0;
    }
    return out;
}

// Meijster, Roerdink & Hesselink exact Euclidean distance transform.
std::vector<std::int64_t> nearest_ideal_sq_distances(const EdgeMap& detected, const EdgeMap& ideal) {
    if (detected.rows != ideal.rows || detected.cols != ideal.cols) {
        throw std::invalid_argument("nearest_ideal_sq_distances: dimension mismatch");
    }
    if (ideal.count() == 0) {
        throw std::invalid_argument("nearest_ideal_sq_distances: ideal edge map is empty");
    }
    const auto rows = static_cast<std::int64_t>(ideal.rows);
    const auto cols = static_cast<std::int64_t>(ideal.cols);
    const std::int64_t inf = rows + cols;

    // Column pass: vertical distance to the nearest ideal pixel.
    std::vector<std::int64_t> g(static_cast<std::size_t>(rows * cols));
    auto G = [&](std::int64_t r, std::int64_t c) -> std::int64_t& {
        return g[static_cast<std::size_t>(r * cols + c)];
    };
    for (std::int64_t c = 0; c < cols; ++c) {
        G(0, c) = ideal.at(0, static_cast<std::size_t>(c)) ? 0 : inf;
        for (std::int64_t r = 1; r < rows; ++r) {
            G(r, c) = ideal.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c))
                          ? 0
                          : std::min(inf, G(r - 1, c) + 1);
        }
        for (std::int64_t r = rows - 2; r >= 0; --r) {
            if (G(r + 1, c) < G(r, c)) G(r, c) = G(r + 1, c) + 1;
        }
    }

    // Row pass: lower envelope of parabolas (x - i)^2 + g(i)^2.
    std::vector<std::int64_t> dist(static_cast<std::size_t>(rows * cols));
    std::vector<std::int64_t> s(static_cast<std::size_t>(cols));
    std::vector<std::int64_t> t(static_cast<std::size_t>(cols));
    for (std::int64_t r = 0; r < rows; ++r) {
        auto f = [&](std::int64_t x, std::int64_t i) {
            const std::int64_t gi = G(r, i);
            return (x - i) * (x - i) + gi * gi;
        };
        auto sep = [&](std::int64_t i, std::int64_t u) {
            const std::int64_t gu = G(r, u);
            const std::int64_t gi = G(r, i);
            return floor_div(u * u - i * i + gu * gu - gi * gi, 2 * (u - i));
        };
        std::int64_t q = 0;
        s[0] = 0;
        t[0] = 0;
        for (std::int64_t u = 1; u < cols; ++u) {
            while (q >= 0 && f(t[q], s[q]) > f(t[q], u)) --q;
            if (q < 0) {
                q = 0;
                s[0] = u;
            } else {
                const std::int64_t w = 1 + sep(s[q], u);
                if (w < cols) {
                    ++q;
                    s[q] = u;
                    t[q] = w;
                }
            }
        }
        for (std::int64_t u = cols - 1; u >= 0; --u) {
            dist[static_cast<std::size_t>(r * cols + u)] = f(u, s[q]);
            if (u == t[q]) --q;
        }
    }

    std::vector<std::int64_t> out;
    out.reserve(detected.count());
    for (std::size_t i = 0; i < detected.mask.size(); ++i) {
        if (detected.mask[i] != 0) out.push_back(dist[i]);
    }
    return out;
}

double fom(const EdgeMap& detected, const EdgeMap& ideal, double alpha) {
    if (detected.rows != ideal.rows || detected.cols != ideal.cols) {
        throw std::invalid_argument("fom: dimension mismatch");
    }
    const std::size_t n_detected = detected.count();
    const std::size_t n_ideal = ideal.count();
    if (n_detected == 0 && n_ideal == 0) return 1.0;
    if (n_detected == 0 || n_ideal == 0) return 0.0;
    double sum = 0.0;
    for (std::int64_t d2 : nearest_ideal_sq_distances(detected, ideal)) {
        sum += 1.0 / (1.0 + static_cast<double>(d2) * alpha);
    }
    return sum / static_cast<double>(std::max(n_detected, n_ideal));
}

MetricsReport full_report(const Image& clean, const Image& test) {
    const Sums s = accumulate(clean, test, "full_report");
    MetricsReport rep;
    rep.aad = s.abs_diff / pixel_count(clean);
    rep.snr = snr_from(s);
    rep.psnr = psnr_from(s, pixel_count(clean));
    rep.ify = ify_from_snr(rep.snr);
    rep.cqy = cqy_from(s);
    rep.sct = sct_from(s);
    // Images without an interior have no edge pixels on either side.
    rep.fom = clean.rows() < 3 || clean.cols() < 3 ? 1.0 : fom(edge_map(test), edge_map(clean));
    return rep;
}

std::string format_metric(double value) {
    if (value == kInf) return "inf";
    if (value == -kInf) return "-inf";
    if (std::isnan(value)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

std::string csv_header() {
    return "filter,AAD,SNR,PSNR,IF,CQ,SC,FOM";
}

std::string csv_row(std::string_view filter, const MetricsReport& r) {
    std::string name(filter);
    if (name.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char ch : name) {
            if (ch == '"') quoted += '"';
            quoted += ch;
        }
        name = quoted + "\"";
    }
    std::string row = name;
    for (double v : {r.aad, r.snr, r.psnr, r.ify, r.cqy, r.sct, r.fom}) {
        row += ',';
        row += format_metric(v);
    }
    return row;
}

} // namespace scden
