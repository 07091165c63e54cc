#pragma once

#include "scden/image_io.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scden {

// A metric whose denominator vanished in a way that has no sentinel
// (e.g. CQy with sum(I) = 0).
class DegenerateInputError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The seven assessment numbers for one (clean, denoised) pair. snr and
// psnr are plain ratios; +infinity marks an exact match.
struct MetricsReport {
    double aad = 0.0;
    double snr = 0.0;
    double psnr = 0.0;
    double ify = 0.0;
    double cqy = 0.0;
    double sct = 0.0;
    double fom = 0.0;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// All metrics take the clean image first.
double aad(const Image& clean, const Image& test);  // sum |I - Id| / (R C)
double snr(const Image& clean, const Image& test);  // sum I^2 / sum (I - Id)^2
double psnr(const Image& clean, const Image& test); // R C max(I^2) / sum (I - Id)^2
double ify(const Image& clean, const Image& test);  // 1 - 1/snr
double cqy(const Image& clean, const Image& test);  // sum I Id / sum I
double sct(const Image& clean, const Image& test);  // sum I^2 / sum Id^2

// 10 log10 of a ratio metric, +inf preserved.
double to_decibels(double ratio);

struct EdgeMap {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> mask; // row-major, 1 = edge

    bool at(std::size_t r, std::size_t c) const { return mask[r * cols + c] != 0; }
    std::size_t count() const;
    friend bool operator==(const EdgeMap&, const EdgeMap&) = default;
};

// Sobel gradient magnitude; edge iff magnitude > 0.25 * max magnitude.
// The one-pixel border is never an edge.
EdgeMap edge_map(const Image& img);

// Squared Euclidean distance from every detected pixel (raster order) to
// the nearest ideal pixel, via an exact integer distance transform.
// Requires a nonempty ideal map.
std::vector<std::int64_t> nearest_ideal_sq_distances(const EdgeMap& detected, const EdgeMap& ideal);

// Pratt's figure of merit. Both maps empty gives 1; exactly one empty gives 0.
double fom(const EdgeMap& detected, const EdgeMap& ideal, double alpha = 1.0 / 9.0);

// FOM uses edge_map(test) as detected and edge_map(clean) as ideal.
MetricsReport full_report(const Image& clean, const Image& test);

// Locale-independent, 6 significant digits; +inf becomes "inf".
std::string format_metric(double value);

// "filter,AAD,SNR,PSNR,IF,CQ,SC,FOM"
std::string csv_header();
std::string csv_row(std::string_view filter, const MetricsReport& report);

} // namespace scden
