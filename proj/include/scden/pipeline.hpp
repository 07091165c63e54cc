#pragma once

#include "scden/image_io.hpp"
#include "scden/shrinkage.hpp"
#include "scden/spatial_filters.hpp"
#include "scden/wavelet.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace scden {

struct DirectionalSmoothing {
    friend bool operator==(const DirectionalSmoothing&, const DirectionalSmoothing&) = default;
};

struct StatisticalSmoothing {
    FilterKind kind;
    WindowSpec window{3};
    std::optional<double> noise_cv; // estimated per plane when unset
    friend bool operator==(const StatisticalSmoothing&, const StatisticalSmoothing&) = default;
};

using Smoother = std::variant<DirectionalSmoothing, StatisticalSmoothing>;

Plane apply_smoother(const Plane& plane, const Smoother& smoother);

// Any plane -> plane map used on the detail subbands.
using CoefficientFilter = std::function<Plane(const Plane&)>;

// Filters CHD, CVD and CDD independently (concurrently); CA is copied.
SubbandSet smooth_details(const SubbandSet& bands, const CoefficientFilter& filter);

// Smoothing of coefficients: one-level DWT, detail subbands filtered,
// inverse DWT. Output has the input's shape and depth.
Image sc_denoise(const Image& img, const Smoother& smoother, const WaveletBasis& basis);
Image sc_denoise(const Image& img, const CoefficientFilter& filter, const WaveletBasis& basis);

enum class Method { identity, sc, spatial_baseline, shrinkage_baseline };
enum class ShrinkEstimator { visu, sure, oracle, bayes, normal };

std::string_view to_string(ShrinkEstimator e) noexcept;

struct DenoiseConfig {
    Method method = Method::identity;
    std::optional<Smoother> smoother;         // sc, spatial_baseline
    std::optional<ShrinkEstimator> estimator; // shrinkage_baseline
    std::optional<ThresholdRule> rule;        // shrinkage_baseline
    std::optional<WaveletBasis> basis;        // sc, shrinkage_baseline
    std::optional<double> sigma;              // shrinkage: known noise sigma
    int levels = 1;

    // Throws std::invalid_argument describing the first inconsistency.
    void validate() const;
    bool needs_clean_reference() const noexcept {
        return method == Method::shrinkage_baseline && estimator == ShrinkEstimator::oracle;
    }
};

// Dispatches to SC, a whole-image spatial filter, or one-level wavelet
// shrinkage (sigma from MAD of CDD unless given; one threshold per detail
// subband; CA untouched). clean_ref must be given iff the estimator is oracle.
Image denoise(const Image& img, const DenoiseConfig& cfg, const Image* clean_ref = nullptr);

// Parameters shared by the method-name parser.
struct MethodOptions {
    std::string basis = "db4";
    int window = 3;
    double damping = 1.0;
    std::optional<double> noise_cv;
    std::optional<ThresholdKind> rule; // overrides the rule in the name
    std::optional<double> upper;       // semisoft t2
    std::optional<double> sigma;
};

// Method names:
//   noisy | identity
//   sc-<smoother>                       SC with the given subband smoother
//   <smoother>                          whole-image spatial filter
//   <estimator>[-<rule>]                wavelet shrinkage, rule defaults to soft
// smoother:  ds median lee enhanced-lee kuan frost enhanced-frost gamma wiener
// estimator: visu sure oracle bayes normal;  rule: soft hard semisoft
DenoiseConfig parse_method(std::string_view name, const MethodOptions& opts = {});

// Report label, e.g. "VisuShrink (ST)".
std::string display_name(const DenoiseConfig& cfg);

} // namespace scden
