#include "scden/pipeline.hpp"

#include <future>
#include <limits>
#include <stdexcept>

namespace scden {

std::string_view to_string(ShrinkEstimator e) noexcept {
    switch (e) {
    case ShrinkEstimator::visu: return "visu";
    case ShrinkEstimator::sure: return "sure";
    case ShrinkEstimator::oracle: return "oracle";
    case ShrinkEstimator::bayes: return "bayes";
    case ShrinkEstimator::normal: return "normal";
    }
    return "?";
}

Plane apply_smoother(const Plane& plane, const Smoother& smoother) {
    return std::visit(
        [&plane](const auto& s) -> Plane {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DirectionalSmoothing>) {
                return directional_smooth(plane);
            } else {
                return local_statistical_filter(plane, s.kind, s.window, s.noise_cv);
            }
        },
        smoother);
}

SubbandSet smooth_details(const SubbandSet& bands, const CoefficientFilter& filter) {
    auto chd = std::async(std::launch::async, filter, std::cref(bands.chd));
    auto cvd = std::async(std::launch::async, filter, std::cref(bands.cvd));
    Plane cdd = filter(bands.cdd);
    SubbandSet out{bands.ca, chd.get(), cvd.get(), std::move(cdd), bands.source_rows,
                   bands.source_cols};
    if (!out.chd.same_shape(bands.ca) || !out.cvd.same_shape(bands.ca) ||
        !out.cdd.same_shape(bands.ca)) {
        throw std::logic_error("smooth_details: filter changed the subband shape");
    }
    return out;
}

Image sc_denoise(const Image& img, const CoefficientFilter& filter, const WaveletBasis& basis) {
    if (img.rows() < 4 || img.cols() < 4) {
        throw std::invalid_argument("sc_denoise: image must be at least 4x4");
    }
    const SubbandSet bands = dwt2(img, basis);
    return Image(idwt2(smooth_details(bands, filter), basis), img.depth_bits());
}

Image sc_denoise(const Image& img, const Smoother& smoother, const WaveletBasis& basis) {
    return sc_denoise(
        img, CoefficientFilter([&smoother](const Plane& p) { return apply_smoother(p, smoother); }),
        basis);
}

void DenoiseConfig::validate() const {
    if (levels != 1) {
        throw std::invalid_argument("only one decomposition level is supported");
    }
    switch (method) {
    case Method::identity:
        if (smoother || estimator || rule || basis) {
            throw std::invalid_argument("identity method takes no parameters");
        }
        break;
    case Method::sc:
        if (!smoother || !basis) {
            throw std::invalid_argument("sc method requires a smoother and a wavelet basis");
        }
        if (estimator || rule) {
            throw std::invalid_argument("sc method does not take a threshold estimator");
        }
        break;
    case Method::spatial_baseline:
        if (!smoother) {
            throw std::invalid_argument("spatial baseline requires a filter");
        }
        if (estimator || rule || basis) {
            throw std::invalid_argument("spatial baseline takes no wavelet parameters");
        }
        break;
    case Method::shrinkage_baseline:
        if (!estimator || !rule || !basis) {
            throw std::invalid_argument("shrinkage requires an estimator, a rule and a basis");
        }
        if (smoother) {
            throw std::invalid_argument("shrinkage does not take a smoother");
        }
        if (sigma && !(*sigma >= 0.0)) {
            throw std::invalid_argument("sigma must be >= 0");
        }
        break;
    }
}

namespace {

double band_threshold(const Plane& band, const Plane* clean_band, ShrinkEstimator est,
                      const ThresholdRule& rule, double sigma, std::size_t image_pixels) {
    switch (est) {
    case ShrinkEstimator::visu: return visu_threshold(image_pixels, sigma);
    case ShrinkEstimator::sure: return sigma > 0.0 ? sure_threshold(band, sigma) : 0.0;
    case ShrinkEstimator::oracle: return oracle_threshold(band, *clean_band, rule);
    case ShrinkEstimator::bayes: return bayes_threshold(band, sigma);
    case ShrinkEstimator::normal: return normal_threshold(band, sigma, 1);
    }
    return 0.0;
}

Image shrink(const Image& img, const DenoiseConfig& cfg, const Image* clean_ref) {
    const WaveletBasis& basis = *cfg.basis;
    SubbandSet bands = dwt2(img, basis);
    std::optional<SubbandSet> clean_bands;
    if (clean_ref != nullptr) clean_bands = dwt2(*clean_ref, basis);

    const double sigma = cfg.sigma ? *cfg.sigma : estimate_sigma(bands.cdd);
    const std::size_t pixels = img.rows() * img.cols();
    const ThresholdRule& rule = *cfg.rule;

    auto process = [&](Plane& band, const Plane* clean_band) {
        const double t = band_threshold(band, clean_band, *cfg.estimator, rule, sigma, pixels);
        band = apply_threshold(band, t, rule);
    };
    process(bands.chd, clean_bands ? &clean_bands->chd : nullptr);
    process(bands.cvd, clean_bands ? &clean_bands->cvd : nullptr);
    process(bands.cdd, clean_bands ? &clean_bands->cdd : nullptr);
    return Image(idwt2(bands, basis), img.depth_bits());
}

} // namespace

Image denoise(const Image& img, const DenoiseConfig& cfg, const Image* clean_ref) {
    cfg.validate();
    if (cfg.needs_clean_reference() != (clean_ref != nullptr)) {
        throw std::invalid_argument(cfg.needs_clean_reference()
                                        ? "oracle shrinkage requires a clean reference image"
                                        : "a clean reference is only accepted by oracle shrinkage");
    }
    if (clean_ref != nullptr) {
        require_same_shape(img.pixels(), clean_ref->pixels(), "denoise");
    }
    switch (cfg.method) {
    case Method::identity:
        return img;
    case Method::sc:
        return sc_denoise(img, *cfg.smoother, *cfg.basis);
    case Method::spatial_baseline:
        return Image(apply_smoother(img.pixels(), *cfg.smoother), img.depth_bits());
    case Method::shrinkage_baseline:
        return shrink(img, cfg, clean_ref);
    }
    return img;
}

namespace {

std::optional<Smoother> parse_smoother(std::string_view name, const MethodOptions& opts) {
    if (name == "ds") return Smoother{DirectionalSmoothing{}};
    static constexpr std::pair<std::string_view, StatFilter> table[] = {
        {"median", StatFilter::median},
        {"lee", StatFilter::lee},
        {"enhanced-lee", StatFilter::enhanced_lee},
        {"en-lee", StatFilter::enhanced_lee},
        {"kuan", StatFilter::kuan},
        {"frost", StatFilter::frost},
        {"enhanced-frost", StatFilter::enhanced_frost},
        {"en-frost", StatFilter::enhanced_frost},
        {"gamma", StatFilter::gamma_map},
        {"gamma-map", StatFilter::gamma_map},
        {"wiener", StatFilter::wiener},
    };
    for (const auto& [key, kind] : table) {
        if (name == key) {
            return Smoother{
                StatisticalSmoothing{FilterKind(kind, opts.damping), WindowSpec(opts.window),
                                     opts.noise_cv}};
        }
    }
    return std::nullopt;
}

std::optional<ShrinkEstimator> parse_estimator(std::string_view name) {
    if (name == "visu") return ShrinkEstimator::visu;
    if (name == "sure") return ShrinkEstimator::sure;
    if (name == "oracle") return ShrinkEstimator::oracle;
    if (name == "bayes") return ShrinkEstimator::bayes;
    if (name == "normal") return ShrinkEstimator::normal;
    return std::nullopt;
}

std::optional<ThresholdKind> parse_rule(std::string_view name) {
    if (name == "soft") return ThresholdKind::soft;
    if (name == "hard") return ThresholdKind::hard;
    if (name == "semisoft") return ThresholdKind::semisoft;
    return std::nullopt;
}

} // namespace

DenoiseConfig parse_method(std::string_view name, const MethodOptions& opts) {
    DenoiseConfig cfg;
    const auto unknown = [&] {
        return std::invalid_argument("unknown method '" + std::string(name) + "'");
    };
    if (name == "noisy" || name == "identity") {
        cfg.method = Method::identity;
        return cfg;
    }
    if (name.starts_with("sc-")) {
        auto smoother = parse_smoother(name.substr(3), opts);
        if (!smoother) throw unknown();
        cfg.method = Method::sc;
        cfg.smoother = std::move(smoother);
        cfg.basis = WaveletBasis::from_name(opts.basis);
        return cfg;
    }
    if (auto smoother = parse_smoother(name, opts)) {
        cfg.method = Method::spatial_baseline;
        cfg.smoother = std::move(smoother);
        return cfg;
    }

    const auto dash = name.find('-');
    const auto estimator = parse_estimator(name.substr(0, dash));
    if (!estimator) throw unknown();
    ThresholdKind kind = ThresholdKind::soft;
    if (dash != std::string_view::npos) {
        const auto parsed = parse_rule(name.substr(dash + 1));
        if (!parsed) throw unknown();
        kind = *parsed;
    }
    if (opts.rule) kind = *opts.rule;
    cfg.method = Method::shrinkage_baseline;
    cfg.estimator = estimator;
    cfg.rule = ThresholdRule{kind, kind == ThresholdKind::semisoft ? opts.upper : std::nullopt};
    cfg.basis = WaveletBasis::from_name(opts.basis);
    cfg.sigma = opts.sigma;
    return cfg;
}

std::string display_name(const DenoiseConfig& cfg) {
    auto smoother_name = [](const Smoother& s) -> std::string {
        if (std::holds_alternative<DirectionalSmoothing>(s)) return "DS";
        switch (std::get<StatisticalSmoothing>(s).kind.kind) {
        case StatFilter::median: return "Median";
        case StatFilter::lee: return "Lee";
        case StatFilter::enhanced_lee: return "En-Lee";
        case StatFilter::kuan: return "Kuan";
        case StatFilter::frost: return "Frost";
        case StatFilter::enhanced_frost: return "En-Frost";
        case StatFilter::gamma_map: return "Gamma";
        case StatFilter::wiener: return "Wiener";
        }
        return "?";
    };
    switch (cfg.method) {
    case Method::identity:
        return "Noisy";
    case Method::sc:
        return std::holds_alternative<DirectionalSmoothing>(*cfg.smoother)
                   ? "SC"
                   : "SC (" + smoother_name(*cfg.smoother) + ")";
    case Method::spatial_baseline:
        return smoother_name(*cfg.smoother);
    case Method::shrinkage_baseline: {
        std::string rule = cfg.rule->kind == ThresholdKind::soft   ? "ST"
                           : cfg.rule->kind == ThresholdKind::hard ? "HT"
                                                                   : "SST";
        switch (*cfg.estimator) {
        case ShrinkEstimator::visu: return "VisuShrink (" + rule + ")";
        case ShrinkEstimator::sure: return "SureShrink" + (rule == "ST" ? "" : " (" + rule + ")");
        case ShrinkEstimator::oracle: return "OracleShrink" + (rule == "ST" ? "" : " (" + rule + ")");
        case ShrinkEstimator::bayes: return "BayesShrink" + (rule == "ST" ? "" : " (" + rule + ")");
        case ShrinkEstimator::normal: return "NormalShrink" + (rule == "ST" ? "" : " (" + rule + ")");
        }
    }
    }
    return "?";
}

} // namespace scden
