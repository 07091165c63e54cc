#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scden/metrics.hpp"
#include "scden/pipeline.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace scden;
using scden::testing::max_abs;
using scden::testing::max_abs_diff;
using scden::testing::random_plane;

namespace {

const char* const kAllMethods[] = {
    "noisy",      "sc-ds",        "sc-median",  "sc-lee",          "sc-kuan",
    "sc-frost",   "sc-enhanced-lee", "sc-enhanced-frost", "sc-gamma", "sc-wiener",
    "ds",         "median",       "lee",        "enhanced-lee",    "kuan",
    "frost",      "enhanced-frost", "gamma",    "wiener",          "visu-soft",
    "visu-hard",  "visu-semisoft", "sure",      "sure-hard",       "bayes",
    "normal",     "normal-semisoft", "oracle-soft", "oracle-hard", "oracle-semisoft",
};

Image run(const Image& img, std::string_view method, const Image* clean = nullptr,
          const MethodOptions& opts = {}) {
    const DenoiseConfig cfg = parse_method(method, opts);
    return denoise(img, cfg, cfg.needs_clean_reference() ? (clean ? clean : &img) : nullptr);
}

} // namespace

TEST_CASE("constant images pass through every method") {
    for (const char* basis : {"haar", "db4"}) {
        MethodOptions opts;
        opts.basis = basis;
        const Image flat(Plane(32, 32, 12345.0), 16);
        for (const char* m : kAllMethods) {
            CAPTURE(m);
            CAPTURE(basis);
            const Image out = run(flat, m, nullptr, opts);
            CHECK(max_abs_diff(out.pixels(), flat.pixels()) <= 1e-9 * 12345.0);
        }
    }
}

TEST_CASE("identity smoother reproduces the input") {
    std::mt19937_64 rng(41);
    const Image img(random_plane(rng, 24, 20, 0.0, 60000.0), 16);
    for (const WaveletBasis& b : {WaveletBasis::haar(), WaveletBasis::db4()}) {
        const Image out = sc_denoise(img, CoefficientFilter([](const Plane& p) { return p; }), b);
        CHECK(out.depth_bits() == 16);
        CHECK(max_abs_diff(out.pixels(), img.pixels()) <= 1e-9 * max_abs(img.pixels()));
    }
}

TEST_CASE("approximation band is handed to the inverse untouched") {
    std::mt19937_64 rng(42);
    const SubbandSet bands = dwt2(random_plane(rng, 16, 16), WaveletBasis::db4());
    const SubbandSet out = smooth_details(
        bands, [](const Plane& p) { return local_statistical_filter(p, FilterKind(), WindowSpec(3)); });
    CHECK(out.ca == bands.ca);
    CHECK(out.source_rows == 16);
    // Concurrent filtering equals sequential application.
    CHECK(out.chd == local_statistical_filter(bands.chd, FilterKind(), WindowSpec(3)));
    CHECK(out.cvd == local_statistical_filter(bands.cvd, FilterKind(), WindowSpec(3)));
    CHECK(out.cdd == local_statistical_filter(bands.cdd, FilterKind(), WindowSpec(3)));

    CHECK_THROWS_AS(smooth_details(bands, [](const Plane&) { return Plane(2, 2); }),
                    std::logic_error);
}

TEST_CASE("zero smoother equals hard thresholding with an infinite threshold") {
    std::mt19937_64 rng(43);
    const Image img(random_plane(rng, 20, 28, 0.0, 1000.0), 16);
    for (const WaveletBasis& b : {WaveletBasis::haar(), WaveletBasis::db4()}) {
        const Image zeroed = sc_denoise(
            img, CoefficientFilter([](const Plane& p) { return Plane(p.rows(), p.cols(), 0.0); }), b);
        SubbandSet bands = dwt2(img, b);
        const double huge = std::numeric_limits<double>::max();
        const ThresholdRule hard{ThresholdKind::hard, std::nullopt};
        bands.chd = apply_threshold(bands.chd, huge, hard);
        bands.cvd = apply_threshold(bands.cvd, huge, hard);
        bands.cdd = apply_threshold(bands.cdd, huge, hard);
        const Plane via_threshold = idwt2(bands, b);
        CHECK(max_abs_diff(zeroed.pixels(), via_threshold) <= 1e-9 * max_abs(via_threshold));
    }
}

TEST_CASE("SC with directional smoothing improves PSNR on the phantom") {
    PhantomParams p;
    p.rows = 128;
    p.cols = 128;
    p.grid = 6;
    const Image clean = make_phantom(p);
    const Image noisy = add_noise(clean, {10.0, 42});
    const Image out = sc_denoise(noisy, Smoother{DirectionalSmoothing{}}, WaveletBasis::db4());
    CHECK(psnr(clean, out) > psnr(clean, noisy));
}

TEST_CASE("dispatcher examples") {
    const Image zero(Plane(16, 16, 0.0), 16);
    CHECK(run(zero, "visu-soft").pixels() == zero.pixels());

    const Image flat(Plane(9, 9, 77.0), 8);
    const Image med = run(flat, "median");
    CHECK(med == flat);

    std::mt19937_64 rng(44);
    const Image noisy(random_plane(rng, 16, 16, 0.0, 5000.0), 16);
    const Image same = run(noisy, "oracle-hard", &noisy);
    CHECK(max_abs_diff(same.pixels(), noisy.pixels()) <= 1e-9 * max_abs(noisy.pixels()));
}

TEST_CASE("shape, depth and determinism for every method") {
    std::mt19937_64 rng(45);
    const Image clean(random_plane(rng, 33, 31, 100.0, 200.0), 8);
    const Image noisy = add_noise(clean, {5.0, 3});
    for (const char* m : kAllMethods) {
        CAPTURE(m);
        const Image a = run(noisy, m, &clean);
        CHECK(a.rows() == 33);
        CHECK(a.cols() == 31);
        CHECK(a.depth_bits() == 8);
        CHECK(a.pixels().all_finite());
        CHECK(a == run(noisy, m, &clean));
    }
}

TEST_CASE("shrinkage uses a supplied sigma") {
    std::mt19937_64 rng(46);
    const Image img(random_plane(rng, 16, 16, 0.0, 100.0), 16);
    MethodOptions opts;
    opts.sigma = 0.0;
    // Zero noise: every estimator yields T = 0, so the image is reproduced.
    for (const char* m : {"visu-soft", "sure", "bayes", "normal-hard"}) {
        CAPTURE(m);
        CHECK(max_abs_diff(run(img, m, nullptr, opts).pixels(), img.pixels()) <= 1e-9 * 100.0);
    }
}

TEST_CASE("configuration errors") {
    const Image img(Plane(8, 8, 1.0), 16);
    DenoiseConfig oracle = parse_method("oracle-hard");
    CHECK_THROWS_AS(denoise(img, oracle), std::invalid_argument);
    DenoiseConfig sc = parse_method("sc-ds");
    CHECK_THROWS_AS(denoise(img, sc, &img), std::invalid_argument);

    DenoiseConfig deep = sc;
    deep.levels = 2;
    CHECK_THROWS_AS(denoise(img, deep), std::invalid_argument);
    DenoiseConfig no_basis = sc;
    no_basis.basis.reset();
    CHECK_THROWS_AS(no_basis.validate(), std::invalid_argument);
    DenoiseConfig mixed = parse_method("median");
    mixed.estimator = ShrinkEstimator::visu;
    CHECK_THROWS_AS(mixed.validate(), std::invalid_argument);

    CHECK_THROWS_AS(sc_denoise(Image(Plane(3, 8, 1.0)), Smoother{DirectionalSmoothing{}},
                               WaveletBasis::haar()),
                    std::invalid_argument);
    const Image other(Plane(8, 9, 1.0), 16);
    CHECK_THROWS_AS(denoise(img, oracle, &other), std::invalid_argument);
}

TEST_CASE("method names") {
    CHECK(parse_method("sc-ds").method == Method::sc);
    CHECK(parse_method("sc-ds").basis->name() == BasisName::db4);
    CHECK(parse_method("ds").method == Method::spatial_baseline);
    CHECK(parse_method("noisy").method == Method::identity);
    const DenoiseConfig v = parse_method("visu-semisoft");
    CHECK(v.estimator == ShrinkEstimator::visu);
    CHECK(v.rule->kind == ThresholdKind::semisoft);
    MethodOptions opts;
    opts.rule = ThresholdKind::hard;
    opts.basis = "haar";
    const DenoiseConfig s = parse_method("sure", opts);
    CHECK(s.rule->kind == ThresholdKind::hard);
    CHECK(s.basis->name() == BasisName::haar);

    CHECK_THROWS_AS(parse_method("bogus"), std::invalid_argument);
    CHECK_THROWS_AS(parse_method("sc-bogus"), std::invalid_argument);
    CHECK_THROWS_AS(parse_method("visu-medium"), std::invalid_argument);
    opts.window = 4;
    CHECK_THROWS_AS(parse_method("median", opts), std::invalid_argument);

    CHECK(display_name(parse_method("sc-ds")) == "SC");
    CHECK(display_name(parse_method("sc-lee")) == "SC (Lee)");
    CHECK(display_name(parse_method("enhanced-frost")) == "En-Frost");
    CHECK(display_name(parse_method("visu-soft")) == "VisuShrink (ST)");
    CHECK(display_name(parse_method("visu-semisoft")) == "VisuShrink (SST)");
    CHECK(display_name(parse_method("sure")) == "SureShrink");
    CHECK(display_name(parse_method("oracle-hard")) == "OracleShrink (HT)");
    CHECK(display_name(parse_method("noisy")) == "Noisy");
}
