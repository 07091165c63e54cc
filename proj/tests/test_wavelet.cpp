#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scden/wavelet.hpp"
#include "test_support.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

using namespace scden;
using scden::testing::max_abs;
using scden::testing::max_abs_diff;
using scden::testing::random_plane;

namespace {

double energy(const Plane& p) {
    double e = 0.0;
    for (std::size_t r = 0; r < p.rows(); ++r)
        for (std::size_t c = 0; c < p.cols(); ++c) e += p(r, c) * p(r, c);
    return e;
}

// Dense periodized analysis operator: rows [0, n/2) lowpass, [n/2, n) highpass.
std::vector<std::vector<double>> analysis_matrix(std::size_t n, const std::vector<double>& h) {
    const std::size_t L = h.size();
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < n / 2; ++k) {
        for (std::size_t j = 0; j < L; ++j) {
            const double g = (j % 2 == 0 ? 1.0 : -1.0) * h[L - 1 - j];
            w[k][(2 * k + j) % n] += h[j];
            w[n / 2 + k][(2 * k + j) % n] += g;
        }
    }
    return w;
}

// Y = Wr X Wc^T, where Wr transforms along columns and Wc along rows.
Plane dense_transform(const Plane& x, const std::vector<double>& h) {
    const auto wr = analysis_matrix(x.rows(), h);
    const auto wc = analysis_matrix(x.cols(), h);
    Plane tmp(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) {
            double s = 0.0;
            for (std::size_t k = 0; k < x.cols(); ++k) s += x(r, k) * wc[c][k];
            tmp(r, c) = s;
        }
    Plane y(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) {
            double s = 0.0;
            for (std::size_t k = 0; k < x.rows(); ++k) s += wr[r][k] * tmp(k, c);
            y(r, c) = s;
        }
    return y;
}

Plane block(const Plane& y, std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) {
    Plane out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) out(r, c) = y(r0 + r, c0 + c);
    return out;
}

std::vector<double> db4_taps() {
    const double r3 = std::sqrt(3.0);
    const double d = 4.0 * std::sqrt(2.0);
    return {(1 + r3) / d, (3 + r3) / d, (3 - r3) / d, (1 - r3) / d};
}

} // namespace

TEST_CASE("basis invariants") {
    for (const WaveletBasis& b : {WaveletBasis::haar(), WaveletBasis::db4()}) {
        double sum = 0.0;
        double sq = 0.0;
        for (double v : b.lowpass()) {
            sum += v;
            sq += v * v;
        }
        CHECK(std::abs(sq - 1.0) <= 1e-12);
        CHECK(std::abs(sum - std::numbers::sqrt2) <= 1e-12);
        const std::size_t L = b.length();
        for (std::size_t k = 0; k < L; ++k) {
            CHECK(b.highpass()[k] == (k % 2 == 0 ? 1.0 : -1.0) * b.lowpass()[L - 1 - k]);
        }
    }
    const auto taps = db4_taps();
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(WaveletBasis::db4().lowpass()[k] == doctest::Approx(taps[k]).epsilon(1e-15));
    }
    CHECK(WaveletBasis::from_name("haar").name() == BasisName::haar);
    CHECK(WaveletBasis::from_name("db4").name() == BasisName::db4);
    CHECK_THROWS_AS(WaveletBasis::from_name("sym8"), std::invalid_argument);
}

TEST_CASE("haar of a constant 4x4 image") {
    const SubbandSet sb = dwt2(Plane(4, 4, 5.0), WaveletBasis::haar());
    CHECK(max_abs_diff(sb.ca, Plane(2, 2, 10.0)) <= 1e-12);
    CHECK(max_abs(sb.chd) <= 1e-12);
    CHECK(max_abs(sb.cvd) <= 1e-12);
    CHECK(max_abs(sb.cdd) <= 1e-12);
}

TEST_CASE("haar 2x2 butterfly matches the explicit matrix product") {
    const double a = 3.0, b = -1.0, c = 7.5, d = 2.0;
    // Rows: CA, CHD, CVD, CDD applied to (a, b, c, d).
    const double m[4][4] = {{0.5, 0.5, 0.5, 0.5},
                            {0.5, 0.5, -0.5, -0.5},
                            {0.5, -0.5, 0.5, -0.5},
                            {0.5, -0.5, -0.5, 0.5}};
    const double x[4] = {a, b, c, d};
    double expect[4] = {};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) expect[i] += m[i][j] * x[j];

    const SubbandSet sb = dwt2(Plane::from_rows({{a, b}, {c, d}}), WaveletBasis::haar());
    CHECK(sb.ca(0, 0) == doctest::Approx(expect[0]).epsilon(1e-14));
    CHECK(sb.chd(0, 0) == doctest::Approx(expect[1]).epsilon(1e-14));
    CHECK(sb.cvd(0, 0) == doctest::Approx(expect[2]).epsilon(1e-14));
    CHECK(sb.cdd(0, 0) == doctest::Approx(expect[3]).epsilon(1e-14));
}

TEST_CASE("dwt2 agrees with a dense periodized operator") {
    std::mt19937_64 rng(11);
    for (const auto& [basis, taps] :
         {std::pair{WaveletBasis::haar(), std::vector<double>{M_SQRT1_2, M_SQRT1_2}},
          std::pair{WaveletBasis::db4(), db4_taps()}}) {
        for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{8, 8}, {12, 6}, {4, 10}}) {
            const Plane x = random_plane(rng, rows, cols);
            const Plane y = dense_transform(x, taps);
            const SubbandSet sb = dwt2(x, basis);
            const std::size_t hr = rows / 2, hc = cols / 2;
            CHECK(max_abs_diff(sb.ca, block(y, 0, 0, hr, hc)) <= 1e-10);
            CHECK(max_abs_diff(sb.chd, block(y, hr, 0, hr, hc)) <= 1e-10);
            CHECK(max_abs_diff(sb.cvd, block(y, 0, hc, hr, hc)) <= 1e-10);
            CHECK(max_abs_diff(sb.cdd, block(y, hr, hc, hr, hc)) <= 1e-10);
        }
    }
}

TEST_CASE("perfect reconstruction, Parseval and linearity") {
    std::mt19937_64 rng(3);
    for (const WaveletBasis& basis : {WaveletBasis::haar(), WaveletBasis::db4()}) {
        CAPTURE(basis.label());
        const Plane x = random_plane(rng, 16, 16);
        const SubbandSet sb = dwt2(x, basis);
        CHECK(max_abs_diff(idwt2(sb, basis), x) <= 1e-9 * std::max(1.0, max_abs(x)));

        const double e = energy(x);
        const double eb = energy(sb.ca) + energy(sb.chd) + energy(sb.cvd) + energy(sb.cdd);
        CHECK(std::abs(e - eb) <= 1e-9 * e);

        const Plane y = random_plane(rng, 16, 16);
        Plane combo(16, 16);
        for (std::size_t i = 0; i < combo.size(); ++i)
            combo.values()[i] = 2.5 * x.values()[i] - 0.75 * y.values()[i];
        const SubbandSet sy = dwt2(y, basis);
        const SubbandSet sc = dwt2(combo, basis);
        auto lin = [](const Plane& a, const Plane& b) {
            Plane out(a.rows(), a.cols());
            for (std::size_t i = 0; i < a.size(); ++i)
                out.values()[i] = 2.5 * a.values()[i] - 0.75 * b.values()[i];
            return out;
        };
        const double scale = max_abs(sc.ca);
        CHECK(max_abs_diff(sc.ca, lin(sb.ca, sy.ca)) <= 1e-9 * scale);
        CHECK(max_abs_diff(sc.cdd, lin(sb.cdd, sy.cdd)) <= 1e-9 * scale);
    }
}

TEST_CASE("two-sided inverse: dwt2(idwt2(sb)) == sb") {
    std::mt19937_64 rng(5);
    for (const WaveletBasis& basis : {WaveletBasis::haar(), WaveletBasis::db4()}) {
        SubbandSet sb{random_plane(rng, 6, 5), random_plane(rng, 6, 5), random_plane(rng, 6, 5),
                      random_plane(rng, 6, 5), 12, 10};
        const SubbandSet back = dwt2(idwt2(sb, basis), basis);
        const double tol = 1e-9 * 100.0;
        CHECK(max_abs_diff(back.ca, sb.ca) <= tol);
        CHECK(max_abs_diff(back.chd, sb.chd) <= tol);
        CHECK(max_abs_diff(back.cvd, sb.cvd) <= tol);
        CHECK(max_abs_diff(back.cdd, sb.cdd) <= tol);
    }
}

TEST_CASE("all-zero subbands reconstruct to zero") {
    SubbandSet sb{Plane(4, 4), Plane(4, 4), Plane(4, 4), Plane(4, 4), 8, 8};
    CHECK(idwt2(sb, WaveletBasis::db4()) == Plane(8, 8, 0.0));
}

TEST_CASE("odd dimensions are padded and cropped") {
    std::mt19937_64 rng(9);
    const Plane x = random_plane(rng, 15, 9);
    for (const WaveletBasis& basis : {WaveletBasis::haar(), WaveletBasis::db4()}) {
        const SubbandSet sb = dwt2(x, basis);
        CHECK(sb.ca.rows() == 8);
        CHECK(sb.ca.cols() == 5);
        CHECK(sb.source_rows == 15);
        CHECK(sb.source_cols == 9);
        const Plane back = idwt2(sb, basis);
        REQUIRE(back.same_shape(x));
        CHECK(max_abs_diff(back, x) <= 1e-9 * max_abs(x));
    }
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(dwt2(Plane(3, 8), WaveletBasis::db4()), std::invalid_argument);
    CHECK_THROWS_AS(dwt2(Plane(1, 8), WaveletBasis::haar()), std::invalid_argument);
    CHECK_NOTHROW(dwt2(Plane(2, 2), WaveletBasis::haar()));

    SubbandSet bad{Plane(4, 4), Plane(4, 3), Plane(4, 4), Plane(4, 4), 8, 8};
    CHECK_THROWS_AS(idwt2(bad, WaveletBasis::haar()), std::invalid_argument);
    SubbandSet wrong_source{Plane(4, 4), Plane(4, 4), Plane(4, 4), Plane(4, 4), 10, 8};
    CHECK_THROWS_AS(idwt2(wrong_source, WaveletBasis::haar()), std::invalid_argument);
}

TEST_CASE("subband dump writes four PGMs and a mapping sidecar") {
    scden::testing::TempDir tmp;
    std::mt19937_64 rng(1);
    const SubbandSet sb = dwt2(random_plane(rng, 8, 8), WaveletBasis::db4());
    dump_subbands(sb, tmp / "dbg");
    for (const char* band : {"ca", "chd", "cvd", "cdd"}) {
        const Image img = load_image(tmp / (std::string("dbg_") + band + ".pgm"));
        CHECK(img.rows() == 4);
        double lo = 1e9, hi = -1e9;
        for (double v : img.pixels().values()) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(lo == 0.0);
        CHECK(hi == 65535.0);
    }
    std::ifstream mapping(tmp / "dbg_mapping.txt");
    std::string line;
    int bands = 0;
    while (std::getline(mapping, line)) {
        if (!line.empty() && line[0] != '#') ++bands;
    }
    CHECK(bands == 4);
}
