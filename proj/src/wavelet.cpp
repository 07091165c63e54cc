#include "scden/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

namespace scden {

WaveletBasis::WaveletBasis(BasisName name, std::vector<double> lowpass)
    : name_(name), lowpass_(std::move(lowpass)), highpass_(lowpass_.size()) {
    const std::size_t n = lowpass_.size();
    double sum = 0.0;
    double energy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sum += lowpass_[k];
        energy += lowpass_[k] * lowpass_[k];
        const double sign = k % 2 == 0 ? 1.0 : -1.0;
        highpass_[k] = sign * lowpass_[n - 1 - k];
    }
    if (std::abs(energy - 1.0) > 1e-12 || std::abs(sum - std::numbers::sqrt2) > 1e-12) {
        throw std::logic_error("WaveletBasis: lowpass filter is not orthonormal");
    }
}

WaveletBasis WaveletBasis::haar() {
    const double s = 1.0 / std::numbers::sqrt2;
    return WaveletBasis(BasisName::haar, {s, s});
}

WaveletBasis WaveletBasis::db4() {
    const double r3 = std::numbers::sqrt3;
    const double d = 4.0 * std::numbers::sqrt2;
    return WaveletBasis(BasisName::db4, {(1.0 + r3) / d, (3.0 + r3) / d, (3.0 - r3) / d,
                                         (1.0 - r3) / d});
}

WaveletBasis WaveletBasis::from_name(std::string_view name) {
    if (name == "haar") return haar();
    if (name == "db4") return db4();
    throw std::invalid_argument("unknown wavelet basis '" + std::string(name) +
                                "' (expected haar or db4)");
}

std::string_view WaveletBasis::label() const noexcept {
    return name_ == BasisName::haar ? "haar" : "db4";
}

namespace {

// Strided views so rows and columns share the same 1D kernels.
struct Strided {
    double* base;
    std::size_t stride;
    double& operator[](std::size_t i) const { return base[i * stride]; }
};

struct ConstStrided {
    const double* base;
    std::size_t stride;
    double operator[](std::size_t i) const { return base[i * stride]; }
};

void analyze_1d(ConstStrided in, std::size_t n, Strided lo, Strided hi, const WaveletBasis& basis) {
    const auto h = basis.lowpass();
    const auto g = basis.highpass();
    const std::size_t taps = h.size();
    for (std::size_t k = 0; k < n / 2; ++k) {
        double a = 0.0;
        double d = 0.0;
        for (std::size_t j = 0; j < taps; ++j) {
            const double x = in[(2 * k + j) % n];
            a += h[j] * x;
            d += g[j] * x;
        }
        lo[k] = a;
        hi[k] = d;
    }
}

void synthesize_1d(ConstStrided lo, ConstStrided hi, std::size_t n, Strided out,
                   const WaveletBasis& basis) {
    const auto h = basis.lowpass();
    const auto g = basis.highpass();
    const std::size_t taps = h.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
    for (std::size_t k = 0; k < n / 2; ++k) {
        for (std::size_t j = 0; j < taps; ++j) {
            out[(2 * k + j) % n] += h[j] * lo[k] + g[j] * hi[k];
        }
    }
}

const double* at(const Plane& p, std::size_t r, std::size_t c) {
    return p.values().data() + r * p.cols() + c;
}

double* at(Plane& p, std::size_t r, std::size_t c) {
    return p.values().data() + r * p.cols() + c;
}

Plane pad_to_even(const Plane& p) {
    const std::size_t rows = p.rows() + p.rows() % 2;
    const std::size_t cols = p.cols() + p.cols() % 2;
    if (rows == p.rows() && cols == p.cols()) return p;
    Plane out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t sr = std::min(r, p.rows() - 1);
        for (std::size_t c = 0; c < cols; ++c) {
            out(r, c) = p(sr, std::min(c, p.cols() - 1));
        }
    }
    return out;
}

// Rows are split into [low | high] halves, then each half's columns.
void forward_rows(const Plane& in, Plane& low, Plane& high, const WaveletBasis& basis) {
    for (std::size_t r = 0; r < in.rows(); ++r) {
        analyze_1d({at(in, r, 0), 1}, in.cols(), {at(low, r, 0), 1}, {at(high, r, 0), 1}, basis);
    }
}

void forward_cols(const Plane& in, Plane& low, Plane& high, const WaveletBasis& basis) {
    for (std::size_t c = 0; c < in.cols(); ++c) {
        analyze_1d({at(in, 0, c), in.cols()}, in.rows(), {at(low, 0, c), low.cols()},
                   {at(high, 0, c), high.cols()}, basis);
    }
}

} // namespace

SubbandSet dwt2(const Plane& plane, const WaveletBasis& basis) {
    if (plane.rows() < basis.length() || plane.cols() < basis.length()) {
        throw std::invalid_argument("dwt2: " + std::to_string(plane.rows()) + "x" +
                                    std::to_string(plane.cols()) +
                                    " image is smaller than the " + std::string(basis.label()) +
                                    " filter support");
    }
    const Plane x = pad_to_even(plane);
    const std::size_t half_r = x.rows() / 2;
    const std::size_t half_c = x.cols() / 2;

    Plane row_low(x.rows(), half_c);
    Plane row_high(x.rows(), half_c);
    forward_rows(x, row_low, row_high, basis);

    SubbandSet out{Plane(half_r, half_c), Plane(half_r, half_c), Plane(half_r, half_c),
                   Plane(half_r, half_c), plane.rows(), plane.cols()};
    forward_cols(row_low, out.ca, out.chd, basis);
    forward_cols(row_high, out.cvd, out.cdd, basis);
    return out;
}

SubbandSet dwt2(const Image& img, const WaveletBasis& basis) {
    return dwt2(img.pixels(), basis);
}

Plane idwt2(const SubbandSet& bands, const WaveletBasis& basis) {
    const Plane& ca = bands.ca;
    if (!ca.same_shape(bands.chd) || !ca.same_shape(bands.cvd) || !ca.same_shape(bands.cdd)) {
        throw std::invalid_argument("idwt2: subband dimensions differ");
    }
    if (ca.rows() != (bands.source_rows + 1) / 2 || ca.cols() != (bands.source_cols + 1) / 2 ||
        ca.empty()) {
        throw std::invalid_argument("idwt2: subband dimensions do not match the recorded source size");
    }
    const std::size_t rows = ca.rows() * 2;
    const std::size_t cols = ca.cols() * 2;
    const std::size_t half_c = ca.cols();

    Plane row_low(rows, half_c);
    Plane row_high(rows, half_c);
    for (std::size_t c = 0; c < half_c; ++c) {
        synthesize_1d({at(ca, 0, c), half_c}, {at(bands.chd, 0, c), half_c}, rows,
                      {at(row_low, 0, c), half_c}, basis);
        synthesize_1d({at(bands.cvd, 0, c), half_c}, {at(bands.cdd, 0, c), half_c}, rows,
                      {at(row_high, 0, c), half_c}, basis);
    }
    Plane full(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        synthesize_1d({at(row_low, r, 0), 1}, {at(row_high, r, 0), 1}, cols, {at(full, r, 0), 1},
                      basis);
    }
    if (rows == bands.source_rows && cols == bands.source_cols) return full;

    Plane cropped(bands.source_rows, bands.source_cols);
    for (std::size_t r = 0; r < bands.source_rows; ++r) {
        std::copy_n(full.row(r).begin(), bands.source_cols, cropped.row(r).begin());
    }
    return cropped;
}

void dump_subbands(const SubbandSet& bands, const std::filesystem::path& prefix) {
    const std::pair<const char*, const Plane*> named[] = {
        {"ca", &bands.ca}, {"chd", &bands.chd}, {"cvd", &bands.cvd}, {"cdd", &bands.cdd}};
    const std::filesystem::path mapping_path = prefix.string() + "_mapping.txt";
    std::ofstream mapping(mapping_path);
    if (!mapping) {
        throw ImageIoError("cannot write '" + mapping_path.string() + "'");
    }
    mapping.precision(17);
    mapping << "# band min max  (stored = round((value - min) / (max - min) * 65535))\n";
    for (const auto& [name, plane] : named) {
        const auto [lo_it, hi_it] = std::minmax_element(plane->values().begin(), plane->values().end());
        const double lo = *lo_it;
        const double span = *hi_it - lo;
        Plane scaled(plane->rows(), plane->cols());
        for (std::size_t i = 0; i < plane->size(); ++i) {
            scaled.values()[i] = span > 0.0 ? (plane->values()[i] - lo) / span * 65535.0 : 0.0;
        }
        save_image(Image(std::move(scaled), 16), prefix.string() + "_" + name + ".pgm");
        mapping << name << ' ' << lo << ' ' << *hi_it << '\n';
    }
}

} // namespace scden
