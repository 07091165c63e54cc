#pragma once

#include "scden/image_io.hpp"
#include "scden/plane.hpp"

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace scden {

enum class BasisName { haar, db4 };

// Orthonormal two-channel filter bank. The highpass analysis filter is the
// quadrature mirror g[k] = (-1)^k h[L-1-k] of the lowpass one.
class WaveletBasis {
public:
    static WaveletBasis haar();
    static WaveletBasis db4();
    // "haar" or "db4"; throws std::invalid_argument otherwise.
    static WaveletBasis from_name(std::string_view name);

    BasisName name() const noexcept { return name_; }
    std::string_view label() const noexcept;
    std::size_t length() const noexcept { return lowpass_.size(); }
    std::span<const double> lowpass() const noexcept { return lowpass_; }
    std::span<const double> highpass() const noexcept { return highpass_; }

    friend bool operator==(const WaveletBasis& a, const WaveletBasis& b) { return a.name_ == b.name_; }

private:
    WaveletBasis(BasisName name, std::vector<double> lowpass);

    BasisName name_;
    std::vector<double> lowpass_;
    std::vector<double> highpass_;
};

// One decomposition level. CHD is lowpass along rows / highpass along
// columns (LH), CVD the opposite (HL), CDD highpass both ways (HH).
struct SubbandSet {
    Plane ca;
    Plane chd;
    Plane cvd;
    Plane cdd;
    std::size_t source_rows = 0;
    std::size_t source_cols = 0;
};

// Separable one-level DWT with periodic extension; output index k of each
// 1D pass is sum_j f[j] * x[(2k + j) mod N]. Odd dimensions are padded by
// repeating the last row/column before transforming.
SubbandSet dwt2(const Plane& plane, const WaveletBasis& basis);
SubbandSet dwt2(const Image& img, const WaveletBasis& basis);

// Exact inverse of dwt2; crops any padding back to source_rows x source_cols.
Plane idwt2(const SubbandSet& bands, const WaveletBasis& basis);

// Debug dump: <prefix>_ca.pgm, _chd, _cvd, _cdd (each affinely mapped to
// [0, 65535]) and <prefix>_mapping.txt with one "band min max" line per band.
void dump_subbands(const SubbandSet& bands, const std::filesystem::path& prefix);

} // namespace scden
