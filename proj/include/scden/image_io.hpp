#pragma once

#include "scden/plane.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>

namespace scden {

// Grayscale image with a declared storage depth. In-memory values are
// unrestricted reals; the [0, 2^depth - 1] range is enforced on save.
class Image {
public:
    Image(Plane pixels, int depth_bits = 16);

    const Plane& pixels() const noexcept { return pixels_; }
    Plane& pixels() noexcept { return pixels_; }
    std::size_t rows() const noexcept { return pixels_.rows(); }
    std::size_t cols() const noexcept { return pixels_.cols(); }
    int depth_bits() const noexcept { return depth_bits_; }
    double max_value() const noexcept { return static_cast<double>((1u << depth_bits_) - 1u); }

    friend bool operator==(const Image&, const Image&) = default;

private:
    Plane pixels_;
    int depth_bits_;
};

class ImageIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unsupported or malformed file content (including color images).
class ImageFormatError : public ImageIoError {
public:
    using ImageIoError::ImageIoError;
};

struct NoiseSpec {
    double sigma_percent = 0.0; // std-dev as percent of 2^depth - 1
    std::uint64_t seed = 0;
};

// Reads PGM (P2/P5) or grayscale PNG (8/16-bit); format is detected from
// the file signature. PGM maxval <= 255 gives depth 8, otherwise depth 16.
Image load_image(const std::filesystem::path& path);

// Writes PNG when the extension is ".png", binary PGM (P5) otherwise.
// Values are rounded half away from zero and clamped to the depth range.
void save_image(const Image& img, const std::filesystem::path& path);

// Quantizes one value the way save_image does.
std::uint16_t quantize_sample(double value, int depth_bits) noexcept;

// Adds i.i.d. Gaussian noise, sigma = sigma_percent/100 * (2^depth - 1).
// Samples come from std::mt19937_64 seeded with spec.seed, mapped to 53-bit
// uniforms and turned into normals with Box-Muller (both outputs used, in
// raster order). The result is not clamped.
Image add_noise(const Image& img, const NoiseSpec& spec);

struct PhantomParams {
    std::size_t rows = 128;
    std::size_t cols = 128;
    std::size_t grid = 6;
    double spot_amplitude = 40000.0;
    double spot_sigma = 3.0;
    double background = 2000.0;
};

// Synthetic microarray: background plus grid x grid Gaussian spots centered
// on a uniform lattice (centers rounded to the nearest pixel). 16-bit.
Image make_phantom(const PhantomParams& params);

} // namespace scden
