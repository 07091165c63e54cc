#include "scden/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace scden {

Image::Image(Plane pixels, int depth_bits) : pixels_(std::move(pixels)), depth_bits_(depth_bits) {
    if (depth_bits_ != 8 && depth_bits_ != 16) {
        throw std::invalid_argument("Image: depth_bits must be 8 or 16, got " +
                                    std::to_string(depth_bits_));
    }
    if (pixels_.rows() == 0 || pixels_.cols() == 0) {
        throw std::invalid_argument("Image: rows and cols must be positive");
    }
}

std::uint16_t quantize_sample(double value, int depth_bits) noexcept {
    const double hi = static_cast<double>((1u << depth_bits) - 1u);
    const double r = std::round(value);
    return static_cast<std::uint16_t>(std::clamp(r, 0.0, hi));
}

namespace {

using FilePtr = std::unique_ptr<std::FILE, int (*)(std::FILE*)>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode), &std::fclose);
    if (!f) {
        throw ImageIoError("cannot open '" + path.string() + "'");
    }
    return f;
}

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ImageIoError("cannot open '" + path.string() + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// --- PGM -------------------------------------------------------------------

class PgmCursor {
public:
    PgmCursor(const std::vector<unsigned char>& bytes, const std::string& name)
        : bytes_(bytes), name_(name) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    unsigned long next_uint(const char* what) {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            throw ImageFormatError(name_ + ": malformed PGM (expected " + what + ")");
        }
        unsigned long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 0xFFFFFFFFul) {
                throw ImageFormatError(name_ + ": malformed PGM (" + what + " too large)");
            }
            ++pos_;
        }
        return v;
    }

    // The single whitespace byte separating the header from P5 raster data.
    void skip_single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw ImageFormatError(name_ + ": malformed PGM header");
        }
        ++pos_;
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ = n; }

private:
    const std::vector<unsigned char>& bytes_;
    const std::string& name_;
    std::size_t pos_ = 2;
};

Image decode_pgm(const std::vector<unsigned char>& bytes, const std::string& name) {
    const bool binary = bytes[1] == '5';
    PgmCursor cur(bytes, name);
    const unsigned long cols = cur.next_uint("width");
    const unsigned long rows = cur.next_uint("height");
    const unsigned long maxval = cur.next_uint("maxval");
    if (cols == 0 || rows == 0) {
        throw ImageFormatError(name + ": PGM has zero size");
    }
    if (maxval == 0 || maxval > 65535) {
        throw ImageFormatError(name + ": unsupported PGM maxval " + std::to_string(maxval));
    }
    const int depth = maxval <= 255 ? 8 : 16;
    const std::size_t count = static_cast<std::size_t>(rows) * cols;
    std::vector<double> values(count);

    if (binary) {
        cur.skip_single_space();
        const std::size_t bps = depth == 8 ? 1 : 2;
        if (bytes.size() - cur.pos() < count * bps) {
            throw ImageFormatError(name + ": truncated PGM raster");
        }
        const unsigned char* p = bytes.data() + cur.pos();
        for (std::size_t i = 0; i < count; ++i) {
            const unsigned v = bps == 1 ? p[i] : (unsigned(p[2 * i]) << 8) | p[2 * i + 1];
            if (v > maxval) {
                throw ImageFormatError(name + ": PGM sample exceeds maxval");
            }
            values[i] = v;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const unsigned long v = cur.next_uint("sample");
            if (v > maxval) {
                throw ImageFormatError(name + ": PGM sample exceeds maxval");
            }
            values[i] = static_cast<double>(v);
        }
    }
    return Image(Plane(rows, cols, std::move(values)), depth);
}

void encode_pgm(const Image& img, const std::filesystem::path& path) {
    const int depth = img.depth_bits();
    std::string header = "P5\n" + std::to_string(img.cols()) + " " + std::to_string(img.rows()) +
                         "\n" + std::to_string(depth == 8 ? 255 : 65535) + "\n";
    std::vector<unsigned char> out(header.begin(), header.end());
    out.reserve(out.size() + img.pixels().size() * (depth / 8));
    for (double v : img.pixels().values()) {
        const std::uint16_t q = quantize_sample(v, depth);
        if (depth == 16) out.push_back(static_cast<unsigned char>(q >> 8));
        out.push_back(static_cast<unsigned char>(q & 0xFF));
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw ImageIoError("cannot write '" + path.string() + "'");
    }
    os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!os) {
        throw ImageIoError("write failed for '" + path.string() + "'");
    }
}

// --- PNG -------------------------------------------------------------------

struct PngHeader {
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int bit_depth = 0;
    int color_type = 0;
};

// setjmp-based libpng error handling: everything with a destructor lives in
// the caller, so a longjmp back here skips no C++ cleanup.
bool png_read_raw(std::FILE* fp, PngHeader& hdr, std::vector<unsigned char>& raster,
                  std::vector<png_bytep>& row_ptrs, char (&err)[256]) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png == nullptr) {
        std::snprintf(err, sizeof err, "libpng initialization failed");
        return false;
    }
    png_infop info = png_create_info_struct(png);
    if (info == nullptr || setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::snprintf(err, sizeof err, "corrupt PNG data");
        return false;
    }
    png_init_io(png, fp);
    png_read_info(png, info);
    hdr.width = png_get_image_width(png, info);
    hdr.height = png_get_image_height(png, info);
    hdr.bit_depth = png_get_bit_depth(png, info);
    hdr.color_type = png_get_color_type(png, info);
    if (hdr.color_type != PNG_COLOR_TYPE_GRAY || (hdr.bit_depth != 8 && hdr.bit_depth != 16)) {
        png_destroy_read_struct(&png, &info, nullptr);
        return true; // caller inspects hdr and rejects
    }
    png_set_interlace_handling(png);
    png_read_update_info(png, info);
    const std::size_t stride = png_get_rowbytes(png, info);
    raster.resize(stride * hdr.height);
    row_ptrs.resize(hdr.height);
    for (png_uint_32 r = 0; r < hdr.height; ++r) {
        row_ptrs[r] = raster.data() + r * stride;
    }
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

Image decode_png(const std::filesystem::path& path) {
    FilePtr fp = open_file(path, "rb");
    PngHeader hdr;
    std::vector<unsigned char> raster;
    std::vector<png_bytep> row_ptrs;
    char err[256] = {};
    if (!png_read_raw(fp.get(), hdr, raster, row_ptrs, err)) {
        throw ImageFormatError(path.string() + ": " + err);
    }
    if (hdr.color_type & PNG_COLOR_MASK_COLOR) {
        throw ImageFormatError(path.string() + ": color image not supported (grayscale only)");
    }
    if (hdr.color_type != PNG_COLOR_TYPE_GRAY) {
        throw ImageFormatError(path.string() + ": unsupported PNG color type (alpha channel)");
    }
    if (hdr.bit_depth != 8 && hdr.bit_depth != 16) {
        throw ImageFormatError(path.string() + ": unsupported PNG bit depth " +
                               std::to_string(hdr.bit_depth));
    }
    const std::size_t count = static_cast<std::size_t>(hdr.width) * hdr.height;
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        values[i] = hdr.bit_depth == 8
                        ? raster[i]
                        : static_cast<double>((unsigned(raster[2 * i]) << 8) | raster[2 * i + 1]);
    }
    return Image(Plane(hdr.height, hdr.width, std::move(values)), hdr.bit_depth);
}

bool png_write_raw(std::FILE* fp, png_uint_32 width, png_uint_32 height, int bit_depth,
                   const std::vector<unsigned char>& raster) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png == nullptr) return false;
    png_infop info = png_create_info_struct(png);
    if (info == nullptr || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, width, height, bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const std::size_t stride = static_cast<std::size_t>(width) * (bit_depth / 8);
    for (png_uint_32 r = 0; r < height; ++r) {
        png_write_row(png, const_cast<png_bytep>(raster.data() + r * stride));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

void encode_png(const Image& img, const std::filesystem::path& path) {
    const int depth = img.depth_bits();
    std::vector<unsigned char> raster;
    raster.reserve(img.pixels().size() * (depth / 8));
    for (double v : img.pixels().values()) {
        const std::uint16_t q = quantize_sample(v, depth);
        if (depth == 16) raster.push_back(static_cast<unsigned char>(q >> 8));
        raster.push_back(static_cast<unsigned char>(q & 0xFF));
    }
    FilePtr fp = open_file(path, "wb");
    if (!png_write_raw(fp.get(), static_cast<png_uint_32>(img.cols()),
                       static_cast<png_uint_32>(img.rows()), depth, raster)) {
        throw ImageIoError("PNG encoding failed for '" + path.string() + "'");
    }
    if (std::fflush(fp.get()) != 0) {
        throw ImageIoError("write failed for '" + path.string() + "'");
    }
}

bool has_png_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return ext == ".png";
}

} // namespace

Image load_image(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw ImageIoError("no such file '" + path.string() + "'");
    }
    const std::vector<unsigned char> bytes = read_all(path);
    static constexpr std::array<unsigned char, 8> png_sig = {0x89, 'P', 'N', 'G',
                                                            '\r', '\n', 0x1A, '\n'};
    if (bytes.size() >= png_sig.size() && std::equal(png_sig.begin(), png_sig.end(), bytes.begin())) {
        return decode_png(path);
    }
    if (bytes.size() >= 2 && bytes[0] == 'P') {
        switch (bytes[1]) {
        case '2':
        case '5':
            return decode_pgm(bytes, path.string());
        case '3':
        case '6':
            throw ImageFormatError(path.string() + ": color image not supported (grayscale only)");
        default:
            break;
        }
    }
    throw ImageFormatError(path.string() + ": unsupported image format");
}

void save_image(const Image& img, const std::filesystem::path& path) {
    if (!img.pixels().all_finite()) {
        throw std::invalid_argument("save_image: image contains non-finite values");
    }
    if (has_png_extension(path)) {
        encode_png(img, path);
    } else {
        encode_pgm(img, path);
    }
}

Image add_noise(const Image& img, const NoiseSpec& spec) {
    if (!(spec.sigma_percent >= 0.0 && spec.sigma_percent <= 100.0)) {
        throw std::invalid_argument("add_noise: sigma_percent must lie in [0, 100]");
    }
    Plane out = img.pixels();
    if (spec.sigma_percent == 0.0) {
        return Image(std::move(out), img.depth_bits());
    }
    const double sigma = spec.sigma_percent / 100.0 * img.max_value();
    std::mt19937_64 engine(spec.seed);
    // (0, 1] so the logarithm stays finite.
    auto uniform = [&engine] { return (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53; };

    auto values = out.values();
    for (std::size_t i = 0; i < values.size(); i += 2) {
        const double radius = std::sqrt(-2.0 * std::log(uniform()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        values[i] += sigma * radius * std::cos(angle);
        if (i + 1 < values.size()) {
            values[i + 1] += sigma * radius * std::sin(angle);
        }
    }
    return Image(std::move(out), img.depth_bits());
}

Image make_phantom(const PhantomParams& p) {
    if (p.rows == 0 || p.cols == 0 || p.rows % 2 != 0 || p.cols % 2 != 0) {
        throw std::invalid_argument("make_phantom: rows and cols must be positive and even");
    }
    if (p.grid < 1) {
        throw std::invalid_argument("make_phantom: grid must be at least 1");
    }
    if (!(p.spot_sigma > 0.0)) {
        throw std::invalid_argument("make_phantom: spot_sigma must be positive");
    }
    std::vector<double> center_r(p.grid);
    std::vector<double> center_c(p.grid);
    for (std::size_t i = 0; i < p.grid; ++i) {
        center_r[i] = std::round((static_cast<double>(i) + 0.5) * static_cast<double>(p.rows) /
                                 static_cast<double>(p.grid));
        center_c[i] = std::round((static_cast<double>(i) + 0.5) * static_cast<double>(p.cols) /
                                 static_cast<double>(p.grid));
    }
    const double inv_two_var = 1.0 / (2.0 * p.spot_sigma * p.spot_sigma);
    Plane out(p.rows, p.cols, p.background);
    if (p.spot_amplitude != 0.0) {
        for (std::size_t r = 0; r < p.rows; ++r) {
            for (std::size_t c = 0; c < p.cols; ++c) {
                double sum = 0.0;
                for (double cr : center_r) {
                    const double dr = static_cast<double>(r) - cr;
                    for (double cc : center_c) {
                        const double dc = static_cast<double>(c) - cc;
                        sum += std::exp(-(dr * dr + dc * dc) * inv_two_var);
                    }
                }
                out(r, c) += p.spot_amplitude * sum;
            }
        }
    }
    return Image(std::move(out), 16);
}

} // namespace scden
