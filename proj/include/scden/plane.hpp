#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace scden {

// Row-major 2D grid of real values. Used for image pixels, wavelet
// subbands and every intermediate result of the filters.
class Plane {
public:
    Plane() = default;
    Plane(std::size_t rows, std::size_t cols, double fill = 0.0);
    Plane(std::size_t rows, std::size_t cols, std::vector<double> values);

    // Plane::from_rows({{1, 2}, {3, 4}}); all rows must have equal length.
    static Plane from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return values_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    std::span<double> row(std::size_t r) noexcept { return {values_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {values_.data() + r * cols_, cols_}; }

    bool same_shape(const Plane& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    bool all_finite() const noexcept;

    friend bool operator==(const Plane&, const Plane&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

// Throws std::invalid_argument naming `what` when shapes differ.
void require_same_shape(const Plane& a, const Plane& b, const char* what);

} // namespace scden
