// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#ifndef FOPEN_SAR_CORE_HPP
#define FOPEN_SAR_CORE_HPP

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsar {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;
using RVector = std::vector<double>;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Error taxonomy. Everything derives from std::runtime_error so callers that
// only care about "something went wrong" can catch once.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidParameter : Error {
    using Error::Error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct SingularGeometry : Error {
    using Error::Error;
};
struct DivisionByZero : Error {
    using Error::Error;
};
struct NoPeakError : Error {
    using Error::Error;
};
struct UndefinedMetric : Error {
    using Error::Error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw InvalidParameter(what);
}

/// Dense row-major complex matrix. Rows are slow time (pulses / azimuth),
/// columns fast time (samples / range cells) throughout the library.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<cplx> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const cplx> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    CVector column(std::size_t c) const {
        CVector out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }
    void set_column(std::size_t c, std::span<const cplx> values) {
        if (values.size() != rows_) throw DimensionError("column length mismatch");
        for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
    }

    std::span<cplx> flat() noexcept { return data_; }
    std::span<const cplx> flat() const noexcept { return data_; }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    CVector data_;
};

inline double energy(std::span<const cplx> x) {
    double e = 0.0;
    for (const auto& v : x) e += std::norm(v);
    return e;
}

/// Normalized sinc, sin(pi u) / (pi u).
inline double sinc(double u) {
    if (u == 0.0) return 1.0;
    const double x = kPi * u;
    return std::sin(x) / x;
}

/// Signed frequency of DFT bin k out of n, in cycles per sample, in [-1/2, 1/2).
inline double signed_bin_frequency(std::size_t k, std::size_t n) {
    const auto kk = static_cast<double>(k);
    const auto nn = static_cast<double>(n);
    return (2 * k < n) ? kk / nn : (kk - nn) / nn;
}

}  // namespace fsar

#endif  // FOPEN_SAR_CORE_HPP
