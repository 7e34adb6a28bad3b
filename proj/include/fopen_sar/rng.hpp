// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#ifndef FOPEN_SAR_RNG_HPP
#define FOPEN_SAR_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

#include "fopen_sar/core.hpp"

namespace fsar {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// FNV-1a; only used to turn module tags into 64-bit keys.
inline constexpr std::uint64_t tag_hash(std::string_view tag) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

/// Sub-seed for (master, module tag, index). Every stochastic draw in the
/// library goes through this so that streams never overlap and any pulse
/// can be regenerated in isolation.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index = 0) noexcept {
    return splitmix64(splitmix64(master ^ tag_hash(tag)) + splitmix64(index + 0x632BE59BD9B4E019ull));
}

/// Counter-based generator: output i is a bijective mix of (key, i). Satisfies
/// UniformRandomBitGenerator. Stateless apart from the counter, so copying a
/// stream and replaying it is bit-exact.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(splitmix64(key)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        return splitmix64(key_ ^ splitmix64(counter_++));
    }

    constexpr std::uint64_t counter() const noexcept { return counter_; }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller. No cached second variate, so the
    /// stream position after n calls is always 2n.
    double normal() noexcept {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

    /// Circular complex Gaussian with E|z|^2 = variance.
    cplx complex_normal(double variance) noexcept {
        const double s = std::sqrt(0.5 * variance);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

    /// Gamma(shape, scale) by Marsaglia-Tsang. Shapes below one use the
    /// usual U^(1/a) boost.
    double gamma(double shape, double scale) {
        require(shape > 0.0 && scale > 0.0, "gamma: shape and scale must be positive");
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
        }
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace fsar

#endif  // FOPEN_SAR_RNG_HPP
