// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>

#include "fopen_sar/core.hpp"
#include "fopen_sar/fft.hpp"
#include "fopen_sar/parallel.hpp"
#include "fopen_sar/rng.hpp"

namespace {

using fsar::cplx;
using fsar::CVector;

// Direct O(n^2) sum, sign -1 forward.
CVector naive_dft(const CVector& x, int sign) {
    const std::size_t n = x.size();
    CVector out(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            out[k] += x[i] * std::polar(1.0, sign * fsar::kTwoPi * static_cast<double>(k * i % n) / static_cast<double>(n));
        }
    }
    return out;
}

CVector random_vector(std::size_t n, std::uint64_t seed) {
    fsar::CounterRng rng(seed);
    CVector v(n);
    for (auto& x : v) x = rng.complex_normal(1.0);
    return v;
}

double max_abs_diff(const CVector& a, const CVector& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

TEST(ComplexMatrix, RowMajorAccessAndColumns) {
    fsar::ComplexMatrix m(2, 3);
    m(1, 2) = {5.0, -1.0};
    EXPECT_EQ(m.flat()[5], cplx(5.0, -1.0));
    EXPECT_EQ(m.row(1)[2], cplx(5.0, -1.0));
    const CVector col{{1.0, 0.0}, {2.0, 0.0}};
    m.set_column(0, col);
    EXPECT_EQ(m.column(0), col);
    EXPECT_THROW(m.set_column(1, CVector(3)), fsar::DimensionError);
}

TEST(Sinc, NormalizedDefinition) {
    EXPECT_EQ(fsar::sinc(0.0), 1.0);
    EXPECT_NEAR(fsar::sinc(1.0), 0.0, 1e-16);
    EXPECT_NEAR(fsar::sinc(0.5), 2.0 / fsar::kPi, 1e-15);
}

TEST(SignedBinFrequency, CoversHalfOpenInterval) {
    EXPECT_EQ(fsar::signed_bin_frequency(0, 8), 0.0);
    EXPECT_EQ(fsar::signed_bin_frequency(3, 8), 3.0 / 8.0);
    EXPECT_EQ(fsar::signed_bin_frequency(4, 8), -0.5);
    EXPECT_EQ(fsar::signed_bin_frequency(7, 8), -1.0 / 8.0);
    EXPECT_EQ(fsar::signed_bin_frequency(2, 5), 2.0 / 5.0);
    EXPECT_EQ(fsar::signed_bin_frequency(3, 5), -2.0 / 5.0);
}

TEST(Rng, DeterministicAndTagSeparated) {
    fsar::CounterRng a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
    std::set<std::uint64_t> seeds;
    for (const char* tag : {"bpsk", "noise-pulse", "awgn", "foliage-gamma", "foliage-psi", "foliage-fbm"}) {
        for (std::uint64_t i = 0; i < 4; ++i) seeds.insert(fsar::derive_seed(7, tag, i));
    }
    EXPECT_EQ(seeds.size(), 24u);
}

TEST(Rng, UniformStaysInOpenInterval) {
    fsar::CounterRng rng(3);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Rng, NormalMoments) {
    fsar::CounterRng rng(11);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        s += x;
        s2 += x * x;
    }
    const double mean = s / n;
    EXPECT_NEAR(mean, 0.0, 5.0 / std::sqrt(n));
    EXPECT_NEAR(s2 / n - mean * mean, 1.0, 0.02);
}

TEST(Fft, MatchesNaiveSumForManySizes) {
    for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 12u, 17u, 64u, 100u}) {
        const CVector x = random_vector(n, n);
        EXPECT_LT(max_abs_diff(fsar::fft::dft(x), naive_dft(x, -1)), 1e-10) << n;
        CVector inv = naive_dft(x, +1);
        for (auto& v : inv) v /= static_cast<double>(n);
        EXPECT_LT(max_abs_diff(fsar::fft::idft(x), inv), 1e-12) << n;
    }
}

TEST(Fft, RoundTripsAreIdentity) {
    for (std::size_t n : {7u, 256u, 1406u}) {
        const CVector x = random_vector(n, 100 + n);
        EXPECT_LT(max_abs_diff(fsar::fft::idft(fsar::fft::dft(x)), x), 1e-12);
        EXPECT_LT(max_abs_diff(fsar::fft::inverse_unitary(fsar::fft::forward_unitary(x)), x), 1e-12);
    }
}

TEST(Fft, UnitaryPairPreservesEnergy) {
    const CVector x = random_vector(1024, 5);
    EXPECT_NEAR(fsar::energy(fsar::fft::forward_unitary(x)) / fsar::energy(x), 1.0, 1e-12);
}

TEST(Upsample, KeepsOriginalSamplesAndInterpolatesTones) {
    for (std::size_t n : {16u, 15u}) {
        const CVector x = random_vector(n, 9);
        const CVector up = fsar::fft::upsample(x, 8);
        ASSERT_EQ(up.size(), 8 * n);
        for (std::size_t i = 0; i < n; ++i) EXPECT_LT(std::abs(up[8 * i] - x[i]), 1e-12);
    }
    // A tone on a bin below Nyquist is band-limited, so interpolation is exact.
    const std::size_t n = 32;
    CVector tone(n);
    for (std::size_t i = 0; i < n; ++i) tone[i] = std::polar(1.0, fsar::kTwoPi * 3.0 * i / n);
    const CVector up = fsar::fft::upsample(tone, 4);
    for (std::size_t i = 0; i < up.size(); ++i) {
        EXPECT_LT(std::abs(up[i] - std::polar(1.0, fsar::kTwoPi * 3.0 * i / (4.0 * n))), 1e-12);
    }
}

TEST(ParallelFor, VisitsEveryIndexOnceAndRethrows) {
    std::vector<std::atomic<int>> hits(1000);
    fsar::parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
    EXPECT_THROW(fsar::parallel_for(50, 3,
                                    [](std::size_t i) {
                                        if (i == 17) throw std::runtime_error("boom");
                                    }),
                 std::runtime_error);
}

}  // namespace
