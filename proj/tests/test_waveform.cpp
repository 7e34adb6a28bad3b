// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#include <gtest/gtest.h>

#include <cmath>

#include "fopen_sar/fft.hpp"
#include "fopen_sar/waveform.hpp"

namespace {

using fsar::cplx;
using fsar::CVector;

TEST(BpskSymbols, DeterministicAndBinary) {
    EXPECT_EQ(fsar::generate_bpsk_symbols(99, 8), fsar::generate_bpsk_symbols(99, 8));
    const CVector x = fsar::generate_bpsk_symbols(99, 1024);
    int plus = 0;
    for (const auto& v : x) {
        ASSERT_TRUE(v == cplx(1.0, 0.0) || v == cplx(-1.0, 0.0));
        plus += v.real() > 0;
    }
    EXPECT_GT(plus, 400);
    EXPECT_LT(plus, 624);
}

TEST(BpskSymbols, SeedsGiveDifferentSequences) {
    const CVector a = fsar::generate_bpsk_symbols(1, 1024);
    const CVector b = fsar::generate_bpsk_symbols(2, 1024);
    int hamming = 0;
    for (std::size_t i = 0; i < a.size(); ++i) hamming += a[i] != b[i];
    EXPECT_GT(hamming, 0);
}

TEST(BpskSymbols, RejectsZeroLength) { EXPECT_THROW(fsar::generate_bpsk_symbols(1, 0), fsar::InvalidParameter); }

fsar::OfdmSpec ones_spec(std::size_t n, std::size_t m) {
    return fsar::OfdmSpec{n, m, 1e9, CVector(n, cplx(1.0, 0.0)), 0};
}

TEST(OfdmPulse, FourSubcarriersTwoCells) {
    const fsar::PulseSamples p = fsar::generate_ofdm_pulse(ones_spec(4, 2));
    const CVector expected{{2, 0}, {0, 0}, {0, 0}, {0, 0}, {2, 0}};
    ASSERT_EQ(p.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_LT(std::abs(p.samples[i] - expected[i]), 1e-15) << i;
    EXPECT_EQ(p.kind, fsar::WaveformKind::kOfdm);
    EXPECT_DOUBLE_EQ(p.sample_interval, 1e-9);
}

TEST(OfdmPulse, NoGuardWhenSingleCell) {
    const fsar::PulseSamples p = fsar::generate_ofdm_pulse(ones_spec(4, 1));
    const CVector expected{{2, 0}, {0, 0}, {0, 0}, {0, 0}};
    ASSERT_EQ(p.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_LT(std::abs(p.samples[i] - expected[i]), 1e-15);
}

TEST(OfdmPulse, MatchesDirectSumAndIsCyclic) {
    const auto spec = fsar::OfdmSpec::bpsk(64, 9, 4e9, 5);
    const fsar::PulseSamples p = fsar::generate_ofdm_pulse(spec);
    ASSERT_EQ(p.size(), 64u + 9u - 1u);
    for (std::size_t i = 0; i < p.size(); ++i) {
        cplx s{};
        for (std::size_t k = 0; k < 64; ++k) s += spec.symbols[k] * std::polar(1.0, fsar::kTwoPi * double(k * i) / 64.0);
        EXPECT_LT(std::abs(p.samples[i] - s / 8.0), 1e-12);
    }
    for (std::size_t i = 0; i + 1 < 9; ++i) EXPECT_EQ(p.samples[i + 64], p.samples[i]);
}

TEST(OfdmPulse, CoreBlockEnergyAndSymbolRecovery) {
    const auto spec = fsar::OfdmSpec::bpsk(1024, 192, 4e9, 17);
    const fsar::PulseSamples p = fsar::generate_ofdm_pulse(spec);
    const std::span<const cplx> core(p.samples.data(), 1024);
    EXPECT_NEAR(fsar::energy(core), 1024.0, 1e-9);
    const CVector x = fsar::fft::forward_unitary(core);
    for (std::size_t k = 0; k < 1024; ++k) EXPECT_LT(std::abs(x[k] - spec.symbols[k]), 1e-10);
}

TEST(OfdmSpec, RejectsInvalidSpecs) {
    auto s = ones_spec(4, 2);
    s.symbols[1] = {0.5, 0.0};
    EXPECT_THROW(s.validate(), fsar::InvalidParameter);
    EXPECT_THROW(ones_spec(4, 0).validate(), fsar::InvalidParameter);
    auto b = ones_spec(4, 2);
    b.bandwidth_hz = 0.0;
    EXPECT_THROW(b.validate(), fsar::InvalidParameter);
    EXPECT_EQ(ones_spec(1024, 192).line_length(), 1406u);
}

TEST(NoisePulse, MomentsAndWhiteness) {
    const std::size_t n = 100000;
    const fsar::PulseSamples p = fsar::generate_noise_pulse({n, 1.0, 77});
    cplx mean{};
    for (const auto& v : p.samples) mean += v;
    mean /= static_cast<double>(n);
    const double var = fsar::energy(p.samples) / n - std::norm(mean);
    EXPECT_LT(std::abs(mean), 0.02);
    EXPECT_GE(var, 0.97);
    EXPECT_LE(var, 1.03);
    for (std::size_t lag = 1; lag <= 10; ++lag) {
        cplx acc{};
        for (std::size_t i = 0; i + lag < n; ++i) acc += p.samples[i + lag] * std::conj(p.samples[i]);
        EXPECT_LT(std::abs(acc) / fsar::energy(p.samples), 5.0 / std::sqrt(double(n))) << lag;
    }
}

TEST(NoisePulse, DeterministicAndValidated) {
    EXPECT_EQ(fsar::generate_noise_pulse({100, 2.0, 3}).samples, fsar::generate_noise_pulse({100, 2.0, 3}).samples);
    EXPECT_THROW(fsar::generate_noise_pulse({100, 0.0, 3}), fsar::InvalidParameter);
    EXPECT_THROW(fsar::generate_noise_pulse({0, 1.0, 3}), fsar::InvalidParameter);
}

TEST(NormalizeEnergy, MatchesOfdmPulseEnergy) {
    const auto ofdm = fsar::generate_ofdm_pulse(fsar::OfdmSpec::bpsk(1024, 192, 4e9, 1));
    const auto noise = fsar::normalize_energy(fsar::generate_noise_pulse({ofdm.size(), 1.0, 2}), ofdm.energy());
    EXPECT_EQ(noise.size(), ofdm.size());
    EXPECT_NEAR(noise.energy() / ofdm.energy(), 1.0, 1e-12);
}

TEST(DelayablePulse, ZeroDelayReproducesPulse) {
    const auto spec = fsar::OfdmSpec::bpsk(32, 5, 1e9, 4);
    const auto p = fsar::generate_ofdm_pulse(spec);
    const fsar::DelayablePulse d(p, 32);
    const CVector u = d.delayed(0.0);
    ASSERT_EQ(u.size(), p.size() + 1);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_LT(std::abs(u[i] - p.samples[i]), 1e-12);
    EXPECT_EQ(u.back(), cplx{});
}

TEST(DelayablePulse, FractionalDelayOfOfdmIsExactSeries) {
    const auto spec = fsar::OfdmSpec::bpsk(16, 3, 1e9, 8);
    const fsar::DelayablePulse d(fsar::generate_ofdm_pulse(spec), 16);
    const double frac = 0.3;
    const CVector u = d.delayed(frac);
    EXPECT_EQ(u[0], cplx{});
    for (std::size_t n = 1; n < u.size(); ++n) {
        cplx s{};
        for (std::size_t k = 0; k < 16; ++k) {
            const double f = fsar::signed_bin_frequency(k, 16);
            s += spec.symbols[k] * std::polar(1.0, fsar::kTwoPi * f * (double(n) - frac));
        }
        EXPECT_LT(std::abs(u[n] - s / 4.0), 1e-12) << n;
    }
    EXPECT_THROW(d.delayed(1.0), fsar::InvalidParameter);
}

}  // namespace
