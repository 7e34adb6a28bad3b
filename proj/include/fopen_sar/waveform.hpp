// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#ifndef FOPEN_SAR_WAVEFORM_HPP
#define FOPEN_SAR_WAVEFORM_HPP

#include <cmath>
#include <cstdint>
#include <string>

#include "fopen_sar/core.hpp"
#include "fopen_sar/fft.hpp"
#include "fopen_sar/rng.hpp"

namespace fsar {

enum class WaveformKind { kOfdm, kNoise };

inline std::string to_string(WaveformKind k) { return k == WaveformKind::kOfdm ? "ofdm" : "noise"; }

inline WaveformKind waveform_kind_from_string(const std::string& s) {
    if (s == "ofdm") return WaveformKind::kOfdm;
    if (s == "noise") return WaveformKind::kNoise;
    throw InvalidParameter("unknown waveform kind '" + s + "'");
}

/// BPSK symbols, each exactly -1 or +1. Deterministic in the seed.
inline CVector generate_bpsk_symbols(std::uint64_t seed, std::size_t n) {
    require(n >= 1, "generate_bpsk_symbols: N must be >= 1");
    CounterRng rng(derive_seed(seed, "bpsk"));
    CVector out(n);
    for (auto& x : out) x = (rng() >> 63) ? cplx{1.0, 0.0} : cplx{-1.0, 0.0};
    return out;
}

/// CP-OFDM pulse parameters. N subcarriers, M range cells (CP of M-1
/// samples), bandwidth B with sample interval 1/B.
struct OfdmSpec {
    std::size_t n_subcarriers = 1024;
    std::size_t n_range_cells = 192;
    double bandwidth_hz = 4e9;
    CVector symbols;
    std::uint64_t symbol_seed = 0;

    static OfdmSpec bpsk(std::size_t n, std::size_t m, double bandwidth_hz, std::uint64_t seed) {
        OfdmSpec s{n, m, bandwidth_hz, {}, seed};
        s.symbols = generate_bpsk_symbols(seed, n);
        return s;
    }

    double sample_interval() const { return 1.0 / bandwidth_hz; }
    double symbol_duration() const { return static_cast<double>(n_subcarriers) * sample_interval(); }
    double guard_duration() const { return static_cast<double>(n_range_cells - 1) * sample_interval(); }
    std::size_t pulse_length() const { return n_subcarriers + n_range_cells - 1; }
    std::size_t line_length() const { return n_subcarriers + 2 * n_range_cells - 2; }

    void validate() const {
        require(n_subcarriers >= 1, "ofdm: N must be >= 1");
        require(n_range_cells >= 1, "ofdm: M must be >= 1");
        require(bandwidth_hz > 0.0, "ofdm: bandwidth must be positive");
        require(symbols.size() == n_subcarriers, "ofdm: symbol vector length must equal N");
        for (const auto& x : symbols) {
            require(std::abs(std::abs(x) - 1.0) < 1e-12, "ofdm: symbols must have unit modulus");
        }
    }
};

struct NoiseSpec {
    std::size_t n_samples = 0;
    double variance = 1.0;
    std::uint64_t noise_seed = 0;
};

struct PulseSamples {
    CVector samples;
    double sample_interval = 0.0;
    WaveformKind kind = WaveformKind::kOfdm;

    std::size_t size() const noexcept { return samples.size(); }
    double energy() const { return fsar::energy(samples); }
};

/// s_i = (1/sqrt N) sum_k X_k exp(j 2pi k i / N), i = 0 .. N+M-2. The last M-1
/// samples repeat the first M-1 (cyclic extension as a suffix).
inline PulseSamples generate_ofdm_pulse(const OfdmSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n_subcarriers;
    const CVector block = fft::inverse_unitary(spec.symbols);
    PulseSamples p;
    p.kind = WaveformKind::kOfdm;
    p.sample_interval = spec.sample_interval();
    p.samples.resize(spec.pulse_length());
    for (std::size_t i = 0; i < p.samples.size(); ++i) p.samples[i] = block[i % n];
    return p;
}

/// White circular complex Gaussian samples at the sample rate, i.e. noise
/// band-limited to the simulated bandwidth.
inline PulseSamples generate_noise_pulse(const NoiseSpec& spec, double sample_interval = 0.0) {
    require(spec.variance > 0.0, "noise: variance must be positive");
    require(spec.n_samples >= 1, "noise: n_samples must be >= 1");
    CounterRng rng(derive_seed(spec.noise_seed, "noise-pulse"));
    PulseSamples p;
    p.kind = WaveformKind::kNoise;
    p.sample_interval = sample_interval;
    p.samples.resize(spec.n_samples);
    for (auto& s : p.samples) s = rng.complex_normal(spec.variance);
    return p;
}

/// Rescales a pulse to a given total energy.
inline PulseSamples normalize_energy(PulseSamples pulse, double target_energy) {
    require(target_energy > 0.0, "normalize_energy: target energy must be positive");
    const double e = pulse.energy();
    require(e > 0.0, "normalize_energy: pulse has zero energy");
    fft::scale(pulse.samples, std::sqrt(target_energy / e));
    return pulse;
}

/// Continuous-time view of a sampled pulse, for echoes whose delay is not a
/// whole number of samples. The pulse is represented by its Fourier series
/// over `period` samples with signed (baseband-centred) frequencies and is
/// gated to its support [0, L). For the OFDM pulse the series is exact
/// (period N, coefficients X_k / sqrt N); for the noise pulse it is the
/// band-limited interpolant over its own length.
class DelayablePulse {
public:
    /// `period` is the Fourier-series period in samples; N for an OFDM
    /// pulse, the pulse length otherwise.
    DelayablePulse(const PulseSamples& pulse, std::size_t period) : length_(pulse.size()), period_(period) {
        require(length_ >= 1, "DelayablePulse: empty pulse");
        require(period_ >= 1 && period_ <= length_, "DelayablePulse: period must be in [1, L]");
        CVector head(pulse.samples.begin(), pulse.samples.begin() + static_cast<std::ptrdiff_t>(period_));
        coeffs_ = fft::dft(head);
        fft::scale(coeffs_, 1.0 / static_cast<double>(period_));
    }

    std::size_t length() const noexcept { return length_; }
    std::size_t period() const noexcept { return period_; }

    /// u[n] = s(n - frac) for n = 0 .. L, zero where n - frac is outside
    /// [0, L). frac must lie in [0, 1).
    CVector delayed(double frac) const {
        require(frac >= 0.0 && frac < 1.0, "DelayablePulse: fractional delay must be in [0, 1)");
        CVector spec(coeffs_);
        for (std::size_t k = 0; k < period_; ++k) {
            spec[k] *= std::polar(1.0, -kTwoPi * signed_bin_frequency(k, period_) * frac);
        }
        fft::transform(spec, fft::Direction::kInverse);
        CVector out(length_ + 1);
        for (std::size_t n = 0; n <= length_; ++n) {
            const double t = static_cast<double>(n) - frac;
            if (t < 0.0 || t >= static_cast<double>(length_)) continue;
            out[n] = spec[n % period_];
        }
        return out;
    }

private:
    std::size_t length_;
    std::size_t period_;
    CVector coeffs_;
};

}  // namespace fsar

#endif  // FOPEN_SAR_WAVEFORM_HPP
