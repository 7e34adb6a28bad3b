// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#ifndef FOPEN_SAR_ECHO_SYNTHESIS_HPP
#define FOPEN_SAR_ECHO_SYNTHESIS_HPP

#include <cmath>
#include <cstdint>
#include <optional>

#include "fopen_sar/core.hpp"
#include "fopen_sar/fft.hpp"
#include "fopen_sar/foliage_channel.hpp"
#include "fopen_sar/parallel.hpp"
#include "fopen_sar/rng.hpp"
#include "fopen_sar/scene_geometry.hpp"
#include "fopen_sar/waveform.hpp"

namespace fsar {

/// Slow-time x fast-time echo samples plus the axes needed downstream.
struct RawDataMatrix {
    ComplexMatrix data;
    RVector slow_time;
    double sample_interval = 0.0;
    bool range_migration = false;

    std::size_t n_pulses() const noexcept { return data.rows(); }
    std::size_t line_length() const noexcept { return data.cols(); }
};

struct SimulationConfig {
    WaveformKind waveform = WaveformKind::kOfdm;
    OfdmSpec ofdm;  // N, M, B and symbols; N, M also size the noise pulse
    std::uint64_t noise_seed = 0;
    Scene scene;
    PlatformParams platform;
    std::optional<FoliageParams> foliage;
    std::optional<double> snr_db;  // nullopt: noise off
    std::uint64_t master_seed = 0;
    // false: each target stays in its cell for the whole aperture (only phase
    // and beam gain follow the range hyperbola). true: the echo delay follows
    // the hyperbola with fractional-sample accuracy.
    bool range_migration = false;

    void validate() const {
        ofdm.validate();
        platform.validate();
        require(scene.n_range_cells == ofdm.n_range_cells, "config: scene and waveform disagree on M");
        scene.validate();
        if (foliage) foliage->validate();
    }
};

/// Direct linear convolution; output length a.size() + b.size() - 1.
inline CVector linear_convolution(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.empty() || b.empty()) return {};
    CVector out(a.size() + b.size() - 1);
    for (std::size_t m = 0; m < b.size(); ++m) {
        if (b[m] == cplx{}) continue;
        for (std::size_t i = 0; i < a.size(); ++i) out[i + m] += b[m] * a[i];
    }
    return out;
}

/// Multiplies the spectrum of a whole range line by F_k and returns to the
/// time domain.
inline CVector apply_foliage(std::span<const cplx> line, const FoliageRealization& realization) {
    if (realization.response.size() != line.size()) {
        throw DimensionError("apply_foliage: realization length " + std::to_string(realization.response.size()) +
                             " != line length " + std::to_string(line.size()));
    }
    CVector spec = fft::dft(line);
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= realization.response[k];
    return fft::idft(spec);
}

class EchoSimulator {
public:
    explicit EchoSimulator(SimulationConfig config) : config_(std::move(config)) {
        config_.validate();
        grid_ = RangeGrid::centered(config_.ofdm.bandwidth_hz, config_.ofdm.n_range_cells, config_.platform);
        const PulseSamples ofdm = generate_ofdm_pulse(config_.ofdm);
        if (config_.waveform == WaveformKind::kOfdm) {
            pulse_ = ofdm;
        } else {
            NoiseSpec ns{config_.ofdm.pulse_length(), 1.0, config_.noise_seed};
            pulse_ = normalize_energy(generate_noise_pulse(ns, config_.ofdm.sample_interval()), ofdm.energy());
        }
        if (config_.range_migration) {
            const std::size_t period =
                config_.waveform == WaveformKind::kOfdm ? config_.ofdm.n_subcarriers : pulse_.size();
            delayable_.emplace(pulse_, period);
        }
        if (config_.foliage) {
            foliage_streams_ = FoliageStreams::make(*config_.foliage, n_pulses());
            freq_grid_ = foliage_frequency_grid(config_.platform.carrier_hz, config_.ofdm.bandwidth_hz, line_length());
        }
        if (config_.snr_db) {
            double peak_rcs = 1.0;
            if (!config_.scene.targets.empty()) {
                peak_rcs = 0.0;
                for (const auto& t : config_.scene.targets) peak_rcs = std::max(peak_rcs, std::norm(t.rcs));
            }
            const double sample_power = pulse_.energy() / static_cast<double>(pulse_.size());
            noise_variance_ = peak_rcs * sample_power / std::pow(10.0, *config_.snr_db / 10.0);
        }
    }

    const SimulationConfig& config() const noexcept { return config_; }
    const RangeGrid& grid() const noexcept { return grid_; }
    const PulseSamples& pulse() const noexcept { return pulse_; }
    double noise_variance() const noexcept { return noise_variance_; }
    std::size_t n_pulses() const { return config_.platform.n_pulses(); }
    std::size_t line_length() const { return config_.ofdm.line_length(); }
    const RVector& foliage_frequency_grid_hz() const noexcept { return freq_grid_; }

    std::optional<FoliageRealization> foliage_realization(std::size_t pulse_index) const {
        if (!config_.foliage) return std::nullopt;
        return realize_transfer_function(*config_.foliage, freq_grid_, pulse_index, foliage_streams_);
    }

    /// One range line: echo convolution, then foliage in range frequency,
    /// then receiver noise.
    CVector synthesize_pulse(std::size_t pulse_index) const {
        require(pulse_index < n_pulses(), "synthesize_pulse: pulse index out of range");
        const double eta = config_.platform.slow_time(pulse_index);
        CVector line;
        if (config_.range_migration) {
            line = migrating_echo(eta);
        } else {
            const CVector g = gm_vector(config_.scene, grid_, config_.platform, eta);
            line = linear_convolution(pulse_.samples, g);
        }
        if (config_.foliage) line = apply_foliage(line, *foliage_realization(pulse_index));
        if (config_.snr_db) {
            CounterRng rng(derive_seed(config_.master_seed, "awgn", pulse_index));
            for (auto& v : line) v += rng.complex_normal(noise_variance_);
        }
        return line;
    }

    RawDataMatrix synthesize_raw(unsigned threads = 1) const {
        RawDataMatrix raw;
        raw.data = ComplexMatrix(n_pulses(), line_length());
        raw.sample_interval = config_.ofdm.sample_interval();
        raw.range_migration = config_.range_migration;
        raw.slow_time.resize(n_pulses());
        for (std::size_t j = 0; j < n_pulses(); ++j) raw.slow_time[j] = config_.platform.slow_time(j);
        parallel_for(n_pulses(), threads, [&](std::size_t j) {
            const CVector line = synthesize_pulse(j);
            std::copy(line.begin(), line.end(), raw.data.row(j).begin());
        });
        return raw;
    }

private:
    CVector migrating_echo(double eta) const {
        CVector line(line_length());
        for (const auto& t : config_.scene.targets) {
            const cplx g = weighting_coefficient(t, grid_, config_.platform, eta);
            if (g == cplx{}) continue;
            const double r = slant_range(t, grid_, config_.platform, eta);
            const double tau =
                static_cast<double>(t.range_cell) + (r - grid_.closest_approach_range(t.range_cell)) / grid_.cell_extent_m;
            const double whole = std::floor(tau);
            const CVector u = delayable_->delayed(tau - whole);
            const auto n0 = static_cast<long long>(whole);
            for (std::size_t n = 0; n < u.size(); ++n) {
                const long long i = n0 + static_cast<long long>(n);
                if (i < 0 || i >= static_cast<long long>(line.size())) continue;
                line[static_cast<std::size_t>(i)] += g * u[n];
            }
        }
        return line;
    }

    SimulationConfig config_;
    RangeGrid grid_;
    PulseSamples pulse_;
    std::optional<DelayablePulse> delayable_;
    FoliageStreams foliage_streams_;
    RVector freq_grid_;
    double noise_variance_ = 0.0;
};

}  // namespace fsar

#endif  // FOPEN_SAR_ECHO_SYNTHESIS_HPP
