// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#ifndef FOPEN_SAR_IMAGE_FORMATION_HPP
#define FOPEN_SAR_IMAGE_FORMATION_HPP

#include <cmath>
#include <string>

#include "fopen_sar/core.hpp"
#include "fopen_sar/echo_synthesis.hpp"
#include "fopen_sar/fft.hpp"
#include "fopen_sar/parallel.hpp"
#include "fopen_sar/scene_geometry.hpp"
#include "fopen_sar/waveform.hpp"

namespace fsar {

/// n_pulses x M matrix of range-compressed samples.
struct RangeCompressedMatrix {
    ComplexMatrix data;
};

/// Azimuth-frequency x range-cell matrix. Rows are in natural DFT order;
/// doppler_hz holds the signed frequency of each row.
struct RangeDopplerMatrix {
    ComplexMatrix data;
    RVector doppler_hz;
};

struct FocusedImage {
    ComplexMatrix pixels;  // [azimuth line][range cell]
    double range_cell_m = 0.0;
    double azimuth_line_s = 0.0;
};

/// Per-line range compression for either waveform.
class RangeCompressor {
public:
    static RangeCompressor ofdm(const OfdmSpec& spec) {
        for (std::size_t k = 0; k < spec.symbols.size(); ++k) {
            if (std::abs(spec.symbols[k]) == 0.0) {
                throw DivisionByZero("range_compress_ofdm: symbol " + std::to_string(k) + " is zero");
            }
        }
        spec.validate();
        RangeCompressor rc;
        rc.kind_ = WaveformKind::kOfdm;
        rc.n_ = spec.n_subcarriers;
        rc.m_ = spec.n_range_cells;
        // Reference spectrum of the transmitted samples inside the window
        // [M-1, N+M-2]: the suffix extension puts a linear phase on X_k.
        rc.reference_.resize(rc.n_);
        for (std::size_t k = 0; k < rc.n_; ++k) {
            const double ramp = kTwoPi * static_cast<double>((k * (rc.m_ - 1)) % rc.n_) / static_cast<double>(rc.n_);
            rc.reference_[k] = spec.symbols[k] * std::polar(1.0, ramp);
        }
        return rc;
    }

    static RangeCompressor noise(const PulseSamples& replica, std::size_t n_range_cells) {
        require(n_range_cells >= 1, "range_compress_noise: M must be >= 1");
        require(replica.size() >= 1, "range_compress_noise: empty replica");
        RangeCompressor rc;
        rc.kind_ = WaveformKind::kNoise;
        rc.m_ = n_range_cells;
        rc.replica_ = replica.samples;
        rc.replica_energy_ = replica.energy();
        require(rc.replica_energy_ > 0.0, "range_compress_noise: replica has zero energy");
        rc.n_ = replica.size() + 1 - n_range_cells;  // pulse length L = N + M - 1
        const std::size_t line = rc.line_length();
        CVector padded(line);
        std::copy(rc.replica_.begin(), rc.replica_.end(), padded.begin());
        rc.reference_ = fft::dft(padded);
        for (auto& v : rc.reference_) v = std::conj(v);
        return rc;
    }

    WaveformKind kind() const noexcept { return kind_; }
    std::size_t n_range_cells() const noexcept { return m_; }
    std::size_t line_length() const noexcept { return n_ + 2 * m_ - 2; }

    /// M range-cell samples from one raw line.
    CVector compress_line(std::span<const cplx> line) const {
        if (line.size() != line_length()) {
            throw DimensionError("range compression: line length " + std::to_string(line.size()) + ", expected " +
                                 std::to_string(line_length()));
        }
        if (kind_ == WaveformKind::kOfdm) {
            CVector z = fft::forward_unitary(line.subspan(m_ - 1, n_));
            for (std::size_t k = 0; k < n_; ++k) z[k] /= reference_[k];
            CVector g = fft::inverse_unitary(z);
            g.resize(m_);
            return g;
        }
        CVector spec = fft::dft(line);
        for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= reference_[k];
        CVector corr = fft::idft(spec);
        corr.resize(m_);
        fft::scale(corr, 1.0 / replica_energy_);
        return corr;
    }

    RangeCompressedMatrix compress(const RawDataMatrix& raw, unsigned threads = 1) const {
        if (raw.line_length() != line_length()) {
            throw DimensionError("range compression: raw line length " + std::to_string(raw.line_length()) +
                                 ", expected " + std::to_string(line_length()));
        }
        RangeCompressedMatrix rc{ComplexMatrix(raw.n_pulses(), m_)};
        parallel_for(raw.n_pulses(), threads, [&](std::size_t j) {
            const CVector g = compress_line(raw.data.row(j));
            std::copy(g.begin(), g.end(), rc.data.row(j).begin());
        });
        return rc;
    }

private:
    WaveformKind kind_ = WaveformKind::kOfdm;
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    CVector reference_;
    CVector replica_;
    double replica_energy_ = 0.0;
};

/// Window the data to N samples, demodulate per subcarrier, return to the
/// cell domain and keep M outputs; a noiseless line gives sqrt(N) g_m.
inline RangeCompressedMatrix range_compress_ofdm(const RawDataMatrix& raw, const OfdmSpec& spec, unsigned threads = 1) {
    return RangeCompressor::ofdm(spec).compress(raw, threads);
}

/// Matched filter against the transmitted replica, sampled at lags 0..M-1
/// and normalized by the replica energy.
inline RangeCompressedMatrix range_compress_noise(const RawDataMatrix& raw, const PulseSamples& replica,
                                                  std::size_t n_range_cells, unsigned threads = 1) {
    return RangeCompressor::noise(replica, n_range_cells).compress(raw, threads);
}

namespace detail {

template <typename Fn>
void for_each_column(ComplexMatrix& m, unsigned threads, Fn&& fn) {
    parallel_for(m.cols(), threads, [&](std::size_t c) {
        CVector col = m.column(c);
        fn(col);
        m.set_column(c, col);
    });
}

}  // namespace detail

inline RangeDopplerMatrix azimuth_fft(const RangeCompressedMatrix& rc, double prf_hz, unsigned threads = 1) {
    require(rc.data.rows() >= 2, "azimuth_fft: need at least two pulses");
    RangeDopplerMatrix rd{rc.data, RVector(rc.data.rows())};
    detail::for_each_column(rd.data, threads, [](CVector& col) { fft::transform(col, fft::Direction::kForward); });
    for (std::size_t i = 0; i < rd.doppler_hz.size(); ++i) rd.doppler_hz[i] = signed_bin_frequency(i, rd.doppler_hz.size()) * prf_hz;
    return rd;
}

enum class Interpolator { kSinc8, kNearest };

inline std::string to_string(Interpolator i) { return i == Interpolator::kSinc8 ? "sinc8" : "nearest"; }

inline Interpolator interpolator_from_string(const std::string& s) {
    if (s == "sinc8") return Interpolator::kSinc8;
    if (s == "nearest") return Interpolator::kNearest;
    throw InvalidParameter("unknown interpolator '" + s + "'");
}

/// Range walk at Doppler f for the reference range, in cells.
inline double rcmc_shift_cells(double doppler_hz, const PlatformParams& platform, double bandwidth_hz) {
    const double lambda = platform.wavelength();
    const double dr = lambda * lambda * platform.ref_range_m * doppler_hz * doppler_hz /
                      (8.0 * platform.velocity_mps * platform.velocity_mps);
    return dr / (kSpeedOfLight / (2.0 * bandwidth_hz));
}

/// out[n] = in(n + shift), band-limited 8-tap Hann-weighted sinc or nearest
/// sample. Samples from outside the row are zero.
inline CVector shift_row(std::span<const cplx> row, double shift, Interpolator interp) {
    const auto m = static_cast<long long>(row.size());
    CVector out(row.size());
    if (interp == Interpolator::kNearest) {
        const auto s = static_cast<long long>(std::llround(shift));
        for (long long n = 0; n < m; ++n) {
            const long long src = n + s;
            if (src >= 0 && src < m) out[static_cast<std::size_t>(n)] = row[static_cast<std::size_t>(src)];
        }
        return out;
    }
    const double whole = std::floor(shift);
    const double frac = shift - whole;
    const auto n0 = static_cast<long long>(whole);
    double w[8];
    for (int t = -3; t <= 4; ++t) {
        const double x = t - frac;
        w[t + 3] = sinc(x) * (0.5 + 0.5 * std::cos(kPi * x / 4.0));
    }
    for (long long n = 0; n < m; ++n) {
        cplx acc{};
        for (int t = -3; t <= 4; ++t) {
            const long long src = n + n0 + t;
            if (src >= 0 && src < m) acc += w[t + 3] * row[static_cast<std::size_t>(src)];
        }
        out[static_cast<std::size_t>(n)] = acc;
    }
    return out;
}

/// Range cell migration correction with the walk of the reference range
/// applied to the whole swath.
inline RangeDopplerMatrix rcmc(RangeDopplerMatrix rd, const PlatformParams& platform, double bandwidth_hz,
                               Interpolator interp = Interpolator::kSinc8, unsigned threads = 1) {
    if (rd.doppler_hz.size() != rd.data.rows()) throw DimensionError("rcmc: Doppler axis does not match rows");
    parallel_for(rd.data.rows(), threads, [&](std::size_t i) {
        const double shift = rcmc_shift_cells(rd.doppler_hz[i], platform, bandwidth_hz);
        if (shift == 0.0) return;
        const CVector out = shift_row(rd.data.row(i), shift, interp);
        std::copy(out.begin(), out.end(), rd.data.row(i).begin());
    });
    return rd;
}

enum class DopplerWindow { kNone, kHann };

inline std::string to_string(DopplerWindow w) { return w == DopplerWindow::kNone ? "none" : "hann"; }

inline DopplerWindow doppler_window_from_string(const std::string& s) {
    if (s == "none") return DopplerWindow::kNone;
    if (s == "hann") return DopplerWindow::kHann;
    throw InvalidParameter("unknown Doppler window '" + s + "'");
}

/// Azimuth chirp matched filter at R_c, inverse azimuth transform, then the
/// static phase exp(j 4 pi f_c R_c / c).
inline FocusedImage azimuth_compress(RangeDopplerMatrix rd, const PlatformParams& platform, double bandwidth_hz,
                                     DopplerWindow window = DopplerWindow::kNone, unsigned threads = 1) {
    if (rd.doppler_hz.size() != rd.data.rows()) throw DimensionError("azimuth_compress: Doppler axis does not match rows");
    const double ka = platform.doppler_rate();
    const double ba = platform.processed_doppler_bandwidth();
    const cplx static_phase =
        std::polar(1.0, std::fmod(4.0 * kPi * platform.carrier_hz * platform.ref_range_m / kSpeedOfLight, kTwoPi));
    for (std::size_t i = 0; i < rd.data.rows(); ++i) {
        const double f = rd.doppler_hz[i];
        cplx h = std::polar(1.0, -kPi * f * f / ka + 0.25 * kPi) * static_phase;
        if (window == DopplerWindow::kHann) h *= std::abs(f) < 0.5 * ba ? 0.5 + 0.5 * std::cos(kTwoPi * f / ba) : 0.0;
        for (auto& v : rd.data.row(i)) v *= h;
    }
    detail::for_each_column(rd.data, threads, [](CVector& col) {
        fft::transform(col, fft::Direction::kInverse);
        fft::scale(col, 1.0 / static_cast<double>(col.size()));
    });
    FocusedImage img;
    img.pixels = std::move(rd.data);
    img.range_cell_m = kSpeedOfLight / (2.0 * bandwidth_hz);
    img.azimuth_line_s = 1.0 / platform.prf_hz;
    return img;
}

enum class RcmcMode { kAuto, kOn, kOff };

inline std::string to_string(RcmcMode m) {
    switch (m) {
        case RcmcMode::kAuto: return "auto";
        case RcmcMode::kOn: return "on";
        case RcmcMode::kOff: return "off";
    }
    return "auto";
}

inline RcmcMode rcmc_mode_from_string(const std::string& s) {
    if (s == "auto") return RcmcMode::kAuto;
    if (s == "on") return RcmcMode::kOn;
    if (s == "off") return RcmcMode::kOff;
    throw InvalidParameter("unknown rcmc mode '" + s + "'");
}

struct ImagingOptions {
    // auto: correct only when the echoes were synthesized with range walk.
    RcmcMode rcmc = RcmcMode::kAuto;
    Interpolator interpolator = Interpolator::kSinc8;
    DopplerWindow window = DopplerWindow::kNone;
};

/// Range-Doppler chain: range compression, azimuth FFT, RCMC, azimuth
/// compression.
inline FocusedImage form_image(const RawDataMatrix& raw, const RangeCompressor& compressor,
                               const PlatformParams& platform, double bandwidth_hz, const ImagingOptions& options = {},
                               unsigned threads = 1) {
    RangeDopplerMatrix rd = azimuth_fft(compressor.compress(raw, threads), platform.prf_hz, threads);
    const bool correct = options.rcmc == RcmcMode::kOn || (options.rcmc == RcmcMode::kAuto && raw.range_migration);
    if (correct) rd = rcmc(std::move(rd), platform, bandwidth_hz, options.interpolator, threads);
    return azimuth_compress(std::move(rd), platform, bandwidth_hz, options.window, threads);
}

}  // namespace fsar

#endif  // FOPEN_SAR_IMAGE_FORMATION_HPP
