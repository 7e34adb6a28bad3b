// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#ifndef FOPEN_SAR_FOLIAGE_CHANNEL_HPP
#define FOPEN_SAR_FOLIAGE_CHANNEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "fopen_sar/core.hpp"
#include "fopen_sar/fft.hpp"
#include "fopen_sar/rng.hpp"

namespace fsar {

enum class Polarization { kHH, kVV };

inline std::string to_string(Polarization p) { return p == Polarization::kHH ? "HH" : "VV"; }

inline Polarization polarization_from_string(const std::string& s) {
    if (s == "HH") return Polarization::kHH;
    if (s == "VV") return Polarization::kVV;
    throw InvalidParameter("unknown polarization '" + s + "'");
}

/// Statistical two-way foliage transmission model parameters.
///
/// The amplitude fluctuation is delta_A = delta_omega(f) * delta_eta(eta),
/// with delta_omega the centred, mean-normalized Gamma(a, b) draw per
/// frequency bin (std 1/sqrt(a)) and delta_eta = exp(fbm_sigma * B_H(eta)),
/// B_H a fractional Brownian path over the aperture with unit variance at
/// its far end.
struct FoliageParams {
    Polarization polarization = Polarization::kHH;
    double alpha = 0.79;
    double beta = 0.05;
    double grazing_rad = kPi / 4.0;
    double gamma_shape = 4.0;
    double gamma_scale = 0.25;
    double hurst = 0.4;
    double fbm_sigma = 0.1;
    std::size_t spectral_corr_bins = 1;
    bool redraw_per_pulse = false;
    std::uint64_t seed = 0;

    /// Mean-attenuation constants per polarization.
    static FoliageParams preset(Polarization pol, double grazing_rad, std::uint64_t seed = 0) {
        FoliageParams p;
        p.polarization = pol;
        p.grazing_rad = grazing_rad;
        p.seed = seed;
        if (pol == Polarization::kHH) {
            p.alpha = 0.79;
            p.beta = 0.05;
        } else {
            p.alpha = 0.5;
            p.beta = 0.45;
        }
        return p;
    }

    void validate() const {
        require(grazing_rad > 0.0 && grazing_rad <= kPi / 2.0, "foliage: grazing angle must be in (0, pi/2]");
        require(gamma_shape > 0.0 && gamma_scale > 0.0, "foliage: gamma shape and scale must be positive");
        require(hurst > 0.0 && hurst < 1.0, "foliage: Hurst exponent must be in (0, 1)");
        require(fbm_sigma >= 0.0, "foliage: fbm_sigma must be non-negative");
        require(spectral_corr_bins >= 1, "foliage: spectral_corr_bins must be >= 1");
    }
};

/// Mean attenuation beta f^alpha sin(45 deg)/sin(gamma_g) in dB, f in GHz.
inline double mean_attenuation_db(double f_hz, const FoliageParams& params) {
    require(f_hz > 0.0, "mean_attenuation_db: frequency must be positive");
    if (params.grazing_rad == 0.0) throw SingularGeometry("mean_attenuation_db: zero grazing angle");
    const double f_ghz = f_hz * 1e-9;
    return params.beta * std::pow(f_ghz, params.alpha) * (std::sin(kPi / 4.0) / std::sin(params.grazing_rad));
}

/// Field-amplitude factor of a dB attenuation.
inline double db_to_amplitude_loss(double attenuation_db) { return std::pow(10.0, -attenuation_db / 20.0); }

/// i.i.d. Gamma(a, b) samples.
inline RVector sample_gamma_fluctuation(const FoliageParams& params, std::size_t n, CounterRng& stream) {
    require(params.gamma_shape > 0.0 && params.gamma_scale > 0.0, "gamma: shape and scale must be positive");
    RVector out(n);
    for (auto& x : out) x = stream.gamma(params.gamma_shape, params.gamma_scale);
    return out;
}

namespace detail {

inline double fgn_autocovariance(double hurst, double k) {
    const double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(std::abs(k + 1.0), h2) - 2.0 * std::pow(std::abs(k), h2) + std::pow(std::abs(k - 1.0), h2));
}

// Hosking / Durbin-Levinson: exact, O(n^2).
inline RVector fgn_hosking(double hurst, std::size_t n, CounterRng& stream) {
    RVector out(n);
    if (n == 0) return out;
    RVector phi(n, 0.0);
    RVector prev(n, 0.0);
    double v = 1.0;
    out[0] = stream.normal();
    for (std::size_t i = 1; i < n; ++i) {
        double num = fgn_autocovariance(hurst, static_cast<double>(i));
        for (std::size_t j = 0; j + 1 < i; ++j) num -= prev[j] * fgn_autocovariance(hurst, static_cast<double>(i - 1 - j));
        const double k = num / v;
        phi[i - 1] = k;
        for (std::size_t j = 0; j + 1 < i; ++j) phi[j] = prev[j] - k * prev[i - 2 - j];
        v *= (1.0 - k * k);
        double mean = 0.0;
        for (std::size_t j = 0; j < i; ++j) mean += phi[j] * out[i - 1 - j];
        out[i] = mean + std::sqrt(v) * stream.normal();
        std::copy(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(i), prev.begin());
    }
    return out;
}

// Davies-Harte circulant embedding. Returns false if the embedding has a
// materially negative eigenvalue.
inline bool fgn_davies_harte(double hurst, std::size_t n, CounterRng& stream, RVector& out) {
    const std::size_t m = 2 * n;
    CVector c(m);
    for (std::size_t j = 0; j <= n; ++j) c[j] = fgn_autocovariance(hurst, static_cast<double>(j));
    for (std::size_t j = n + 1; j < m; ++j) c[j] = c[m - j];
    fft::transform(c, fft::Direction::kForward);
    CVector w(m);
    for (std::size_t k = 0; k < m; ++k) {
        double lambda = c[k].real();
        if (lambda < -1e-9 * static_cast<double>(m)) return false;
        lambda = std::max(lambda, 0.0);
        w[k] = std::sqrt(lambda / static_cast<double>(m)) * stream.complex_normal(2.0);
    }
    fft::transform(w, fft::Direction::kForward);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = w[i].real();
    return true;
}

}  // namespace detail

/// Fractional Gaussian noise with unit variance per sample. Davies-Harte,
/// falling back to Hosking when the circulant embedding is not
/// non-negative definite.
inline RVector fractional_gaussian_noise(double hurst, std::size_t n, CounterRng& stream) {
    require(hurst > 0.0 && hurst < 1.0, "fgn: Hurst exponent must be in (0, 1)");
    RVector out;
    if (n == 0) return out;
    CounterRng attempt = stream;
    if (detail::fgn_davies_harte(hurst, n, attempt, out)) {
        stream = attempt;
        return out;
    }
    return detail::fgn_hosking(hurst, n, stream);
}

/// Fractional Brownian motion sampled at t_i = i * step, anchored at 0, with
/// E[(B(t+tau) - B(t))^2] = tau^{2H}.
inline RVector fbm_path(double hurst, std::size_t n, double step, CounterRng& stream) {
    require(hurst > 0.0 && hurst < 1.0, "fbm: Hurst exponent must be in (0, 1)");
    require(n >= 2, "fbm: need at least two samples");
    require(step > 0.0, "fbm: step must be positive");
    const RVector incr = fractional_gaussian_noise(hurst, n - 1, stream);
    const double s = std::pow(step, hurst);
    RVector path(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) path[i] = path[i - 1] + s * incr[i - 1];
    return path;
}

/// Pre-generated stochastic state of one run. The fBm path is drawn once,
/// sequentially; everything else is regenerated per pulse from sub-seeds.
struct FoliageStreams {
    std::uint64_t seed = 0;
    RVector fbm;  // one value per pulse

    static FoliageStreams make(const FoliageParams& params, std::size_t n_pulses) {
        params.validate();
        FoliageStreams s;
        s.seed = params.seed;
        if (n_pulses >= 2) {
            CounterRng rng(derive_seed(params.seed, "foliage-fbm"));
            s.fbm = fbm_path(params.hurst, n_pulses, 1.0 / static_cast<double>(n_pulses - 1), rng);
        } else {
            s.fbm.assign(n_pulses, 0.0);
        }
        return s;
    }

    CounterRng gamma_stream(const FoliageParams& p, std::size_t pulse) const {
        return CounterRng(derive_seed(seed, "foliage-gamma", p.redraw_per_pulse ? pulse : 0));
    }
    CounterRng phase_stream(const FoliageParams& p, std::size_t pulse) const {
        return CounterRng(derive_seed(seed, "foliage-psi", p.redraw_per_pulse ? pulse : 0));
    }
};

/// Bin frequencies f_c + signed offset for a baseband transform of n bins.
inline RVector foliage_frequency_grid(double carrier_hz, double bandwidth_hz, std::size_t n) {
    RVector f(n);
    for (std::size_t k = 0; k < n; ++k) f[k] = carrier_hz + signed_bin_frequency(k, n) * bandwidth_hz;
    return f;
}

/// delta_eta at a pulse: exp(fbm_sigma * B_H(pulse)).
inline double flight_path_fluctuation(const FoliageParams& params, const FoliageStreams& streams, std::size_t pulse) {
    return std::exp(params.fbm_sigma * streams.fbm.at(pulse));
}

/// delta_A per frequency bin at one pulse.
inline RVector delta_amplitude(const FoliageParams& params, std::size_t n_bins, std::size_t pulse,
                               const FoliageStreams& streams) {
    CounterRng rng = streams.gamma_stream(params, pulse);
    const RVector g = sample_gamma_fluctuation(params, n_bins, rng);
    const double mu = params.gamma_shape * params.gamma_scale;
    RVector d(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) d[k] = (g[k] - mu) / mu;
    if (params.spectral_corr_bins > 1 && n_bins > 0) {
        // Circular moving sum scaled by 1/sqrt(L): keeps the per-bin variance.
        const std::size_t len = std::min(params.spectral_corr_bins, n_bins);
        RVector smooth(n_bins, 0.0);
        for (std::size_t k = 0; k < n_bins; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < len; ++j) acc += d[(k + j) % n_bins];
            smooth[k] = acc / std::sqrt(static_cast<double>(len));
        }
        d = std::move(smooth);
    }
    const double eta_term = flight_path_fluctuation(params, streams, pulse);
    for (auto& v : d) v *= eta_term;
    return d;
}

/// A_k = A0(f_k) (1 + delta_A,k) as a field amplitude, floored at 1e-6 A0.
inline RVector amplitude_fluctuation(const FoliageParams& params, const RVector& freq_grid_hz, const RVector& delta_a) {
    if (delta_a.size() != freq_grid_hz.size()) throw DimensionError("amplitude_fluctuation: grid/fluctuation size mismatch");
    RVector a(freq_grid_hz.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double a0 = db_to_amplitude_loss(mean_attenuation_db(freq_grid_hz[k], params));
        a[k] = std::max(a0 * (1.0 + delta_a[k]), 1e-6 * a0);
    }
    return a;
}

/// delta_phi = atan2(delta_A sin psi, 1 + delta_A cos psi).
inline double fluctuation_phase(double delta_a, double psi) {
    return std::atan2(delta_a * std::sin(psi), 1.0 + delta_a * std::cos(psi));
}

/// fluctuation_phase per bin with psi drawn uniformly on [-pi, pi].
inline RVector phase_fluctuation(const RVector& delta_a, CounterRng& stream) {
    RVector phi(delta_a.size());
    for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = fluctuation_phase(delta_a[k], stream.uniform(-kPi, kPi));
    return phi;
}

struct FoliageRealization {
    CVector response;
    RVector amplitude;
    RVector phase;
};

inline FoliageRealization compose_realization(RVector amplitude, RVector phase) {
    if (amplitude.size() != phase.size()) throw DimensionError("foliage: amplitude/phase size mismatch");
    FoliageRealization r;
    r.response.resize(amplitude.size());
    for (std::size_t k = 0; k < amplitude.size(); ++k) r.response[k] = std::polar(amplitude[k], phase[k]);
    r.amplitude = std::move(amplitude);
    r.phase = std::move(phase);
    return r;
}

/// F_k = A_k exp(j Phi_k) for one pulse.
inline FoliageRealization realize_transfer_function(const FoliageParams& params, const RVector& freq_grid_hz,
                                                    std::size_t pulse, const FoliageStreams& streams) {
    const RVector d = delta_amplitude(params, freq_grid_hz.size(), pulse, streams);
    CounterRng psi = streams.phase_stream(params, pulse);
    RVector phase = phase_fluctuation(d, psi);
    return compose_realization(amplitude_fluctuation(params, freq_grid_hz, d), std::move(phase));
}

}  // namespace fsar

#endif  // FOPEN_SAR_FOLIAGE_CHANNEL_HPP
