// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#ifndef FOPEN_SAR_SCENE_GEOMETRY_HPP
#define FOPEN_SAR_SCENE_GEOMETRY_HPP

#include <cmath>
#include <set>
#include <utility>

#include "fopen_sar/core.hpp"

namespace fsar {

/// Aperture-edge factor for the default antenna length: the aperture time
/// T_a spans the one-way -6 dB beamwidth of the sinc beam, i.e. the points
/// where sinc(L_a theta / lambda)^2 = 1/4. sinc(u) = 1/2 at u = 0.603355.
inline constexpr double kHalfPowerEdgeU = 0.6033545644;

/// L_a such that a target at the reference range sees the one-way -6 dB
/// beam edges at +-T_a/2.
inline double default_antenna_length(double carrier_hz, double ref_range_m, double velocity_mps, double aperture_time_s) {
    const double lambda = kSpeedOfLight / carrier_hz;
    return 2.0 * kHalfPowerEdgeU * lambda * ref_range_m / (velocity_mps * aperture_time_s);
}

struct PlatformParams {
    double altitude_m = 5000.0;
    double velocity_mps = 150.0;
    double aperture_time_s = 1.0;
    double carrier_hz = 9e9;
    double ref_range_m = 5000.0 * std::numbers::sqrt2;
    double antenna_length_m = 0.0;  // 0 -> default_antenna_length()
    double prf_hz = 256.0;

    double wavelength() const { return kSpeedOfLight / carrier_hz; }

    double antenna_length() const {
        return antenna_length_m > 0.0 ? antenna_length_m
                                      : default_antenna_length(carrier_hz, ref_range_m, velocity_mps, aperture_time_s);
    }

    std::size_t n_pulses() const { return static_cast<std::size_t>(std::llround(aperture_time_s * prf_hz)); }

    /// Slow time of pulse j; pulses cover [-T_a/2, T_a/2) at 1/prf.
    double slow_time(std::size_t j) const { return -0.5 * aperture_time_s + static_cast<double>(j) / prf_hz; }

    /// Azimuth Doppler rate at the reference range.
    double doppler_rate() const { return 2.0 * velocity_mps * velocity_mps / (wavelength() * ref_range_m); }

    /// Doppler bandwidth processed over the aperture, K_a * T_a.
    double processed_doppler_bandwidth() const { return doppler_rate() * aperture_time_s; }

    /// prf >= 2 v / L_a. Violations are warnings, not errors.
    bool azimuth_nyquist_ok() const { return prf_hz >= 2.0 * velocity_mps / antenna_length(); }

    double grazing_angle_at_reference() const { return std::asin(std::min(1.0, altitude_m / ref_range_m)); }

    void validate() const {
        require(altitude_m > 0.0, "platform: altitude must be positive");
        require(velocity_mps > 0.0, "platform: velocity must be positive");
        require(aperture_time_s > 0.0, "platform: aperture time must be positive");
        require(carrier_hz > 0.0, "platform: carrier frequency must be positive");
        require(ref_range_m >= altitude_m, "platform: reference range must be >= altitude");
        require(antenna_length_m >= 0.0, "platform: antenna length must be positive (or 0 for default)");
        require(prf_hz > 0.0, "platform: prf must be positive");
        require(n_pulses() >= 1, "platform: aperture holds no pulses");
    }
};

struct PointTarget {
    std::size_t range_cell = 0;
    double azimuth_m = 0.0;
    cplx rcs{1.0, 0.0};
};

struct Scene {
    std::vector<PointTarget> targets;
    std::size_t n_range_cells = 0;

    void validate() const {
        std::set<std::pair<std::size_t, double>> seen;
        for (const auto& t : targets) {
            require(t.range_cell < n_range_cells, "scene: target range cell outside [0, M-1]");
            require(seen.emplace(t.range_cell, t.azimuth_m).second,
                    "scene: two targets share a range cell and azimuth position");
        }
    }
};

/// Range-cell to geometry mapping. Cells are c/(2B) apart in slant range;
/// each carries a ground-plane coordinate x_m.
struct RangeGrid {
    double cell_extent_m = 0.0;
    double altitude_m = 0.0;
    RVector ground_range_m;

    /// Cell M/2 (integer division) at slant range R_c.
    static RangeGrid centered(double bandwidth_hz, std::size_t n_cells, const PlatformParams& platform) {
        RangeGrid g;
        g.cell_extent_m = kSpeedOfLight / (2.0 * bandwidth_hz);
        g.altitude_m = platform.altitude_m;
        g.ground_range_m.resize(n_cells);
        const auto mid = static_cast<double>(n_cells / 2);
        for (std::size_t m = 0; m < n_cells; ++m) {
            const double r0 = platform.ref_range_m + (static_cast<double>(m) - mid) * g.cell_extent_m;
            require(r0 >= platform.altitude_m, "range grid: swath reaches below nadir");
            g.ground_range_m[m] = std::sqrt(r0 * r0 - platform.altitude_m * platform.altitude_m);
        }
        return g;
    }

    std::size_t size() const noexcept { return ground_range_m.size(); }

    double closest_approach_range(std::size_t m) const {
        const double x = ground_range_m.at(m);
        return std::sqrt(x * x + altitude_m * altitude_m);
    }
};

/// sqrt(x_m^2 + H_p^2 + v_p^2 (eta - y/v_p)^2), the range hyperbola of a
/// target at along-track position y.
inline double slant_range(const PointTarget& target, const RangeGrid& grid, const PlatformParams& platform, double eta) {
    const double x = grid.ground_range_m.at(target.range_cell);
    const double along = platform.velocity_mps * eta - target.azimuth_m;
    return std::sqrt(x * x + grid.altitude_m * grid.altitude_m + along * along);
}

/// Two-way azimuth beam weighting sinc(L_a theta / lambda)^2, theta measured
/// off broadside in the slant plane.
inline double azimuth_gain(const PlatformParams& platform, const PointTarget& target, const RangeGrid& grid, double eta) {
    const double r0 = grid.closest_approach_range(target.range_cell);
    const double along = platform.velocity_mps * eta - target.azimuth_m;
    const double theta = std::atan2(along, r0);
    const double s = sinc(platform.antenna_length() * theta / platform.wavelength());
    return s * s;
}

/// g_m = sigma_m eps_a(eta) exp(-j 4 pi f_c R_m(eta) / c).
inline cplx weighting_coefficient(const PointTarget& target, const RangeGrid& grid, const PlatformParams& platform,
                                  double eta) {
    const double r = slant_range(target, grid, platform, eta);
    const double gain = azimuth_gain(platform, target, grid, eta);
    const double phase = -4.0 * kPi * platform.carrier_hz * r / kSpeedOfLight;
    return target.rcs * gain * std::polar(1.0, std::fmod(phase, kTwoPi));
}

/// RCS coefficient vector [g_0 .. g_{M-1}]; targets sharing a cell add
/// coherently.
inline CVector gm_vector(const Scene& scene, const RangeGrid& grid, const PlatformParams& platform, double eta) {
    CVector g(scene.n_range_cells);
    for (const auto& t : scene.targets) g.at(t.range_cell) += weighting_coefficient(t, grid, platform, eta);
    return g;
}

/// Per-pixel RCS recovery sigma = g exp(+j 4 pi f_c R / c). Diagnostic for
/// single-pulse checks; the imaging chain applies only the static phase at
/// the reference range.
inline cplx estimate_rcs(cplx g_hat, double slant_range_m, double carrier_hz) {
    return g_hat * std::polar(1.0, std::fmod(4.0 * kPi * carrier_hz * slant_range_m / kSpeedOfLight, kTwoPi));
}

}  // namespace fsar

#endif  // FOPEN_SAR_SCENE_GEOMETRY_HPP
