// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#ifndef FOPEN_SAR_QUALITY_METRICS_HPP
#define FOPEN_SAR_QUALITY_METRICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "fopen_sar/core.hpp"
#include "fopen_sar/fft.hpp"
#include "fopen_sar/image_formation.hpp"

namespace fsar {

inline constexpr double kMinusInf = -std::numeric_limits<double>::infinity();
inline constexpr std::size_t kDefaultOversample = 16;

/// |.|^2 cut through an image with its main-lobe bounds. Indices are in
/// oversampled units; index / oversample is the position in pixels.
struct Profile {
    RVector values;
    std::size_t peak_index = 0;
    std::size_t null_left = 0;
    std::size_t null_right = 0;
    std::size_t oversample = 1;
};

/// First local minimum on each side of the peak, searched on a 3-sample
/// moving average (zero beyond the ends).
inline void locate_nulls(Profile& p) {
    const std::size_t n = p.values.size();
    if (n == 0) throw NoPeakError("profile is empty");
    RVector s(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = p.values[i];
        if (i > 0) acc += p.values[i - 1];
        if (i + 1 < n) acc += p.values[i + 1];
        s[i] = acc / 3.0;
    }
    std::size_t l = p.peak_index;
    while (l > 0 && s[l - 1] < s[l]) --l;
    std::size_t r = p.peak_index;
    while (r + 1 < n && s[r + 1] < s[r]) ++r;
    p.null_left = l;
    p.null_right = r;
}

/// Profile of a power vector whose peak is the global maximum.
inline Profile make_profile(RVector power, std::size_t oversample = 1) {
    if (power.empty()) throw NoPeakError("profile is empty");
    Profile p;
    p.values = std::move(power);
    p.oversample = oversample;
    p.peak_index = static_cast<std::size_t>(std::max_element(p.values.begin(), p.values.end()) - p.values.begin());
    if (!(p.values[p.peak_index] > 0.0) || !std::isfinite(p.values[p.peak_index])) {
        throw NoPeakError("profile has no positive finite peak");
    }
    locate_nulls(p);
    return p;
}

/// Band-limited upsampled |x|^2 of a complex cut.
inline Profile profile_from_samples(std::span<const cplx> cut, std::size_t oversample = kDefaultOversample) {
    const CVector up = fft::upsample(cut, oversample);
    RVector power(up.size());
    for (std::size_t i = 0; i < up.size(); ++i) power[i] = std::norm(up[i]);
    return make_profile(std::move(power), std::max<std::size_t>(oversample, 1));
}

struct PeakLocation {
    std::size_t azimuth = 0;
    std::size_t range = 0;
};

inline PeakLocation find_peak(const ComplexMatrix& img) {
    if (img.rows() * img.cols() < 2) throw NoPeakError("image has fewer than two pixels");
    double best = 0.0;
    PeakLocation loc;
    for (std::size_t r = 0; r < img.rows(); ++r) {
        for (std::size_t c = 0; c < img.cols(); ++c) {
            const double v = std::norm(img(r, c));
            if (!std::isfinite(v)) throw NoPeakError("image contains non-finite pixels");
            if (v > best) {
                best = v;
                loc = {r, c};
            }
        }
    }
    if (best == 0.0) throw NoPeakError("image is identically zero");
    return loc;
}

struct ProfilePair {
    Profile range;
    Profile azimuth;
    PeakLocation peak;
};

/// Range cut along the peak's azimuth line and azimuth cut along the peak's
/// range cell.
inline ProfilePair extract_profiles(const ComplexMatrix& img, std::size_t oversample = kDefaultOversample) {
    const PeakLocation pk = find_peak(img);
    if (img.rows() < 2 || img.cols() < 2) throw NoPeakError("image must be at least 2x2 for profile extraction");
    return {profile_from_samples(img.row(pk.azimuth), oversample), profile_from_samples(img.column(pk.range), oversample),
            pk};
}

inline ProfilePair extract_profiles(const FocusedImage& img, std::size_t oversample = kDefaultOversample) {
    return extract_profiles(img.pixels, oversample);
}

inline double main_lobe_power(const Profile& p) {
    double main = 0.0;
    for (std::size_t i = p.null_left; i <= p.null_right; ++i) main += p.values[i];
    return main;
}

/// 10 log10(sidelobe power / main-lobe power); -inf without sidelobe power.
inline double islr_db(const Profile& p) {
    const double main = main_lobe_power(p);
    if (!(main > 0.0)) throw UndefinedMetric("islr: main-lobe power is zero");
    double side = 0.0;
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        if (i < p.null_left || i > p.null_right) side += p.values[i];
    }
    if (side <= 0.0) return kMinusInf;
    return 10.0 * std::log10(side / main);
}

/// 10 log10(largest sidelobe sample / peak sample); -inf without sidelobes.
inline double pslr_db(const Profile& p) {
    const double peak = p.values.at(p.peak_index);
    if (!(peak > 0.0)) throw UndefinedMetric("pslr: peak power is zero");
    double side = 0.0;
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        if (i < p.null_left || i > p.null_right) side = std::max(side, p.values[i]);
    }
    if (side <= 0.0) return kMinusInf;
    return 10.0 * std::log10(side / peak);
}

/// Half-power main-lobe width in original samples, linearly interpolated.
inline double width_3db(const Profile& p) {
    const double half = 0.5 * p.values.at(p.peak_index);
    auto crossing = [&](int dir) {
        auto i = static_cast<long long>(p.peak_index);
        const auto n = static_cast<long long>(p.values.size());
        while (i + dir >= 0 && i + dir < n && p.values[static_cast<std::size_t>(i + dir)] > half) i += dir;
        if (i + dir < 0 || i + dir >= n) return static_cast<double>(i);
        const double a = p.values[static_cast<std::size_t>(i)];
        const double b = p.values[static_cast<std::size_t>(i + dir)];
        return static_cast<double>(i) + dir * (a - half) / (a - b);
    };
    return (crossing(+1) - crossing(-1)) / static_cast<double>(p.oversample);
}

struct PointMetrics {
    double islr_range_db = 0.0;
    double pslr_range_db = 0.0;
    double islr_azimuth_db = 0.0;
    double pslr_azimuth_db = 0.0;
};

inline PointMetrics point_metrics(const ProfilePair& pp) {
    return {islr_db(pp.range), pslr_db(pp.range), islr_db(pp.azimuth), pslr_db(pp.azimuth)};
}

inline PointMetrics point_metrics(const FocusedImage& img, std::size_t oversample = kDefaultOversample) {
    return point_metrics(extract_profiles(img, oversample));
}

struct MetricsReport {
    std::string waveform;
    std::string polarization;
    bool foliage = false;
    std::vector<std::uint64_t> seeds;
    PointMetrics mean;
    PointMetrics std;
    std::vector<PointMetrics> runs;

    std::size_t n_seeds() const noexcept { return runs.size(); }
};

/// Mean and sample standard deviation (n - 1) of each metric.
inline void aggregate(MetricsReport& report) {
    const auto n = static_cast<double>(report.runs.size());
    if (report.runs.empty()) return;
    auto fields = [](PointMetrics& m) {
        return std::array<double*, 4>{&m.islr_range_db, &m.pslr_range_db, &m.islr_azimuth_db, &m.pslr_azimuth_db};
    };
    report.mean = {};
    report.std = {};
    for (auto run : report.runs) {
        auto src = fields(run);
        auto dst = fields(report.mean);
        for (std::size_t i = 0; i < 4; ++i) *dst[i] += *src[i] / n;
    }
    if (report.runs.size() > 1) {
        for (auto run : report.runs) {
            auto src = fields(run);
            auto mu = fields(report.mean);
            auto dst = fields(report.std);
            for (std::size_t i = 0; i < 4; ++i) *dst[i] += (*src[i] - *mu[i]) * (*src[i] - *mu[i]) / (n - 1.0);
        }
        for (double* v : fields(report.std)) *v = std::sqrt(*v);
    }
}

namespace detail {

inline nlohmann::json db_value(double v) {
    if (std::isfinite(v)) return v;
    return v < 0 ? "-inf" : (v > 0 ? "inf" : "nan");
}

}  // namespace detail

inline nlohmann::json to_json(const PointMetrics& m) {
    return {{"islr_range_db", detail::db_value(m.islr_range_db)},
            {"pslr_range_db", detail::db_value(m.pslr_range_db)},
            {"islr_azimuth_db", detail::db_value(m.islr_azimuth_db)},
            {"pslr_azimuth_db", detail::db_value(m.pslr_azimuth_db)}};
}

inline nlohmann::json to_json(const MetricsReport& r) {
    nlohmann::json j = to_json(r.mean);
    j["waveform"] = r.waveform;
    j["polarization"] = r.polarization;
    j["foliage"] = r.foliage;
    j["n_seeds"] = r.n_seeds();
    j["seeds"] = r.seeds;
    j["std"] = to_json(r.std);
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& m : r.runs) runs.push_back(to_json(m));
    j["runs"] = std::move(runs);
    return j;
}

}  // namespace fsar

#endif  // FOPEN_SAR_QUALITY_METRICS_HPP
