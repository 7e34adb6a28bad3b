// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#ifndef FOPEN_SAR_FFT_HPP
#define FOPEN_SAR_FFT_HPP

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "fopen_sar/core.hpp"

namespace fsar::fft {

enum class Direction { kForward, kInverse };

namespace detail {

// FFTW's planner is not re-entrant; execution of an existing plan is. Plans
// are made once per (size, direction), in place and unaligned, so any
// std::vector<cplx> buffer can be passed to fftw_execute_dft from any thread.
// FFTW_ESTIMATE keeps plan choice independent of timing, which is what makes
// results bit-identical run to run.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t n, Direction dir) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, dir);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        auto* buf = fftw_alloc_complex(n);
        const int sign = dir == Direction::kForward ? FFTW_FORWARD : FFTW_BACKWARD;
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        if (plan == nullptr) throw Error("fftw: failed to create plan");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, Direction>, fftw_plan> plans_;
};

inline PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

}  // namespace detail

/// Unnormalized in-place transform: forward is sum x_n e^{-j2pi kn/N},
/// inverse is sum X_k e^{+j2pi kn/N}.
inline void transform(std::span<cplx> x, Direction dir) {
    if (x.empty()) return;
    fftw_plan plan = detail::plan_cache().get(x.size(), dir);
    auto* p = reinterpret_cast<fftw_complex*>(x.data());
    fftw_execute_dft(plan, p, p);
}

inline void scale(std::span<cplx> x, double s) {
    for (auto& v : x) v *= s;
}

/// Forward DFT, no normalization.
inline CVector dft(std::span<const cplx> x) {
    CVector out(x.begin(), x.end());
    transform(out, Direction::kForward);
    return out;
}

/// Inverse DFT with 1/N, so idft(dft(x)) == x.
inline CVector idft(std::span<const cplx> x) {
    CVector out(x.begin(), x.end());
    transform(out, Direction::kInverse);
    if (!out.empty()) scale(out, 1.0 / static_cast<double>(out.size()));
    return out;
}

/// 1/sqrt(N)-normalized pair; the convention of the OFDM modem.
inline CVector forward_unitary(std::span<const cplx> x) {
    CVector out = dft(x);
    if (!out.empty()) scale(out, 1.0 / std::sqrt(static_cast<double>(out.size())));
    return out;
}

inline CVector inverse_unitary(std::span<const cplx> x) {
    CVector out(x.begin(), x.end());
    transform(out, Direction::kInverse);
    if (!out.empty()) scale(out, 1.0 / std::sqrt(static_cast<double>(out.size())));
    return out;
}

/// Band-limited interpolation by zero padding the spectrum (periodic sinc
/// kernel). For even n the Nyquist bin is kept on the negative side.
/// Output sample i*factor equals input sample i.
inline CVector upsample(std::span<const cplx> x, std::size_t factor) {
    const std::size_t n = x.size();
    if (factor <= 1 || n == 0) return CVector(x.begin(), x.end());
    const CVector spec = dft(x);
    const std::size_t m = n * factor;
    CVector padded(m);
    const std::size_t pos = (n + 1) / 2;  // bins 0 .. pos-1 are non-negative
    for (std::size_t k = 0; k < pos; ++k) padded[k] = spec[k];
    for (std::size_t k = pos; k < n; ++k) padded[m - n + k] = spec[k];
    transform(padded, Direction::kInverse);
    scale(padded, 1.0 / static_cast<double>(n));
    return padded;
}

}  // namespace fsar::fft

#endif  // FOPEN_SAR_FFT_HPP
