// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#ifndef FOPEN_SAR_PIPELINE_HPP
#define FOPEN_SAR_PIPELINE_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "fopen_sar/echo_synthesis.hpp"
#include "fopen_sar/image_formation.hpp"
#include "fopen_sar/parallel.hpp"
#include "fopen_sar/quality_metrics.hpp"
#include "fopen_sar/scenario.hpp"

namespace fsar {

inline RangeCompressor compressor_for(const EchoSimulator& sim) {
    const SimulationConfig& c = sim.config();
    if (c.waveform == WaveformKind::kOfdm) return RangeCompressor::ofdm(c.ofdm);
    return RangeCompressor::noise(sim.pulse(), c.ofdm.n_range_cells);
}

inline RawDataMatrix simulate(const Scenario& s, std::uint64_t seed, unsigned threads = 1) {
    return EchoSimulator(s.simulation(seed)).synthesize_raw(threads);
}

/// Focuses raw data produced by the same scenario and seed.
inline FocusedImage focus(const Scenario& s, std::uint64_t seed, const RawDataMatrix& raw, unsigned threads = 1) {
    const EchoSimulator sim(s.simulation(seed));
    return form_image(raw, compressor_for(sim), s.platform, s.bandwidth_hz, s.imaging, threads);
}

inline FocusedImage simulate_and_focus(const Scenario& s, std::uint64_t seed, unsigned threads = 1) {
    const EchoSimulator sim(s.simulation(seed));
    const RawDataMatrix raw = sim.synthesize_raw(threads);
    return form_image(raw, compressor_for(sim), s.platform, s.bandwidth_hz, s.imaging, threads);
}

inline MetricsReport metrics_report_header(const Scenario& s) {
    MetricsReport r;
    r.waveform = to_string(s.waveform);
    r.polarization = s.foliage ? to_string(s.foliage->polarization) : "none";
    r.foliage = s.foliage.has_value();
    return r;
}

/// Point-target metrics over the scenario's seed set.
inline MetricsReport run_metrics(const Scenario& s, unsigned threads = 1) {
    MetricsReport r = metrics_report_header(s);
    r.seeds = s.seed_list();
    for (std::uint64_t seed : r.seeds) r.runs.push_back(point_metrics(simulate_and_focus(s, seed, threads), s.oversample));
    aggregate(r);
    return r;
}

/// waveforms x foliage x polarizations grid over a common base scenario.
struct CompareMatrix {
    Scenario base;
    std::vector<WaveformKind> waveforms{WaveformKind::kOfdm, WaveformKind::kNoise};
    std::vector<bool> foliage{false, true};
    std::vector<Polarization> polarizations{Polarization::kHH, Polarization::kVV};
};

struct CompareVariant {
    std::string label;
    Scenario scenario;
};

inline std::vector<CompareVariant> expand(const CompareMatrix& m) {
    std::vector<CompareVariant> out;
    for (WaveformKind w : m.waveforms) {
        for (bool f : m.foliage) {
            for (Polarization p : m.polarizations) {
                CompareVariant v{to_string(w) + "/" + (f ? "foliage" : "no-foliage") + "/" + to_string(p), m.base};
                v.scenario.waveform = w;
                if (f) {
                    FoliageSettings fs = m.base.foliage.value_or(FoliageSettings{});
                    fs.polarization = p;
                    v.scenario.foliage = fs;
                } else {
                    v.scenario.foliage.reset();
                }
                out.push_back(std::move(v));
            }
        }
    }
    return out;
}

inline nlohmann::json metric_difference(const PointMetrics& a, const PointMetrics& b) {
    return to_json(PointMetrics{a.islr_range_db - b.islr_range_db, a.pslr_range_db - b.pslr_range_db,
                                a.islr_azimuth_db - b.islr_azimuth_db, a.pslr_azimuth_db - b.pslr_azimuth_db});
}

/// Per-variant reports plus "a - b" mean differences for every pair.
inline nlohmann::json run_compare(const CompareMatrix& m, unsigned threads = 1) {
    const std::vector<CompareVariant> variants = expand(m);
    require(variants.size() >= 2, "compare: need at least two variants");
    std::vector<MetricsReport> reports;
    nlohmann::json j;
    j["variants"] = nlohmann::json::array();
    for (const auto& v : variants) {
        reports.push_back(run_metrics(v.scenario, threads));
        nlohmann::json entry = to_json(reports.back());
        entry["label"] = v.label;
        j["variants"].push_back(std::move(entry));
    }
    j["differences"] = nlohmann::json::array();
    for (std::size_t a = 0; a < variants.size(); ++a) {
        for (std::size_t b = a + 1; b < variants.size(); ++b) {
            nlohmann::json d = metric_difference(reports[a].mean, reports[b].mean);
            d["a"] = variants[a].label;
            d["b"] = variants[b].label;
            j["differences"].push_back(std::move(d));
        }
    }
    return j;
}

}  // namespace fsar

#endif  // FOPEN_SAR_PIPELINE_HPP
