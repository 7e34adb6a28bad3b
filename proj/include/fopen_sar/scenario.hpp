// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#ifndef FOPEN_SAR_SCENARIO_HPP
#define FOPEN_SAR_SCENARIO_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fopen_sar/core.hpp"
#include "fopen_sar/echo_synthesis.hpp"
#include "fopen_sar/foliage_channel.hpp"
#include "fopen_sar/image_formation.hpp"
#include "fopen_sar/quality_metrics.hpp"
#include "fopen_sar/rng.hpp"
#include "fopen_sar/scene_geometry.hpp"

namespace fsar {

/// Scenario document violates the schema; `path` names the offending field.
struct SchemaError : Error {
    SchemaError(std::string field_path, const std::string& what)
        : Error(field_path + ": " + what), path(std::move(field_path)) {}
    std::string path;
};

struct FoliageSettings {
    Polarization polarization = Polarization::kHH;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> grazing_deg;  // default: asin(H_p / R_c)
    double gamma_shape = 4.0;
    double gamma_scale = 0.25;
    double hurst = 0.4;
    double fbm_sigma = 0.1;
    std::size_t spectral_corr_bins = 1;
    bool redraw_per_pulse = false;
    std::optional<std::uint64_t> seed;
};

struct OutputSettings {
    bool raw = true;
    bool csv = false;
    bool pgm = true;
    bool png = true;
    bool profiles = true;
    bool foliage_csv = false;
};

struct Scenario {
    WaveformKind waveform = WaveformKind::kOfdm;
    std::size_t n_subcarriers = 1024;
    std::size_t n_range_cells = 192;
    double bandwidth_hz = 4e9;
    std::optional<std::uint64_t> symbol_seed;
    std::optional<std::uint64_t> noise_seed;

    PlatformParams platform;
    std::vector<PointTarget> targets;
    bool range_migration = false;

    std::optional<FoliageSettings> foliage;
    std::optional<double> snr_db;

    ImagingOptions imaging;
    std::size_t oversample = kDefaultOversample;
    double image_floor_db = -50.0;

    OutputSettings outputs;

    std::uint64_t master_seed = 1;
    std::size_t n_seeds = 1;

    /// Seeds of a multi-seed run: master, master + 1, ...
    std::vector<std::uint64_t> seed_list() const {
        std::vector<std::uint64_t> s(n_seeds);
        for (std::size_t i = 0; i < n_seeds; ++i) s[i] = master_seed + i;
        return s;
    }

    FoliageParams foliage_params(std::uint64_t seed) const {
        require(foliage.has_value(), "scenario has no foliage section");
        const FoliageSettings& f = *foliage;
        const double grazing =
            f.grazing_deg ? *f.grazing_deg * kPi / 180.0 : platform.grazing_angle_at_reference();
        FoliageParams p = FoliageParams::preset(f.polarization, grazing, f.seed.value_or(derive_seed(seed, "foliage")));
        if (f.alpha) p.alpha = *f.alpha;
        if (f.beta) p.beta = *f.beta;
        p.gamma_shape = f.gamma_shape;
        p.gamma_scale = f.gamma_scale;
        p.hurst = f.hurst;
        p.fbm_sigma = f.fbm_sigma;
        p.spectral_corr_bins = f.spectral_corr_bins;
        p.redraw_per_pulse = f.redraw_per_pulse;
        return p;
    }

    /// Fully resolved simulation config for one seed. The same seed gives the
    /// same geometry and foliage draws for either waveform.
    SimulationConfig simulation(std::uint64_t seed) const {
        SimulationConfig c;
        c.waveform = waveform;
        c.ofdm = OfdmSpec::bpsk(n_subcarriers, n_range_cells, bandwidth_hz, symbol_seed.value_or(derive_seed(seed, "symbols")));
        c.noise_seed = noise_seed.value_or(derive_seed(seed, "noise-waveform"));
        c.scene = Scene{targets, n_range_cells};
        c.platform = platform;
        if (foliage) c.foliage = foliage_params(seed);
        c.snr_db = snr_db;
        c.master_seed = seed;
        c.range_migration = range_migration;
        return c;
    }

    void validate() const {
        simulation(master_seed).validate();
        require(n_seeds >= 1, "seeds.count must be >= 1");
        require(oversample >= 1, "processing.oversample must be >= 1");
        require(image_floor_db < 0.0, "processing.image_floor_db must be negative");
    }
};

/// Point list of a tank-like silhouette: hull outline, turret and barrel.
/// Range cells are placed relative to a 192-cell swath and scaled to M.
inline std::vector<PointTarget> tank_targets(std::size_t n_range_cells) {
    auto cell = [&](std::size_t c192) { return c192 * n_range_cells / 192; };
    std::vector<PointTarget> t;
    for (double y : {-4.5, -3.0, -1.5, 0.0, 1.5, 3.0, 4.5}) {
        t.push_back({cell(40), y, {1.0, 0.0}});
        t.push_back({cell(152), y, {1.0, 0.0}});
    }
    for (double y : {-4.5, 4.5}) {
        for (std::size_t c : {68, 96, 124}) t.push_back({cell(c), y, {1.0, 0.0}});
    }
    for (double y : {-1.5, 0.0, 1.5}) {
        t.push_back({cell(72), y, {1.0, 0.0}});
        t.push_back({cell(120), y, {1.0, 0.0}});
    }
    for (double y : {-1.5, 0.0, 1.5, 3.0, 6.0}) t.push_back({cell(96), y, {1.0, 0.0}});
    return t;
}

/// Full-size geometry with one unit target at the reference cell.
inline Scenario preset_full() {
    Scenario s;
    s.targets = {{s.n_range_cells / 2, 0.0, {1.0, 0.0}}};
    return s;
}

/// Desk-scale variant for quick runs.
inline Scenario preset_small() {
    Scenario s;
    s.n_subcarriers = 256;
    s.n_range_cells = 48;
    s.platform.aperture_time_s = 0.25;
    s.platform.prf_hz = 128.0;
    s.targets = {{s.n_range_cells / 2, 0.0, {1.0, 0.0}}};
    return s;
}

inline Scenario preset_by_name(const std::string& name) {
    if (name == "full") return preset_full();
    if (name == "small") return preset_small();
    throw SchemaError("preset", "unknown preset '" + name + "' (expected full or small)");
}

namespace detail {

/// Reads one JSON object, remembering which keys were consumed so that
/// leftovers can be rejected.
class SectionReader {
public:
    SectionReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw SchemaError(path_, "expected an object");
    }

    bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    void mark(const char* key) { seen_.insert(key); }

    const nlohmann::json& raw(const char* key) {
        seen_.insert(key);
        return j_.at(key);
    }

    std::string field(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    template <typename T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        if (!has(key)) return;
        out = convert<T>(j_.at(key), field(key));
    }

    template <typename T>
    void read(const char* key, std::optional<T>& out) {
        seen_.insert(key);
        if (!has(key)) return;
        out = convert<T>(j_.at(key), field(key));
    }

    template <typename T>
    T required(const char* key) {
        seen_.insert(key);
        if (!has(key)) throw SchemaError(field(key), "required field is missing");
        return convert<T>(j_.at(key), field(key));
    }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (!seen_.count(item.key())) throw SchemaError(field(item.key().c_str()), "unknown key");
        }
    }

    template <typename T>
    static T convert(const nlohmann::json& v, const std::string& where) {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw SchemaError(where, "expected a boolean");
            return v.get<bool>();
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw SchemaError(where, "expected a string");
            return v.get<std::string>();
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
                throw SchemaError(where, "expected a non-negative integer");
            }
            return static_cast<T>(v.get<std::uint64_t>());
        } else {
            if (!v.is_number()) throw SchemaError(where, "expected a number");
            const double d = v.get<double>();
            if (!std::isfinite(d)) throw SchemaError(where, "expected a finite number");
            return static_cast<T>(d);
        }
    }

private:
    const nlohmann::json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <typename Fn>
auto wrap_enum(const std::string& where, Fn&& fn) {
    try {
        return fn();
    } catch (const InvalidParameter& e) {
        throw SchemaError(where, e.what());
    }
}

inline cplx read_rcs(const nlohmann::json& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw SchemaError(where, "expected a number or [re, im]");
}

}  // namespace detail

/// Parses a scenario document. A run manifest is accepted as well; its
/// resolved "config" snapshot is used.
inline Scenario scenario_from_json(const nlohmann::json& doc) {
    if (doc.is_object() && doc.contains("manifest_version")) {
        if (!doc.contains("config")) throw SchemaError("config", "manifest has no config snapshot");
        return scenario_from_json(doc.at("config"));
    }
    detail::SectionReader top(doc, "");
    Scenario s;
    for (const char* section : {"waveform", "platform", "scene", "processing", "outputs", "seeds"}) {
        if (!top.has(section)) throw SchemaError(section, "required section is missing");
    }

    {
        detail::SectionReader w(top.raw("waveform"), "waveform");
        const std::string kind = w.required<std::string>("kind");
        s.waveform = detail::wrap_enum(w.field("kind"), [&] { return waveform_kind_from_string(kind); });
        w.read("n_subcarriers", s.n_subcarriers);
        w.read("n_range_cells", s.n_range_cells);
        w.read("bandwidth_hz", s.bandwidth_hz);
        w.read("symbol_seed", s.symbol_seed);
        w.read("noise_seed", s.noise_seed);
        w.finish();
    }
    {
        detail::SectionReader p(top.raw("platform"), "platform");
        p.read("altitude_m", s.platform.altitude_m);
        p.read("velocity_mps", s.platform.velocity_mps);
        p.read("aperture_time_s", s.platform.aperture_time_s);
        p.read("carrier_hz", s.platform.carrier_hz);
        p.read("ref_range_m", s.platform.ref_range_m);
        p.read("antenna_length_m", s.platform.antenna_length_m);
        p.read("prf_hz", s.platform.prf_hz);
        p.finish();
    }
    {
        detail::SectionReader sc(top.raw("scene"), "scene");
        sc.read("range_migration", s.range_migration);
        const std::string tfield = sc.field("targets");
        const auto& targets = sc.raw("targets");
        if (!targets.is_array()) throw SchemaError(tfield, "expected an array of targets");
        for (std::size_t i = 0; i < targets.size(); ++i) {
            detail::SectionReader t(targets[i], tfield + "[" + std::to_string(i) + "]");
            PointTarget pt;
            pt.range_cell = t.required<std::size_t>("range_cell");
            t.read("azimuth_m", pt.azimuth_m);
            if (t.has("rcs")) pt.rcs = detail::read_rcs(t.raw("rcs"), t.field("rcs"));
            else t.mark("rcs");
            t.finish();
            s.targets.push_back(pt);
        }
        sc.finish();
    }
    if (top.has("foliage")) {
        detail::SectionReader f(top.raw("foliage"), "foliage");
        FoliageSettings fs;
        const std::string pol = f.required<std::string>("polarization");
        fs.polarization = detail::wrap_enum(f.field("polarization"), [&] { return polarization_from_string(pol); });
        f.read("alpha", fs.alpha);
        f.read("beta", fs.beta);
        f.read("grazing_deg", fs.grazing_deg);
        f.read("gamma_shape", fs.gamma_shape);
        f.read("gamma_scale", fs.gamma_scale);
        f.read("hurst", fs.hurst);
        f.read("fbm_sigma", fs.fbm_sigma);
        f.read("spectral_corr_bins", fs.spectral_corr_bins);
        f.read("redraw_per_pulse", fs.redraw_per_pulse);
        f.read("seed", fs.seed);
        f.finish();
        s.foliage = fs;
    } else {
        top.mark("foliage");
    }
    if (top.has("noise")) {
        detail::SectionReader n(top.raw("noise"), "noise");
        const auto& v = n.raw("snr_db");
        if (v.is_string()) {
            if (v.get<std::string>() != "off") throw SchemaError(n.field("snr_db"), "expected a number or \"off\"");
        } else {
            s.snr_db = detail::SectionReader::convert<double>(v, n.field("snr_db"));
        }
        n.finish();
    } else {
        top.mark("noise");
    }
    {
        detail::SectionReader p(top.raw("processing"), "processing");
        std::string rcmc = to_string(s.imaging.rcmc);
        std::string interp = to_string(s.imaging.interpolator);
        std::string window = to_string(s.imaging.window);
        p.read("rcmc", rcmc);
        p.read("interpolator", interp);
        p.read("doppler_window", window);
        s.imaging.rcmc = detail::wrap_enum(p.field("rcmc"), [&] { return rcmc_mode_from_string(rcmc); });
        s.imaging.interpolator =
            detail::wrap_enum(p.field("interpolator"), [&] { return interpolator_from_string(interp); });
        s.imaging.window = detail::wrap_enum(p.field("doppler_window"), [&] { return doppler_window_from_string(window); });
        p.read("oversample", s.oversample);
        p.read("image_floor_db", s.image_floor_db);
        p.finish();
    }
    {
        detail::SectionReader o(top.raw("outputs"), "outputs");
        o.read("raw", s.outputs.raw);
        o.read("csv", s.outputs.csv);
        o.read("pgm", s.outputs.pgm);
        o.read("png", s.outputs.png);
        o.read("profiles", s.outputs.profiles);
        o.read("foliage_csv", s.outputs.foliage_csv);
        o.finish();
    }
    {
        detail::SectionReader sd(top.raw("seeds"), "seeds");
        sd.read("master", s.master_seed);
        sd.read("count", s.n_seeds);
        sd.finish();
    }
    top.finish();
    try {
        s.validate();
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        throw SchemaError("scenario", e.what());
    }
    return s;
}

/// Resolved snapshot; scenario_from_json(to_json(s)) reproduces s.
inline nlohmann::json to_json(const Scenario& s) {
    using nlohmann::json;
    json j;
    j["waveform"] = {{"kind", to_string(s.waveform)},
                     {"n_subcarriers", s.n_subcarriers},
                     {"n_range_cells", s.n_range_cells},
                     {"bandwidth_hz", s.bandwidth_hz}};
    if (s.symbol_seed) j["waveform"]["symbol_seed"] = *s.symbol_seed;
    if (s.noise_seed) j["waveform"]["noise_seed"] = *s.noise_seed;
    j["platform"] = {{"altitude_m", s.platform.altitude_m},
                     {"velocity_mps", s.platform.velocity_mps},
                     {"aperture_time_s", s.platform.aperture_time_s},
                     {"carrier_hz", s.platform.carrier_hz},
                     {"ref_range_m", s.platform.ref_range_m},
                     {"antenna_length_m", s.platform.antenna_length()},
                     {"prf_hz", s.platform.prf_hz}};
    json targets = json::array();
    for (const auto& t : s.targets) {
        targets.push_back({{"range_cell", t.range_cell}, {"azimuth_m", t.azimuth_m}, {"rcs", {t.rcs.real(), t.rcs.imag()}}});
    }
    j["scene"] = {{"targets", targets}, {"range_migration", s.range_migration}};
    if (s.foliage) {
        const FoliageSettings& f = *s.foliage;
        const FoliageParams p = s.foliage_params(s.master_seed);
        j["foliage"] = {{"polarization", to_string(f.polarization)},
                        {"alpha", p.alpha},
                        {"beta", p.beta},
                        {"gamma_shape", f.gamma_shape},
                        {"gamma_scale", f.gamma_scale},
                        {"hurst", f.hurst},
                        {"fbm_sigma", f.fbm_sigma},
                        {"spectral_corr_bins", f.spectral_corr_bins},
                        {"redraw_per_pulse", f.redraw_per_pulse}};
        // Left out when derived from the geometry: a degree round trip is not bit-exact.
        if (f.grazing_deg) j["foliage"]["grazing_deg"] = *f.grazing_deg;
        if (f.seed) j["foliage"]["seed"] = *f.seed;
    }
    j["noise"] = {{"snr_db", s.snr_db ? json(*s.snr_db) : json("off")}};
    j["processing"] = {{"rcmc", to_string(s.imaging.rcmc)},
                       {"interpolator", to_string(s.imaging.interpolator)},
                       {"doppler_window", to_string(s.imaging.window)},
                       {"oversample", s.oversample},
                       {"image_floor_db", s.image_floor_db}};
    j["outputs"] = {{"raw", s.outputs.raw},         {"csv", s.outputs.csv},
                    {"pgm", s.outputs.pgm},         {"png", s.outputs.png},
                    {"profiles", s.outputs.profiles}, {"foliage_csv", s.outputs.foliage_csv}};
    j["seeds"] = {{"master", s.master_seed}, {"count", s.n_seeds}};
    return j;
}

}  // namespace fsar

#endif  // FOPEN_SAR_SCENARIO_HPP
