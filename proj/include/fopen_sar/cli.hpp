// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#ifndef FOPEN_SAR_CLI_HPP
#define FOPEN_SAR_CLI_HPP

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fopen_sar/io.hpp"
#include "fopen_sar/parallel.hpp"
#include "fopen_sar/pipeline.hpp"
#include "fopen_sar/scenario.hpp"

namespace fsar::cli {

inline constexpr const char* kToolName = "fopen_sar";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kManifestVersion = 1;

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitSchema = 2,
    kExitIo = 3,
    kExitHeader = 4,
    kExitNoPeak = 5,
};

struct UsageError : Error {
    using Error::Error;
};

struct CommonOptions {
    std::string scenario;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::size_t seeds = 0;
    std::string out = ".";
    unsigned threads = 0;

    unsigned resolved_threads() const { return threads > 0 ? threads : threads_from_env(); }
};

inline nlohmann::json parse_json_file(const std::filesystem::path& path) {
    const std::string text = io::read_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(path.string(), std::string("invalid JSON: ") + e.what());
    }
}

/// Scenario from --scenario or --preset (exactly one), with --seed and
/// --seeds overrides applied.
inline Scenario load_scenario(const CommonOptions& o) {
    if (o.scenario.empty() == o.preset.empty()) throw UsageError("give exactly one of --scenario or --preset");
    Scenario s = o.preset.empty() ? scenario_from_json(parse_json_file(o.scenario)) : preset_by_name(o.preset);
    if (o.seed) s.master_seed = *o.seed;
    if (o.seeds > 0) s.n_seeds = o.seeds;
    return s;
}

inline std::filesystem::path prepare_out_dir(const std::string& out) {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) throw io::IoError("cannot create output directory '" + out + "': " + ec.message());
    return out;
}

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

/// Run record; written last so its presence marks a completed run.
struct Manifest {
    Manifest(std::string cmd, std::optional<Scenario> s) : command(std::move(cmd)), scenario(std::move(s)) {}

    std::string command;
    std::optional<Scenario> scenario;
    nlohmann::json extra = nlohmann::json::object();
    std::vector<std::string> outputs;
    nlohmann::json timings = nlohmann::json::object();

    void write(const std::filesystem::path& dir) const {
        nlohmann::json j;
        j["manifest_version"] = kManifestVersion;
        j["tool"] = kToolName;
        j["tool_version"] = kToolVersion;
        j["command"] = command;
        if (scenario) {
            j["master_seed"] = scenario->master_seed;
            j["config"] = to_json(*scenario);
        }
        for (const auto& item : extra.items()) j[item.key()] = item.value();
        j["outputs"] = outputs;
        j["timings_s"] = timings;
        io::write_file_atomic(dir / "manifest.json", j.dump(2) + "\n");
    }
};

inline void emit(const std::filesystem::path& dir, const std::string& name, const std::string& bytes, Manifest& m) {
    io::write_file_atomic(dir / name, bytes);
    m.outputs.push_back(name);
}

inline int cmd_simulate(const CommonOptions& o, std::ostream& out) {
    Stopwatch clock;
    const Scenario s = load_scenario(o);
    const auto dir = prepare_out_dir(o.out);
    Manifest m{"simulate", s};
    const EchoSimulator sim(s.simulation(s.master_seed));
    const RawDataMatrix raw = sim.synthesize_raw(o.resolved_threads());
    m.timings["simulate"] = clock.lap();
    emit(dir, "raw.fsar", io::encode_matrix(raw.data, io::kRawMagic), m);
    if (s.outputs.csv) emit(dir, "raw.csv", io::matrix_csv(raw.data), m);
    if (s.outputs.foliage_csv && s.foliage) {
        std::string csv = io::foliage_csv_header();
        for (std::size_t j = 0; j < sim.n_pulses(); ++j) csv += io::foliage_csv_rows(j, *sim.foliage_realization(j));
        emit(dir, "foliage.csv", csv, m);
    }
    m.timings["write"] = clock.lap();
    m.extra["n_pulses"] = raw.n_pulses();
    m.extra["line_length"] = raw.line_length();
    m.write(dir);
    out << "simulate: " << raw.n_pulses() << " x " << raw.line_length() << " -> " << (dir / "raw.fsar").string() << "\n";
    return kExitOk;
}

inline int cmd_image(const CommonOptions& o, const std::string& raw_path, std::ostream& out, std::ostream& err) {
    Stopwatch clock;
    const Scenario s = load_scenario(o);
    if (raw_path.empty()) throw UsageError("image: --raw is required");
    RawDataMatrix raw;
    raw.data = io::read_raw(raw_path);
    const std::size_t n_pulses = s.platform.n_pulses();
    const std::size_t line = s.n_subcarriers + 2 * s.n_range_cells - 2;
    if (raw.n_pulses() != n_pulses || raw.line_length() != line) {
        throw io::HeaderMismatch("raw file is " + std::to_string(raw.n_pulses()) + " x " +
                                 std::to_string(raw.line_length()) + ", scenario expects " + std::to_string(n_pulses) +
                                 " x " + std::to_string(line));
    }
    raw.sample_interval = 1.0 / s.bandwidth_hz;
    raw.range_migration = s.range_migration;
    raw.slow_time.resize(n_pulses);
    for (std::size_t j = 0; j < n_pulses; ++j) raw.slow_time[j] = s.platform.slow_time(j);
    const auto dir = prepare_out_dir(o.out);
    Manifest m{"image", s};
    m.extra["raw"] = raw_path;
    m.timings["read"] = clock.lap();

    const FocusedImage img = focus(s, s.master_seed, raw, o.resolved_threads());
    m.timings["focus"] = clock.lap();
    emit(dir, "image.fimg", io::encode_matrix(img.pixels, io::kImageMagic), m);
    if (s.outputs.pgm) emit(dir, "image.pgm", io::encode_pgm16(img.pixels, s.image_floor_db), m);
    if (s.outputs.png) {
        io::write_png(dir / "image.png", img.pixels, s.image_floor_db);
        m.outputs.push_back("image.png");
    }
    if (s.outputs.csv) emit(dir, "image.csv", io::matrix_csv(img.pixels), m);
    try {
        const ProfilePair pp = extract_profiles(img, s.oversample);
        if (s.outputs.profiles) emit(dir, "profiles.csv", io::profiles_csv(pp), m);
        m.extra["peak"] = {{"azimuth_line", pp.peak.azimuth}, {"range_cell", pp.peak.range}};
        out << "image: peak at azimuth line " << pp.peak.azimuth << ", range cell " << pp.peak.range << "\n";
    } catch (const NoPeakError& e) {
        err << "image: no peak, profiles skipped (" << e.what() << ")\n";
    }
    m.timings["write"] = clock.lap();
    m.write(dir);
    return kExitOk;
}

inline int cmd_metrics(const CommonOptions& o, const std::vector<std::string>& images, const std::string& profile,
                       std::ostream& out) {
    Stopwatch clock;
    const bool have_scenario = !o.scenario.empty() || !o.preset.empty();
    if (!images.empty() && !profile.empty()) throw UsageError("metrics: give --image or --profile, not both");
    MetricsReport report;
    std::optional<Scenario> s;
    if (have_scenario) s = load_scenario(o);
    const std::size_t oversample = s ? s->oversample : kDefaultOversample;
    if (s) report = metrics_report_header(*s);
    else report.waveform = report.polarization = "unknown";

    if (!profile.empty()) {
        const auto [range, azimuth] = io::parse_profiles_csv(io::read_file(profile));
        report.runs.push_back(point_metrics(ProfilePair{make_profile(range), make_profile(azimuth), {}}));
    } else if (!images.empty()) {
        for (const auto& path : images) report.runs.push_back(point_metrics(extract_profiles(io::read_image(path), oversample)));
    } else if (s) {
        report = run_metrics(*s, o.resolved_threads());
    } else {
        throw UsageError("metrics: give --image, --profile, or --scenario/--preset");
    }
    aggregate(report);
    const auto dir = prepare_out_dir(o.out);
    Manifest m{"metrics", s};
    m.timings["metrics"] = clock.lap();
    const std::string text = to_json(report).dump(2) + "\n";
    emit(dir, "metrics.json", text, m);
    m.write(dir);
    out << text;
    return kExitOk;
}

/// {"base": scenario object | path | {"preset": name}, "waveforms": [...],
///  "foliage": [bool...], "polarizations": [...], "seeds": {"master", "count"}}
inline CompareMatrix compare_matrix_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
    detail::SectionReader r(doc, "");
    CompareMatrix m;
    const auto& base = r.raw("base");
    if (base.is_string()) {
        std::filesystem::path p = base.get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        m.base = scenario_from_json(parse_json_file(p));
    } else if (base.is_object() && base.size() == 1 && base.contains("preset")) {
        m.base = preset_by_name(detail::SectionReader::convert<std::string>(base.at("preset"), "base.preset"));
    } else {
        m.base = scenario_from_json(base);
    }
    if (r.has("waveforms")) {
        m.waveforms.clear();
        for (const auto& w : r.raw("waveforms")) {
            const auto name = detail::SectionReader::convert<std::string>(w, "waveforms");
            m.waveforms.push_back(detail::wrap_enum("waveforms", [&] { return waveform_kind_from_string(name); }));
        }
    } else {
        r.mark("waveforms");
    }
    if (r.has("foliage")) {
        m.foliage.clear();
        for (const auto& f : r.raw("foliage")) m.foliage.push_back(detail::SectionReader::convert<bool>(f, "foliage"));
    } else {
        r.mark("foliage");
    }
    if (r.has("polarizations")) {
        m.polarizations.clear();
        for (const auto& p : r.raw("polarizations")) {
            const auto name = detail::SectionReader::convert<std::string>(p, "polarizations");
            m.polarizations.push_back(detail::wrap_enum("polarizations", [&] { return polarization_from_string(name); }));
        }
    } else {
        r.mark("polarizations");
    }
    if (r.has("seeds")) {
        detail::SectionReader sd(r.raw("seeds"), "seeds");
        sd.read("master", m.base.master_seed);
        sd.read("count", m.base.n_seeds);
        sd.finish();
    } else {
        r.mark("seeds");
    }
    r.finish();
    if (m.waveforms.empty() || m.foliage.empty() || m.polarizations.empty()) {
        throw SchemaError("matrix", "waveforms, foliage and polarizations must be non-empty");
    }
    return m;
}

inline int cmd_compare(const CommonOptions& o, const std::string& matrix_path, std::ostream& out) {
    Stopwatch clock;
    if (matrix_path.empty()) throw UsageError("compare: --matrix is required");
    CompareMatrix m =
        compare_matrix_from_json(parse_json_file(matrix_path), std::filesystem::path(matrix_path).parent_path());
    if (o.seed) m.base.master_seed = *o.seed;
    if (o.seeds > 0) m.base.n_seeds = o.seeds;
    const nlohmann::json result = run_compare(m, o.resolved_threads());
    const auto dir = prepare_out_dir(o.out);
    Manifest man{"compare", m.base};
    man.extra["matrix"] = matrix_path;
    man.timings["compare"] = clock.lap();
    const std::string text = result.dump(2) + "\n";
    emit(dir, "compare.json", text, man);
    man.write(dir);
    out << text;
    return kExitOk;
}

inline void add_common(CLI::App* app, CommonOptions& o, bool with_seeds) {
    app->add_option("--scenario", o.scenario, "Scenario JSON (or a run manifest)");
    app->add_option("--preset", o.preset, "Built-in scenario: full | small");
    app->add_option("--seed", o.seed, "Master seed override");
    if (with_seeds) app->add_option("--seeds", o.seeds, "Number of seeds for aggregated metrics");
    app->add_option("--out", o.out, "Output directory")->capture_default_str();
    app->add_option("--threads", o.threads, "Worker threads (default: FOPEN_SAR_THREADS or 1)");
}

/// Entry point of the command-line tool. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"UWB stripmap SAR foliage-penetration simulator: CP-OFDM vs random-noise radar"};
    app.require_subcommand(1);
    CommonOptions o;
    std::string raw_path, profile_path, matrix_path;
    std::vector<std::string> image_paths;

    auto* simulate = app.add_subcommand("simulate", "Synthesize raw echo data");
    add_common(simulate, o, false);
    auto* image = app.add_subcommand("image", "Focus raw data into an image");
    add_common(image, o, false);
    image->add_option("--raw", raw_path, "FSAR raw data file")->required();
    auto* metrics = app.add_subcommand("metrics", "ISLR/PSLR of focused point responses");
    add_common(metrics, o, true);
    metrics->add_option("--image", image_paths, "FIMG image file (repeatable)");
    metrics->add_option("--profile", profile_path, "Profiles CSV");
    auto* compare = app.add_subcommand("compare", "Waveform x foliage x polarization comparison");
    add_common(compare, o, true);
    compare->add_option("--matrix", matrix_path, "Comparison matrix JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*simulate) return cmd_simulate(o, out);
        if (*image) return cmd_image(o, raw_path, out, err);
        if (*metrics) return cmd_metrics(o, image_paths, profile_path, out);
        if (*compare) return cmd_compare(o, matrix_path, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const io::IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const io::HeaderMismatch& e) {
        err << "header mismatch: " << e.what() << "\n";
        return kExitHeader;
    } catch (const NoPeakError& e) {
        err << "no peak: " << e.what() << "\n";
        return kExitNoPeak;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace fsar::cli

#endif  // FOPEN_SAR_CLI_HPP
