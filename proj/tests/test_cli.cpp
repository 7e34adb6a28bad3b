// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "fopen_sar/cli.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kScenarios = fs::path(FOPEN_SAR_SOURCE_DIR) / "scenarios";

fs::path scratch_dir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    const fs::path dir =
        fs::temp_directory_path() / ("fopen_sar_cli_" + std::string(info->test_suite_name()) + "_" + info->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "fopen_sar");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = fsar::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

json load(const fs::path& p) { return json::parse(fsar::io::read_file(p)); }

void save(const fs::path& p, const json& j) { fsar::io::write_file_atomic(p, j.dump(2)); }

TEST(Cli, MissingSectionIsSchemaErrorNamingIt) {
    const fs::path dir = scratch_dir();
    json doc = load(kScenarios / "small_ofdm.json");
    doc.erase("platform");
    save(dir / "s.json", doc);
    const Result r = run({"simulate", "--scenario", (dir / "s.json").string(), "--out", (dir / "o").string()});
    EXPECT_EQ(r.code, fsar::cli::kExitSchema);
    EXPECT_NE(r.err.find("platform"), std::string::npos) << r.err;
}

TEST(Cli, UnknownKeyIsSchemaError) {
    const fs::path dir = scratch_dir();
    json doc = load(kScenarios / "small_ofdm.json");
    doc["platform"]["altitude_ft"] = 1.0;
    save(dir / "s.json", doc);
    const Result r = run({"simulate", "--scenario", (dir / "s.json").string(), "--out", (dir / "o").string()});
    EXPECT_EQ(r.code, fsar::cli::kExitSchema);
    EXPECT_NE(r.err.find("altitude_ft"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, fsar::cli::kExitUsage);
    EXPECT_EQ(run({"simulate", "--preset", "small", "--scenario", "x.json"}).code, fsar::cli::kExitUsage);
    EXPECT_EQ(run({"image", "--preset", "small"}).code, fsar::cli::kExitUsage);
    EXPECT_EQ(run({"simulate", "--preset", "huge", "--out", scratch_dir().string()}).code, fsar::cli::kExitSchema);
}

TEST(Cli, SimulateIsReproducibleAndFullSize) {
    const fs::path dir = scratch_dir();
    ASSERT_EQ(run({"simulate", "--scenario", (kScenarios / "point_ofdm.json").string(), "--out", (dir / "a").string()})
                  .code,
              0);
    ASSERT_EQ(run({"simulate", "--scenario", (kScenarios / "point_ofdm.json").string(), "--out", (dir / "b").string(),
                   "--threads", "4"})
                  .code,
              0);
    EXPECT_EQ(fsar::io::read_file(dir / "a" / "raw.fsar"), fsar::io::read_file(dir / "b" / "raw.fsar"));
    const auto raw = fsar::io::read_raw(dir / "a" / "raw.fsar");
    EXPECT_EQ(raw.rows(), 256u);
    EXPECT_EQ(raw.cols(), 1406u);
    const json man = load(dir / "a" / "manifest.json");
    EXPECT_EQ(man["command"], "simulate");
    EXPECT_EQ(man["manifest_version"], 1);
    EXPECT_EQ(man["outputs"][0], "raw.fsar");
}

TEST(Cli, ImageFocusesPointAtItsPosition) {
    const fs::path dir = scratch_dir();
    const std::string sc = (kScenarios / "small_ofdm.json").string();
    ASSERT_EQ(run({"simulate", "--scenario", sc, "--out", dir.string()}).code, 0);
    const Result r = run({"image", "--scenario", sc, "--raw", (dir / "raw.fsar").string(), "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const json man = load(dir / "manifest.json");
    EXPECT_NEAR(double(man["peak"]["azimuth_line"]), 16.0, 1.0);
    EXPECT_NEAR(double(man["peak"]["range_cell"]), 24.0, 1.0);
    for (const char* f : {"image.fimg", "image.pgm", "image.png", "profiles.csv"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
}

TEST(Cli, ZeroRawGivesBlackImageWithWarning) {
    const fs::path dir = scratch_dir();
    fsar::io::write_raw(dir / "zero.fsar", fsar::ComplexMatrix(32, 256 + 2 * 48 - 2));
    const Result r = run({"image", "--preset", "small", "--raw", (dir / "zero.fsar").string(), "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("no peak"), std::string::npos);
    const std::string pgm = fsar::io::read_file(dir / "image.pgm");
    const std::string header = "P5\n48 32\n65535\n";
    ASSERT_EQ(pgm.substr(0, header.size()), header);
    for (std::size_t i = header.size(); i < pgm.size(); ++i) ASSERT_EQ(pgm[i], 0);
}

TEST(Cli, TankCensusEveryPointVisible) {
    const fs::path dir = scratch_dir();
    const std::string sc = (kScenarios / "tank_ofdm.json").string();
    ASSERT_EQ(run({"simulate", "--scenario", sc, "--out", dir.string(), "--threads", "4"}).code, 0);
    ASSERT_EQ(run({"image", "--scenario", sc, "--raw", (dir / "raw.fsar").string(), "--out", dir.string(), "--threads",
                   "4"})
                  .code,
              0);
    const auto img = fsar::io::read_image(dir / "image.fimg");
    double peak = 0.0;
    for (const auto& v : img.flat()) peak = std::max(peak, std::abs(v));
    const fsar::PlatformParams p;
    const auto targets = fsar::tank_targets(192);
    ASSERT_EQ(targets.size(), 31u);
    for (const auto& t : targets) {
        const double row = 128.0 + t.azimuth_m / p.velocity_mps * p.prf_hz;
        double local = 0.0;
        for (long r = std::lround(row) - 1; r <= std::lround(row) + 1; ++r) {
            local = std::max(local, std::abs(img(static_cast<std::size_t>(r), t.range_cell)));
        }
        EXPECT_GT(20.0 * std::log10(local / peak), -20.0) << t.range_cell << "," << t.azimuth_m;
    }
}

TEST(Cli, ExitCodesForNoPeakHeaderAndIo) {
    const fs::path dir = scratch_dir();
    fsar::io::write_image(dir / "one.fimg", fsar::ComplexMatrix(1, 1));
    EXPECT_EQ(run({"metrics", "--image", (dir / "one.fimg").string(), "--out", dir.string()}).code,
              fsar::cli::kExitNoPeak);

    fsar::io::write_raw(dir / "bad.fsar", fsar::ComplexMatrix(4, 4));
    EXPECT_EQ(run({"image", "--preset", "small", "--raw", (dir / "bad.fsar").string(), "--out", dir.string()}).code,
              fsar::cli::kExitHeader);
    fsar::io::write_file_atomic(dir / "junk.fsar", "not a raw file at all, just some text padding it out");
    EXPECT_EQ(run({"image", "--preset", "small", "--raw", (dir / "junk.fsar").string(), "--out", dir.string()}).code,
              fsar::cli::kExitHeader);

    EXPECT_EQ(run({"image", "--preset", "small", "--raw", (dir / "missing.fsar").string(), "--out", dir.string()}).code,
              fsar::cli::kExitIo);
    EXPECT_EQ(run({"simulate", "--scenario", (dir / "missing.json").string(), "--out", dir.string()}).code,
              fsar::cli::kExitIo);
}

TEST(Cli, ManifestReproducesRun) {
    const fs::path dir = scratch_dir();
    json doc = load(kScenarios / "small_ofdm.json");
    doc["foliage"] = {{"polarization", "VV"}};
    doc["noise"] = {{"snr_db", 20.0}};
    save(dir / "s.json", doc);
    ASSERT_EQ(run({"simulate", "--scenario", (dir / "s.json").string(), "--out", (dir / "a").string(), "--seed", "42"})
                  .code,
              0);
    const Result r = run({"simulate", "--scenario", (dir / "a" / "manifest.json").string(), "--out", (dir / "b").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(fsar::io::read_file(dir / "a" / "raw.fsar"), fsar::io::read_file(dir / "b" / "raw.fsar"));
    EXPECT_EQ(load(dir / "b" / "manifest.json")["master_seed"], 42);
    EXPECT_EQ(load(dir / "a" / "manifest.json")["config"], load(dir / "b" / "manifest.json")["config"]);
}

TEST(Cli, MetricsFromImageAndProfileAgree) {
    const fs::path dir = scratch_dir();
    const std::string sc = (kScenarios / "small_ofdm.json").string();
    ASSERT_EQ(run({"simulate", "--scenario", sc, "--out", dir.string()}).code, 0);
    ASSERT_EQ(run({"image", "--scenario", sc, "--raw", (dir / "raw.fsar").string(), "--out", dir.string()}).code, 0);
    const Result a = run({"metrics", "--image", (dir / "image.fimg").string(), "--out", (dir / "m1").string()});
    const Result b = run({"metrics", "--profile", (dir / "profiles.csv").string(), "--out", (dir / "m2").string()});
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0) << b.err;
    const json ja = load(dir / "m1" / "metrics.json"), jb = load(dir / "m2" / "metrics.json");
    for (const char* k : {"islr_range_db", "pslr_range_db", "islr_azimuth_db", "pslr_azimuth_db"}) {
        EXPECT_NEAR(double(ja[k]), double(jb[k]), 1e-9) << k;
    }
    EXPECT_NEAR(double(ja["islr_range_db"]), -9.68, 0.05);
}

TEST(Cli, CompareIdenticalVariantsHaveZeroDifference) {
    const fs::path dir = scratch_dir();
    const json matrix = {{"base", (kScenarios / "small_ofdm.json").string()},
                         {"waveforms", {"ofdm", "ofdm"}},
                         {"foliage", {false}},
                         {"polarizations", {"HH"}},
                         {"seeds", {{"master", 3}, {"count", 2}}}};
    save(dir / "m.json", matrix);
    const Result r = run({"compare", "--matrix", (dir / "m.json").string(), "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const json out = load(dir / "compare.json");
    ASSERT_EQ(out["variants"].size(), 2u);
    ASSERT_EQ(out["differences"].size(), 1u);
    const json& d = out["differences"][0];
    EXPECT_EQ(d["a"], "ofdm/no-foliage/HH");
    for (const char* k : {"islr_range_db", "pslr_range_db", "islr_azimuth_db", "pslr_azimuth_db"}) {
        EXPECT_EQ(d[k].get<double>(), 0.0) << k;
    }
}

TEST(Cli, ThreadCountDoesNotChangeMetrics) {
    const fs::path dir = scratch_dir();
    const std::string sc = (kScenarios / "small_ofdm.json").string();
    const Result a = run({"metrics", "--scenario", sc, "--out", (dir / "a").string(), "--threads", "1"});
    const Result b = run({"metrics", "--scenario", sc, "--out", (dir / "b").string(), "--threads", "6"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(load(dir / "a" / "metrics.json")["n_seeds"], 3);
}

}  // namespace
