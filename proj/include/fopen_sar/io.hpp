// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#ifndef FOPEN_SAR_IO_HPP
#define FOPEN_SAR_IO_HPP

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fopen_sar/core.hpp"
#include "fopen_sar/foliage_channel.hpp"
#include "fopen_sar/quality_metrics.hpp"

namespace fsar::io {

struct IoError : Error {
    using Error::Error;
};

/// Header disagrees with what the caller expects (magic, version or shape).
struct HeaderMismatch : Error {
    using Error::Error;
};

inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderBytes = 32;
inline constexpr std::array<char, 4> kRawMagic{'F', 'S', 'A', 'R'};
inline constexpr std::array<char, 4> kImageMagic{'F', 'I', 'M', 'G'};

namespace detail {

inline void put_u32(unsigned char* p, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}

inline std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}

inline void put_f64(unsigned char* p, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}

inline double get_f64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}

}  // namespace detail

/// Writes through a temporary sibling and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// 32-byte header (magic, version, rows, cols, 16 reserved zero bytes) then
/// little-endian f64 (Re, Im) pairs, row-major.
inline std::string encode_matrix(const ComplexMatrix& m, const std::array<char, 4>& magic) {
    require(m.rows() <= 0xffffffffu && m.cols() <= 0xffffffffu, "encode_matrix: dimensions exceed 32 bits");
    std::string bytes(kHeaderBytes + 16 * m.rows() * m.cols(), '\0');
    auto* p = reinterpret_cast<unsigned char*>(bytes.data());
    std::memcpy(p, magic.data(), 4);
    detail::put_u32(p + 4, kFormatVersion);
    detail::put_u32(p + 8, static_cast<std::uint32_t>(m.rows()));
    detail::put_u32(p + 12, static_cast<std::uint32_t>(m.cols()));
    p += kHeaderBytes;
    for (const auto& v : m.flat()) {
        detail::put_f64(p, v.real());
        detail::put_f64(p + 8, v.imag());
        p += 16;
    }
    return bytes;
}

inline ComplexMatrix decode_matrix(const std::string& bytes, const std::array<char, 4>& magic) {
    if (bytes.size() < kHeaderBytes) throw HeaderMismatch("file shorter than the 32-byte header");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    if (std::memcmp(p, magic.data(), 4) != 0) {
        throw HeaderMismatch("bad magic, expected '" + std::string(magic.data(), 4) + "'");
    }
    const std::uint32_t version = detail::get_u32(p + 4);
    if (version != kFormatVersion) throw HeaderMismatch("unsupported format version " + std::to_string(version));
    const std::size_t rows = detail::get_u32(p + 8);
    const std::size_t cols = detail::get_u32(p + 12);
    if (bytes.size() != kHeaderBytes + 16 * rows * cols) {
        throw HeaderMismatch("payload size does not match header " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    ComplexMatrix m(rows, cols);
    p += kHeaderBytes;
    for (auto& v : m.flat()) {
        v = {detail::get_f64(p), detail::get_f64(p + 8)};
        p += 16;
    }
    return m;
}

inline void write_raw(const std::filesystem::path& path, const ComplexMatrix& m) {
    write_file_atomic(path, encode_matrix(m, kRawMagic));
}
inline void write_image(const std::filesystem::path& path, const ComplexMatrix& m) {
    write_file_atomic(path, encode_matrix(m, kImageMagic));
}
inline ComplexMatrix read_raw(const std::filesystem::path& path) { return decode_matrix(read_file(path), kRawMagic); }
inline ComplexMatrix read_image(const std::filesystem::path& path) { return decode_matrix(read_file(path), kImageMagic); }

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string matrix_csv(const ComplexMatrix& m) {
    std::string out = "row,col,re,im\r\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out += std::to_string(r) + ',' + std::to_string(c) + ',' + format_double(m(r, c).real()) + ',' +
                   format_double(m(r, c).imag()) + "\r\n";
        }
    }
    return out;
}

/// Magnitude in dB relative to the image maximum, mapped linearly from
/// [floor_db, 0] to [0, 1]. An all-zero image maps to 0 everywhere.
inline std::vector<double> normalized_db(const ComplexMatrix& m, double floor_db) {
    require(floor_db < 0.0, "image export: dB floor must be negative");
    double peak = 0.0;
    for (const auto& v : m.flat()) peak = std::max(peak, std::abs(v));
    std::vector<double> out(m.rows() * m.cols(), 0.0);
    if (peak == 0.0) return out;
    const auto flat = m.flat();
    for (std::size_t i = 0; i < flat.size(); ++i) {
        const double a = std::abs(flat[i]);
        if (a == 0.0) continue;
        const double db = std::max(20.0 * std::log10(a / peak), floor_db);
        out[i] = (db - floor_db) / -floor_db;
    }
    return out;
}

/// Binary 16-bit PGM (big-endian samples); width = columns.
inline std::string encode_pgm16(const ComplexMatrix& m, double floor_db = -50.0) {
    const std::vector<double> level = normalized_db(m, floor_db);
    std::string out = "P5\n" + std::to_string(m.cols()) + " " + std::to_string(m.rows()) + "\n65535\n";
    out.reserve(out.size() + 2 * level.size());
    for (double v : level) {
        const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
        out.push_back(static_cast<char>(q >> 8));
        out.push_back(static_cast<char>(q & 0xff));
    }
    return out;
}

inline void write_pgm16(const std::filesystem::path& path, const ComplexMatrix& m, double floor_db = -50.0) {
    write_file_atomic(path, encode_pgm16(m, floor_db));
}

/// 8-bit grayscale PNG with the same dB mapping as the PGM export.
inline void write_png(const std::filesystem::path& path, const ComplexMatrix& m, double floor_db = -50.0) {
    require(m.rows() >= 1 && m.cols() >= 1, "write_png: empty image");
    const std::vector<double> level = normalized_db(m, floor_db);
    std::vector<png_byte> pixels(level.size());
    for (std::size_t i = 0; i < level.size(); ++i) pixels[i] = static_cast<png_byte>(std::lround(level[i] * 255.0));

    const std::filesystem::path tmp = path.string() + ".tmp";
    std::FILE* fp = std::fopen(tmp.c_str(), "wb");
    if (!fp) throw IoError("cannot open '" + tmp.string() + "' for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("libpng failed writing '" + path.string() + "'");
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(m.cols()), static_cast<png_uint_32>(m.rows()), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t r = 0; r < m.rows(); ++r) png_write_row(png, pixels.data() + r * m.cols());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    if (std::fclose(fp) != 0) throw IoError("close failed for '" + tmp.string() + "'");
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename '" + tmp.string() + "': " + ec.message());
}

/// axis,index,position,power rows for both cuts; position is in pixels.
inline std::string profiles_csv(const ProfilePair& pp) {
    std::string out = "axis,index,position,power\r\n";
    auto emit = [&](const char* axis, const Profile& p) {
        for (std::size_t i = 0; i < p.values.size(); ++i) {
            out += std::string(axis) + ',' + std::to_string(i) + ',' +
                   format_double(static_cast<double>(i) / static_cast<double>(p.oversample)) + ',' +
                   format_double(p.values[i]) + "\r\n";
        }
    };
    emit("range", pp.range);
    emit("azimuth", pp.azimuth);
    return out;
}

/// Reads a profiles CSV back; rows for each axis must be in index order.
inline std::pair<RVector, RVector> parse_profiles_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("profiles CSV is empty");
    RVector range, azimuth;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string axis, index, position, power;
        if (!std::getline(row, axis, ',') || !std::getline(row, index, ',') || !std::getline(row, position, ',') ||
            !std::getline(row, power, ',')) {
            throw IoError("profiles CSV line " + std::to_string(lineno) + ": expected 4 fields");
        }
        double v;
        try {
            v = std::stod(power);
        } catch (const std::exception&) {
            throw IoError("profiles CSV line " + std::to_string(lineno) + ": bad power value");
        }
        if (axis == "range") range.push_back(v);
        else if (axis == "azimuth") azimuth.push_back(v);
        else throw IoError("profiles CSV line " + std::to_string(lineno) + ": unknown axis '" + axis + "'");
    }
    return {range, azimuth};
}

inline std::string foliage_csv_header() { return "pulse_index,bin,re,im\r\n"; }

inline std::string foliage_csv_rows(std::size_t pulse_index, const FoliageRealization& r) {
    std::string out;
    for (std::size_t k = 0; k < r.response.size(); ++k) {
        out += std::to_string(pulse_index) + ',' + std::to_string(k) + ',' + format_double(r.response[k].real()) + ',' +
               format_double(r.response[k].imag()) + "\r\n";
    }
    return out;
}

}  // namespace fsar::io

#endif  // FOPEN_SAR_IO_HPP
