#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "stx/detrend.hpp"
#include "stx/field_series.hpp"
#include "stx/grid.hpp"
#include "stx/types.hpp"

namespace stx {

static_assert(std::endian::native == std::endian::little,
              "field-series container assumes a little-endian host");

enum class SeriesFormat { binary, csv };

namespace detail {

constexpr char kMagic[4] = {'S', 'T', 'X', 'F'};
constexpr std::uint8_t kVersion = 1;

template <typename T>
void read_raw(std::istream& in, T* out, std::size_t count, const char* what) {
    in.read(reinterpret_cast<char*>(out), static_cast<std::streamsize>(sizeof(T) * count));
    require(static_cast<std::size_t>(in.gcount()) == sizeof(T) * count, errc::truncated,
            std::string("truncated payload while reading ") + what);
}

template <typename T>
void write_raw(std::ostream& out, const T* data, std::size_t count) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(sizeof(T) * count));
}

/// Writes through a temp file in the same directory, then renames.
template <typename Fn>
void atomic_write(const std::string& path, Fn&& fn) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(out.good(), errc::io_error, "cannot open " + tmp + " for writing");
        fn(out);
        out.flush();
        require(out.good(), errc::io_error, "failed writing " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    require(!ec, errc::io_error, "failed to move " + tmp + " into place");
}

}  // namespace detail

/// Binary container: "STXF", version byte 1, little-endian u32 site count,
/// u32 time count, u8 coordinate system (0 lonlat, 1 planar km), f64 site
/// coordinates (x, y interleaved), then f32 values time-major.
inline void write_field_series_binary(const std::string& path, const FieldSeries& series) {
    detail::atomic_write(path, [&](std::ostream& out) {
        detail::write_raw(out, detail::kMagic, 4);
        detail::write_raw(out, &detail::kVersion, 1);
        const std::uint32_t site_count = static_cast<std::uint32_t>(series.site_count());
        const std::uint32_t n_times = static_cast<std::uint32_t>(series.n_times());
        const std::uint8_t coord = static_cast<std::uint8_t>(series.grid().system());
        detail::write_raw(out, &site_count, 1);
        detail::write_raw(out, &n_times, 1);
        detail::write_raw(out, &coord, 1);
        std::vector<double> coords;
        coords.reserve(2 * series.site_count());
        for (const auto& c : series.grid().sites()) {
            coords.push_back(c.x);
            coords.push_back(c.y);
        }
        detail::write_raw(out, coords.data(), coords.size());
        std::vector<float> buf(series.values().size());
        for (std::size_t i = 0; i < buf.size(); ++i) {
            buf[i] = static_cast<float>(series.values()[i]);
        }
        detail::write_raw(out, buf.data(), buf.size());
    });
}

inline FieldSeries read_field_series_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), errc::io_error, "cannot open " + path);
    char magic[4];
    detail::read_raw(in, magic, 4, "magic");
    require(std::memcmp(magic, detail::kMagic, 4) == 0, errc::bad_format,
            "magic mismatch: not a field-series file");
    std::uint8_t version = 0;
    detail::read_raw(in, &version, 1, "version");
    require(version == detail::kVersion, errc::bad_format,
            "unsupported field-series version " + std::to_string(version));
    std::uint32_t site_count = 0, n_times = 0;
    std::uint8_t coord = 0;
    detail::read_raw(in, &site_count, 1, "site count");
    detail::read_raw(in, &n_times, 1, "time count");
    detail::read_raw(in, &coord, 1, "coordinate system");
    require(coord <= 1, errc::bad_format, "unknown coordinate system tag");
    require(site_count >= 1 && n_times >= 1, errc::bad_format, "empty series");
    std::vector<double> coords(2 * static_cast<std::size_t>(site_count));
    detail::read_raw(in, coords.data(), coords.size(), "site coordinates");
    std::vector<Coord> sites(site_count);
    for (std::size_t s = 0; s < site_count; ++s) sites[s] = {coords[2 * s], coords[2 * s + 1]};
    std::vector<float> buf(static_cast<std::size_t>(site_count) * n_times);
    detail::read_raw(in, buf.data(), buf.size(), "values");
    std::vector<double> values(buf.begin(), buf.end());
    auto grid = std::make_shared<SpatialGrid>(std::move(sites), static_cast<CoordSystem>(coord));
    return FieldSeries(std::move(grid), n_times, std::move(values));
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::size_t parse_index(const std::string& field, const std::string& line) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(field, &pos);
    } catch (const std::exception&) {
        raise(errc::bad_format, "malformed integer in row: " + line);
    }
    require(pos == field.size(), errc::bad_format, "malformed integer in row: " + line);
    return static_cast<std::size_t>(v);
}

inline double parse_real(const std::string& field, const std::string& line) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &pos);
    } catch (const std::exception&) {
        raise(errc::bad_format, "malformed number in row: " + line);
    }
    require(pos == field.size(), errc::bad_format, "malformed number in row: " + line);
    return v;
}

}  // namespace detail

/// Long-format CSV with header "time,site,value" and a sidecar site table
/// ("site,x,y"). Times must be dense: every (t, s) pair exactly once.
inline FieldSeries read_field_series_csv(const std::string& values_path,
                                         const std::string& sites_path,
                                         CoordSystem system = CoordSystem::planar_km) {
    std::ifstream sites_in(sites_path);
    require(sites_in.good(), errc::io_error, "cannot open " + sites_path);
    std::string line;
    require(static_cast<bool>(std::getline(sites_in, line)), errc::truncated, "empty site table");
    require(detail::split_csv_line(line) == std::vector<std::string>({"site", "x", "y"}),
            errc::bad_format, "site table header must be site,x,y");
    std::vector<Coord> sites;
    while (std::getline(sites_in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        require(f.size() == 3, errc::bad_format, "malformed site row: " + line);
        const std::size_t id = detail::parse_index(f[0], line);
        require(id == sites.size(), errc::bad_format, "site ids must be 0..S-1 in order");
        sites.push_back({detail::parse_real(f[1], line), detail::parse_real(f[2], line)});
    }
    require(!sites.empty(), errc::bad_format, "site table has no sites");
    const std::size_t S = sites.size();

    std::ifstream in(values_path);
    require(in.good(), errc::io_error, "cannot open " + values_path);
    require(static_cast<bool>(std::getline(in, line)), errc::truncated, "empty value table");
    require(detail::split_csv_line(line) == std::vector<std::string>({"time", "site", "value"}),
            errc::bad_format, "value table header must be time,site,value");
    struct Cell {
        std::size_t t, s;
        double v;
    };
    std::vector<Cell> cells;
    std::size_t max_t = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        require(f.size() == 3, errc::bad_format, "malformed value row: " + line);
        Cell c{detail::parse_index(f[0], line), detail::parse_index(f[1], line),
               detail::parse_real(f[2], line)};
        require(c.s < S, errc::bad_format, "value row references unknown site");
        max_t = std::max(max_t, c.t);
        cells.push_back(c);
    }
    require(!cells.empty(), errc::bad_format, "value table has no rows");
    const std::size_t n = max_t + 1;
    require(cells.size() == n * S, errc::non_dense,
            "non-dense series: expected one row per (time, site) pair");
    std::vector<double> values(n * S);
    std::vector<char> seen(n * S, 0);
    for (const auto& c : cells) {
        const std::size_t i = c.t * S + c.s;
        require(!seen[i], errc::non_dense, "non-dense series: duplicate (time, site) pair");
        seen[i] = 1;
        values[i] = c.v;
    }
    auto grid = std::make_shared<SpatialGrid>(std::move(sites), system);
    return FieldSeries(std::move(grid), n, std::move(values));
}

inline void write_field_series_csv(const std::string& values_path, const std::string& sites_path,
                                   const FieldSeries& series) {
    detail::atomic_write(sites_path, [&](std::ostream& out) {
        out << "site,x,y\n";
        char buf[96];
        for (std::size_t s = 0; s < series.site_count(); ++s) {
            std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", s, series.grid().site(s).x,
                          series.grid().site(s).y);
            out << buf;
        }
    });
    detail::atomic_write(values_path, [&](std::ostream& out) {
        out << "time,site,value\n";
        char buf[96];
        for (std::size_t t = 0; t < series.n_times(); ++t) {
            for (std::size_t s = 0; s < series.site_count(); ++s) {
                std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g\n", t, s, series.at(t, s));
                out << buf;
            }
        }
    });
}

inline FieldSeries load_field_series(const std::string& path, SeriesFormat format,
                                     CoordSystem csv_system = CoordSystem::planar_km) {
    if (format == SeriesFormat::binary) return read_field_series_binary(path);
    const std::filesystem::path p(path);
    const std::string sites = (p.parent_path() / "sites.csv").string();
    return read_field_series_csv(path, sites, csv_system);
}

inline void write_coefficients_csv(const std::string& path,
                                   const std::vector<SiteCoefficients>& coeffs) {
    detail::atomic_write(path, [&](std::ostream& out) {
        require(!coeffs.empty(), errc::invalid_argument, "no coefficients to write");
        out << "site,beta0,beta1";
        for (std::size_t j = 0; j < coeffs.front().seasonal.size(); ++j) {
            out << ",seasonal_" << (j + 1);
        }
        out << "\n";
        char buf[64];
        for (std::size_t s = 0; s < coeffs.size(); ++s) {
            out << s;
            std::snprintf(buf, sizeof(buf), ",%.17g", coeffs[s].intercept);
            out << buf;
            std::snprintf(buf, sizeof(buf), ",%.17g", coeffs[s].trend);
            out << buf;
            for (double v : coeffs[s].seasonal) {
                std::snprintf(buf, sizeof(buf), ",%.17g", v);
                out << buf;
            }
            out << "\n";
        }
    });
}

}  // namespace stx
