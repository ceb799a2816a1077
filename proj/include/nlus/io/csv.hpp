#pragma once

/**
 * @file csv.hpp
 *
 * @brief Numeric-only CSV: header row, comma delimiter, LF line endings,
 *        17 significant digits so every double round-trips exactly.
 *
 * Missing values (divergent endpoints) are written as empty cells.
 */

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "nlus/creep.hpp"
#include "nlus/errors.hpp"
#include "nlus/oscillator.hpp"
#include "nlus/relaxation.hpp"

namespace nlus::io {

using Cell = std::optional<double>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

inline std::string format_number(double v) {
  if (!std::isfinite(v)) throw NumericalError("csv: refusing to serialize a non-finite value");
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (res.ec != std::errc{}) throw NumericalError("csv: number formatting failed");
  return std::string(buf, res.ptr);
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (i) out += ',';
    out += t.header[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) throw NumericalError("csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (row[i]) out += format_number(*row[i]);
    }
    out += '\n';
  }
  return out;
}

inline double parse_number(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw DomainError("csv: malformed number '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline Table parse_csv(std::string_view text) {
  Table t;
  bool first = true;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (first) {
      for (auto p : parts) t.header.emplace_back(p);
      first = false;
      continue;
    }
    if (parts.size() != t.header.size()) throw DomainError("csv: row width does not match header");
    std::vector<Cell> row;
    row.reserve(parts.size());
    for (auto p : parts) row.push_back(p.empty() ? Cell{} : Cell{parse_number(p)});
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Writes to a sibling temporary file, then renames over the target.
inline void write_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Table schemas of the solver outputs.

inline const std::vector<std::string> kCatalogColumns{"gamma", "value_over_scale", "derivative_over_scale"};
inline const std::vector<std::string> kRelaxColumns{"gamma", "x0_norm", "force_norm", "w_el", "w_nel"};
inline const std::vector<std::string> kTraceColumns{"t", "x", "v"};
inline const std::vector<std::string> kSpectrumColumns{"frequency", "amplitude"};
inline const std::vector<std::string> kSweepColumns{"gamma", "f1", "A1", "A2", "ratio"};
inline const std::vector<std::string> kCreepColumns{"gamma", "eps_p", "eps_elastic", "A_over_A0", "rate",
                                                    "residual_25a"};

namespace detail {

inline void expect_header(const Table& t, const std::vector<std::string>& cols) {
  if (t.header != cols) throw DomainError("csv: unexpected header");
}

inline double req(const Cell& c) {
  if (!c) throw DomainError("csv: missing value");
  return *c;
}

}  // namespace detail

/// Relaxation samples with x0 and force normalized by their values at g = 0.
inline Table relaxation_table(const SpringModel& s, const RelaxationTrace& tr) {
  Table t{kRelaxColumns, {}};
  for (const auto& r : tr)
    t.rows.push_back({r.gamma, r.x0 / s.x0_initial(), r.force / s.initial_force(), r.w_el, r.w_nel});
  return t;
}

/// Inverse of relaxation_table in normalized units (x0_initial = F(0) = 1).
inline RelaxationTrace relaxation_from_table(const Table& t) {
  detail::expect_header(t, kRelaxColumns);
  RelaxationTrace tr;
  for (const auto& r : t.rows)
    tr.push_back({detail::req(r[0]), detail::req(r[1]), detail::req(r[2]), detail::req(r[3]), detail::req(r[4])});
  return tr;
}

inline Table time_trace_table(const TimeTrace& tr) {
  Table t{kTraceColumns, {}};
  t.rows.reserve(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) t.rows.push_back({tr.t[i], tr.x[i], tr.v[i]});
  return t;
}

inline TimeTrace time_trace_from_table(const Table& t) {
  detail::expect_header(t, kTraceColumns);
  TimeTrace tr;
  for (const auto& r : t.rows) {
    tr.t.push_back(detail::req(r[0]));
    tr.x.push_back(detail::req(r[1]));
    tr.v.push_back(detail::req(r[2]));
  }
  if (tr.size() >= 2) tr.dt = tr.t[1] - tr.t[0];
  return tr;
}

inline Table spectrum_table(const HarmonicSpectrum& s) {
  Table t{kSpectrumColumns, {}};
  for (std::size_t k = 0; k < s.frequency.size(); ++k) t.rows.push_back({s.frequency[k], s.amplitude[k]});
  return t;
}

inline Table sweep_table(const HarmonicSweep& sw) {
  Table t{kSweepColumns, {}};
  for (const auto& s : sw.samples) t.rows.push_back({s.gamma, s.f1, s.A1, s.A2, s.ratio});
  return t;
}

inline HarmonicSweep sweep_from_table(const Table& t) {
  detail::expect_header(t, kSweepColumns);
  HarmonicSweep sw;
  for (const auto& r : t.rows)
    sw.samples.push_back({detail::req(r[0]), detail::req(r[1]), detail::req(r[2]), detail::req(r[3]),
                          detail::req(r[4])});
  return sw;
}

inline Table creep_table(const CreepTrace& tr) {
  Table t{kCreepColumns, {}};
  t.rows.reserve(tr.samples.size());
  for (const auto& s : tr.samples)
    t.rows.push_back({s.gamma, s.eps_p, s.eps_elastic, s.A_over_A0, s.rate, s.residual});
  return t;
}

inline CreepTrace creep_from_table(const Table& t) {
  detail::expect_header(t, kCreepColumns);
  CreepTrace tr;
  for (const auto& r : t.rows)
    tr.samples.push_back({detail::req(r[0]), detail::req(r[1]), detail::req(r[2]), detail::req(r[3]),
                          detail::req(r[4]), detail::req(r[5])});
  return tr;
}

}  // namespace nlus::io
