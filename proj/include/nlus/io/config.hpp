#pragma once

/**
 * @file config.hpp
 *
 * @brief Flat key-value scenario configuration.
 *
 *     # comment
 *     [creep]
 *     sigma = 140e6        -> creep.sigma
 *     relax.n = 0.5        -> dotted keys work anywhere
 *
 * Readers consume keys as they resolve parameters; any key left unconsumed
 * is rejected.
 */

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlus/errors.hpp"
#include "nlus/io/csv.hpp"

namespace nlus::io {

using Config = std::map<std::string, std::string>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Parses one "key=value" assignment into cfg.
inline void apply_assignment(Config& cfg, std::string_view assignment, std::string_view section = {}) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError(std::string(assignment), "expected key = value");
  const auto key = detail::trim(assignment.substr(0, eq));
  const auto value = detail::trim(assignment.substr(eq + 1));
  if (key.empty()) throw ConfigError("", "empty key in '" + std::string(assignment) + "'");
  std::string full = section.empty() ? std::string(key) : std::string(section) + "." + std::string(key);
  cfg[full] = std::string(value);
}

inline Config parse_config(std::string_view text) {
  Config cfg;
  std::string section;
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no), "unterminated section header");
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      continue;
    }
    apply_assignment(cfg, line, section);
  }
  return cfg;
}

/// Canonical text of a config: sorted "key=value" lines.
inline std::string canonical_text(const Config& cfg) {
  std::string out;
  for (const auto& [k, v] : cfg) out += k + "=" + v + "\n";
  return out;
}

/// Resolves typed parameters under a prefix and records the resolved values.
class ParamReader {
 public:
  ParamReader(const Config& cfg, std::string prefix) : cfg_(cfg), prefix_(std::move(prefix)) {}

  double number(const std::string& name, double fallback) {
    const auto key = full(name);
    double v = fallback;
    if (auto it = cfg_.find(key); it != cfg_.end()) v = parse(key, it->second);
    resolved_[name] = v;
    return v;
  }

  std::string text(const std::string& name, const std::string& fallback) {
    const auto key = full(name);
    std::string v = fallback;
    if (auto it = cfg_.find(key); it != cfg_.end()) v = it->second;
    resolved_[name] = v;
    return v;
  }

  std::vector<double> numbers(const std::string& name, const std::vector<double>& fallback) {
    const auto key = full(name);
    std::vector<double> v = fallback;
    if (auto it = cfg_.find(key); it != cfg_.end()) {
      v.clear();
      for (auto part : split(it->second, ',')) {
        const auto p = detail::trim(part);
        if (!p.empty()) v.push_back(parse(key, p));
      }
    }
    resolved_[name] = v;
    return v;
  }

  bool flag(const std::string& name, bool fallback) {
    const auto key = full(name);
    bool v = fallback;
    if (auto it = cfg_.find(key); it != cfg_.end()) {
      if (it->second == "true" || it->second == "1") v = true;
      else if (it->second == "false" || it->second == "0") v = false;
      else throw ConfigError(key, "expected true or false");
    }
    resolved_[name] = v;
    return v;
  }

  /// Rejects keys that no accessor consumed.
  void finish() const {
    for (const auto& [k, v] : cfg_) {
      const auto dot = k.find('.');
      if (dot == std::string::npos) throw ConfigError(k, "key must carry a section prefix");
      if (k.substr(0, dot) != prefix_) throw ConfigError(k, "key does not belong to section '" + prefix_ + "'");
      if (!resolved_.contains(k.substr(dot + 1))) throw ConfigError(k, "unknown key");
    }
  }

  std::string full(const std::string& name) const { return prefix_ + "." + name; }
  const nlohmann::ordered_json& resolved() const noexcept { return resolved_; }

 private:
  static double parse(const std::string& key, std::string_view s) {
    try {
      return parse_number(s);
    } catch (const DomainError&) {
      throw ConfigError(key, "not a number: '" + std::string(s) + "'");
    }
  }

  const Config& cfg_;
  std::string prefix_;
  nlohmann::ordered_json resolved_ = nlohmann::ordered_json::object();
};

}  // namespace nlus::io
