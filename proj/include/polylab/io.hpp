#pragma once

// Text output shared by the CLI: locale-independent number formatting and
// the JSON / CSV encodings of trial records.

#include <charconv>
#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "polylab/simulator.hpp"

namespace polylab {

/// 17 significant digits, '.' separator, independent of the global locale.
inline std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

inline std::string bin_name(int b) {
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "bin_%02d", b);
  return buffer;
}

inline nlohmann::ordered_json trial_to_json(const TrialRecord& record) {
  nlohmann::ordered_json j;
  j["n"] = record.n;
  j["seed"] = record.seed;
  j["trial"] = record.trial;
  j["m_n"] = record.m_n;
  j["length"] = record.stats.length;
  j["backsteps"] = record.stats.backsteps;
  j["e_first_half"] = record.stats.first_half_energy;
  for (int b = 0; b < kProfileBins; ++b) {
    j[bin_name(b)] = record.stats.bins[static_cast<std::size_t>(b)];
  }
  return j;
}

inline void write_trial_csv_header(std::ostream& out) {
  out << "n,seed,trial,m_n,length,backsteps,e_first_half";
  for (int b = 0; b < kProfileBins; ++b) {
    out << ',' << bin_name(b);
  }
  out << '\n';
}

inline void write_trial_csv_row(std::ostream& out, const TrialRecord& record) {
  out << record.n << ',' << record.seed << ',' << record.trial << ',' << format_double(record.m_n) << ','
      << record.stats.length << ',' << record.stats.backsteps << ','
      << format_double(record.stats.first_half_energy);
  for (double v : record.stats.bins) {
    out << ',' << format_double(v);
  }
  out << '\n';
}

}  // namespace polylab
