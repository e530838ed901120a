#pragma once

// Tabular output records with fixed per-schema columns, written as CSV or
// JSON. Numbers use std::to_chars (locale independent, 17 significant
// digits), so every printed value parses back to the same binary64.

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "ldwait/error.hpp"

namespace ldwait::report {

enum class Schema { rate_curve, convergence, mc_vs_exact, laplace_check };

inline std::string_view schema_name(Schema s) {
  switch (s) {
    case Schema::rate_curve: return "rate_curve";
    case Schema::convergence: return "convergence";
    case Schema::mc_vs_exact: return "mc_vs_exact";
    default: return "laplace_check";
  }
}

inline const std::vector<std::string>& schema_columns(Schema s) {
  static const std::vector<std::string> rate = {"p", "q", "C", "I", "I_prime", "I_second",
                                                "asymptote"};
  static const std::vector<std::string> conv = {"n", "log_prob", "a_n", "I", "a_n_minus_I"};
  static const std::vector<std::string> mc = {"p",      "q",       "n",     "samples",
                                              "hits",   "estimate", "ci_low", "ci_high",
                                              "exact",  "seed",    "streams"};
  static const std::vector<std::string> lap = {"x_star",     "sigma",      "delta",
                                               "log_laplace", "log_series", "ratio"};
  switch (s) {
    case Schema::rate_curve: return rate;
    case Schema::convergence: return conv;
    case Schema::mc_vs_exact: return mc;
    default: return lap;
  }
}

class OutputRecord {
 public:
  explicit OutputRecord(Schema schema) : schema_(schema) {}

  void add_row(std::vector<double> row) {
    if (row.size() != schema_columns(schema_).size()) {
      throw std::logic_error("row width does not match the schema");
    }
    rows_.push_back(std::move(row));
  }

  Schema schema() const { return schema_; }
  const std::vector<std::string>& columns() const { return schema_columns(schema_); }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

 private:
  Schema schema_;
  std::vector<std::vector<double>> rows_;
};

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

/// Parses a value produced by format_number.
inline double parse_number(std::string_view s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw domain_error("not a number: " + std::string(s));
  }
  return v;
}

inline void write_csv(std::ostream& os, const OutputRecord& rec) {
  const auto& cols = rec.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& row : rec.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

/// {"schema": ..., "rows": [{column: value, ...}, ...]}. Non-finite values
/// are written as the strings "inf" / "-inf" / "nan".
inline void write_json(std::ostream& os, const OutputRecord& rec) {
  nlohmann::ordered_json doc;
  doc["schema"] = schema_name(rec.schema());
  auto rows = nlohmann::ordered_json::array();
  const auto& cols = rec.columns();
  for (const auto& row : rec.rows()) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (std::isfinite(row[i])) {
        obj[cols[i]] = row[i];
      } else {
        obj[cols[i]] = format_number(row[i]);
      }
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << '\n';
}

}  // namespace ldwait::report
