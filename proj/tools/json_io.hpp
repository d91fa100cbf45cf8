#pragma once

// JSON and CSV rendering for the command-line tool.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "resolvent_bounds/resolvent_bounds.hpp"

namespace rb_cli {

namespace rb = resolvent_bounds;
using json = nlohmann::ordered_json;

/// Thrown for malformed input; maps to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite doubles become null rather than invalid JSON.
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json number(std::optional<double> v) { return v ? number(*v) : json(nullptr); }

inline json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

inline json complex_json(rb::Complex z) { return {{"re", number(z.real())}, {"im", number(z.imag())}}; }

/// [{"re": .., "im": .., "mult": ..}, ...]; "im" defaults to 0 and "mult" to 1.
inline rb::Spectrum parse_spectrum(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("spectrum is not valid JSON: ") + e.what());
  }
  if (!doc.is_array() || doc.empty()) throw UsageError("spectrum must be a non-empty JSON array");
  std::vector<rb::SpectralPoint> points;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("re") || !item["re"].is_number()) {
      throw UsageError("each spectrum entry needs a numeric \"re\"");
    }
    try {
      const double re = item["re"].get<double>();
      const double im = item.value("im", 0.0);
      const int mult = item.value("mult", 1);
      points.push_back({{re, im}, mult});
    } catch (const json::type_error& e) {
      throw UsageError(std::string("bad spectrum entry: ") + e.what());
    }
  }
  return rb::Spectrum(std::move(points));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline json census_json(const rb::RootCensus& c) {
  return {{"root_case", c.root_case},
          {"predicted_count", c.predicted_count},
          {"found_count", 2 * c.found_trig.size()},
          {"threshold_ordering_holds", c.threshold_ordering_holds},
          {"found_trig", numbers(c.found_trig)},
          {"found_cosh_plus", numbers(c.found_cosh_plus)},
          {"found_cosh_minus", numbers(c.found_cosh_minus)},
          {"lambda_squares", numbers(c.lambda_squares)},
          {"mu_zero_root", c.mu_zero_root},
          {"theta_max", number(c.theta_max)}};
}

inline json report_json(const rb::BoundReport& rep) {
  return {{"method", std::string(rb::to_string(rep.method))},
          {"zeta", complex_json(rep.zeta)},
          {"r", number(rep.r)},
          {"beta", number(rep.beta)},
          {"d1", number(rep.d1)},
          {"deg", rep.deg},
          {"xnorm", number(rep.xnorm)},
          {"xnorm_method", std::string(rb::to_string(rep.xnorm_method))},
          {"bound_value", number(rep.bound_value)}};
}

inline json audit_json(const rb::AuditSummary& s) {
  return {{"n", s.n},
          {"trials", s.trials},
          {"seed", s.seed},
          {"violations", s.violations},
          {"skipped", s.skipped},
          {"min_tightness", number(s.min_tightness)},
          {"max_tightness", number(s.max_tightness)},
          {"mean_tightness", number(s.mean_tightness)},
          {"tight_count", s.tight_count},
          {"histogram", s.histogram}};
}

/// 17 significant digits; empty for a missing value.
inline std::string csv_number(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : width_(header.size()) { row(header); }

  void row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw std::logic_error("CSV row width mismatch");
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (k) out_ << ',';
      out_ << fields[k];
    }
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  std::size_t width_;
  std::ostringstream out_;
};

}  // namespace rb_cli
