// resolvent_bounds_cli: norms, bounds, certifications, audits and sweeps.
//
// Exit codes: 0 success, 1 certification or audit failure, 2 usage error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json_io.hpp"
#include "resolvent_bounds/resolvent_bounds.hpp"

namespace {

namespace rb = resolvent_bounds;
using rb_cli::csv_number;
using rb_cli::CsvWriter;
using rb_cli::json;
using rb_cli::number;
using rb_cli::UsageError;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr double kGapTolerance = 1e-8;

struct Sink {
  std::string path;

  void write(const std::string& text) const {
    if (path.empty() || path == "-") {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
  }
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

double rel_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::vector<double> arange(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw UsageError("empty or invalid range");
  std::vector<double> out;
  const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  // Snap to 1e-12 so that grid points such as 0 come out exact.
  for (int k = 0; k <= count; ++k) out.push_back(std::round((lo + step * k) * 1e12) / 1e12 + 0.0);
  return out;
}

// ---------------------------------------------------------------------------
// xnorm

struct XnormOptions {
  int n = 1;
  double r = 1.0;
  double beta = 1.0;
};

int cmd_xnorm(const XnormOptions& o, const Sink& sink) {
  const rb::ExtremalParams p(o.n, o.r, o.beta);
  const double oracle = rb::xnorm_oracle(p);
  const auto best = rb::xnorm(p);

  json out = {{"n", o.n}, {"r", number(o.r)}, {"beta", number(o.beta)}};
  // The characteristic route runs whenever its hypotheses hold, even if a
  // closed form supplies the reported norm.
  std::optional<double> char_eq;
  json census = nullptr;
  if (best.method == rb::XNormMethod::char_eq) {
    char_eq = best.value;
  } else if (o.beta > 0.0 && !best.near_degenerate && !best.fell_back &&
             p.degeneracy() > rb::kParamTolerance) {
    char_eq = rb::xnorm_char_eq(p);
  }
  if (char_eq) census = rb_cli::census_json(rb::root_census(p));
  const double reported = char_eq.value_or(best.value);
  const double gap = rel_gap(reported, oracle);
  out["norm"] = number(best.value);
  out["method"] = std::string(rb::to_string(best.method));
  out["near_degenerate"] = best.near_degenerate;
  out["fell_back"] = best.fell_back;
  out["norm_char_eq"] = number(char_eq);
  out["norm_oracle"] = number(oracle);
  out["rel_gap"] = number(gap);
  out["root_census"] = census;
  sink.write(dump(out));
  return gap < kGapTolerance ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// roots

struct RootsOptions {
  int n = 1;
  double r = 1.0;
  double beta = 1.0;
  int grid = 0;
};

int cmd_roots(const RootsOptions& o, const Sink& sink) {
  const rb::ExtremalParams p(o.n, o.r, o.beta);
  if (o.grid != 0 && o.grid < 8 * o.n) {
    throw rb::Error(rb::ErrorCode::grid_too_coarse, "--grid must be at least 8n");
  }
  const auto census = rb::root_census(p, o.grid);
  json out = {{"n", o.n}, {"r", number(o.r)}, {"beta", number(o.beta)}};
  out["root_census"] = rb_cli::census_json(census);
  const bool ok = 2 * static_cast<int>(census.found_trig.size()) == census.predicted_count &&
                  census.candidate_count() == static_cast<std::size_t>(o.n);
  sink.write(dump(out));
  return ok ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// bound

struct BoundOptions {
  std::string method = "theorem1";
  double zeta_re = 0.0;
  double zeta_im = 0.0;
  std::string spectrum;
  std::string spectrum_file;
  std::string beta_choice = "stolz";
  std::optional<int> n1;
  std::optional<double> r;
  std::optional<int> n;
};

int cmd_bound(const BoundOptions& o, const Sink& sink) {
  const rb::Complex zeta(o.zeta_re, o.zeta_im);
  auto spectrum = [&] {
    if (!o.spectrum.empty()) return rb_cli::parse_spectrum(o.spectrum);
    if (!o.spectrum_file.empty()) return rb_cli::parse_spectrum(rb_cli::read_file(o.spectrum_file));
    throw UsageError("method " + o.method + " needs --spectrum or --spectrum-file");
  };

  json out;
  if (o.method == "theorem1") {
    const auto choice = o.beta_choice == "conservative" ? rb::BetaChoice::conservative
                                                        : rb::BetaChoice::stolz;
    out = rb_cli::report_json(rb::bound_theorem1(spectrum(), zeta, choice));
  } else if (o.method == "theorem3") {
    out = rb_cli::report_json(rb::bound_theorem3(spectrum(), zeta));
  } else if (o.method == "prop2") {
    out = rb_cli::report_json(rb::bound_prop2(spectrum(), zeta));
  } else if (o.method == "prop5") {
    const auto sigma1 = spectrum();
    const int n1 = o.n1.value_or(sigma1.degree());
    const auto ds = rb::ds_constant_bound(n1, sigma1, zeta);
    out = {{"method", "prop5"}, {"zeta", rb_cli::complex_json(zeta)}, {"n1", n1},
           {"s", number(ds.s)},  {"bound_value", number(ds.value)},  {"cap", number(ds.cap)}};
  } else if (o.method == "theorem4") {
    if (!o.r || !o.n) throw UsageError("method theorem4 needs --r and --n");
    const auto sup = rb::sup_resolvent_R(zeta, *o.r, *o.n);
    out = {{"method", "theorem4"},
           {"zeta", rb_cli::complex_json(zeta)},
           {"r", number(*o.r)},
           {"n", *o.n},
           {"beta_max", number(sup.beta_max)},
           {"lambda_max", number(sup.lambda_max)},
           {"xnorm_method", std::string(rb::to_string(sup.xnorm_method))},
           {"bound_value", number(sup.value)},
           {"certified", number(sup.certified)},
           {"gap", number(sup.gap)}};
  } else {
    throw UsageError("unknown method " + o.method);
  }
  sink.write(dump(out));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// certify

struct CertifyOptions {
  int n_max = 8;
  double lambda_step = 0.3;
  double zeta_step = 0.5;
};

int cmd_certify(const CertifyOptions& o, const Sink& sink) {
  if (o.n_max < 1) throw UsageError("--n-max must be >= 1");
  CsvWriter csv({"check", "n", "lambda", "zeta", "r", "rho1", "n2", "value", "certified", "gap"});
  int failures = 0;
  int rows = 0;
  auto record = [&](std::vector<std::string> fields, double gap) {
    fields.push_back(csv_number(gap));
    csv.row(fields);
    ++rows;
    failures += !(gap < kGapTolerance);
  };

  const double lambda_lo = -0.9;
  for (double lambda : arange(lambda_lo, -lambda_lo + 1e-12, o.lambda_step)) {
    for (double zeta : arange(-1.0, 1.0 + 1e-12, o.zeta_step)) {
      if (std::abs(zeta - lambda) <= 1e-12) {
        std::fprintf(stderr, "skip: zeta = lambda = %.17g\n", lambda);
        continue;
      }
      for (int n = 1; n <= o.n_max; ++n) {
        const auto s = rb::certify_sharpness_theorem1(lambda, n, zeta);
        record({"theorem1", std::to_string(n), csv_number(lambda), csv_number(zeta), "", "", "",
                csv_number(s.bound), csv_number(s.actual)},
               s.gap);
      }
    }
  }
  for (double zeta : {0.0, 0.3, 0.6, 0.9}) {
    for (double r : {0.3, 0.5, 0.7}) {
      for (int n : {2, 4, 8}) {
        const auto sup = rb::sup_resolvent_R(zeta, r, n);
        record({"theorem4", std::to_string(n), csv_number(sup.lambda_max), csv_number(zeta),
                csv_number(r), "", "", csv_number(sup.value), csv_number(sup.certified)},
               sup.gap);
      }
    }
  }
  for (int n1 = 1; n1 <= 6; ++n1) {
    for (int n2 : {1, 3}) {
      for (double rho : {0.0, 0.4, 0.8}) {
        const auto ds = rb::ds_constant_sup(n1, n2, rho);
        record({"prop5", std::to_string(n1), "", "1", "", csv_number(rho), std::to_string(n2),
                csv_number(ds.value), csv_number(ds.certified)},
               std::max(ds.gap, ds.max_form_gap));
      }
    }
  }
  sink.write(csv.str());
  std::fprintf(stderr, "%d rows, %d gaps >= %.0e\n", rows, failures, kGapTolerance);
  return failures == 0 ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// audit

struct AuditOptions {
  int n = 4;
  int trials = 1000;
  std::uint64_t seed = 0;
  std::string histogram;
};

int cmd_audit(const AuditOptions& o, const Sink& sink) {
  const auto summary = rb::random_contraction_audit(o.n, o.trials, o.seed);
  sink.write(dump(rb_cli::audit_json(summary)));
  if (!o.histogram.empty()) {
    CsvWriter csv({"bin_lo", "bin_hi", "count"});
    for (int k = 0; k < rb::kHistogramBins; ++k) {
      csv.row({csv_number(double(k) / rb::kHistogramBins), csv_number(double(k + 1) / rb::kHistogramBins),
               std::to_string(summary.histogram[static_cast<std::size_t>(k)])});
    }
    Sink{o.histogram}.write(csv.str());
  }
  std::fprintf(stderr, "violations: %d\n", summary.violations);
  return summary.violations == 0 ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
  std::string preset;
  double r = 0.5;
  double beta = 1.5;
  double zeta = 0.5;
  int n_min = 1;
  std::optional<int> n_max;  // preset default: 60, or 20 for "unit"
};

struct SweepPoint {
  int n;
  double r;
  double beta;
};

std::vector<std::string> norm_row(const SweepPoint& pt) {
  const rb::ExtremalParams p(pt.n, pt.r, pt.beta);
  const auto best = rb::xnorm(p);
  const double oracle = rb::xnorm_oracle(p);
  std::optional<double> limit;
  if (pt.r < 1.0 && pt.beta >= 1.0 - pt.r * pt.r - rb::kParamTolerance) {
    limit = rb::xnorm_limit(pt.r, pt.beta);
  }
  std::string predicted, found, root_case;
  if (pt.beta > 0.0 && p.degeneracy() > rb::kParamTolerance) {
    const auto census = rb::root_census(p);
    predicted = std::to_string(census.predicted_count);
    found = std::to_string(2 * census.found_trig.size());
    root_case = census.root_case;
  }
  return {std::to_string(pt.n), csv_number(pt.r), csv_number(pt.beta), csv_number(best.value),
          csv_number(oracle), std::string(rb::to_string(best.method)), csv_number(limit),
          csv_number(rb::xnorm_closed_form(p)), predicted, found, root_case};
}

int cmd_sweep(SweepOptions o, const Sink& sink) {
  if (!o.n_max) o.n_max = o.preset == "unit" ? 20 : 60;
  const int n_max = *o.n_max;
  if (o.n_min < 1 || n_max < o.n_min) throw UsageError("need 1 <= n-min <= n-max");

  if (o.preset == "asymptotic") {
    // Supremum of the resolvent against its large-n form 1/(r^n (1 - r|zeta|)).
    if (!(o.r > 0.0 && o.r < 1.0) || !(std::abs(o.zeta) < 1.0)) {
      throw UsageError("asymptotic sweep needs 0 < r < 1 and |zeta| < 1");
    }
    std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(n_max - o.n_min + 1));
    rb::parallel_for(rows.size(), [&](std::size_t k) {
      const int n = o.n_min + static_cast<int>(k);
      const auto sup = rb::sup_resolvent_R(o.zeta, o.r, n);
      const double ratio = sup.value * std::pow(o.r, n) * (1.0 - o.r * std::abs(o.zeta));
      rows[k] = {std::to_string(n), csv_number(o.r), csv_number(o.zeta), csv_number(sup.beta_max),
                 csv_number(sup.value), csv_number(ratio), csv_number(sup.gap)};
    });
    CsvWriter csv({"n", "r", "zeta", "beta_max", "value", "ratio", "witness_gap"});
    for (const auto& row : rows) csv.row(row);
    sink.write(csv.str());
    return kExitOk;
  }

  std::vector<SweepPoint> points;
  bool check_roots = false;
  if (o.preset == "root-cases") {
    for (const auto& [n, r, beta] : std::vector<SweepPoint>{
             {1, 1.0, 0.5}, {4, 1.0, 1.3},  {2, 0.6, 0.4},   {5, 0.3, 0.7},   {1, 0.5, 1.5},
             {2, 0.5, 1.5}, {1, 0.5, 1.2},  {2, 0.5, 1.2},   {3, 0.758, 1.854}, {4, 0.758, 1.854},
             {8, 0.758, 1.854}, {9, 0.758, 1.854}, {1, 0.6, 0.9}, {2, 0.6, 0.9}, {2, 0.3, 0.2},
             {3, 0.3, 0.2}, {2, 0.5, 0.6},  {5, 0.5, 0.6},   {2, 0.7, 1.0},   {3, 0.7, 1.0}}) {
      points.push_back({n, r, beta});
    }
    check_roots = true;
  } else {
    double r = o.r;
    double beta = o.beta;
    if (o.preset == "limit") {
      r = 0.5;
      beta = 1.5;
    } else if (o.preset == "unit") {
      r = 1.0;
      beta = 2.0;
    } else if (!o.preset.empty()) {
      throw UsageError("unknown preset " + o.preset);
    }
    // Validate once before fanning out.
    (void)rb::ExtremalParams(o.n_min, r, beta);
    for (int n = o.n_min; n <= n_max; ++n) points.push_back({n, r, beta});
  }

  std::vector<std::vector<std::string>> rows(points.size());
  rb::parallel_for(points.size(), [&](std::size_t k) { rows[k] = norm_row(points[k]); });
  CsvWriter csv({"n", "r", "beta", "norm", "norm_oracle", "method", "limit", "closed_form",
                 "predicted_roots", "found_roots", "root_case"});
  int mismatches = 0;
  for (const auto& row : rows) {
    csv.row(row);
    if (check_roots && row[8] != row[9]) ++mismatches;
  }
  sink.write(csv.str());
  if (check_roots) std::fprintf(stderr, "root count mismatches: %d\n", mismatches);
  return mismatches == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resolvent bounds for matrices with given spectrum"};
  app.require_subcommand(1);
  app.fallthrough();
  Sink sink;
  app.add_option("-o,--output", sink.path, "Write the result here instead of stdout");

  XnormOptions xo;
  auto* xnorm = app.add_subcommand("xnorm", "Norm of the extremal Toeplitz matrix X_{r,beta}");
  xnorm->add_option("--n", xo.n, "Matrix size")->required();
  xnorm->add_option("--r", xo.r, "Diagonal parameter in (0, 1]")->required();
  xnorm->add_option("--beta", xo.beta, "Subdiagonal parameter in [0, 2]")->required();

  RootsOptions ro;
  auto* roots = app.add_subcommand("roots", "Root census of the characteristic equation");
  roots->add_option("--n", ro.n)->required();
  roots->add_option("--r", ro.r)->required();
  roots->add_option("--beta", ro.beta)->required();
  roots->add_option("--grid", ro.grid, "Probe count on (0, pi); at least 8n");

  BoundOptions bo;
  auto* bound = app.add_subcommand("bound", "Evaluate a resolvent bound");
  bound->add_option("--method", bo.method)
      ->check(CLI::IsMember({"theorem1", "theorem3", "prop2", "prop5", "theorem4"}));
  bound->add_option("--zeta", bo.zeta_re, "Real part of zeta")->required();
  bound->add_option("--zeta-im", bo.zeta_im, "Imaginary part of zeta");
  bound->add_option("--spectrum", bo.spectrum, R"(JSON array of {"re", "im", "mult"})");
  bound->add_option("--spectrum-file", bo.spectrum_file, "File holding the spectrum JSON");
  bound->add_option("--beta-choice", bo.beta_choice)->check(CLI::IsMember({"stolz", "conservative"}));
  bound->add_option("--n1", bo.n1, "Size of the interior block (prop5)");
  bound->add_option("--r", bo.r, "Pseudo-hyperbolic distance (theorem4)");
  bound->add_option("--n", bo.n, "Matrix size (theorem4)");

  CertifyOptions co;
  auto* certify = app.add_subcommand("certify", "Check every extremal witness against its bound");
  certify->add_option("--n-max", co.n_max);
  certify->add_option("--lambda-step", co.lambda_step);
  certify->add_option("--zeta-step", co.zeta_step);

  AuditOptions ao;
  auto* audit = app.add_subcommand("audit", "Random contraction audit");
  audit->add_option("--n", ao.n)->required();
  audit->add_option("--trials", ao.trials);
  audit->add_option("--seed", ao.seed);
  audit->add_option("--histogram", ao.histogram, "Write the tightness histogram CSV here");

  SweepOptions so;
  auto* sweep = app.add_subcommand("sweep", "CSV tables over n");
  sweep->add_option("--preset", so.preset)->check(CLI::IsMember({"limit", "root-cases", "unit", "asymptotic"}));
  sweep->add_option("--r", so.r);
  sweep->add_option("--beta", so.beta);
  sweep->add_option("--zeta", so.zeta);
  sweep->add_option("--n-min", so.n_min);
  sweep->add_option("--n-max", so.n_max);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*xnorm) return cmd_xnorm(xo, sink);
    if (*roots) return cmd_roots(ro, sink);
    if (*bound) return cmd_bound(bo, sink);
    if (*certify) return cmd_certify(co, sink);
    if (*audit) return cmd_audit(ao, sink);
    if (*sweep) return cmd_sweep(so, sink);
  } catch (const rb::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
