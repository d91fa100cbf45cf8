#pragma once

// Resolvent bounds for contractions in terms of the spectrum, the extremal
// operators that attain them, and an empirical audit against random
// contractions.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "resolvent_bounds/disk_geometry.hpp"
#include "resolvent_bounds/errors.hpp"
#include "resolvent_bounds/extremal_toeplitz.hpp"
#include "resolvent_bounds/linalg.hpp"
#include "resolvent_bounds/model_operator.hpp"
#include "resolvent_bounds/parallel.hpp"

namespace resolvent_bounds {

/// |lambda| = 1 band for spectra on the unit circle.
inline constexpr double kUnimodularTolerance = 1e-10;
/// |zeta| = 1 band for points on the unit circle.
inline constexpr double kUnimodularZetaTolerance = 1e-12;
/// Relative gap below which a computed resolvent norm certifies a bound.
inline constexpr double kCertificationTolerance = 1e-8;

enum class BoundMethod { theorem1, theorem3, prop2, theorem4, prop5 };

constexpr std::string_view to_string(BoundMethod m) noexcept {
  switch (m) {
    case BoundMethod::theorem1: return "theorem1";
    case BoundMethod::theorem3: return "theorem3";
    case BoundMethod::prop2: return "prop2";
    case BoundMethod::theorem4: return "theorem4";
    case BoundMethod::prop5: return "prop5";
  }
  return "?";
}

/// A bound of the form xnorm / (d1 r^deg) together with its ingredients.
struct BoundReport {
  Complex zeta;
  double r = 0.0;
  double beta = 0.0;
  double d1 = 0.0;
  int deg = 0;
  double xnorm = 0.0;
  double bound_value = 0.0;
  BoundMethod method = BoundMethod::theorem1;
  XNormMethod xnorm_method = XNormMethod::oracle;

  double reconstruct() const { return xnorm / (d1 * std::pow(r, deg)); }
};

enum class BetaChoice {
  stolz,         // beta = s(zeta, sigma)
  conservative,  // beta = 2, valid for every spectrum
};

namespace detail {

inline void require_closed_disk(Complex zeta) {
  if (std::abs(zeta) > 1.0 + kDiskSlack) {
    throw Error(ErrorCode::out_of_domain, "zeta must lie in the closed unit disk");
  }
}

inline double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace detail

/// ||R(zeta, T)|| <= ||X_{r,beta}|| / (d(1, conj(sigma) zeta) r^deg) with
/// r = p(zeta, sigma), beta = s(zeta, sigma) and deg the total multiplicity.
inline BoundReport bound_theorem1(const Spectrum& sigma, Complex zeta,
                                  BetaChoice choice = BetaChoice::stolz) {
  detail::require_closed_disk(zeta);
  detail::require_off_spectrum(zeta, sigma);
  BoundReport rep;
  rep.zeta = zeta;
  rep.method = BoundMethod::theorem1;
  rep.r = detail::clamp_unit(dist_to_spectrum(zeta, sigma, Metric::pseudo_hyperbolic));
  rep.beta = choice == BetaChoice::stolz ? std::min(stolz_s(zeta, sigma), 2.0) : 2.0;
  rep.d1 = d1_sigmabar_zeta(zeta, sigma);
  rep.deg = sigma.degree();
  const auto norm = xnorm(ExtremalParams(rep.deg, rep.r, rep.beta));
  rep.xnorm = norm.value;
  rep.xnorm_method = norm.method;
  rep.bound_value = rep.reconstruct();
  return rep;
}

/// 1 / (d(1, conj(sigma) zeta) r^deg (1 - r |zeta|)), for |zeta| < 1. The
/// report carries beta_max = (1 - r^2)/(1 - r|zeta|) and xnorm = 1/(1 - r|zeta|).
inline BoundReport bound_theorem3(const Spectrum& sigma, Complex zeta) {
  if (!(std::abs(zeta) < 1.0)) throw Error(ErrorCode::out_of_domain, "needs |zeta| < 1");
  detail::require_off_spectrum(zeta, sigma);
  BoundReport rep;
  rep.zeta = zeta;
  rep.method = BoundMethod::theorem3;
  rep.r = detail::clamp_unit(dist_to_spectrum(zeta, sigma, Metric::pseudo_hyperbolic));
  const double shrink = 1.0 - rep.r * std::abs(zeta);
  rep.beta = (1.0 - rep.r * rep.r) / shrink;
  rep.d1 = d1_sigmabar_zeta(zeta, sigma);
  rep.deg = sigma.degree();
  rep.xnorm = 1.0 / shrink;
  rep.xnorm_method = XNormMethod::closed_form;
  rep.bound_value = rep.reconstruct();
  return rep;
}

/// 1 / d(zeta, sigma) for spectra on the unit circle; zeta anywhere off sigma.
inline BoundReport bound_prop2(const Spectrum& sigma, Complex zeta) {
  if (!sigma.all_unimodular(kUnimodularTolerance)) {
    throw Error(ErrorCode::not_unimodular, "every eigenvalue must satisfy |lambda| = 1");
  }
  BoundReport rep;
  rep.zeta = zeta;
  rep.method = BoundMethod::prop2;
  rep.d1 = dist_to_spectrum(zeta, sigma, Metric::euclidean);
  rep.r = 1.0;
  rep.beta = 0.0;
  rep.deg = sigma.degree();
  rep.xnorm = 1.0;
  rep.xnorm_method = XNormMethod::closed_form;
  rep.bound_value = 1.0 / rep.d1;
  return rep;
}

struct SupResolvent {
  double value = 0.0;  // ||X_{r, beta_max}|| / r^n
  double beta_max = 0.0;
  double lambda_max = 0.0;
  DenseComplexMatrix witness;  // M_B for B = b_{lambda_max}^n
  double certified = 0.0;      // d(1, lambda_max |zeta|) ||R(|zeta|, witness)||
  double gap = 0.0;
  XNormMethod xnorm_method = XNormMethod::oracle;
};

/// Supremum of d(1, conj(sigma) zeta) ||R(zeta, T)|| over n x n contractions
/// whose spectrum is at pseudo-hyperbolic distance r from zeta, with the
/// witness that attains it.
inline SupResolvent sup_resolvent_R(Complex zeta, double r, int n) {
  const double a = std::abs(zeta);
  if (!(a < 1.0)) throw Error(ErrorCode::out_of_domain, "needs |zeta| < 1");
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::out_of_domain, "needs 0 < r < 1");
  if (n < 1) throw Error(ErrorCode::out_of_domain, "needs n >= 1");
  const double beta_max = (1.0 - r * r) / (1.0 - r * a);
  const double lambda_max = (a - r) / (1.0 - r * a);
  const auto norm = xnorm(ExtremalParams(n, r, std::min(beta_max, 2.0)));
  auto witness = model_matrix(BlaschkeProduct::power(lambda_max, n));
  const double certified = std::abs(1.0 - lambda_max * a) * spectral_norm(resolvent(witness, a));
  const double value = norm.value / std::pow(r, n);
  return {value, beta_max, lambda_max, std::move(witness), certified,
          std::abs(certified - value) / value, norm.method};
}

struct DsBound {
  double value = 0.0;  // max(1, ||X_{1, s}||)
  double cap = 0.0;    // cot(pi / (4 n1))
  double s = 0.0;
};

/// Majorant of d(zeta, sigma) ||R(zeta, T)|| on the unit circle for
/// spectra with an interior part sigma1 of total size n1.
inline DsBound ds_constant_bound(int n1, const Spectrum& sigma1, Complex zeta) {
  if (std::abs(std::abs(zeta) - 1.0) > kUnimodularZetaTolerance) {
    throw Error(ErrorCode::not_unimodular_zeta, "needs |zeta| = 1");
  }
  if (n1 < 1) throw Error(ErrorCode::out_of_domain, "needs n1 >= 1");
  if (!(sigma1.spectral_radius() < 1.0)) {
    throw Error(ErrorCode::out_of_domain, "sigma1 must lie in the open disk");
  }
  detail::require_off_spectrum(zeta, sigma1);
  const double s = std::min(stolz_s(zeta, sigma1), 2.0);
  const double norm = xnorm(ExtremalParams(n1, 1.0, s)).value;
  return {std::max(1.0, norm), 1.0 / std::tan(std::numbers::pi / (4.0 * n1)), s};
}

struct DsSup {
  double value = 0.0;  // ||X_{1, 1 + rho1}||, size n1
  DenseComplexMatrix witness_resolvent;
  double certified = 0.0;  // d(1, sigma) ||R(1, witness)||
  double gap = 0.0;
  double max_form = 0.0;  // max(||X_{1,1+rho1}||, (1 - rho1)/2)
  double max_form_gap = 0.0;
};

/// Supremum of d(1, sigma) ||R(1, T)|| over T with minimal polynomial
/// (z - rho1)^{n1} (z + 1)^{n2}, attained by the block model operator.
inline DsSup ds_constant_sup(int n1, int n2, double rho1) {
  if (n1 < 1 || n2 < 1 || rho1 < 0.0 || !(rho1 < 1.0)) {
    throw Error(ErrorCode::out_of_domain, "needs n1, n2 >= 1 and 0 <= rho1 < 1");
  }
  const double value = xnorm(ExtremalParams(n1, 1.0, 1.0 + rho1)).value;
  auto witness = block_model_resolvent(n1, rho1, n2, 1.0);
  // d(1, sigma) with sigma = {rho1, -1}.
  const double certified = std::min(1.0 - rho1, 2.0) * spectral_norm(witness);
  const double max_form = std::max(value, (1.0 - rho1) / 2.0);
  return {value,
          std::move(witness),
          certified,
          std::abs(certified - value) / value,
          max_form,
          std::abs(max_form - certified) / value};
}

struct Sharpness {
  double bound = 0.0;
  double actual = 0.0;
  double gap = 0.0;
};

/// Compares the resolvent of the extremal T*(lambda, n) at real zeta with
/// the spectral bound for sigma = {lambda}^n.
inline Sharpness certify_sharpness_theorem1(double lambda, int n, double zeta) {
  if (std::abs(zeta - lambda) <= kSpectrumTolerance) {
    throw Error(ErrorCode::spectrum_collision, "zeta = lambda");
  }
  if (!(std::abs(zeta) <= 1.0)) throw Error(ErrorCode::out_of_domain, "needs zeta in [-1, 1]");
  const double actual = spectral_norm(resolvent(extremal_T_star(lambda, n), zeta));
  const double bound = bound_theorem1(Spectrum::single(lambda, n), zeta).bound_value;
  return {bound, actual, std::abs(bound - actual) / bound};
}

// ---------------------------------------------------------------------------
// Audit against random contractions.

/// Relative slack allowed before an audited resolvent counts as a violation.
inline constexpr double kAuditSlack = 1e-8;
/// Pseudo-hyperbolic floor for sampled zeta; keeps 1/r^n finite.
inline constexpr double kAuditDistanceFloor = 0.05;
inline constexpr double kAuditEuclidFloor = 1e-6;
inline constexpr double kTightTolerance = 1e-8;
inline constexpr int kHistogramBins = 20;

struct AuditRecord {
  double actual = 0.0;
  double theorem1 = 0.0;
  std::optional<double> theorem3;
  std::optional<double> prop2;
  int violations = 0;
  bool theorem1_tight = false;
  bool prop2_tight = false;
};

namespace detail {

inline bool exceeds(double actual, double bound) { return actual > bound * (1.0 + kAuditSlack); }

inline bool tight(double actual, double bound) {
  return std::abs(bound - actual) <= kTightTolerance * bound;
}

}  // namespace detail

/// Checks one (T, zeta) against every bound whose domain contains zeta.
/// bound_theorem1 uses deg = n; bound_prop2 applies only to unimodular spectra.
inline AuditRecord audit_single(const DenseComplexMatrix& t, Complex zeta) {
  const auto spectrum = Spectrum::from_values(eigenvalues(t), 1e-9);
  AuditRecord rec;
  rec.actual = spectral_norm(resolvent(t, zeta));
  if (std::abs(zeta) <= 1.0 + kDiskSlack) {
    rec.theorem1 = bound_theorem1(spectrum, zeta).bound_value;
    rec.violations += detail::exceeds(rec.actual, rec.theorem1);
    rec.theorem1_tight = detail::tight(rec.actual, rec.theorem1);
  }
  if (std::abs(zeta) < 1.0) {
    rec.theorem3 = bound_theorem3(spectrum, zeta).bound_value;
    rec.violations += detail::exceeds(rec.actual, *rec.theorem3);
  }
  if (spectrum.all_unimodular(kUnimodularTolerance)) {
    rec.prop2 = bound_prop2(spectrum, zeta).bound_value;
    rec.violations += detail::exceeds(rec.actual, *rec.prop2);
    rec.prop2_tight = detail::tight(rec.actual, *rec.prop2);
  }
  return rec;
}

struct AuditTrial {
  Complex zeta;
  AuditRecord record;
};

struct AuditSummary {
  int n = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  int violations = 0;
  int skipped = 0;  // no admissible zeta found
  double min_tightness = 0.0;  // actual / theorem1 bound
  double max_tightness = 0.0;
  double mean_tightness = 0.0;
  int tight_count = 0;
  std::array<int, kHistogramBins> histogram{};  // tightness in [k/20, (k+1)/20)
  std::vector<AuditTrial> trials_detail;
};

namespace detail {

/// G / (||G|| (1 + 1e-9)) for complex Gaussian G.
inline DenseComplexMatrix random_contraction(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  DenseComplexMatrix m(std::move(g));
  const double scale = spectral_norm(m) * (1.0 + 1e-9);
  return (1.0 / Complex(scale)) * m;
}

inline std::optional<Complex> sample_zeta(const std::vector<Complex>& spectrum,
                                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Complex zeta = std::polar(std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
    const bool ok = std::all_of(spectrum.begin(), spectrum.end(), [&](Complex lambda) {
      if (std::abs(zeta - lambda) < kAuditEuclidFloor) return false;
      const double denom = std::abs(1.0 - std::conj(lambda) * zeta);
      return denom > 0.0 && std::abs(zeta - lambda) / denom >= kAuditDistanceFloor;
    });
    if (ok) return zeta;
  }
  return std::nullopt;
}

}  // namespace detail

/// Samples `trials` random contractions of size n and checks each against the
/// bounds at a random admissible zeta. Trial k draws from a generator seeded
/// by (seed, k), so the summary is independent of the thread count.
inline AuditSummary random_contraction_audit(int n, int trials, std::uint64_t seed) {
  if (n < 1 || n > 16) throw Error(ErrorCode::out_of_domain, "audit needs 1 <= n <= 16");
  if (trials < 1) throw Error(ErrorCode::out_of_domain, "audit needs trials >= 1");

  std::vector<std::optional<AuditTrial>> slots(static_cast<std::size_t>(trials));
  parallel_for(slots.size(), [&](std::size_t k) {
    std::mt19937_64 rng(stream_seed(seed, k));
    const auto t = detail::random_contraction(n, rng);
    const auto zeta = detail::sample_zeta(eigenvalues(t), rng);
    if (zeta) slots[k] = AuditTrial{*zeta, audit_single(t, *zeta)};
  });

  AuditSummary sum;
  sum.n = n;
  sum.trials = trials;
  sum.seed = seed;
  sum.min_tightness = std::numeric_limits<double>::infinity();
  sum.max_tightness = 0.0;
  double total = 0.0;
  int used = 0;
  for (auto& slot : slots) {
    if (!slot) {
      ++sum.skipped;
      continue;
    }
    const auto& rec = slot->record;
    sum.violations += rec.violations;
    const double ratio = rec.actual / rec.theorem1;
    sum.min_tightness = std::min(sum.min_tightness, ratio);
    sum.max_tightness = std::max(sum.max_tightness, ratio);
    total += ratio;
    ++used;
    sum.tight_count += rec.theorem1_tight;
    const int bin = std::clamp(static_cast<int>(ratio * kHistogramBins), 0, kHistogramBins - 1);
    ++sum.histogram[static_cast<std::size_t>(bin)];
    sum.trials_detail.push_back(std::move(*slot));
  }
  if (used == 0) sum.min_tightness = 0.0;
  sum.mean_tightness = used ? total / used : 0.0;
  return sum;
}

}  // namespace resolvent_bounds
