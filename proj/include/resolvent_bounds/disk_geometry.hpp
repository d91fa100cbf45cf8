#pragma once

// Geometry of the closed unit disk: metrics, the Stolz-type quantity s(zeta,
// sigma), finite Blaschke products and spectra with multiplicity.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "resolvent_bounds/errors.hpp"
#include "resolvent_bounds/linalg.hpp"

namespace resolvent_bounds {

/// Slack on |lambda| <= 1 admitted for spectrum points.
inline constexpr double kDiskSlack = 1e-12;
/// Band within which a point counts as a minimizer of p(zeta, .) in s(zeta, sigma).
inline constexpr double kStolzTieTolerance = 1e-10;
/// |1 - conj(z) w| below this makes the pseudo-hyperbolic distance undefined.
inline constexpr double kDegeneratePairTolerance = 1e-14;

struct SpectralPoint {
  Complex value;
  int multiplicity = 1;
};

/// Finite multiset in the closed unit disk. Repeated eigenvalues are stored
/// once with a multiplicity; degree() is the sum of multiplicities.
class Spectrum {
 public:
  explicit Spectrum(std::vector<SpectralPoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw Error(ErrorCode::invalid_spectrum, "spectrum is empty");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto& p = points_[i];
      if (!std::isfinite(p.value.real()) || !std::isfinite(p.value.imag())) {
        throw Error(ErrorCode::invalid_spectrum, "non-finite eigenvalue");
      }
      if (p.multiplicity < 1) {
        throw Error(ErrorCode::invalid_spectrum, "multiplicity must be positive");
      }
      if (std::abs(p.value) > 1.0 + kDiskSlack) {
        throw Error(ErrorCode::invalid_spectrum,
                    "eigenvalue outside the closed unit disk, |lambda| = " +
                        std::to_string(std::abs(p.value)));
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (std::abs(points_[j].value - p.value) <= kSpectrumTolerance) {
          throw Error(ErrorCode::invalid_spectrum,
                      "distinct points closer than 1e-12; merge them into a multiplicity");
        }
      }
    }
  }

  static Spectrum single(Complex value, int multiplicity = 1) {
    return Spectrum({{value, multiplicity}});
  }

  /// Groups values that agree within `merge_tolerance` into one point.
  static Spectrum from_values(std::span<const Complex> values,
                              double merge_tolerance = kSpectrumTolerance) {
    std::vector<SpectralPoint> points;
    for (const Complex& v : values) {
      auto it = std::find_if(points.begin(), points.end(), [&](const SpectralPoint& p) {
        return std::abs(p.value - v) <= merge_tolerance;
      });
      if (it == points.end()) {
        points.push_back({v, 1});
      } else {
        ++it->multiplicity;
      }
    }
    return Spectrum(std::move(points));
  }

  const std::vector<SpectralPoint>& points() const noexcept { return points_; }

  int degree() const noexcept {
    return std::accumulate(points_.begin(), points_.end(), 0,
                           [](int acc, const SpectralPoint& p) { return acc + p.multiplicity; });
  }

  double spectral_radius() const noexcept {
    double rho = 0.0;
    for (const auto& p : points_) rho = std::max(rho, std::abs(p.value));
    return rho;
  }

  /// sigma-bar = { conj(lambda) }.
  Spectrum conjugated() const {
    auto pts = points_;
    for (auto& p : pts) p.value = std::conj(p.value);
    return Spectrum(std::move(pts));
  }

  /// { exp(i angle) lambda }.
  Spectrum rotated(double angle) const {
    auto pts = points_;
    const Complex phase = std::polar(1.0, angle);
    for (auto& p : pts) p.value *= phase;
    return Spectrum(std::move(pts));
  }

  bool all_unimodular(double tolerance) const noexcept {
    return std::all_of(points_.begin(), points_.end(), [&](const SpectralPoint& p) {
      return std::abs(std::abs(p.value) - 1.0) <= tolerance;
    });
  }

 private:
  std::vector<SpectralPoint> points_;
};

/// Finite Blaschke product with zeros (with repetition) in the open disk.
class BlaschkeProduct {
 public:
  explicit BlaschkeProduct(std::vector<Complex> zeros) : zeros_(std::move(zeros)) {
    if (zeros_.empty()) throw Error(ErrorCode::invalid_argument, "Blaschke product needs degree >= 1");
    for (const Complex& z : zeros_) {
      if (!(std::abs(z) < 1.0)) {
        throw Error(ErrorCode::boundary_zero,
                    "Blaschke zero with |nu| = " + std::to_string(std::abs(z)) + " >= 1");
      }
    }
  }

  static BlaschkeProduct power(Complex zero, int degree) {
    if (degree < 1) throw Error(ErrorCode::invalid_argument, "degree must be >= 1");
    return BlaschkeProduct(std::vector<Complex>(static_cast<std::size_t>(degree), zero));
  }

  const std::vector<Complex>& zeros() const noexcept { return zeros_; }
  int degree() const noexcept { return static_cast<int>(zeros_.size()); }

 private:
  std::vector<Complex> zeros_;
};

enum class Metric { euclidean, pseudo_hyperbolic };

inline double euclid_dist(Complex z, Complex w) { return std::abs(z - w); }

/// p(z, w) = |z - w| / |1 - conj(z) w|.
inline double pseudo_hyp_dist(Complex z, Complex w) {
  const double denom = std::abs(1.0 - std::conj(z) * w);
  if (denom < kDegeneratePairTolerance) {
    throw Error(ErrorCode::degenerate_pair, "1 - conj(z) w vanishes");
  }
  return std::abs(z - w) / denom;
}

/// Single Möbius factor b_nu(z) = (z - nu) / (1 - conj(nu) z).
inline Complex mobius(Complex nu, Complex z) {
  const Complex denom = 1.0 - std::conj(nu) * z;
  if (std::abs(denom) < kDegeneratePairTolerance) {
    throw Error(ErrorCode::pole_hit, "z is the pole 1/conj(nu) of a Blaschke factor");
  }
  return (z - nu) / denom;
}

namespace detail {

inline void require_off_spectrum(Complex zeta, const Spectrum& sigma) {
  for (const auto& p : sigma.points()) {
    if (std::abs(zeta - p.value) <= kSpectrumTolerance) {
      throw Error(ErrorCode::spectrum_collision, "zeta coincides with an eigenvalue");
    }
  }
}

}  // namespace detail

inline double dist_to_spectrum(Complex zeta, const Spectrum& sigma, Metric metric) {
  detail::require_off_spectrum(zeta, sigma);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : sigma.points()) {
    const double d = metric == Metric::euclidean ? euclid_dist(zeta, p.value)
                                                 : pseudo_hyp_dist(zeta, p.value);
    best = std::min(best, d);
  }
  return best;
}

/// s(zeta, sigma): the largest (1 - |lambda|^2) / |1 - conj(lambda) zeta|
/// among the points of sigma nearest to zeta in the pseudo-hyperbolic metric.
inline double stolz_s(Complex zeta, const Spectrum& sigma) {
  if (std::abs(zeta) > 1.0 + kDiskSlack) {
    throw Error(ErrorCode::out_of_domain, "s(zeta, sigma) needs |zeta| <= 1");
  }
  const double r = dist_to_spectrum(zeta, sigma, Metric::pseudo_hyperbolic);
  double s = 0.0;
  for (const auto& p : sigma.points()) {
    if (pseudo_hyp_dist(zeta, p.value) > r + kStolzTieTolerance) continue;
    const double weight = std::max(0.0, 1.0 - std::norm(p.value));
    s = std::max(s, weight / std::abs(1.0 - std::conj(p.value) * zeta));
  }
  return s;
}

inline Complex blaschke_eval(const BlaschkeProduct& b, Complex z) {
  Complex value{1.0, 0.0};
  for (const Complex& nu : b.zeros()) value *= mobius(nu, z);
  return value;
}

/// d(1, conj(sigma) zeta) = min over lambda of |1 - conj(lambda) zeta|.
inline double d1_sigmabar_zeta(Complex zeta, const Spectrum& sigma) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : sigma.points()) {
    best = std::min(best, std::abs(1.0 - std::conj(p.value) * zeta));
  }
  return best;
}

}  // namespace resolvent_bounds
