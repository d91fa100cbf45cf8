#pragma once

// The extremal analytic Toeplitz matrix X_{r,beta}: construction, its norm by
// two independent routes, and the root structure of its characteristic
// equation.
//
// Notation used below, with x = lambda^2, s = r^{2n-2}, b = beta - 1:
//   mu    = x + s b
//   gamma = -x (r + 1/r) + s (r + b^2/r)
//   Q(x)  = r T_n + (x - s b^2) T_{n-1},  T_0 = 1, T_1 = gamma,
//           T_k = gamma T_{k-1} - mu^2 T_{k-2}
// Q is a degree-n polynomial whose roots are the squared eigenvalues of the
// Hankel flip X J, and det(X~^2 - x I) = Q(x) / r^{n+1}. Substituting
// c = gamma / (2 mu) gives Q = r mu^n G(c) with the pole-free
//   G(c) = U_n(c) + kappa(c) U_{n-1}(c),
//   kappa(c) = (r (2 - beta) - 2 b c) / (r^2 + b).
// Roots with |c| < 1 are the trigonometric roots c = cos(theta); the rest lie
// on c = cosh(theta) or c = -cosh(theta).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "resolvent_bounds/chebyshev.hpp"
#include "resolvent_bounds/errors.hpp"
#include "resolvent_bounds/linalg.hpp"

namespace resolvent_bounds {

/// Absolute band used for every equality test on (r, beta): root-count cases,
/// the degenerate line beta = 1 - r^2 and the r = 1 closed forms.
inline constexpr double kParamTolerance = 1e-12;
/// Width of the band around beta = 1 - r^2 where the characteristic route
/// is not trusted and the dispatcher uses the eigensolver.
inline constexpr double kNearDegenerateBand = 1e-3;
inline constexpr double kThetaTolerance = 1e-13;
inline constexpr int kMinProbesPerBranch = 32;
inline constexpr double kThetaMaxCeiling = 80.0;

class ExtremalParams {
 public:
  ExtremalParams(int n, double r, double beta) : n_(n), r_(r), beta_(beta) {
    if (n < 1) throw Error(ErrorCode::out_of_domain, "n must be >= 1");
    if (!(r > 0.0 && r <= 1.0)) {
      throw Error(ErrorCode::out_of_domain, "r must lie in (0, 1], got " + std::to_string(r));
    }
    if (!(beta >= 0.0 && beta <= 2.0)) {
      throw Error(ErrorCode::out_of_domain,
                  "beta must lie in [0, 2], got " + std::to_string(beta));
    }
  }

  int n() const noexcept { return n_; }
  double r() const noexcept { return r_; }
  double beta() const noexcept { return beta_; }

  /// |beta - (1 - r^2)|; zero on the line where the norm is exactly 1.
  double degeneracy() const noexcept { return std::abs(beta_ - (1.0 - r_ * r_)); }

 private:
  int n_;
  double r_;
  double beta_;
};

/// n x n lower-triangular Toeplitz matrix with r^{n-1} on the diagonal and
/// beta r^{n-1-k} on the k-th subdiagonal.
inline DenseComplexMatrix build_X(const ExtremalParams& p) {
  const auto n = static_cast<std::size_t>(p.n());
  std::vector<double> power(n);
  power[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) power[k] = power[k - 1] * p.r();
  DenseComplexMatrix x(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, i) = power[n - 1];
    for (std::size_t j = 0; j < i; ++j) x(i, j) = p.beta() * power[n - 1 - (i - j)];
  }
  return x;
}

/// m J: columns in reverse order.
inline DenseComplexMatrix hankel_flip(const DenseComplexMatrix& m) {
  detail::require_square(m, "hankel_flip");
  return DenseComplexMatrix(Eigen::MatrixXcd(m.eigen().rowwise().reverse()));
}

/// Largest |eigenvalue| of the real symmetric Hankel flip.
inline double xnorm_oracle(const ExtremalParams& p) {
  return std::abs(hermitian_eigen(hankel_flip(build_X(p))).values.front());
}

/// Squared Frobenius norm of X; an upper bound for every eigenvalue of X~^2.
inline double frobenius_sq(const ExtremalParams& p) {
  const double r2 = p.r() * p.r();
  double sub = 0.0;  // sum_{k=1}^{n-1} (n - k) r^{2(n-1-k)}
  double power = 1.0;
  for (int k = p.n() - 1; k >= 1; --k) {
    sub += (p.n() - k) * power;
    power *= r2;
  }
  return p.n() * std::pow(r2, p.n() - 1) + p.beta() * p.beta() * sub;
}

// ---------------------------------------------------------------------------
// Root counting for the trigonometric branch.

enum class RootCase {
  unit_radius,          // r = 1
  r_is_one_minus_beta,  // r = 1 - beta
  r_is_beta_minus_one,  // r = beta - 1
  beta_in_1_1pr,        // 1 < beta < 1 + r
  beta_above_1pr,       // beta > 1 + r
  beta_in_1mr2_1,       // 1 - r^2 < beta < 1
  beta_below_1mr,       // beta < 1 - r
  beta_in_1mr_1mr2,     // 1 - r < beta < 1 - r^2
  beta_is_one,          // beta = 1
};

constexpr std::string_view root_case_label(RootCase c) noexcept {
  switch (c) {
    case RootCase::unit_radius: return "1";
    case RootCase::r_is_one_minus_beta: return "2a";
    case RootCase::r_is_beta_minus_one: return "2b";
    case RootCase::beta_in_1_1pr: return "3a";
    case RootCase::beta_above_1pr: return "3b";
    case RootCase::beta_in_1mr2_1: return "4a";
    case RootCase::beta_below_1mr: return "4b-i";
    case RootCase::beta_in_1mr_1mr2: return "4b-ii";
    case RootCase::beta_is_one: return "5";
  }
  return "?";
}

struct TrigRootPrediction {
  RootCase root_case;
  /// Solutions in [-pi, pi); the scan over (0, pi) sees half of them.
  int count = 0;
  /// Threshold past which the root near theta = pi leaves the unit interval.
  std::optional<double> threshold_pi;
  /// Threshold past which the root near theta = 0 leaves (3b and 4b-i only).
  std::optional<double> threshold_zero;
  /// threshold_zero < threshold_pi. Fails throughout beta_above_1pr except at
  /// beta = 2, where the thresholds coincide; the count does not rely on it.
  bool ordering_holds = true;
};

namespace detail {

inline void require_root_count_hypothesis(const ExtremalParams& p) {
  if (!(p.beta() > 0.0)) {
    throw Error(ErrorCode::hypothesis_violated, "root counting needs beta in (0, 2]");
  }
  if (p.degeneracy() <= kParamTolerance) {
    throw Error(ErrorCode::hypothesis_violated, "root counting needs beta - 1 + r^2 != 0");
  }
}

}  // namespace detail

inline TrigRootPrediction predict_trig_roots(const ExtremalParams& p) {
  detail::require_root_count_hypothesis(p);
  const int n = p.n();
  const double r = p.r();
  const double beta = p.beta();
  const double lead = beta - 1.0 + r * r;
  TrigRootPrediction out{RootCase::unit_radius, 0, std::nullopt, std::nullopt, true};

  // Ties (n equal to a threshold) take the larger count.
  auto one_threshold = [&](RootCase c, double t) {
    out.root_case = c;
    out.threshold_pi = t;
    out.count = n > t ? 2 * n - 2 : 2 * n;
  };
  auto two_thresholds = [&](RootCase c, double t_pi, double t_zero) {
    out.root_case = c;
    out.threshold_pi = t_pi;
    out.threshold_zero = t_zero;
    out.ordering_holds = t_zero < t_pi;
    out.count = std::max(0, 2 * (n - 2) + (n <= t_pi ? 2 : 0) + (n <= t_zero ? 2 : 0));
  };

  if (std::abs(r - 1.0) <= kParamTolerance) {
    out.root_case = RootCase::unit_radius;
    out.count = 2 * n;
  } else if (std::abs(r - (1.0 - beta)) <= kParamTolerance) {
    out.root_case = RootCase::r_is_one_minus_beta;
    out.count = 2 * n - 2;
  } else if (std::abs(r - (beta - 1.0)) <= kParamTolerance) {
    one_threshold(RootCase::r_is_beta_minus_one, beta / (2.0 * (2.0 - beta)));
  } else if (std::abs(beta - 1.0) <= kParamTolerance) {
    one_threshold(RootCase::beta_is_one, r / (1.0 - r));
  } else {
    const double t_pi = lead / ((1.0 - r) * (r + beta - 1.0));
    if (beta > 1.0) {
      if (beta < 1.0 + r) {
        one_threshold(RootCase::beta_in_1_1pr, t_pi);
      } else {
        two_thresholds(RootCase::beta_above_1pr, t_pi, lead / ((1.0 + r) * (beta - 1.0 - r)));
      }
    } else if (beta > 1.0 - r * r) {
      one_threshold(RootCase::beta_in_1mr2_1, t_pi);
    } else if (beta < 1.0 - r) {
      two_thresholds(RootCase::beta_below_1mr, t_pi, lead / ((1.0 + r) * (beta - 1.0 - r)));
    } else {
      out.root_case = RootCase::beta_in_1mr_1mr2;
      out.count = 2 * n - 2;
    }
  }
  return out;
}

inline int count_trig_roots(const ExtremalParams& p) { return predict_trig_roots(p).count; }

// ---------------------------------------------------------------------------
// The characteristic polynomial and its three parametrizations.

class CharacteristicEquation {
 public:
  explicit CharacteristicEquation(const ExtremalParams& p)
      : n_(p.n()), r_(p.r()), b_(p.beta() - 1.0), s_(std::pow(p.r(), 2 * p.n() - 2)),
        lead_(p.r() * p.r() + p.beta() - 1.0), beta_(p.beta()) {}

  int n() const noexcept { return n_; }
  double r() const noexcept { return r_; }

  double mu(double x) const noexcept { return x + s_ * b_; }
  double gamma(double x) const noexcept {
    return -x * (r_ + 1.0 / r_) + s_ * (r_ + b_ * b_ / r_);
  }

  double kappa(double c) const noexcept { return (r_ * (2.0 - beta_) - 2.0 * b_ * c) / lead_; }

  /// G(c); vanishes exactly at c = gamma/(2 mu) of a squared eigenvalue.
  double g(double c) const noexcept {
    return chebyshev_u(n_, c) + kappa(c) * chebyshev_u(n_ - 1, c);
  }

  /// Has the sign of G(cosh t).
  double cosh_plus(double t) const noexcept { return sinh_ratio(n_, t) + kappa(std::cosh(t)); }

  /// Has the sign of (-1)^n G(-cosh t) / U_{n-1}(cosh t).
  double cosh_minus(double t) const noexcept { return cosh_minus_offset(t - pole_theta(), t); }

  /// cosh_minus at t = pole_theta() + d, written so that it keeps full
  /// relative accuracy for tiny d:
  ///   sinh ratio = e^t + e^{-(2n-1)t} (1 - e^{-2t}) / (1 - e^{-2nt})
  ///   e^t - kappa(-cosh t) = r (expm1(d) - b expm1(-d)) / (r^2 + b).
  double cosh_minus_offset(double d, double t) const noexcept {
    const double head = r_ * (std::expm1(d) - b_ * std::expm1(-d)) / lead_;
    const double tail =
        std::exp(-(2.0 * n_ - 1.0) * t) * std::expm1(-2.0 * t) / std::expm1(-2.0 * n_ * t);
    return head + tail;
  }

  /// theta where -cosh(theta) is the pole of x(c): ln(1/r).
  double pole_theta() const noexcept { return -std::log(r_); }

  /// x(c); c = -(1 + r^2)/(2r) is a pole.
  double lambda_sq(double c) const noexcept {
    return s_ * (b_ * b_ + r_ * r_ - 2.0 * r_ * b_ * c) / (1.0 + r_ * r_ + 2.0 * r_ * c);
  }

  /// x(cos t) with both factors written as sums of nonnegative terms.
  double lambda_sq_trig(double t) const noexcept {
    const double ch = std::cos(0.5 * t);
    const double sh = std::sin(0.5 * t);
    const double numer = b_ >= 0.0 ? (b_ - r_) * (b_ - r_) + 4.0 * r_ * b_ * sh * sh
                                   : (b_ + r_) * (b_ + r_) - 4.0 * r_ * b_ * ch * ch;
    const double denom = (1.0 - r_) * (1.0 - r_) + 4.0 * r_ * ch * ch;
    return s_ * numer / denom;
  }

  double lambda_sq_cosh_plus(double t) const noexcept {
    const double sh = std::sinh(0.5 * t);
    const double numer = (b_ - r_) * (b_ - r_) - 4.0 * r_ * b_ * sh * sh;
    return s_ * numer / (1.0 + r_ * r_ + 2.0 * r_ * std::cosh(t));
  }

  /// x(-cosh t) at t = pole_theta() + d.
  double lambda_sq_cosh_minus(double d) const noexcept {
    const double em = std::expm1(d);
    const double emn = std::expm1(-d);
    const double numer = (b_ + 1.0) * (b_ + r_ * r_) + b_ * (em + r_ * r_ * emn);
    const double denom = -em - r_ * r_ * emn;
    return s_ * numer / denom;
  }

  double c_of_lambda_sq(double x) const noexcept {
    return (s_ * (b_ * b_ + r_ * r_) - x * (1.0 + r_ * r_)) / (2.0 * r_ * (x + s_ * b_));
  }

  double pole() const noexcept { return -(1.0 + r_ * r_) / (2.0 * r_); }

  /// Q(x) / w^n with w = |gamma| + |mu|; same sign as Q, never overflows.
  double scaled_q(double x) const noexcept { return scaled_terms(x).value; }

  /// |Q(x)| relative to the magnitude of its two terms.
  double relative_residual(double x) const noexcept {
    const auto t = scaled_terms(x);
    const double scale = t.magnitude;
    return scale == 0.0 ? 0.0 : std::abs(t.value) / scale;
  }

  /// det(X~^2 - x I) assembled from Chebyshev values at gamma/(2 mu).
  double chebyshev_det(double x) const {
    const double m = mu(x);
    const double c = gamma(x) / (2.0 * m);
    const double mn = std::pow(m, n_);
    const double rrr = mn * m * r_ * chebyshev_u(n_, c) +
                       mn * (x - s_ * b_ * b_) * chebyshev_u(n_ - 1, c);
    return rrr / (m * std::pow(r_, n_ + 1));
  }

 private:
  struct Terms {
    double value;
    double magnitude;
  };

  Terms scaled_terms(double x) const noexcept {
    const double m = mu(x);
    const double gm = gamma(x);
    const double w = std::abs(gm) + std::abs(m);
    if (w == 0.0) return {n_ == 1 ? x - s_ * b_ * b_ : 0.0, 1.0};
    const double g = gm / w;
    const double m2 = (m / w) * (m / w);
    double prev = 1.0;  // T_0 / w^0
    double cur = g;     // T_1 / w
    for (int k = 2; k <= n_; ++k) {
      const double next = g * cur - m2 * prev;
      prev = cur;
      cur = next;
    }
    // n = 1: cur = T_1/w, prev = T_0.
    const double a = r_ * cur;
    const double bterm = (x - s_ * b_ * b_) / w * prev;
    return {a + bterm, std::abs(a) + std::abs(bterm)};
  }

  int n_;
  double r_;
  double b_;
  double s_;
  double lead_;
  double beta_;
};

inline double theta_max_default(double r) { return std::max(5.0, std::log(4.0 / r)); }

/// |Q(x(cos theta))| relative to its terms: the residual of a trig root
/// pushed through the characteristic polynomial.
inline double char_eq_residual(const ExtremalParams& p, double theta) {
  const CharacteristicEquation eq(p);
  return eq.relative_residual(eq.lambda_sq(std::cos(theta)));
}

namespace detail {

enum class Branch { trig, cosh_plus, cosh_minus };

struct BranchRoot {
  Branch branch;
  double theta;
  double lambda_sq;
};

struct Bracket {
  double lo;
  double hi;
  double f_lo;
};

/// Bisects until `tol` or until the midpoint is no longer representable.
template <class F>
double bisect(const F& f, Bracket b, double tol) {
  for (int it = 0; it < 3000 && b.hi - b.lo > tol; ++it) {
    const double mid = 0.5 * (b.lo + b.hi);
    if (mid <= b.lo || mid >= b.hi) break;
    const double fm = f(mid);
    if ((fm < 0.0) == (b.f_lo < 0.0)) {
      b.lo = mid;
      b.f_lo = fm;
    } else {
      b.hi = mid;
    }
  }
  return 0.5 * (b.lo + b.hi);
}

/// Consecutive probes across which f changes sign (zero counts as positive).
template <class F>
std::vector<Bracket> sign_changes(const F& f, const std::vector<double>& probes) {
  std::vector<Bracket> out;
  double t_prev = probes.front();
  double f_prev = f(t_prev);
  for (std::size_t k = 1; k < probes.size(); ++k) {
    const double t = probes[k];
    const double ft = f(t);
    if ((ft < 0.0) != (f_prev < 0.0)) out.push_back({t_prev, t, f_prev});
    t_prev = t;
    f_prev = ft;
  }
  return out;
}

inline void require_distinct(const std::vector<BranchRoot>& roots) {
  for (std::size_t k = 1; k < roots.size(); ++k) {
    if (roots[k].branch == roots[k - 1].branch &&
        std::abs(roots[k].theta - roots[k - 1].theta) <= kThetaTolerance) {
      throw Error(ErrorCode::grid_too_coarse, "adjacent brackets converge to the same root");
    }
  }
}

inline std::vector<BranchRoot> trig_roots(const ExtremalParams& p, int grid) {
  require_root_count_hypothesis(p);
  const int n = p.n();
  if (grid < 8 * n) {
    throw Error(ErrorCode::grid_too_coarse,
                "grid " + std::to_string(grid) + " < 8n = " + std::to_string(8 * n));
  }
  const CharacteristicEquation eq(p);
  const int per_branch = std::max(kMinProbesPerBranch, (grid + n - 1) / n);
  std::vector<double> probes;
  probes.reserve(static_cast<std::size_t>(per_branch * n + 1));
  const double width = std::numbers::pi / n;
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < per_branch; ++j) probes.push_back(width * (k + double(j) / per_branch));
  }
  probes.push_back(std::numbers::pi);

  const auto f = [&](double t) { return eq.g(std::cos(t)); };
  std::vector<BranchRoot> out;
  for (const auto& br : sign_changes(f, probes)) {
    const double t = bisect(f, br, kThetaTolerance);
    // Endpoint hits are ties: they belong to [-pi, pi) but not to (0, pi).
    if (t <= 1e-12 || t >= std::numbers::pi - 1e-12) continue;
    out.push_back({Branch::trig, t, eq.lambda_sq_trig(t)});
  }
  require_distinct(out);
  return out;
}

inline std::vector<BranchRoot> hyperbolic_roots(const ExtremalParams& p, double theta_max) {
  const CharacteristicEquation eq(p);
  const int count = std::max(2048, 64 * p.n());
  std::vector<double> probes;
  probes.reserve(static_cast<std::size_t>(count + 1));
  probes.push_back(1e-9);
  for (int k = 1; k <= count; ++k) probes.push_back(theta_max * k / count);

  std::vector<BranchRoot> out;
  const auto plus = [&](double t) { return eq.cosh_plus(t); };
  for (const auto& br : sign_changes(plus, probes)) {
    const double t = bisect(plus, br, kThetaTolerance);
    out.push_back({Branch::cosh_plus, t, eq.lambda_sq_cosh_plus(t)});
  }
  // The -cosh root can sit within r^{2n} of the pole ln(1/r); refine the
  // offset d from the pole to full relative precision.
  const double tp = eq.pole_theta();
  const auto minus = [&](double d) { return eq.cosh_minus_offset(d, tp + d); };
  for (const auto& br : sign_changes([&](double t) { return eq.cosh_minus(t); }, probes)) {
    const double d = bisect(minus, {br.lo - tp, br.hi - tp, minus(br.lo - tp)}, 0.0);
    out.push_back({Branch::cosh_minus, tp + d, eq.lambda_sq_cosh_minus(d)});
  }
  require_distinct(out);
  return out;
}

}  // namespace detail

/// Roots of the trigonometric branch in (0, pi).
inline std::vector<double> scan_trig_roots(const ExtremalParams& p, int grid) {
  std::vector<double> out;
  for (const auto& root : detail::trig_roots(p, grid)) out.push_back(root.theta);
  return out;
}

struct HyperbolicRoots {
  std::vector<double> cosh_plus;
  std::vector<double> cosh_minus;
};

inline HyperbolicRoots solve_cosh_branches(const ExtremalParams& p,
                                           std::optional<double> theta_max = std::nullopt) {
  detail::require_root_count_hypothesis(p);
  HyperbolicRoots out;
  for (const auto& root : detail::hyperbolic_roots(p, theta_max.value_or(theta_max_default(p.r())))) {
    (root.branch == detail::Branch::cosh_plus ? out.cosh_plus : out.cosh_minus).push_back(root.theta);
  }
  return out;
}

struct RootCensus {
  int predicted_count = 0;
  std::string root_case;
  bool threshold_ordering_holds = true;
  std::vector<double> found_trig;
  std::vector<double> found_cosh_plus;
  std::vector<double> found_cosh_minus;
  /// One entry per candidate, sorted in decreasing order.
  std::vector<double> lambda_squares;
  bool mu_zero_root = false;
  double theta_max = 0.0;

  std::size_t candidate_count() const noexcept { return lambda_squares.size(); }
};

/// Collects every root of the characteristic equation from the three
/// branches. Theta_max grows (doubling, up to 80) until n candidates appear.
inline RootCensus root_census(const ExtremalParams& p, int grid = 0) {
  const auto prediction = predict_trig_roots(p);
  const auto n = static_cast<std::size_t>(p.n());

  RootCensus census;
  census.predicted_count = prediction.count;
  census.root_case = std::string(root_case_label(prediction.root_case));
  census.threshold_ordering_holds = prediction.ordering_holds;

  const auto trig = detail::trig_roots(p, std::max(grid, 8 * p.n()));
  std::vector<detail::BranchRoot> hyper;
  double theta_max = theta_max_default(p.r());
  while (true) {
    hyper = detail::hyperbolic_roots(p, theta_max);
    if (trig.size() + hyper.size() >= n || theta_max >= kThetaMaxCeiling) break;
    theta_max = std::min(2.0 * theta_max, kThetaMaxCeiling);
  }
  census.theta_max = theta_max;

  auto absorb = [&](const detail::BranchRoot& root) {
    switch (root.branch) {
      case detail::Branch::trig: census.found_trig.push_back(root.theta); break;
      case detail::Branch::cosh_plus: census.found_cosh_plus.push_back(root.theta); break;
      case detail::Branch::cosh_minus: census.found_cosh_minus.push_back(root.theta); break;
    }
    census.lambda_squares.push_back(root.lambda_sq);
  };
  for (const auto& root : trig) absorb(root);
  for (const auto& root : hyper) absorb(root);

  // mu = 0 is a root of Q only on the excluded lines beta = 0, beta = 1 - r^2.
  const double x0 = -std::pow(p.r(), 2 * p.n() - 2) * (p.beta() - 1.0);
  if (x0 >= 0.0 && (p.beta() <= kParamTolerance || p.degeneracy() <= kParamTolerance)) {
    census.mu_zero_root = true;
    census.lambda_squares.push_back(x0);
  }
  std::sort(census.lambda_squares.begin(), census.lambda_squares.end(), std::greater<>());
  return census;
}

/// Norm from the largest root of the characteristic equation.
inline double xnorm_char_eq(const ExtremalParams& p) {
  if (p.degeneracy() <= kParamTolerance) {
    throw Error(ErrorCode::degenerate_beta, "beta = 1 - r^2: the norm is exactly 1");
  }
  const auto census = root_census(p);
  if (census.candidate_count() < static_cast<std::size_t>(p.n())) {
    throw Error(ErrorCode::no_root_found,
                "found " + std::to_string(census.candidate_count()) + " of " +
                    std::to_string(p.n()) + " eigenvalue candidates");
  }
  return std::sqrt(std::max(0.0, census.lambda_squares.front()));
}

/// Closed forms: the degenerate line, and r = 1 with beta in {0, 1, 2}.
inline std::optional<double> xnorm_closed_form(const ExtremalParams& p) {
  if (p.degeneracy() <= kParamTolerance) return 1.0;
  if (std::abs(p.r() - 1.0) > kParamTolerance) return std::nullopt;
  const double n = p.n();
  if (std::abs(p.beta() - 1.0) <= kParamTolerance) {
    return 1.0 / (2.0 * std::sin(std::numbers::pi / (4.0 * n + 2.0)));
  }
  if (std::abs(p.beta() - 2.0) <= kParamTolerance) return 1.0 / std::tan(std::numbers::pi / (4.0 * n));
  return std::nullopt;
}

enum class XNormMethod { oracle, char_eq, closed_form };

constexpr std::string_view to_string(XNormMethod m) noexcept {
  switch (m) {
    case XNormMethod::oracle: return "oracle";
    case XNormMethod::char_eq: return "char_eq";
    case XNormMethod::closed_form: return "closed_form";
  }
  return "?";
}

struct XNorm {
  double value = 0.0;
  XNormMethod method = XNormMethod::oracle;
  /// Inside the band around beta = 1 - r^2 where only the eigensolver is used.
  bool near_degenerate = false;
  /// The characteristic route was tried and failed.
  bool fell_back = false;
};

/// Preference: closed form, then the characteristic equation, then the
/// eigensolver.
inline XNorm xnorm(const ExtremalParams& p) {
  if (auto v = xnorm_closed_form(p)) return {*v, XNormMethod::closed_form};
  const bool near = p.degeneracy() < kNearDegenerateBand;
  if (p.beta() > 0.0 && !near) {
    try {
      return {xnorm_char_eq(p), XNormMethod::char_eq};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::no_root_found) throw;
      return {xnorm_oracle(p), XNormMethod::oracle, false, true};
    }
  }
  return {xnorm_oracle(p), XNormMethod::oracle, near, false};
}

/// Large-n limit beta / (1 - r^2).
inline double xnorm_limit(double r, double beta) {
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::out_of_domain, "limit needs r in (0, 1)");
  if (beta < 1.0 - r * r - kParamTolerance || beta > 2.0) {
    throw Error(ErrorCode::out_of_domain, "limit needs 1 - r^2 <= beta <= 2");
  }
  return beta / (1.0 - r * r);
}

/// beta_max / (1 - r^2), valid for every n once beta <= beta_max.
inline double xnorm_upper_bound(const ExtremalParams& p, double beta_max) {
  const double r = p.r();
  if (!(r < 1.0)) throw Error(ErrorCode::out_of_domain, "upper bound needs r in (0, 1)");
  if (p.beta() < 1.0 - r * r - kParamTolerance || p.beta() > beta_max + kParamTolerance ||
      beta_max > 2.0) {
    throw Error(ErrorCode::out_of_domain, "upper bound needs 1 - r^2 <= beta <= beta_max <= 2");
  }
  return beta_max / (1.0 - r * r);
}

// ---------------------------------------------------------------------------
// Three evaluations of det(X~^2 - lambda^2 I).

/// X^T X, which is J X~^2 J, written entrywise with explicit geometric sums.
inline Eigen::MatrixXd gram_closed_form(const ExtremalParams& p) {
  const int n = p.n();
  const double r = p.r();
  const double beta = p.beta();
  const double s = std::pow(r, 2 * n - 2);
  Eigen::MatrixXd g(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      double tail = 0.0;  // sum_{m=0}^{n-j-1} r^{2m}
      double power = 1.0;
      for (int m = 0; m < n - j; ++m) {
        tail += power;
        power *= r * r;
      }
      double v = beta * beta * std::pow(r, i + j - 2) * tail;
      v += i == j ? s : beta * std::pow(r, 2 * n - 2 - (j - i));
      g(i - 1, j - 1) = v;
      g(j - 1, i - 1) = v;
    }
  }
  return g;
}

struct DeterminantRoutes {
  double lambda = 0.0;
  double direct = 0.0;     // from X~ X~ built numerically
  double gram = 0.0;       // from the closed-form entries of X^T X
  double chebyshev = 0.0;  // from the tridiagonal reduction
  double discrepancy = 0.0;
};

namespace detail {

inline double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace detail

inline DeterminantRoutes determinant_routes(const ExtremalParams& p, double lambda) {
  const double x = lambda * lambda;
  const auto n = static_cast<Eigen::Index>(p.n());
  const auto xt = hankel_flip(build_X(p));
  const Eigen::MatrixXd sq = (xt.eigen() * xt.eigen()).real();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);

  DeterminantRoutes out;
  out.lambda = lambda;
  out.direct = (sq - x * id).partialPivLu().determinant();
  out.gram = (gram_closed_form(p) - x * id).partialPivLu().determinant();
  out.chebyshev = CharacteristicEquation(p).chebyshev_det(x);
  out.discrepancy = std::max({detail::relative_gap(out.direct, out.gram),
                              detail::relative_gap(out.direct, out.chebyshev),
                              detail::relative_gap(out.gram, out.chebyshev)});
  return out;
}

/// Largest three-way discrepancy over `count` random lambda in
/// [0, 1.5 ||X|| + 0.5]. Draws within 1e-4 (relative) of a squared
/// eigenvalue, or with mu = 0, are redrawn.
inline double appendix_det_identity(const ExtremalParams& p, int count, std::uint64_t seed = 0) {
  if (count < 1) throw Error(ErrorCode::invalid_argument, "count must be >= 1");
  const auto spectrum = hermitian_eigen(hankel_flip(build_X(p))).values;
  const double norm = std::abs(spectrum.front());
  const double scale = std::max(1.0, norm * norm);
  const double s = std::pow(p.r(), 2 * p.n() - 2);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> draw(0.0, 1.5 * norm + 0.5);
  double worst = 0.0;
  for (int k = 0; k < count;) {
    const double lambda = draw(rng);
    const double x = lambda * lambda;
    const bool near_eigen = std::any_of(spectrum.begin(), spectrum.end(), [&](double e) {
      return std::abs(e * e - x) < 1e-4 * scale;
    });
    if (near_eigen || std::abs(x + s * (p.beta() - 1.0)) < 1e-4 * scale) continue;
    worst = std::max(worst, determinant_routes(p, lambda).discrepancy);
    ++k;
  }
  return worst;
}

}  // namespace resolvent_bounds
