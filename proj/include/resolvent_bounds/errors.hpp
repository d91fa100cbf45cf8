#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace resolvent_bounds {

enum class ErrorCode {
  invalid_argument,
  non_finite,
  not_square,
  not_hermitian,
  spectrum_collision,
  degenerate_pair,
  out_of_domain,
  pole_hit,
  boundary_zero,
  invalid_spectrum,
  degenerate_beta,
  no_root_found,
  hypothesis_violated,
  grid_too_coarse,
  not_unimodular,
  not_unimodular_zeta,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::non_finite: return "NonFinite";
    case ErrorCode::not_square: return "NotSquare";
    case ErrorCode::not_hermitian: return "NotHermitian";
    case ErrorCode::spectrum_collision: return "SpectrumCollision";
    case ErrorCode::degenerate_pair: return "DegeneratePair";
    case ErrorCode::out_of_domain: return "OutOfDomain";
    case ErrorCode::pole_hit: return "PoleHit";
    case ErrorCode::boundary_zero: return "BoundaryZero";
    case ErrorCode::invalid_spectrum: return "InvalidSpectrum";
    case ErrorCode::degenerate_beta: return "DegenerateBeta";
    case ErrorCode::no_root_found: return "NoRootFound";
    case ErrorCode::hypothesis_violated: return "HypothesisViolated";
    case ErrorCode::grid_too_coarse: return "GridTooCoarse";
    case ErrorCode::not_unimodular: return "NotUnimodular";
    case ErrorCode::not_unimodular_zeta: return "NotUnimodularZeta";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace resolvent_bounds
