// Entanglement of two-qutrit pure states: entropy of entanglement, Schmidt
// coefficients, negativity and the negativity-based teleportation fidelity.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qutrit/linalg.hpp"
#include "qutrit/states.hpp"

namespace qutrit {

namespace detail {

inline void require_two_qutrit_pure(const Ket& psi, const char* who) {
  if (psi.dims() != std::vector<std::size_t>{3, 3}) throw shape_error(std::string(who) + ": expected a two-qutrit ket");
  if (!psi.is_normalized(tol::audit)) throw contract_violation(std::string(who) + ": ket is not normalized");
}

/// Reduced-state spectrum with PSD drift clamped: [-1e-12, 0) -> 0, below -1e-10 is an error.
inline std::vector<double> reduced_spectrum(const Ket& psi, std::size_t keep) {
  const std::array<std::size_t, 2> dims{3, 3};
  auto eig = hermitian_eigenvalues(partial_trace(DensityMatrix::from_ket(psi), keep, dims).op());
  for (auto& e : eig) {
    if (e < -tol::hermitian) throw numerical_error("reduced state has a negative eigenvalue");
    if (e < 0.0) e = 0.0;
  }
  return eig;
}

}  // namespace detail

/// S = -sum lambda log2 lambda over the reduced state of factor `keep`.
inline double entropy_of_entanglement(const Ket& psi, std::size_t keep = 0) {
  detail::require_two_qutrit_pure(psi, "entropy_of_entanglement");
  double s = 0.0;
  for (double l : detail::reduced_spectrum(psi, keep))
    if (l > 0.0) s -= l * std::log2(l);
  return s;
}

inline std::array<double, 3> schmidt_coefficients(const Ket& psi) {
  detail::require_two_qutrit_pure(psi, "schmidt_coefficients");
  const auto eig = detail::reduced_spectrum(psi, 0);
  return {std::sqrt(eig[0]), std::sqrt(eig[1]), std::sqrt(eig[2])};
}

/// Sum of |negative eigenvalues| of the partial transpose: sum_j (|l_j| - l_j) / 2.
inline double negativity_from_spectrum(const Ket& psi) {
  const std::array<std::size_t, 2> dims{3, 3};
  const Operator pt = partial_transpose(DensityMatrix::from_ket(psi), 0, dims);
  double n = 0.0;
  for (double l : hermitian_eigenvalues(pt)) n += (std::abs(l) - l) / 2.0;
  return n;
}

/// Pure-state closed form sum_{i<j} c_i c_j.
inline double negativity_closed_form(const std::array<double, 3>& c) { return c[0] * c[1] + c[0] * c[2] + c[1] * c[2]; }

/// Negativity by the partial-transpose spectrum, cross-checked against the Schmidt closed form.
inline double negativity(const Ket& psi) {
  detail::require_two_qutrit_pure(psi, "negativity");
  const double spectral = negativity_from_spectrum(psi);
  const double closed = negativity_closed_form(schmidt_coefficients(psi));
  if (std::abs(spectral - closed) > tol::audit) throw numerical_error("negativity: spectral and Schmidt routes disagree");
  return spectral;
}

/// Negativity-based teleportation benchmark (1 + N) / 2.
inline double fidelity_from_negativity(double n) {
  if (!(n >= 0.0)) throw std::domain_error("fidelity_from_negativity: negativity must be non-negative");
  return (1.0 + n) / 2.0;
}

struct ChannelReport {
  ChannelKind kind = ChannelKind::U;
  double entropy_bits = 0.0;
  double negativity = 0.0;
  double fidelity_from_negativity = 0.0;
  std::array<double, 3> schmidt_coefficients{};
  // Values as tabulated in the literature.
  double printed_entropy = 0.0;
  double printed_fidelity = 0.0;

  friend bool operator==(const ChannelReport&, const ChannelReport&) = default;
};

inline ChannelReport channel_report(ChannelKind kind) {
  const Ket psi = channel(kind);
  ChannelReport r;
  r.kind = kind;
  r.entropy_bits = entropy_of_entanglement(psi);
  r.negativity = negativity(psi);
  r.fidelity_from_negativity = fidelity_from_negativity(r.negativity);
  r.schmidt_coefficients = schmidt_coefficients(psi);
  r.printed_entropy = kind == ChannelKind::U ? 1.585 : 1.252;
  r.printed_fidelity = kind == ChannelKind::U ? 1.0 : 0.9;
  return r;
}

inline std::vector<ChannelReport> table1() { return {channel_report(ChannelKind::U), channel_report(ChannelKind::NU)}; }

namespace table_tolerance {
inline constexpr double entropy = 1e-3;
inline constexpr double fidelity_exact = 1e-9;
// The tabulated 0.9 is 11/12 truncated to one decimal.
inline constexpr double fidelity_printed = 2e-2;
}  // namespace table_tolerance

}  // namespace qutrit
