// Named qutrit states and correction operators: the two shared channels, the
// Leslie basis of maximally entangled two-qutrit states, Bob's conditional
// states after Alice's joint measurement, and the correction operators that
// recover the teleported qutrit (both as printed in the literature and
// synthesized from the projections).
#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qutrit/linalg.hpp"

namespace qutrit {

struct structure_error : std::logic_error {
  using std::logic_error::logic_error;
};

enum class ChannelKind { U, NU };

inline constexpr std::array<ChannelKind, 2> all_channels{ChannelKind::U, ChannelKind::NU};

inline std::string to_string(ChannelKind k) { return k == ChannelKind::U ? "u" : "nu"; }

inline ChannelKind parse_channel(std::string_view s) {
  if (s == "u" || s == "U") return ChannelKind::U;
  if (s == "nu" || s == "NU") return ChannelKind::NU;
  throw std::invalid_argument("unknown channel '" + std::string(s) + "' (expected u or nu)");
}

/// omega^p with omega = e^{2 pi i / 3}; exact cube roots, no trig round-off.
inline Complex omega(int p) {
  static constexpr double h = 0.86602540378443864676;  // sqrt(3)/2
  switch (((p % 3) + 3) % 3) {
    case 0: return {1.0, 0.0};
    case 1: return {-0.5, h};
    default: return {-0.5, -h};
  }
}

/// The qutrit Alice teleports: alpha|0> + beta|1> + gamma|2>.
class UnknownQutrit {
 public:
  enum class Normalization { require, automatic };

  UnknownQutrit(Complex alpha, Complex beta, Complex gamma, Normalization mode = Normalization::require)
      : c_{alpha, beta, gamma} {
    for (const auto& z : c_)
      if (!detail::finite(z)) throw numerical_error("UnknownQutrit: non-finite coefficient");
    const double n = std::sqrt(std::norm(c_[0]) + std::norm(c_[1]) + std::norm(c_[2]));
    if (n == 0.0) throw std::domain_error("UnknownQutrit: zero vector");
    if (mode == Normalization::automatic) {
      for (auto& z : c_) z /= n;
    } else if (std::abs(n - 1.0) > tol::audit) {
      throw contract_violation("UnknownQutrit: coefficients are not normalized");
    }
  }

  explicit UnknownQutrit(const std::array<Complex, 3>& c, Normalization mode = Normalization::require)
      : UnknownQutrit(c[0], c[1], c[2], mode) {}

  Complex alpha() const { return c_[0]; }
  Complex beta() const { return c_[1]; }
  Complex gamma() const { return c_[2]; }
  const std::array<Complex, 3>& coefficients() const { return c_; }
  Ket ket() const { return Ket::qutrit(c_[0], c_[1], c_[2]); }

 private:
  std::array<Complex, 3> c_;
};

inline Ket unknown_qutrit(Complex alpha, Complex beta, Complex gamma,
                          UnknownQutrit::Normalization mode = UnknownQutrit::Normalization::require) {
  return UnknownQutrit(alpha, beta, gamma, mode).ket();
}

/// Unnormalized Schmidt weights of the channel on |00>, |11>, |22>.
inline std::array<double, 3> channel_weights(ChannelKind kind) {
  if (kind == ChannelKind::U) return {1.0, 1.0, 1.0};
  return {-2.0, 1.0, 1.0};
}

inline Ket channel(ChannelKind kind) {
  const auto w = channel_weights(kind);
  const double n = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
  std::vector<Complex> amps(9);
  for (std::size_t t = 0; t < 3; ++t) amps[4 * t] = w[t] / n;
  return Ket({3, 3}, std::move(amps));
}

/// Leslie basis state k = 3s + p: sum_t omega^{p t} |t>|t+s mod 3> / sqrt(3).
inline Ket leslie_state(int k) {
  if (k < 0 || k > 8) throw std::domain_error("leslie_state: index must be in 0..8");
  const int shift = k / 3;
  const int phase = k % 3;
  const double r = 1.0 / std::numbers::sqrt3;
  std::vector<Complex> amps(9);
  for (int t = 0; t < 3; ++t) amps[3 * t + (t + shift) % 3] = omega(phase * t) * r;
  return Ket({3, 3}, std::move(amps));
}

inline const std::array<Ket, 9>& leslie_basis() {
  static const std::array<Ket, 9> basis = [] {
    std::array<Ket, 9> b;
    for (int k = 0; k < 9; ++k) b[k] = leslie_state(k);
    return b;
  }();
  return basis;
}

struct LeslieTerm {
  int k;
  Complex coefficient;
  friend bool operator==(const LeslieTerm&, const LeslieTerm&) = default;
};

/// Expansion of |b>|c> in the Leslie basis; coefficients are <Psi^k|bc>.
inline std::vector<LeslieTerm> computational_from_leslie(int b, int c) {
  if (b < 0 || b > 2 || c < 0 || c > 2) throw std::domain_error("computational_from_leslie: trit label out of range");
  const Ket bc = Ket::basis({static_cast<std::size_t>(b), static_cast<std::size_t>(c)});
  std::vector<LeslieTerm> terms;
  for (int k = 0; k < 9; ++k) {
    const Complex coeff = inner(leslie_basis()[k], bc);
    if (std::abs(coeff) > tol::equality) terms.push_back({k, coeff});
  }
  return terms;
}

/// Expansion of |b>|c> exactly as tabulated in the literature, for auditing.
inline std::vector<LeslieTerm> printed_reexpression(int b, int c) {
  if (b < 0 || b > 2 || c < 0 || c > 2) throw std::domain_error("printed_reexpression: trit label out of range");
  // (first k, omega powers on the three consecutive Psi^k)
  struct Row {
    int k0;
    std::array<int, 3> powers;
  };
  static constexpr std::array<std::array<Row, 3>, 3> table{{
      {{{0, {0, 0, 0}}, {3, {0, 0, 0}}, {6, {0, 0, 0}}}},  // |00> |01> |02>
      {{{6, {0, 2, 1}}, {0, {0, 2, 1}}, {3, {0, 2, 1}}}},  // |10> |11> |12>
      {{{3, {0, 1, 2}}, {6, {0, 1, 2}}, {0, {0, 1, 2}}}},  // |20> |21> |22>
  }};
  const Row& row = table[b][c];
  const double r = 1.0 / std::numbers::sqrt3;
  std::vector<LeslieTerm> terms;
  for (int i = 0; i < 3; ++i) terms.push_back({row.k0 + i, omega(row.powers[i]) * r});
  return terms;
}

/// Raw projection (<Psi^k|_{AB} (x) I_C)(phi (x) channel) on Bob's qutrit, unnormalized.
inline Ket collapsed_state(ChannelKind kind, int k, const UnknownQutrit& phi) {
  const Ket xi = tensor(phi.ket(), channel(kind));
  const Ket& psi = leslie_basis().at(static_cast<std::size_t>(k));
  std::array<Complex, 3> out{};
  for (std::size_t ab = 0; ab < 9; ++ab) {
    const Complex w = std::conj(psi[ab]);
    if (w == 0.0) continue;
    for (std::size_t c = 0; c < 3; ++c) out[c] += w * xi[3 * ab + c];
  }
  return Ket::qutrit(out[0], out[1], out[2]);
}

/// Global prefactor of the branch decomposition: 1/(sqrt(3) * ||weights||),
/// i.e. 1/3 for U and 1/sqrt(18) for NU.
inline double branch_prefactor(ChannelKind kind) {
  const auto w = channel_weights(kind);
  return 1.0 / (std::numbers::sqrt3 * std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]));
}

/// Collapsed state with the branch prefactor removed, matching the s^k / q^k convention.
inline Ket branch_state(ChannelKind kind, int k, const UnknownQutrit& phi) {
  return collapsed_state(kind, k, phi).scaled(1.0 / branch_prefactor(kind));
}

/// One output component of a monomial map: coefficient * phi[source].
struct MonomialTerm {
  std::size_t source;
  Complex coefficient;
};
using MonomialMap = std::array<MonomialTerm, 3>;

inline Ket evaluate(const MonomialMap& m, const UnknownQutrit& phi) {
  const auto& c = phi.coefficients();
  return Ket::qutrit(m[0].coefficient * c[m[0].source], m[1].coefficient * c[m[1].source],
                     m[2].coefficient * c[m[2].source]);
}

/// s^k (U) or q^k (NU) exactly as printed in the literature.
inline MonomialMap printed_branch_state(ChannelKind kind, int k) {
  if (k < 0 || k > 8) throw std::domain_error("printed_branch_state: outcome must be in 0..8");
  const Complex w = omega(1), w2 = omega(2);
  // clang-format off
  static const std::array<MonomialMap, 9> s{{
      {{{0, 1.0}, {1, 1.0}, {2, 1.0}}},
      {{{0, 1.0}, {1, w2}, {2, w}}},
      {{{0, 1.0}, {1, w}, {2, w2}}},
      {{{2, 1.0}, {0, 1.0}, {1, 1.0}}},
      {{{2, w}, {0, 1.0}, {1, w2}}},
      {{{2, w2}, {0, 1.0}, {1, w}}},
      {{{1, 1.0}, {2, 1.0}, {0, 1.0}}},
      {{{1, w2}, {2, w}, {0, 1.0}}},
      {{{1, w}, {2, w2}, {0, 1.0}}},
  }};
  static const std::array<MonomialMap, 9> q{{
      {{{0, -2.0}, {1, 1.0}, {2, 1.0}}},
      {{{0, -2.0}, {1, w2}, {2, w}}},
      {{{0, -2.0}, {1, w}, {2, w2}}},
      {{{2, 2.0}, {0, 1.0}, {1, 1.0}}},
      {{{2, -2.0 * w}, {0, 1.0}, {1, w2 / 2.0}}},
      {{{2, -2.0 * w2}, {0, 1.0}, {1, w}}},
      {{{1, -2.0}, {2, 1.0}, {0, 1.0}}},
      {{{1, -2.0 * w2}, {2, w}, {0, 1.0}}},
      {{{1, -2.0 * w}, {2, w2}, {0, 1.0}}},
  }};
  // clang-format on
  return kind == ChannelKind::U ? s[k] : q[k];
}

enum class Provenance { paper_printed, synthesized };

inline std::string to_string(Provenance p) { return p == Provenance::paper_printed ? "paper-printed" : "synthesized"; }

struct CorrectionOperator {
  ChannelKind kind;
  int outcome;
  Operator op;
  Provenance provenance;
};

namespace detail {

struct Entry {
  std::size_t row, col;
  Complex value;
};

inline Operator from_entries(std::initializer_list<Entry> entries) {
  Operator o(3);
  for (const auto& e : entries) o(e.row, e.col) = e.value;
  return o;
}

/// Linear map phi -> raw projection for outcome k, as a 3x3 matrix.
inline Operator projection_map(ChannelKind kind, int k) {
  Operator m(3);
  for (std::size_t i = 0; i < 3; ++i) {
    std::array<Complex, 3> e{};
    e[i] = 1.0;
    const Ket col = collapsed_state(kind, k, UnknownQutrit(e));
    for (std::size_t r = 0; r < 3; ++r) m(r, i) = col[r];
  }
  return m;
}

}  // namespace detail

/// U_k or NU_k exactly as printed in the literature.
inline CorrectionOperator paper_correction(ChannelKind kind, int k) {
  if (k < 0 || k > 8) throw std::domain_error("paper_correction: outcome must be in 0..8");
  using detail::from_entries;
  const Complex w = omega(1), w2 = omega(2);
  static const std::array<Operator, 9> u{
      from_entries({{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}}),
      from_entries({{0, 0, 1.0}, {1, 1, w}, {2, 2, w2}}),
      from_entries({{0, 0, 1.0}, {1, 1, w2}, {2, 2, w}}),
      from_entries({{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}}),
      from_entries({{0, 1, 1.0}, {1, 2, w}, {2, 0, w2}}),
      from_entries({{0, 1, 1.0}, {1, 2, w2}, {2, 0, w}}),
      from_entries({{0, 2, 1.0}, {1, 0, 1.0}, {2, 1, 1.0}}),
      from_entries({{0, 2, 1.0}, {1, 0, w}, {2, 1, w2}}),
      from_entries({{0, 2, 1.0}, {1, 0, w2}, {2, 1, w}}),
  };
  static const std::array<Operator, 9> nu{
      from_entries({{0, 0, -0.5}, {1, 1, 1.0}, {2, 2, 1.0}}),
      from_entries({{0, 0, -1.0}, {1, 1, 2.0 * w2}, {2, 2, w}}),
      from_entries({{0, 0, 0.5}, {1, 1, w}, {2, 2, w2}}),
      from_entries({{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, -0.5}}),
      from_entries({{0, 1, 2.0}, {1, 2, 2.0 * w2}, {2, 0, -w}}),
      from_entries({{0, 1, 1.0}, {1, 2, w}, {2, 0, -0.5 * w2}}),
      from_entries({{0, 2, 1.0}, {1, 0, -0.5}, {2, 1, 1.0}}),
      from_entries({{0, 2, 2.0}, {1, 0, -w2}, {2, 1, 2.0 * w2}}),
      from_entries({{0, 2, 1.0}, {1, 0, -0.5 * w}, {2, 1, w2}}),
  };
  return {kind, k, kind == ChannelKind::U ? u[k] : nu[k], Provenance::paper_printed};
}

/// Monomial operator O with O * collapsed_state(kind, k, phi) = c * phi for every phi,
/// c > 0 fixed, rescaled so the largest singular value of O is 1.
inline CorrectionOperator synthesize_correction(ChannelKind kind, int k) {
  if (k < 0 || k > 8) throw std::domain_error("synthesize_correction: outcome must be in 0..8");
  const Operator m = detail::projection_map(kind, k);
  if (!is_monomial(m)) throw structure_error("synthesize_correction: projection is not a scaled permutation of phi");
  Operator o(3);
  double largest = 0.0;
  for (std::size_t row = 0; row < 3; ++row)
    for (std::size_t src = 0; src < 3; ++src)
      if (std::abs(m(row, src)) > tol::equality) {
        o(src, row) = 1.0 / m(row, src);
        largest = std::max(largest, std::abs(o(src, row)));
      }
  return {kind, k, o.scaled(1.0 / largest), Provenance::synthesized};
}

/// The nine corrections for a channel, by provenance.
inline std::array<CorrectionOperator, 9> correction_set(ChannelKind kind, Provenance p) {
  std::array<CorrectionOperator, 9> out{};
  for (int k = 0; k < 9; ++k) out[k] = p == Provenance::paper_printed ? paper_correction(kind, k) : synthesize_correction(kind, k);
  return out;
}

}  // namespace qutrit
