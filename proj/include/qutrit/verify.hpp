// Self-verification suite behind `qutrit_tp verify`: basis identities,
// decomposition of the clubbed state, and retrieval by the correction sets.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qutrit/audit.hpp"
#include "qutrit/protocol.hpp"
#include "qutrit/states.hpp"

namespace qutrit {

struct Check {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;

  friend bool operator==(const Check&, const Check&) = default;
};

struct VerifyReport {
  std::vector<Check> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
  }

  friend bool operator==(const VerifyReport&, const VerifyReport&) = default;
};

struct VerifyOptions {
  /// Restricts the retrieval block to one channel; both when empty.
  std::optional<ChannelKind> channel;
  /// Test hook: perturbs the printed U_k for this outcome before the retrieval block.
  std::optional<int> corrupt_outcome;
};

/// max || phi (x) chi - sum_k Psi^k (x) raw_k || over the probe set, with raw_k
/// rebuilt as ||raw_k|| times the normalized branch.
inline double decomposition_residual(ChannelKind kind) {
  double worst = 0.0;
  for (const auto& phi : audit_probes()) {
    const Ket xi = club(phi, kind);
    std::vector<Complex> sum(27);
    for (int k = 0; k < 9; ++k) {
      const Ket raw = collapsed_state(kind, k, phi);
      const double w = raw.norm();
      if (w == 0.0) continue;
      const Ket term = tensor(leslie_basis()[k], raw.normalized().scaled(w));
      for (std::size_t i = 0; i < 27; ++i) sum[i] += term[i];
    }
    double d = 0.0;
    for (std::size_t i = 0; i < 27; ++i) d += std::norm(sum[i] - xi[i]);
    worst = std::max(worst, std::sqrt(d));
  }
  return worst;
}

inline VerifyReport run_verification(const VerifyOptions& opts = {}) {
  VerifyReport rep;
  auto add = [&](std::string name, double residual, double tolerance) {
    rep.checks.push_back({std::move(name), residual <= tolerance, residual, tolerance});
  };
  const auto& basis = leslie_basis();

  for (int k = 0; k < 9; ++k) {
    double d = 0.0;
    for (int j = 0; j < 9; ++j) d = std::max(d, std::abs(inner(basis[k], basis[j]) - (j == k ? 1.0 : 0.0)));
    add("leslie.orthonormal[" + std::to_string(k) + "]", d, tol::equality);
  }
  {
    Operator sum(9);
    for (const auto& psi : basis) {
      const Operator p = Operator::projector(psi);
      for (std::size_t r = 0; r < 9; ++r)
        for (std::size_t c = 0; c < 9; ++c) sum(r, c) += p(r, c);
    }
    add("leslie.completeness", (sum - Operator::identity(9)).max_abs(), tol::equality);
  }
  for (int b = 0; b < 3; ++b)
    for (int c = 0; c < 3; ++c) {
      std::vector<Complex> v(9);
      for (const auto& t : computational_from_leslie(b, c))
        for (std::size_t i = 0; i < 9; ++i) v[i] += t.coefficient * basis[t.k][i];
      const Ket target = Ket::basis({static_cast<std::size_t>(b), static_cast<std::size_t>(c)});
      double d = 0.0;
      for (std::size_t i = 0; i < 9; ++i) d = std::max(d, std::abs(v[i] - target[i]));
      add("reexpression.reconstruct[" + std::to_string(b) + std::to_string(c) + "]", d, tol::equality);
    }
  for (const auto kind : all_channels) {
    add("decomposition[" + to_string(kind) + "]", decomposition_residual(kind), tol::equality);
    double d = 0.0;
    for (const auto& phi : audit_probes()) {
      double s = 0.0;
      for (double p : outcome_distribution(phi, kind)) s += p;
      d = std::max(d, std::abs(s - 1.0));
    }
    add("born.completeness[" + to_string(kind) + "]", d, tol::equality);
  }

  const bool do_u = !opts.channel || *opts.channel == ChannelKind::U;
  const bool do_nu = !opts.channel || *opts.channel == ChannelKind::NU;
  if (do_u) {
    for (int k = 0; k < 9; ++k) {
      Operator u = paper_correction(ChannelKind::U, k).op;
      if (opts.corrupt_outcome == k) u = u * Operator::diagonal(std::array<Complex, 3>{omega(1), 1.0, 1.0});
      // Printed U_k on the normalized projection must reproduce phi exactly.
      const auto r = check_retrieval(u, [&](const UnknownQutrit& phi) { return collapsed_state(ChannelKind::U, k, phi).normalized(); });
      add("retrieval.u.printed[" + std::to_string(k) + "]", r.exact_residual, tol::audit);
    }
  }
  for (const auto kind : all_channels) {
    if ((kind == ChannelKind::U && !do_u) || (kind == ChannelKind::NU && !do_nu)) continue;
    for (int k = 0; k < 9; ++k) {
      const auto r = check_retrieval(synthesize_correction(kind, k).op,
                                     [&](const UnknownQutrit& phi) { return collapsed_state(kind, k, phi); });
      const double residual = r.holds_proportionally && r.best_fit_c.real() > 0.0 ? std::max(r.proportional_residual, r.c_spread)
                                                                                   : std::max(1.0, r.proportional_residual);
      add("retrieval." + to_string(kind) + ".synthesized[" + std::to_string(k) + "]", residual, 1e-10);
    }
  }
  return rep;
}

}  // namespace qutrit
