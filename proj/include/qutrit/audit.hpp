// Retrieval audit: checks whether each correction operator maps Bob's
// collapsed state back to the teleported qutrit, exactly or up to a scalar.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qutrit/rng.hpp"
#include "qutrit/states.hpp"

namespace qutrit {

/// Bumped whenever the probe set changes, so stored audit reports stay comparable.
inline constexpr const char* probe_set_version = "probe-v1";
inline constexpr std::uint64_t probe_seed = 0x51A7E5EEDull;
inline constexpr int probe_random_count = 20;

/// |0>, |1>, |2>, the uniform superposition, then 20 seeded random qutrits.
inline const std::vector<UnknownQutrit>& audit_probes() {
  static const std::vector<UnknownQutrit> probes = [] {
    std::vector<UnknownQutrit> p;
    p.emplace_back(1.0, 0.0, 0.0);
    p.emplace_back(0.0, 1.0, 0.0);
    p.emplace_back(0.0, 0.0, 1.0);
    p.emplace_back(1.0, 1.0, 1.0, UnknownQutrit::Normalization::automatic);
    for (int i = 0; i < probe_random_count; ++i) {
      CounterRng rng(probe_seed, static_cast<std::uint64_t>(i));
      p.emplace_back(haar_qutrit(rng), UnknownQutrit::Normalization::automatic);
    }
    return p;
  }();
  return probes;
}

struct RetrievalCheck {
  bool holds_exactly = false;
  bool holds_proportionally = false;
  double exact_residual = 0.0;         // max over probes of ||O s - phi||
  double proportional_residual = 0.0;  // max over probes of min_c ||O s - c phi||
  Complex best_fit_c{};                // fitted c on the uniform probe
  double c_spread = 0.0;               // max |c_probe - best_fit_c|

  friend bool operator==(const RetrievalCheck&, const RetrievalCheck&) = default;
};

struct AuditEntry {
  int outcome = 0;
  // Printed operator against the projected branch state (the primary finding).
  bool holds_exactly = false;
  bool holds_proportionally = false;
  double exact_residual = 0.0;
  double proportional_residual = 0.0;
  Complex best_fit_c{};
  double c_spread = 0.0;
  // Printed operator against the printed branch state.
  RetrievalCheck against_printed_state;
  // Synthesized operator against the projected collapsed state.
  RetrievalCheck synthesized;
  // max |printed state coefficient - projected branch state coefficient| over probes.
  double state_diff = 0.0;
  // Entry-wise difference between printed and synthesized operators, raw and
  // after the best single complex rescaling of the synthesized one.
  double operator_diff = 0.0;
  double operator_diff_aligned = 0.0;

  friend bool operator==(const AuditEntry&, const AuditEntry&) = default;
};

/// Fits O s = c phi on every probe; `state_of` supplies s for a probe.
template <typename StateFn>
RetrievalCheck check_retrieval(const Operator& o, StateFn&& state_of) {
  RetrievalCheck r;
  const auto& probes = audit_probes();
  std::vector<Complex> cs;
  cs.reserve(probes.size());
  for (const auto& phi : probes) {
    const Ket out = apply(o, state_of(phi));
    const Ket target = phi.ket();
    double exact = 0.0, prop = 0.0;
    const Complex c = inner(target, out);
    for (std::size_t i = 0; i < 3; ++i) {
      exact += std::norm(out[i] - target[i]);
      prop += std::norm(out[i] - c * target[i]);
    }
    r.exact_residual = std::max(r.exact_residual, std::sqrt(exact));
    r.proportional_residual = std::max(r.proportional_residual, std::sqrt(prop));
    cs.push_back(c);
  }
  r.best_fit_c = cs[3];
  for (const auto& c : cs) r.c_spread = std::max(r.c_spread, std::abs(c - r.best_fit_c));
  r.holds_exactly = r.exact_residual <= tol::audit;
  r.holds_proportionally = r.proportional_residual <= tol::audit && r.c_spread <= tol::audit && std::abs(r.best_fit_c) > tol::audit;
  return r;
}

/// max over entries of |a - c b| for the least-squares c.
inline double aligned_difference(const Operator& a, const Operator& b) {
  Complex num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    num += std::conj(b.entries()[i]) * a.entries()[i];
    den += std::norm(b.entries()[i]);
  }
  const Complex c = den > 0.0 ? num / den : Complex{};
  return (a - b.scaled(c)).max_abs();
}

inline AuditEntry audit_outcome(ChannelKind kind, int k, const Operator& printed) {
  AuditEntry e;
  e.outcome = k;
  const auto projected = [&](const UnknownQutrit& phi) { return branch_state(kind, k, phi); };
  const RetrievalCheck main = check_retrieval(printed, projected);
  e.holds_exactly = main.holds_exactly;
  e.holds_proportionally = main.holds_proportionally;
  e.exact_residual = main.exact_residual;
  e.proportional_residual = main.proportional_residual;
  e.best_fit_c = main.best_fit_c;
  e.c_spread = main.c_spread;

  const MonomialMap printed_state = printed_branch_state(kind, k);
  e.against_printed_state = check_retrieval(printed, [&](const UnknownQutrit& phi) { return evaluate(printed_state, phi); });

  const Operator synth = synthesize_correction(kind, k).op;
  e.synthesized = check_retrieval(synth, [&](const UnknownQutrit& phi) { return collapsed_state(kind, k, phi); });

  for (const auto& phi : audit_probes()) {
    const Ket a = evaluate(printed_state, phi);
    const Ket b = projected(phi);
    for (std::size_t i = 0; i < 3; ++i) e.state_diff = std::max(e.state_diff, std::abs(a[i] - b[i]));
  }
  e.operator_diff = (printed - synth).max_abs();
  e.operator_diff_aligned = aligned_difference(printed, synth);
  return e;
}

/// Audits the nine printed corrections of a channel.
inline std::vector<AuditEntry> audit_retrievals(ChannelKind kind) {
  std::vector<AuditEntry> out;
  for (int k = 0; k < 9; ++k) out.push_back(audit_outcome(kind, k, paper_correction(kind, k).op));
  return out;
}

/// Printed re-expression of |b>|c> versus inner products against the basis.
struct ReexpressionCheck {
  int b, c;
  bool matches;
  double max_diff;

  friend bool operator==(const ReexpressionCheck&, const ReexpressionCheck&) = default;
};

inline std::vector<ReexpressionCheck> audit_reexpressions() {
  std::vector<ReexpressionCheck> out;
  for (int b = 0; b < 3; ++b)
    for (int c = 0; c < 3; ++c) {
      std::array<Complex, 9> derived{}, printed{};
      for (const auto& t : computational_from_leslie(b, c)) derived[t.k] = t.coefficient;
      for (const auto& t : printed_reexpression(b, c)) printed[t.k] = t.coefficient;
      double d = 0.0;
      for (std::size_t k = 0; k < 9; ++k) d = std::max(d, std::abs(derived[k] - printed[k]));
      out.push_back({b, c, d <= tol::audit, d});
    }
  return out;
}

struct AuditReport {
  ChannelKind channel = ChannelKind::U;
  std::string probe_set;
  double prefactor_projected = 0.0;
  // Prefactors as printed for the branch decomposition and for the retrieval form.
  double prefactor_printed_decomposition = 0.0;
  double prefactor_printed_retrieval = 0.0;
  std::vector<AuditEntry> entries;
  std::vector<Operator> printed_operators;
  std::vector<Operator> synthesized_operators;
  std::vector<ReexpressionCheck> reexpressions;

  friend bool operator==(const AuditReport&, const AuditReport&) = default;
};

inline AuditReport make_audit_report(ChannelKind kind) {
  AuditReport r;
  r.channel = kind;
  r.probe_set = probe_set_version;
  r.prefactor_projected = branch_prefactor(kind);
  r.prefactor_printed_decomposition = kind == ChannelKind::U ? 1.0 / 3.0 : 1.0 / std::sqrt(18.0);
  r.prefactor_printed_retrieval = 1.0 / 3.0;
  r.entries = audit_retrievals(kind);
  for (int k = 0; k < 9; ++k) {
    r.printed_operators.push_back(paper_correction(kind, k).op);
    r.synthesized_operators.push_back(synthesize_correction(kind, k).op);
  }
  r.reexpressions = audit_reexpressions();
  return r;
}

}  // namespace qutrit
