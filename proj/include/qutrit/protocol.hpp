// Teleportation pipeline: club the unknown qutrit with the channel, sample
// Alice's Leslie-basis outcome, collapse Bob's qutrit, apply the correction.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "qutrit/rng.hpp"
#include "qutrit/states.hpp"

namespace qutrit {

struct configuration_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class CorrectionMode { unitary_paper, synthesized_rescale, kraus_probabilistic };

inline std::string to_string(CorrectionMode m) {
  switch (m) {
    case CorrectionMode::unitary_paper: return "unitary-paper";
    case CorrectionMode::synthesized_rescale: return "synthesized-rescale";
    default: return "kraus-probabilistic";
  }
}

inline CorrectionMode parse_mode(std::string_view s) {
  if (s == "unitary-paper") return CorrectionMode::unitary_paper;
  if (s == "rescale" || s == "synthesized-rescale") return CorrectionMode::synthesized_rescale;
  if (s == "kraus" || s == "kraus-probabilistic") return CorrectionMode::kraus_probabilistic;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "' (expected unitary-paper, rescale or kraus)");
}

inline void check_compatible(ChannelKind kind, CorrectionMode mode) {
  if (mode == CorrectionMode::unitary_paper && kind != ChannelKind::U)
    throw configuration_error("mode unitary-paper requires channel u (the printed U_k set)");
}

/// phi (x) channel, parties ordered A, B, C.
inline Ket club(const UnknownQutrit& phi, ChannelKind kind) { return tensor(phi.ket(), channel(kind)); }

/// Born probabilities of the nine Leslie outcomes on Alice's pair.
inline std::array<double, 9> outcome_distribution(const UnknownQutrit& phi, ChannelKind kind) {
  std::array<double, 9> p{};
  for (int k = 0; k < 9; ++k) {
    const double n = collapsed_state(kind, k, phi).norm();
    p[k] = n * n;
  }
  return p;
}

/// The complementary Kraus branch sqrt(I - K^H K) of a monomial K (K^H K is diagonal).
inline Operator kraus_complement(const Operator& k) {
  const Operator kk = dagger(k) * k;
  std::array<Complex, 3> d{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j && std::abs(kk(i, j)) > tol::equality) throw structure_error("kraus_complement: K^H K is not diagonal");
    const double v = 1.0 - kk(i, i).real();
    if (v < -tol::hermitian) throw contract_violation("kraus_complement: K is not a contraction");
    d[i] = std::sqrt(std::max(v, 0.0));
  }
  return Operator::diagonal(d);
}

struct KrausBranches {
  double success;
  double failure;
};

/// Success/failure probabilities of the generalized measurement {K, sqrt(I-K^H K)} on a normalized state.
inline KrausBranches kraus_branches(const Operator& k, const Ket& state) {
  const double s = apply(k, state).norm();
  const double f = apply(kraus_complement(k), state).norm();
  return {s * s, f * f};
}

struct TrialRecord {
  std::uint64_t trial_index = 0;
  int outcome_k = 0;
  double born_probability = 0.0;
  bool corrected = true;
  Ket bob_output;
  double fidelity = 0.0;
};

/// Fixed (channel, mode) pipeline with its nine correction operators precomputed.
class Teleporter {
 public:
  Teleporter(ChannelKind kind, CorrectionMode mode) : kind_(kind), mode_(mode) {
    check_compatible(kind, mode);
    corrections_ = correction_set(kind, mode == CorrectionMode::unitary_paper ? Provenance::paper_printed : Provenance::synthesized);
    if (mode == CorrectionMode::kraus_probabilistic)
      for (std::size_t k = 0; k < 9; ++k) complements_[k] = kraus_complement(corrections_[k].op);
  }

  ChannelKind kind() const { return kind_; }
  CorrectionMode mode() const { return mode_; }
  const CorrectionOperator& correction(int k) const { return corrections_.at(static_cast<std::size_t>(k)); }

  /// Samples the outcome by inverse CDF on one uniform draw, then corrects.
  TrialRecord run(const UnknownQutrit& phi, CounterRng& rng, std::uint64_t trial_index = 0) const {
    const auto p = outcome_distribution(phi, kind_);
    const double u = rng.uniform();
    int k = 0;
    double cdf = p[0];
    while (k < 8 && u >= cdf) cdf += p[++k];
    // Round-off can leave u above the final cdf; walk back to the last outcome with mass.
    while (p[k] == 0.0 && k > 0) --k;
    return run_forced(phi, k, rng, trial_index, p[k]);
  }

  /// Runs the correction step for a given outcome, bypassing sampling.
  TrialRecord run_forced(const UnknownQutrit& phi, int k, CounterRng& rng, std::uint64_t trial_index = 0,
                         std::optional<double> born = std::nullopt) const {
    TrialRecord t;
    t.trial_index = trial_index;
    t.outcome_k = k;
    const Ket raw = collapsed_state(kind_, k, phi);
    t.born_probability = born ? *born : raw.norm() * raw.norm();
    const Ket collapsed = raw.normalized();
    const Operator& o = correction(k).op;
    switch (mode_) {
      case CorrectionMode::unitary_paper:
        t.bob_output = apply(o, collapsed);
        break;
      case CorrectionMode::synthesized_rescale:
        t.bob_output = apply(o, collapsed).normalized();
        break;
      case CorrectionMode::kraus_probabilistic: {
        const Ket success = apply(o, collapsed);
        const double ps = success.norm() * success.norm();
        if (rng.uniform() < ps) {
          t.bob_output = success.normalized();
        } else {
          t.corrected = false;
          t.bob_output = apply(complements_[static_cast<std::size_t>(k)], collapsed).normalized();
        }
        break;
      }
    }
    const double overlap = std::abs(inner(phi.ket(), t.bob_output));
    t.fidelity = std::min(overlap * overlap, 1.0 + tol::equality);
    return t;
  }

 private:
  ChannelKind kind_;
  CorrectionMode mode_;
  std::array<CorrectionOperator, 9> corrections_{};
  std::array<Operator, 9> complements_{};
};

inline TrialRecord run_trial(const UnknownQutrit& phi, ChannelKind kind, CorrectionMode mode, CounterRng& rng) {
  return Teleporter(kind, mode).run(phi, rng);
}

/// Fresh rotation-invariant random qutrit for every trial.
struct HaarRandom {};
using StateSpec = std::variant<UnknownQutrit, HaarRandom>;

inline constexpr int report_schema_version = 1;

struct RunReport {
  ChannelKind channel = ChannelKind::U;
  CorrectionMode mode = CorrectionMode::unitary_paper;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::optional<std::array<Complex, 3>> state;  // empty for per-trial random states
  std::array<double, 9> frequencies{};
  std::optional<std::array<double, 9>> closed_form;
  double mean_fidelity = 0.0;
  std::optional<double> post_selected_fidelity;  // kraus mode only
  double success_rate = 1.0;
  std::optional<double> closed_form_success_rate;  // kraus mode with a fixed state

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Expected success probability of the kraus mode: sum_k p_k ||K_k s_k||^2.
inline double kraus_success_probability(const UnknownQutrit& phi, ChannelKind kind) {
  const auto p = outcome_distribution(phi, kind);
  double total = 0.0;
  for (int k = 0; k < 9; ++k) {
    if (p[k] == 0.0) continue;
    total += p[k] * kraus_branches(synthesize_correction(kind, k).op, collapsed_state(kind, k, phi).normalized()).success;
  }
  return total;
}

/// Runs n independent trials. Trial i draws from CounterRng(seed, i), so the
/// report does not depend on `threads`.
inline RunReport run_monte_carlo(const StateSpec& spec, ChannelKind kind, CorrectionMode mode, std::uint64_t n_trials,
                                 std::uint64_t master_seed, unsigned threads = 1) {
  if (n_trials == 0) throw std::domain_error("run_monte_carlo: n_trials must be at least 1");
  const Teleporter tp(kind, mode);

  struct Slot {
    int k;
    bool corrected;
    double fidelity;
  };
  std::vector<Slot> slots(n_trials);

  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      CounterRng rng(master_seed, i);
      const UnknownQutrit phi = std::holds_alternative<UnknownQutrit>(spec)
                                    ? std::get<UnknownQutrit>(spec)
                                    : UnknownQutrit(haar_qutrit(rng), UnknownQutrit::Normalization::automatic);
      const TrialRecord t = tp.run(phi, rng, i);
      slots[i] = {t.outcome_k, t.corrected, t.fidelity};
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(n_trials, 256))));
  if (threads == 1) {
    work(0, n_trials);
  } else {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (n_trials + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t b = t * chunk, e = std::min(n_trials, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
  }

  RunReport r;
  r.channel = kind;
  r.mode = mode;
  r.trials = n_trials;
  r.seed = master_seed;
  std::array<std::uint64_t, 9> counts{};
  std::uint64_t successes = 0;
  double fid = 0.0, fid_success = 0.0;
  for (const auto& s : slots) {
    ++counts[s.k];
    fid += s.fidelity;
    if (s.corrected) {
      ++successes;
      fid_success += s.fidelity;
    }
  }
  const double n = static_cast<double>(n_trials);
  for (std::size_t k = 0; k < 9; ++k) r.frequencies[k] = static_cast<double>(counts[k]) / n;
  r.mean_fidelity = fid / n;
  r.success_rate = static_cast<double>(successes) / n;
  if (mode == CorrectionMode::kraus_probabilistic && successes > 0)
    r.post_selected_fidelity = fid_success / static_cast<double>(successes);
  if (const auto* phi = std::get_if<UnknownQutrit>(&spec)) {
    r.state = phi->coefficients();
    r.closed_form = outcome_distribution(*phi, kind);
    if (mode == CorrectionMode::kraus_probabilistic) r.closed_form_success_rate = kraus_success_probability(*phi, kind);
  }
  return r;
}

}  // namespace qutrit
