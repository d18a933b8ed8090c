// Teleports one qutrit through both channels and prints what Bob receives.
#include <cstdio>

#include "qutrit/metrics.hpp"
#include "qutrit/protocol.hpp"

int main() {
  using namespace qutrit;
  const UnknownQutrit phi({0.6, 0.0}, {0.0, 0.8}, {0.0, 0.0});

  for (const auto kind : all_channels) {
    const auto mode = kind == ChannelKind::U ? CorrectionMode::unitary_paper : CorrectionMode::kraus_probabilistic;
    const Teleporter tp(kind, mode);
    std::printf("channel %s, mode %s, entropy %.5f bits\n", to_string(kind).c_str(), to_string(mode).c_str(),
                entropy_of_entanglement(channel(kind)));
    for (std::uint64_t trial = 0; trial < 5; ++trial) {
      CounterRng rng(42, trial);
      const TrialRecord t = tp.run(phi, rng, trial);
      std::printf("  trial %llu: outcome %d (p=%.4f) %s fidelity %.12f\n", static_cast<unsigned long long>(trial), t.outcome_k,
                  t.born_probability, t.corrected ? "corrected" : "failed   ", t.fidelity);
    }
  }
}
