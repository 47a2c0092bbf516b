#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sqrs/phase.hpp"
#include "sqrs/rng.hpp"

namespace sqrs {

enum class PrepKind : std::uint8_t { Separable = 0, Entangled = 1 };

inline std::string_view prep_kind_name(PrepKind k) { return k == PrepKind::Separable ? "separable" : "entangled"; }

/// Alice's secret per-round state choice. Separable preparations carry one encoding
/// phase per Bob; an entangled (GHZ) preparation carries a single net phase.
class ProbePreparation {
  public:
    static ProbePreparation separable(std::vector<EncodingPhase> phases);
    static ProbePreparation entangled(EncodingPhase chi);

    PrepKind kind() const { return kind_; }
    std::span<const EncodingPhase> phases() const { return phases_; }
    /// Sum of all encoding phases (the GHZ net phase for entangled preparations).
    EncodingPhase net_phase() const;
    /// Number of qubits the preparation spans; 0 for an entangled preparation
    /// (it spans whatever number of Bobs it is distributed over).
    std::size_t separable_size() const { return kind_ == PrepKind::Separable ? phases_.size() : 0; }

    friend bool operator==(const ProbePreparation &, const ProbePreparation &) = default;

  private:
    ProbePreparation(PrepKind k, std::vector<EncodingPhase> p) : kind_(k), phases_(std::move(p)) {}
    PrepKind kind_;
    std::vector<EncodingPhase> phases_;
};

/// P(+1) for a single qubit prepared with `chi`, phase `phi` applied, measured in `basis`.
double separable_outcome_prob(PhaseAngle chi, PhaseAngle phi, Basis basis);

/// P(parity = +1) for a GHZ probe with net phase `chi`, total applied phase
/// `applied_phase_sum`, and the given per-Bob measurement bases.
double ghz_parity_prob(PhaseAngle chi, PhaseAngle applied_phase_sum, std::span<const Basis> bases);

/// Samples one single-qubit outcome. `phi` is absent on fidelity-check measurements.
Outcome sample_separable(PhaseAngle chi, std::optional<PhaseAngle> phi, Basis basis, Rng &rng);

/// Samples per-Bob outcomes for a GHZ probe: the parity is drawn from ghz_parity_prob,
/// then outcomes are uniform over the assignments consistent with it.
std::vector<Outcome> sample_ghz(PhaseAngle chi, std::span<const PhaseAngle> applied_phases,
                                std::span<const Basis> bases, Rng &rng);

/// Exact joint distribution over {±1}^N from explicit amplitudes. Index bit b set means
/// Bob b observed -1. Test-only oracle; limited to N <= 12.
std::vector<double> state_vector_oracle(const ProbePreparation &prep, std::span<const PhaseAngle> applied_phases,
                                        std::span<const Basis> bases);

inline constexpr std::size_t kOracleMaxQubits = 12;

/// Probability that the product of all outcomes is +1, from an oracle distribution.
double parity_plus_marginal(std::span<const double> joint);
/// Probability that Bob `b` observes +1, from an oracle distribution.
double single_plus_marginal(std::span<const double> joint, std::size_t b);

}  // namespace sqrs
