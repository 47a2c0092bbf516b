#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sqrs/adversary.hpp"
#include "sqrs/evidence.hpp"
#include "sqrs/params.hpp"
#include "sqrs/qstate.hpp"
#include "sqrs/records.hpp"
#include "sqrs/rng.hpp"

namespace sqrs {

/// The Bobs' unknown phases; θ is their sum modulo 2π.
struct TrueParameters {
    std::vector<PhaseAngle> phis;

    PhaseAngle theta() const {
        PhaseAngle t;
        for (PhaseAngle p : phis) t += p;
        return t;
    }
    static TrueParameters random(int n_bobs, Rng &rng);
};

/// What Eve gets to see of a round: the public announcements and her own record.
struct EveView {
    std::span<const BobRecord> bob_records;
    const std::optional<EveRoundKnowledge> &attack_record;
};

/// Full record of one round. `preparation` is Alice's secret; use eve_view() for
/// anything that models the eavesdropper.
struct RoundTranscript {
    ProbePreparation preparation;
    std::vector<BobRecord> bob_records;
    std::optional<EveRoundKnowledge> attack_record;
    bool detected = false;

    EveView eve_view() const { return {bob_records, attack_record}; }
    friend bool operator==(const RoundTranscript &, const RoundTranscript &) = default;
};

ProbePreparation prepare_round(const ProtocolParams &params, Rng &rng);

/// Alice's check of one round: true if any same-basis fidelity check contradicts the
/// deterministic prediction for the state she prepared.
bool alice_verify(const RoundTranscript &transcript);

RoundTranscript run_round(const ProtocolParams &params, const TrueParameters &truth,
                          const std::optional<AttackStrategy> &attack, Rng &rng);

/// Runs up to params.n_rounds rounds. With stop_on_detection the first detected round
/// is the last one returned.
std::vector<RoundTranscript> run_protocol(const ProtocolParams &params, const TrueParameters &truth,
                                          const std::optional<AttackStrategy> &attack, bool stop_on_detection,
                                          Rng &rng);

/// Alice's phase evidence from one round. Detected rounds contribute nothing.
void alice_observe(const RoundTranscript &round, EvidenceSet &into);
EvidenceSet alice_evidence(std::span<const RoundTranscript> rounds);

/// Eve's phase evidence over every round she attacked, including a detecting round.
EvidenceSet eve_evidence(std::span<const RoundTranscript> rounds);

}  // namespace sqrs
