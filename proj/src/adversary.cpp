#include "sqrs/adversary.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sqrs {

std::string_view attack_name(AttackKind k) {
    switch (k) {
        case AttackKind::ReplaceSeparable: return "replace-separable";
        case AttackKind::ReplaceEntangled: return "replace-entangled";
        case AttackKind::MeasureResendSeparable: return "measure-resend-separable";
        case AttackKind::MeasureResendEntangled: return "measure-resend-entangled";
    }
    throw std::invalid_argument("unknown attack kind");
}

AttackKind parse_attack(std::string_view name) {
    for (AttackKind k : kAllAttackKinds)
        if (attack_name(k) == name) return k;
    throw std::invalid_argument("unknown attack strategy '" + std::string(name) + "'");
}

PrepKind resend_kind(AttackKind k) {
    switch (k) {
        case AttackKind::ReplaceSeparable:
        case AttackKind::MeasureResendSeparable: return PrepKind::Separable;
        case AttackKind::ReplaceEntangled:
        case AttackKind::MeasureResendEntangled: return PrepKind::Entangled;
    }
    throw std::invalid_argument("unknown attack kind");
}

bool is_measure_resend(AttackKind k) {
    return k == AttackKind::MeasureResendSeparable || k == AttackKind::MeasureResendEntangled;
}

EncodingPhase ml_encoding_guess(int offset_quarters, Outcome outcome, Rng &rng) {
    // Likelihood of each candidate is (1 + o·cos((c + offset)·π/2))/2 ∈ {0, 1/2, 1}.
    std::array<int, 4> score{};
    int best = -2;
    for (int c = 0; c < 4; ++c) {
        int r = ((c + offset_quarters) % 4 + 4) % 4;
        int cosine = r == 0 ? 1 : (r == 2 ? -1 : 0);
        score[c] = sign(outcome) * cosine;
        best = std::max(best, score[c]);
    }
    std::array<int, 4> ties{};
    int n_ties = 0;
    for (int c = 0; c < 4; ++c)
        if (score[c] == best) ties[n_ties++] = c;
    int pick = n_ties == 1 ? ties[0] : ties[uniform_int(rng, n_ties)];
    return encoding_from_quarter_turns(pick);
}

namespace {

EncodingPhase random_encoding(Rng &rng) { return encoding_from_quarter_turns(uniform_int(rng, 4)); }

std::vector<Basis> random_bases(int n, Rng &rng) {
    std::vector<Basis> bases(n);
    for (auto &b : bases) b = (rng() & 1) ? Basis::Y : Basis::X;
    return bases;
}

int span_size(const ProbePreparation &prep, int n_bobs) {
    return prep.kind() == PrepKind::Separable ? static_cast<int>(prep.phases().size()) : n_bobs;
}

}  // namespace

Interception intercept(const ProbePreparation &prep, int n_bobs, const AttackStrategy &strategy, Rng &rng) {
    const int n = span_size(prep, n_bobs);
    if (n < 1) throw std::invalid_argument("intercept: preparation spans no qubits");
    const PrepKind out_kind = resend_kind(strategy.kind);

    if (!is_measure_resend(strategy.kind)) {
        ProbePreparation fresh = [&] {
            if (out_kind == PrepKind::Entangled) return ProbePreparation::entangled(random_encoding(rng));
            std::vector<EncodingPhase> ph(n);
            for (auto &p : ph) p = random_encoding(rng);
            return ProbePreparation::separable(std::move(ph));
        }();
        return {fresh, EveRoundKnowledge{fresh, std::nullopt, std::nullopt}};
    }

    // Measure every intercepted qubit in a random basis on the true state.
    std::vector<Basis> bases = random_bases(n, rng);
    std::vector<Outcome> outcomes(n);
    if (prep.kind() == PrepKind::Separable) {
        for (int b = 0; b < n; ++b)
            outcomes[b] = sample_separable(PhaseAngle(radians(prep.phases()[b])), std::nullopt, bases[b], rng);
    } else {
        std::vector<PhaseAngle> none(n);
        outcomes = sample_ghz(PhaseAngle(radians(prep.phases()[0])), none, bases, rng);
    }

    // Per-qubit maximum-likelihood eigenstates. For a GHZ original their sum is the
    // unique net phase consistent with Eve's parity, so both resend kinds carry the
    // same net-phase guess.
    std::vector<EncodingPhase> per_qubit(n);
    for (int b = 0; b < n; ++b) per_qubit[b] = ml_encoding_guess(basis_quarter_turns(bases[b]), outcomes[b], rng);

    ProbePreparation resent = [&] {
        if (out_kind == PrepKind::Separable) return ProbePreparation::separable(per_qubit);
        if (prep.kind() == PrepKind::Entangled) {
            int net_basis = 0;
            Outcome parity = Outcome::Plus;
            for (int b = 0; b < n; ++b) {
                net_basis += basis_quarter_turns(bases[b]);
                parity = parity * outcomes[b];
            }
            return ProbePreparation::entangled(ml_encoding_guess(net_basis, parity, rng));
        }
        return ProbePreparation::entangled(ProbePreparation::separable(per_qubit).net_phase());
    }();
    return {resent, EveRoundKnowledge{resent, std::move(bases), std::move(outcomes)}};
}

void eve_observe(std::span<const BobRecord> records, const EveRoundKnowledge &knowledge, EvidenceSet &into) {
    const ProbePreparation &sent = knowledge.resent_preparation;
    if (sent.kind() == PrepKind::Separable) {
        if (sent.phases().size() != records.size()) throw std::invalid_argument("eve_observe: record count mismatch");
        for (std::size_t b = 0; b < records.size(); ++b) {
            const BobRecord &r = records[b];
            if (!r.applied_phase) continue;
            into.add(single_bob_key(static_cast<int>(b)),
                     PhaseMeasurement{basis_quarter_turns(r.basis), quarter_turns(sent.phases()[b]), r.outcome});
        }
        return;
    }
    CombinationKey applied = 0;
    int net_basis = 0;
    Outcome parity = Outcome::Plus;
    for (std::size_t b = 0; b < records.size(); ++b) {
        if (records[b].applied_phase) applied |= single_bob_key(static_cast<int>(b));
        net_basis += basis_quarter_turns(records[b].basis);
        parity = parity * records[b].outcome;
    }
    if (applied == 0) return;
    into.add(applied, PhaseMeasurement{net_basis, quarter_turns(sent.phases()[0]), parity});
}

double detection_probability_per_round(AttackKind kind, PrepKind original, const ProtocolParams &params,
                                       DetectionModel model) {
    const int n = params.n_bobs;
    const double pf = params.p_fidelity;
    const double all_check = std::pow(pf, n);
    const double d_r = kReplaceCheckFailure;
    const double d_mr = kMeasureResendCheckFailure;
    // At least one of N independent per-Bob checks fails; each Bob checks in the
    // preparation basis with probability P_F/2.
    auto any_of_n = [&](double d) { return 1.0 - std::pow(1.0 - d * pf / 2.0, n); };

    switch (kind) {
        case AttackKind::ReplaceSeparable:
        case AttackKind::ReplaceEntangled:
            return original == PrepKind::Separable ? any_of_n(d_r) : d_r * all_check / 2.0;
        case AttackKind::MeasureResendSeparable:
            if (original == PrepKind::Separable) return any_of_n(d_mr);
            if (model == DetectionModel::Published) return d_mr * all_check / 2.0;
            // Product states only reproduce the GHZ parity when every Bob's basis
            // matches Eve's; that happens with probability 2^-N given a matched net basis.
            return all_check / 2.0 * 0.5 * (1.0 - std::pow(0.5, n));
        case AttackKind::MeasureResendEntangled:
            if (original == PrepKind::Entangled) return d_mr * all_check / 2.0;
            if (model == DetectionModel::Published) return any_of_n(d_r);
            // When all N Bobs check in Alice's bases, Eve's GHZ parity is right whenever
            // all her per-qubit guesses were, which removes (P_F/8)^N of detection mass.
            return any_of_n(d_r) - std::pow(pf / 8.0, n);
    }
    throw std::invalid_argument("detection_probability_per_round: unknown attack/preparation combination");
}

}  // namespace sqrs
