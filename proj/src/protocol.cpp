#include "sqrs/protocol.hpp"

#include <stdexcept>

namespace sqrs {

TrueParameters TrueParameters::random(int n_bobs, Rng &rng) {
    TrueParameters t;
    t.phis.reserve(n_bobs);
    for (int b = 0; b < n_bobs; ++b) t.phis.emplace_back(kTwoPi * uniform01(rng));
    return t;
}

ProbePreparation prepare_round(const ProtocolParams &params, Rng &rng) {
    if (bernoulli(rng, params.p_separable)) {
        std::vector<EncodingPhase> ph(params.n_bobs);
        for (auto &p : ph) p = encoding_from_quarter_turns(uniform_int(rng, 4));
        return ProbePreparation::separable(std::move(ph));
    }
    return ProbePreparation::entangled(encoding_from_quarter_turns(uniform_int(rng, 4)));
}

bool alice_verify(const RoundTranscript &t) {
    const auto &recs = t.bob_records;
    if (t.preparation.kind() == PrepKind::Separable) {
        const auto phases = t.preparation.phases();
        if (phases.size() != recs.size()) throw std::invalid_argument("alice_verify: record count mismatch");
        for (std::size_t b = 0; b < recs.size(); ++b) {
            if (recs[b].applied_phase || recs[b].basis != encoding_basis(phases[b])) continue;
            // χ + basis phase is 0 or π here; the outcome is +1 exactly when it is 0.
            int arg = (quarter_turns(phases[b]) + basis_quarter_turns(recs[b].basis)) % 4;
            Outcome expected = arg == 0 ? Outcome::Plus : Outcome::Minus;
            if (recs[b].outcome != expected) return true;
        }
        return false;
    }
    int arg = quarter_turns(t.preparation.phases()[0]);
    Outcome parity = Outcome::Plus;
    for (const BobRecord &r : recs) {
        if (r.applied_phase) return false;
        arg += basis_quarter_turns(r.basis);
        parity = parity * r.outcome;
    }
    arg %= 4;
    if (arg % 2 != 0) return false;
    return parity != (arg == 0 ? Outcome::Plus : Outcome::Minus);
}

RoundTranscript run_round(const ProtocolParams &params, const TrueParameters &truth,
                          const std::optional<AttackStrategy> &attack, Rng &rng) {
    const int n = params.n_bobs;
    if (static_cast<int>(truth.phis.size()) != n) throw std::invalid_argument("run_round: truth size != n_bobs");

    RoundTranscript t{prepare_round(params, rng), {}, std::nullopt, false};
    ProbePreparation received = t.preparation;
    if (attack && bernoulli(rng, attack->attack_probability)) {
        Interception ic = intercept(t.preparation, n, *attack, rng);
        received = ic.substituted;
        t.attack_record = std::move(ic.knowledge);
    }

    t.bob_records.resize(n);
    std::vector<PhaseAngle> applied(n);
    std::vector<Basis> bases(n);
    for (int b = 0; b < n; ++b) {
        BobRecord &r = t.bob_records[b];
        r.applied_phase = bernoulli(rng, params.p_measure());
        r.basis = (rng() & 1) ? Basis::Y : Basis::X;
        applied[b] = r.applied_phase ? truth.phis[b] : PhaseAngle{};
        bases[b] = r.basis;
    }

    if (received.kind() == PrepKind::Separable) {
        for (int b = 0; b < n; ++b) {
            std::optional<PhaseAngle> phi;
            if (t.bob_records[b].applied_phase) phi = truth.phis[b];
            t.bob_records[b].outcome = sample_separable(PhaseAngle(radians(received.phases()[b])), phi, bases[b], rng);
        }
    } else {
        auto outs = sample_ghz(PhaseAngle(radians(received.phases()[0])), applied, bases, rng);
        for (int b = 0; b < n; ++b) t.bob_records[b].outcome = outs[b];
    }

    t.detected = alice_verify(t);
    return t;
}

std::vector<RoundTranscript> run_protocol(const ProtocolParams &params, const TrueParameters &truth,
                                          const std::optional<AttackStrategy> &attack, bool stop_on_detection,
                                          Rng &rng) {
    std::vector<RoundTranscript> rounds;
    rounds.reserve(params.n_rounds);
    for (int r = 0; r < params.n_rounds; ++r) {
        rounds.push_back(run_round(params, truth, attack, rng));
        if (stop_on_detection && rounds.back().detected) break;
    }
    return rounds;
}

void alice_observe(const RoundTranscript &round, EvidenceSet &into) {
    if (round.detected) return;
    const auto &recs = round.bob_records;
    const ProbePreparation &prep = round.preparation;
    if (prep.kind() == PrepKind::Separable) {
        for (std::size_t b = 0; b < recs.size(); ++b) {
            if (!recs[b].applied_phase) continue;
            into.add(single_bob_key(static_cast<int>(b)),
                     PhaseMeasurement{basis_quarter_turns(recs[b].basis), quarter_turns(prep.phases()[b]),
                                      recs[b].outcome});
        }
        return;
    }
    CombinationKey applied = 0;
    int net_basis = 0;
    Outcome parity = Outcome::Plus;
    for (std::size_t b = 0; b < recs.size(); ++b) {
        if (recs[b].applied_phase) applied |= single_bob_key(static_cast<int>(b));
        net_basis += basis_quarter_turns(recs[b].basis);
        parity = parity * recs[b].outcome;
    }
    if (applied != 0) into.add(applied, PhaseMeasurement{net_basis, quarter_turns(prep.phases()[0]), parity});
}

EvidenceSet alice_evidence(std::span<const RoundTranscript> rounds) {
    EvidenceSet ev;
    for (const auto &r : rounds) alice_observe(r, ev);
    return ev;
}

EvidenceSet eve_evidence(std::span<const RoundTranscript> rounds) {
    EvidenceSet ev;
    for (const auto &r : rounds) {
        EveView v = r.eve_view();
        if (v.attack_record) eve_observe(v.bob_records, *v.attack_record, ev);
    }
    return ev;
}

}  // namespace sqrs
