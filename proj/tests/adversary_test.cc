#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sqrs/adversary.hpp"
#include "sqrs/protocol.hpp"
#include "test_util.hpp"

namespace sqrs {
namespace {

using testing::within_sigma;

// Exhaustive detection probability for one attacked round, built from the state-vector
// oracle and an independent restatement of Eve's guessing rule.

int cos_quarter(int q) {
    q = ((q % 4) + 4) % 4;
    return q == 0 ? 1 : (q == 2 ? -1 : 0);
}

// Unique maximiser of (1 + o cos((c + offset)π/2))/2 over c.
int best_guess(int offset, int o) {
    for (int c = 0; c < 4; ++c)
        if (o * cos_quarter(c + offset) == 1) return c;
    return -1;
}

struct Weighted {
    ProbePreparation resent;
    double p;
};

std::vector<std::vector<int>> all_tuples(int n, int base) {
    std::vector<std::vector<int>> out{{}};
    for (int i = 0; i < n; ++i) {
        std::vector<std::vector<int>> next;
        for (const auto &t : out)
            for (int v = 0; v < base; ++v) {
                auto u = t;
                u.push_back(v);
                next.push_back(u);
            }
        out = std::move(next);
    }
    return out;
}

std::vector<EncodingPhase> to_phases(const std::vector<int> &q) {
    std::vector<EncodingPhase> p;
    for (int v : q) p.push_back(encoding_from_quarter_turns(v));
    return p;
}

std::vector<Weighted> resent_distribution(AttackKind kind, const ProbePreparation &orig, int n) {
    std::vector<Weighted> out;
    const bool sep_out = resend_kind(kind) == PrepKind::Separable;
    if (!is_measure_resend(kind)) {
        if (sep_out)
            for (const auto &t : all_tuples(n, 4)) out.push_back({ProbePreparation::separable(to_phases(t)), std::pow(0.25, n)});
        else
            for (int c = 0; c < 4; ++c) out.push_back({ProbePreparation::entangled(encoding_from_quarter_turns(c)), 0.25});
        return out;
    }
    for (const auto &eb : all_tuples(n, 2)) {
        std::vector<Basis> bases;
        for (int b : eb) bases.push_back(b ? Basis::Y : Basis::X);
        auto joint = state_vector_oracle(orig, std::vector<PhaseAngle>(n), bases);
        for (unsigned idx = 0; idx < joint.size(); ++idx) {
            if (joint[idx] == 0.0) continue;
            double p = joint[idx] * std::pow(0.5, n);
            std::vector<int> guesses;
            int net_basis = 0, parity = 1, sum = 0;
            for (int b = 0; b < n; ++b) {
                int o = (idx >> b & 1) ? -1 : 1;
                guesses.push_back(best_guess(eb[b], o));
                net_basis += eb[b];
                parity *= o;
                sum += guesses.back();
            }
            ProbePreparation r = sep_out ? ProbePreparation::separable(to_phases(guesses))
                                 : orig.kind() == PrepKind::Entangled
                                     ? ProbePreparation::entangled(encoding_from_quarter_turns(best_guess(net_basis, parity)))
                                     : ProbePreparation::entangled(encoding_from_quarter_turns(sum));
            out.push_back({r, p});
        }
    }
    return out;
}

double exact_detection(AttackKind kind, PrepKind orig_kind, int n, double pf) {
    double total = 0.0;
    std::vector<ProbePreparation> originals;
    if (orig_kind == PrepKind::Separable)
        for (const auto &t : all_tuples(n, 4)) originals.push_back(ProbePreparation::separable(to_phases(t)));
    else
        for (int c = 0; c < 4; ++c) originals.push_back(ProbePreparation::entangled(encoding_from_quarter_turns(c)));
    const double p_orig = 1.0 / originals.size();

    for (const auto &orig : originals) {
        for (const auto &[resent, p_resent] : resent_distribution(kind, orig, n)) {
            for (unsigned checks = 0; checks < (1u << n); ++checks) {
                double p_checks = 1.0;
                for (int b = 0; b < n; ++b) p_checks *= (checks >> b & 1) ? pf : 1.0 - pf;
                if (p_checks == 0.0) continue;
                for (const auto &bb : all_tuples(n, 2)) {
                    std::vector<Basis> bases;
                    for (int b : bb) bases.push_back(b ? Basis::Y : Basis::X);
                    auto joint = state_vector_oracle(resent, std::vector<PhaseAngle>(n), bases);
                    for (unsigned idx = 0; idx < joint.size(); ++idx) {
                        bool detected = false;
                        if (orig.kind() == PrepKind::Separable) {
                            for (int b = 0; b < n; ++b) {
                                int chi = quarter_turns(orig.phases()[b]);
                                if (!(checks >> b & 1) || chi % 2 != bb[b]) continue;
                                int expect = cos_quarter(chi + bb[b]);
                                int o = (idx >> b & 1) ? -1 : 1;
                                detected |= o != expect;
                            }
                        } else if (checks == (1u << n) - 1) {
                            int arg = quarter_turns(orig.phases()[0]);
                            int parity = 1;
                            for (int b = 0; b < n; ++b) {
                                arg += bb[b];
                                parity *= (idx >> b & 1) ? -1 : 1;
                            }
                            if (arg % 2 == 0) detected = parity != cos_quarter(arg);
                        }
                        if (detected) total += p_orig * p_resent * p_checks * std::pow(0.5, n) * joint[idx];
                    }
                }
            }
        }
    }
    return total;
}

TEST(DetectionModel, ExactFormulaMatchesEnumeration) {
    for (AttackKind k : kAllAttackKinds)
        for (PrepKind pk : {PrepKind::Separable, PrepKind::Entangled})
            for (int n = 1; n <= 3; ++n)
                for (double pf : {0.25, 0.5, 0.75, 1.0}) {
                    ProtocolParams p{n, 1, 0.5, pf};
                    EXPECT_NEAR(detection_probability_per_round(k, pk, p, DetectionModel::Exact),
                                exact_detection(k, pk, n, pf), 1e-12)
                        << attack_name(k) << " " << prep_kind_name(pk) << " n=" << n << " pf=" << pf;
                }
}

TEST(DetectionModel, PublishedCellsAgreeWithExactWhereTheyShould) {
    for (int n = 1; n <= 4; ++n)
        for (double pf : {0.25, 0.5, 0.75}) {
            ProtocolParams p{n, 1, 0.5, pf};
            for (AttackKind k : kAllAttackKinds)
                for (PrepKind pk : {PrepKind::Separable, PrepKind::Entangled}) {
                    bool differs = (k == AttackKind::MeasureResendSeparable && pk == PrepKind::Entangled && n >= 2) ||
                                   (k == AttackKind::MeasureResendEntangled && pk == PrepKind::Separable);
                    double pub = detection_probability_per_round(k, pk, p, DetectionModel::Published);
                    double ex = detection_probability_per_round(k, pk, p, DetectionModel::Exact);
                    if (differs)
                        EXPECT_GT(std::abs(pub - ex), 1e-9);
                    else
                        EXPECT_NEAR(pub, ex, 1e-15);
                }
        }
}

TEST(DetectionModel, PublishedAnchors) {
    EXPECT_NEAR(detection_probability_per_round(AttackKind::ReplaceSeparable, PrepKind::Entangled, {2, 1, 0.0, 0.5}),
                0.0625, 1e-15);
    EXPECT_NEAR(
        detection_probability_per_round(AttackKind::MeasureResendSeparable, PrepKind::Separable, {1, 1, 1.0, 1.0}),
        0.125, 1e-15);
    for (AttackKind k : kAllAttackKinds)
        for (PrepKind pk : {PrepKind::Separable, PrepKind::Entangled})
            EXPECT_EQ(detection_probability_per_round(k, pk, {3, 1, 0.5, 0.0}), 0.0);
}

TEST(DetectionModel, MeasureResendNeverWorseForEveThanReplace) {
    for (int n = 1; n <= 6; ++n)
        for (double pf : {0.1, 0.5, 0.9, 1.0})
            for (PrepKind pk : {PrepKind::Separable, PrepKind::Entangled}) {
                ProtocolParams p{n, 1, 0.5, pf};
                EXPECT_LE(detection_probability_per_round(AttackKind::MeasureResendSeparable, pk, p),
                          detection_probability_per_round(AttackKind::ReplaceSeparable, pk, p));
                EXPECT_LE(detection_probability_per_round(AttackKind::MeasureResendEntangled, pk, p),
                          detection_probability_per_round(AttackKind::ReplaceEntangled, pk, p));
            }
}

TEST(DetectionModel, SimulationMatchesExactCells) {
    Rng rng(21);
    const std::size_t n_rounds = 10000;
    for (AttackKind k : kAllAttackKinds)
        for (PrepKind pk : {PrepKind::Separable, PrepKind::Entangled})
            for (int n = 1; n <= 4; ++n)
                for (double pf : {0.25, 0.5, 0.75}) {
                    ProtocolParams p{n, 1, pk == PrepKind::Separable ? 1.0 : 0.0, pf};
                    auto truth = TrueParameters::random(n, rng);
                    std::size_t det = 0;
                    for (std::size_t i = 0; i < n_rounds; ++i) det += run_round(p, truth, AttackStrategy{k}, rng).detected;
                    double expect = detection_probability_per_round(k, pk, p, DetectionModel::Exact);
                    EXPECT_TRUE(within_sigma(static_cast<double>(det) / n_rounds, expect, n_rounds))
                        << attack_name(k) << " " << prep_kind_name(pk) << " n=" << n << " pf=" << pf
                        << " freq=" << static_cast<double>(det) / n_rounds << " expect=" << expect;
                }
}

TEST(Intercept, MatchedBasisIsTransparent) {
    Rng rng(22);
    ProtocolParams sep{3, 1, 1.0, 0.7}, ent{3, 1, 0.0, 0.9};
    auto truth = TrueParameters::random(3, rng);
    int matched = 0;
    for (int i = 0; i < 20000; ++i) {
        auto t = run_round(sep, truth, AttackStrategy{AttackKind::MeasureResendSeparable}, rng);
        bool all_match = true;
        for (int b = 0; b < 3; ++b)
            all_match &= (*t.attack_record->measured_bases)[b] == encoding_basis(t.preparation.phases()[b]);
        if (!all_match) continue;
        ++matched;
        ASSERT_FALSE(t.detected);
        ASSERT_EQ(t.attack_record->resent_preparation, t.preparation);
    }
    EXPECT_GT(matched, 1000);

    matched = 0;
    for (int i = 0; i < 20000; ++i) {
        auto t = run_round(ent, truth, AttackStrategy{AttackKind::MeasureResendEntangled}, rng);
        int net = quarter_turns(t.preparation.phases()[0]);
        for (Basis b : *t.attack_record->measured_bases) net += basis_quarter_turns(b);
        if (net % 2 != 0) continue;
        ++matched;
        ASSERT_FALSE(t.detected);
        ASSERT_EQ(t.attack_record->resent_preparation, t.preparation);
    }
    EXPECT_GT(matched, 1000);
}

TEST(Intercept, SingleQubitWrongBasisFailsHalfTheChecks) {
    Rng rng(23);
    auto orig = ProbePreparation::separable({EncodingPhase::Zero});
    const std::size_t n = 20000;
    std::size_t wrong = 0, fail = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto ic = intercept(orig, 1, {AttackKind::MeasureResendSeparable}, rng);
        if ((*ic.knowledge.measured_bases)[0] == Basis::X) {
            EXPECT_EQ(ic.substituted, orig);
            continue;
        }
        ++wrong;
        EXPECT_EQ(encoding_basis(ic.substituted.phases()[0]), Basis::Y);
        fail += sample_separable(PhaseAngle(radians(ic.substituted.phases()[0])), std::nullopt, Basis::X, rng) ==
                Outcome::Minus;
    }
    EXPECT_TRUE(within_sigma(static_cast<double>(fail) / wrong, 0.5, wrong));
}

TEST(Intercept, ReplaceEntangledFailsHalfOfMatchedFullChecks) {
    Rng rng(24);
    ProtocolParams p{2, 1, 0.0, 1.0};
    auto truth = TrueParameters::random(2, rng);
    std::size_t matched = 0, det = 0;
    while (matched < 10000) {
        auto t = run_round(p, truth, AttackStrategy{AttackKind::ReplaceEntangled}, rng);
        int net = quarter_turns(t.preparation.phases()[0]);
        for (const auto &r : t.bob_records) net += basis_quarter_turns(r.basis);
        if (net % 2 != 0) continue;
        ++matched;
        det += t.detected;
    }
    EXPECT_TRUE(within_sigma(static_cast<double>(det) / matched, 0.5, matched));
}

TEST(Intercept, KnowledgeShapesFollowStrategy) {
    Rng rng(25);
    auto ghz = ProbePreparation::entangled(EncodingPhase::HalfPi);
    auto r = intercept(ghz, 4, {AttackKind::ReplaceSeparable}, rng);
    EXPECT_EQ(r.substituted.kind(), PrepKind::Separable);
    EXPECT_EQ(r.substituted.phases().size(), 4u);
    EXPECT_FALSE(r.knowledge.measured_bases);

    auto m = intercept(ghz, 4, {AttackKind::MeasureResendSeparable}, rng);
    ASSERT_TRUE(m.knowledge.measured_outcomes);
    EXPECT_EQ(m.knowledge.measured_outcomes->size(), 4u);
    // Per-qubit guesses sum to the net-phase guess implied by Eve's parity.
    int net_basis = 0;
    Outcome parity = Outcome::Plus;
    for (int b = 0; b < 4; ++b) {
        net_basis += basis_quarter_turns((*m.knowledge.measured_bases)[b]);
        parity = parity * (*m.knowledge.measured_outcomes)[b];
    }
    int arg = quarter_turns(m.substituted.net_phase()) + net_basis;
    EXPECT_EQ(cos_quarter(arg), sign(parity));

    auto e = intercept(ProbePreparation::separable({EncodingPhase::Zero, EncodingPhase::Pi}), 2,
                       {AttackKind::MeasureResendEntangled}, rng);
    EXPECT_EQ(e.substituted.kind(), PrepKind::Entangled);
}

TEST(MlGuess, MatchedAndMismatchedBases) {
    Rng rng(26);
    // X basis, +1: only χ = 0 predicts +1 with certainty.
    EXPECT_EQ(ml_encoding_guess(0, Outcome::Plus, rng), EncodingPhase::Zero);
    EXPECT_EQ(ml_encoding_guess(0, Outcome::Minus, rng), EncodingPhase::Pi);
    // Y basis adds π/2; -1 points at χ = π/2.
    EXPECT_EQ(ml_encoding_guess(1, Outcome::Minus, rng), EncodingPhase::HalfPi);
    EXPECT_EQ(ml_encoding_guess(1, Outcome::Plus, rng), EncodingPhase::ThreeHalfPi);
}

TEST(AttackNames, RoundTrip) {
    for (AttackKind k : kAllAttackKinds) EXPECT_EQ(parse_attack(attack_name(k)), k);
    EXPECT_THROW(parse_attack("spoof"), std::invalid_argument);
    AttackStrategy bad{AttackKind::ReplaceEntangled, 1.5};
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace sqrs
