#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sqrs/evidence.hpp"
#include "sqrs/params.hpp"
#include "sqrs/qstate.hpp"
#include "sqrs/records.hpp"
#include "sqrs/rng.hpp"

namespace sqrs {

enum class AttackKind : std::uint8_t {
    ReplaceSeparable,
    ReplaceEntangled,
    MeasureResendSeparable,
    MeasureResendEntangled,
};

inline constexpr AttackKind kAllAttackKinds[] = {AttackKind::ReplaceSeparable, AttackKind::ReplaceEntangled,
                                                 AttackKind::MeasureResendSeparable,
                                                 AttackKind::MeasureResendEntangled};

std::string_view attack_name(AttackKind k);
AttackKind parse_attack(std::string_view name);
/// Kind of probe Eve sends on to the Bobs.
PrepKind resend_kind(AttackKind k);
bool is_measure_resend(AttackKind k);

struct AttackStrategy {
    AttackKind kind = AttackKind::MeasureResendEntangled;
    double attack_probability = 1.0;

    void validate() const {
        if (!(attack_probability >= 0.0 && attack_probability <= 1.0))
            throw std::invalid_argument("attack_probability must lie in [0, 1]");
    }
};

/// Eve's private record of one attacked round. She always knows exactly what she resent.
struct EveRoundKnowledge {
    ProbePreparation resent_preparation;
    std::optional<std::vector<Basis>> measured_bases;
    std::optional<std::vector<Outcome>> measured_outcomes;

    friend bool operator==(const EveRoundKnowledge &, const EveRoundKnowledge &) = default;
};

struct Interception {
    ProbePreparation substituted;
    EveRoundKnowledge knowledge;
};

/// Eve's action on the quantum channel for one round. `n_bobs` sizes the probes Eve
/// prepares when the original was a GHZ state.
Interception intercept(const ProbePreparation &prep, int n_bobs, const AttackStrategy &strategy, Rng &rng);

/// Maximum-likelihood encoding phase given one ±1 result whose cosine argument carries
/// `offset_quarters`·π/2 on top of the unknown encoding. Ties are broken uniformly.
EncodingPhase ml_encoding_guess(int offset_quarters, Outcome outcome, Rng &rng);

/// Turns the public announcements of one attacked round into evidence tied to the
/// phases Eve resent. Bobs that did not apply their phase contribute nothing.
void eve_observe(std::span<const BobRecord> records, const EveRoundKnowledge &knowledge, EvidenceSet &into);

/// Per-fidelity-check contradiction probabilities for replace and measure-resend attacks.
inline constexpr double kReplaceCheckFailure = 0.5;
inline constexpr double kMeasureResendCheckFailure = 0.25;

/// Which closed form to use for per-round detection.
///  Published: the tabulated detection probabilities.
///  Exact: the probability realised by this package's Eve, derived from the
///         measurement laws. Differs from Published for measure-resend-separable on
///         GHZ probes (N_B >= 2) and measure-resend-entangled on separable probes.
enum class DetectionModel : std::uint8_t { Published, Exact };

/// Probability that an attacked round with the given original preparation kind yields
/// at least one failed fidelity check (not weighted by P_S or P_E).
double detection_probability_per_round(AttackKind kind, PrepKind original, const ProtocolParams &params,
                                       DetectionModel model = DetectionModel::Published);

}  // namespace sqrs
