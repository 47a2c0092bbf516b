#include "sqrs/qstate.hpp"

#include <bit>
#include <complex>
#include <stdexcept>
#include <string>

namespace sqrs {

ProbePreparation ProbePreparation::separable(std::vector<EncodingPhase> phases) {
    if (phases.empty()) throw std::invalid_argument("separable preparation needs at least one phase");
    return ProbePreparation(PrepKind::Separable, std::move(phases));
}

ProbePreparation ProbePreparation::entangled(EncodingPhase chi) { return ProbePreparation(PrepKind::Entangled, {chi}); }

EncodingPhase ProbePreparation::net_phase() const {
    EncodingPhase total = EncodingPhase::Zero;
    for (EncodingPhase p : phases_) total = total + p;
    return total;
}

double separable_outcome_prob(PhaseAngle chi, PhaseAngle phi, Basis basis) {
    return 0.5 * (1.0 + std::cos(phi.value() + chi.value() + basis_phase(basis)));
}

double ghz_parity_prob(PhaseAngle chi, PhaseAngle applied_phase_sum, std::span<const Basis> bases) {
    if (bases.empty()) throw std::invalid_argument("ghz_parity_prob: bases must be non-empty");
    double arg = chi.value() + applied_phase_sum.value();
    for (Basis b : bases) arg += basis_phase(b);
    return 0.5 * (1.0 + std::cos(arg));
}

Outcome sample_separable(PhaseAngle chi, std::optional<PhaseAngle> phi, Basis basis, Rng &rng) {
    double p = separable_outcome_prob(chi, phi.value_or(PhaseAngle{}), basis);
    return bernoulli(rng, p) ? Outcome::Plus : Outcome::Minus;
}

std::vector<Outcome> sample_ghz(PhaseAngle chi, std::span<const PhaseAngle> applied_phases,
                                std::span<const Basis> bases, Rng &rng) {
    if (applied_phases.size() != bases.size()) throw std::invalid_argument("sample_ghz: length mismatch");
    if (bases.empty()) throw std::invalid_argument("sample_ghz: no qubits");
    PhaseAngle sum;
    for (PhaseAngle p : applied_phases) sum += p;
    int parity = bernoulli(rng, ghz_parity_prob(chi, sum, bases)) ? 1 : -1;

    std::vector<Outcome> out(bases.size());
    int running = 1;
    for (std::size_t b = 0; b + 1 < bases.size(); ++b) {
        int s = (rng() & 1) ? 1 : -1;
        out[b] = outcome_from_sign(s);
        running *= s;
    }
    out.back() = outcome_from_sign(parity * running);
    return out;
}

std::vector<double> state_vector_oracle(const ProbePreparation &prep, std::span<const PhaseAngle> applied_phases,
                                        std::span<const Basis> bases) {
    const std::size_t n = bases.size();
    if (n == 0) throw std::invalid_argument("state_vector_oracle: no qubits");
    if (n > kOracleMaxQubits) throw std::invalid_argument("state_vector_oracle: too many qubits (" + std::to_string(n) + ")");
    if (applied_phases.size() != n) throw std::invalid_argument("state_vector_oracle: length mismatch");
    if (prep.kind() == PrepKind::Separable && prep.phases().size() != n)
        throw std::invalid_argument("state_vector_oracle: separable preparation size mismatch");

    using cd = std::complex<double>;
    const std::size_t dim = std::size_t{1} << n;
    std::vector<cd> amp(dim, cd{0.0, 0.0});

    // Computational basis: bit b of the index is qubit b in |1>.
    if (prep.kind() == PrepKind::Separable) {
        const double norm = std::pow(0.5, 0.5 * static_cast<double>(n));
        for (std::size_t i = 0; i < dim; ++i) {
            double arg = 0.0;
            for (std::size_t b = 0; b < n; ++b)
                if (i >> b & 1) arg += radians(prep.phases()[b]);
            amp[i] = norm * std::polar(1.0, arg);
        }
    } else {
        amp[0] = cd{std::sqrt(0.5), 0.0};
        amp[dim - 1] += std::sqrt(0.5) * std::polar(1.0, radians(prep.phases()[0]));
    }

    // Phase gate P(φ) then basis rotation P(basis_phase), both diagonal: |1> picks up the phase.
    for (std::size_t b = 0; b < n; ++b) {
        const cd rot = std::polar(1.0, applied_phases[b].value() + basis_phase(bases[b]));
        for (std::size_t i = 0; i < dim; ++i)
            if (i >> b & 1) amp[i] *= rot;
    }

    // Hadamard on every qubit maps |X+> to |0> and |X-> to |1>.
    const double h = std::sqrt(0.5);
    for (std::size_t b = 0; b < n; ++b) {
        const std::size_t bit = std::size_t{1} << b;
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & bit) continue;
            cd a0 = amp[i], a1 = amp[i | bit];
            amp[i] = h * (a0 + a1);
            amp[i | bit] = h * (a0 - a1);
        }
    }

    std::vector<double> probs(dim);
    for (std::size_t i = 0; i < dim; ++i) probs[i] = std::norm(amp[i]);
    return probs;
}

double parity_plus_marginal(std::span<const double> joint) {
    double p = 0.0;
    for (std::size_t i = 0; i < joint.size(); ++i)
        if (std::popcount(i) % 2 == 0) p += joint[i];
    return p;
}

double single_plus_marginal(std::span<const double> joint, std::size_t b) {
    double p = 0.0;
    for (std::size_t i = 0; i < joint.size(); ++i)
        if (!(i >> b & 1)) p += joint[i];
    return p;
}

}  // namespace sqrs
