#pragma once

#include <stdexcept>
#include <string>

namespace sqrs {

/// The independent variables of every result: network size, round budget, and the
/// two protocol probabilities. All Bobs share one fidelity-check probability.
struct ProtocolParams {
    int n_bobs = 1;
    int n_rounds = 1;
    double p_separable = 0.5;
    double p_fidelity = 0.5;

    double p_entangled() const { return 1.0 - p_separable; }
    double p_measure() const { return 1.0 - p_fidelity; }

    void validate() const {
        if (n_bobs < 1) throw std::invalid_argument("n_bobs must be positive, got " + std::to_string(n_bobs));
        if (n_rounds < 0) throw std::invalid_argument("n_rounds must be non-negative, got " + std::to_string(n_rounds));
        if (!(p_separable >= 0.0 && p_separable <= 1.0)) throw std::invalid_argument("p_separable must lie in [0, 1]");
        if (!(p_fidelity >= 0.0 && p_fidelity <= 1.0)) throw std::invalid_argument("p_fidelity must lie in [0, 1]");
    }
};

}  // namespace sqrs
