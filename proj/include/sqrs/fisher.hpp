#pragma once

#include <optional>
#include <vector>

#include "sqrs/params.hpp"

namespace sqrs {

/// Per-round Fisher information about θ, split by where it comes from.
struct FisherBreakdown {
    double separable_term = 0.0;
    /// Index m-1 holds the contribution of size-m phase sums from GHZ rounds.
    std::vector<double> entangled_terms;
    double total = 0.0;
};

/// Probability that a given size-m phase sum is measured in one round.
double p_k(int m, const ProtocolParams &params);

/// Fisher information of one ±1 result with P(+1) = (1 + cos x)/2 about x. Equals 1.
double unit_information();

/// Same quantity evaluated by finite differences at a specific argument; for tests
/// and diagnostics. Requires sin(x) != 0.
double unit_information_at(double x, double step = 1e-5);

FisherBreakdown total_information(const ProtocolParams &params);

/// Cramér–Rao bound 1/(n_rounds · I_total); nullopt when there is no information.
std::optional<double> crb_variance(const ProtocolParams &params, int n_rounds);

/// Expected number of rounds before a given φ_k(m) has been measured n_cr times;
/// nullopt when it is never measured. A rough guide to when the bound applies.
std::optional<double> rounds_for_crb_validity(int m, const ProtocolParams &params, int n_cr);

}  // namespace sqrs
