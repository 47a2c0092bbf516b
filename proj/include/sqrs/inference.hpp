#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sqrs/evidence.hpp"
#include "sqrs/grid.hpp"
#include "sqrs/protocol.hpp"

namespace sqrs {

/// Grid likelihood of one phase combination: bin j holds Π over measurements of
/// (1 + o·cos(θ_j + offset))/2, accumulated in log space with factors floored at 1e-300.
/// Returned unnormalized (peak bin = 1); an empty span yields a flat grid.
LikelihoodGrid likelihood_from_evidence(std::span<const PhaseMeasurement> measurements,
                                        std::size_t bins = kDefaultGridBins);

/// Pulls a density over q·θ back onto θ: output bin j takes the input value at q·θ_j.
/// The result is 2π/q periodic and unnormalized.
LikelihoodGrid rescale_sum_to_theta(const LikelihoodGrid &grid_over_q_theta, int q);

/// (Σ 1/n_j)^-1, or 0 when any count is 0.
double n_effective(std::span<const std::size_t> counts);

/// A set of same-size combinations whose Bob indices cover every Bob exactly q times,
/// so their phases sum to q·θ.
struct CombinationGroup {
    int m = 0;
    int q = 0;
    std::vector<CombinationKey> keys;
    double n_effective = 0.0;
};

struct CombinationPlan {
    std::vector<CombinationGroup> groups;
    /// False when at least one size m fell back to the greedy search.
    bool exhaustive = true;
};

struct PlanOptions {
    /// Candidate-group count above which the greedy search is used.
    std::size_t exhaustive_group_limit = 10000;
    /// Search-node budget for each enumeration or packing step.
    std::size_t node_budget = 1000000;
};

/// Smallest q ≥ 1 such that size-m combinations can sum to q·θ over n_bobs Bobs.
int smallest_theta_multiple(int m, int n_bobs);

/// Chooses, for each size m with data, disjoint groups of combinations that maximize the
/// summed n_effective.
CombinationPlan plan_combinations(const EvidenceSet &evidence, int n_bobs, const PlanOptions &options = {});

/// Normalized posterior over θ under a flat prior: per group, convolve member
/// likelihoods and pull back by q; then multiply the groups together.
LikelihoodGrid theta_posterior(const EvidenceSet &evidence, int n_bobs, std::size_t bins = kDefaultGridBins);

/// ∫ (1 - cos(θ̂ - θ)) L(θ̂) dθ̂ over a normalized grid. Lies in [0, 2].
double lambda_dispersion(const LikelihoodGrid &grid, double theta_true);

/// Circular mean direction of a grid. Diagnostic only.
double circular_mean(const LikelihoodGrid &grid);

struct Execution {
    EvidenceSet evidence;
    TrueParameters truth;
};

/// Mean λ over executions with varied truth vectors.
double capital_lambda(std::span<const Execution> executions, int n_bobs, std::size_t bins = kDefaultGridBins);

}  // namespace sqrs
