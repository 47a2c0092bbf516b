#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sqrs/adversary.hpp"
#include "sqrs/grid.hpp"
#include "sqrs/params.hpp"
#include "sqrs/protocol.hpp"

namespace sqrs {

/// Mean and standard error of the mean of a sample.
struct SampleStats {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;

    static SampleStats of(std::span<const double> xs);
};

/// Truth vectors shared by every point of a sweep, drawn from their own stream.
std::vector<TrueParameters> generate_truth_sets(int n_bobs, int count, std::uint64_t seed);

struct MonteCarloOptions {
    /// Executions per truth vector.
    int repetitions = 16;
    std::size_t bins = kDefaultGridBins;
};

/// Honest executions of params.n_rounds rounds; statistics of Alice's λ.
SampleStats simulate_alice(const ProtocolParams &params, std::span<const TrueParameters> truths,
                           const MonteCarloOptions &options, std::uint64_t seed);

struct EveRunSummary {
    SampleStats lambda;
    /// Fraction of executions that reached params.n_rounds without a detection.
    double undetected_fraction = 0.0;
    /// 1-based index of the detecting round, over executions with a detection.
    SampleStats rounds_to_detection;
    std::size_t trials = 0;
};

/// Attacked executions that stop at the first detection; statistics of Eve's λ and of
/// the detection time.
EveRunSummary simulate_eve(const ProtocolParams &params, const AttackStrategy &strategy,
                           std::span<const TrueParameters> truths, const MonteCarloOptions &options,
                           std::uint64_t seed);

/// Eve's λ after each prefix of a non-stopping attacked execution: entry n is λ after
/// the first n rounds, for n = 0..params.n_rounds.
std::vector<double> eve_lambda_prefixes(const ProtocolParams &params, const AttackStrategy &strategy,
                                        const TrueParameters &truth, std::size_t bins, Rng &rng);

}  // namespace sqrs
