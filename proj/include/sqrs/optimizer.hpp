#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqrs/adversary.hpp"
#include "sqrs/grid.hpp"
#include "sqrs/protocol.hpp"
#include "sqrs/security.hpp"

namespace sqrs {

/// Which initial states Alice may use: both, or only one kind.
enum class Approach : std::uint8_t { Hybrid, SeparableOnly, EntangledOnly };

std::string_view approach_name(Approach a);
Approach parse_approach(std::string_view name);

struct SearchConfig {
    int n_bobs = 2;
    int n_rounds = 100;
    AttackStrategy strategy{};
    Approach approach = Approach::Hybrid;
    /// Points per axis of the initial grid over [0,1]².
    int initial_points = 11;
    int refinements = 3;
    int repetitions_per_point = 16;
    int truth_sets = 64;
    double lambda_e_threshold = 0.5;
    /// Pins P_F to one value instead of searching it.
    std::optional<double> fixed_p_f;
    std::size_t grid_bins = kDefaultGridBins;
    /// Also evaluate the closed-form lower bound on Λ_E at every point.
    bool report_bound = false;
    CurveOptions curve{};

    void validate() const;
};

struct GridPointResult {
    double p_s = 0.0;
    double p_f = 0.0;
    double lambda_a = 1.0;
    double lambda_a_se = 0.0;
    double lambda_e = 1.0;
    double lambda_e_se = 0.0;
    double undetected_fraction = 0.0;
    /// NaN when no execution detected Eve.
    double mean_rounds_to_detection = 0.0;
    /// NaN unless SearchConfig::report_bound.
    double lambda_e_bound = 0.0;
    bool feasible = false;
    /// Refinement level at which the point was first evaluated.
    int level = 0;
};

/// Simulates one (P_S, P_F) point with the shared truth vectors. Streams depend on the
/// seed and the execution index only, so different points use common random numbers.
GridPointResult evaluate_point(double p_s, double p_f, const SearchConfig &config,
                               std::span<const TrueParameters> truths, std::uint64_t seed,
                               const LambdaCurve *curve = nullptr);

struct SearchResult {
    std::optional<GridPointResult> best;
    /// Every evaluated point in evaluation order.
    std::vector<GridPointResult> log;
    /// When nothing is feasible: per P_S column, the point with the largest Λ_E.
    std::vector<GridPointResult> infeasibility_frontier;
};

/// Grid search with successive halving of the spacing around the per-column feasible
/// minimizers of Λ_A.
SearchResult refine_search(const SearchConfig &config, std::uint64_t seed);

/// Feasible minimum of Λ_A with ties broken by larger Λ_E, then larger P_F.
bool better_point(const GridPointResult &a, const GridPointResult &b);

std::string evaluation_log_csv(std::span<const GridPointResult> log);

}  // namespace sqrs
