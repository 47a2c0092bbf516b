#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sqrs/adversary.hpp"
#include "sqrs/grid.hpp"
#include "sqrs/params.hpp"

namespace sqrs {

/// Per-round probabilities that Eve is first caught on a separable or a GHZ round.
struct DetectionDistribution {
    double d_s = 0.0;
    double d_e = 0.0;

    double u() const { return 1.0 - d_s - d_e; }
    void validate() const;
};

/// (1-d)^n d: probability of n undetected rounds before the detecting one.
double geo1_pmf(int n_r, double d);
/// (1-d)^(n-1) d: probability that the n-th round is the detecting one.
double geo2_pmf(int n_r, double d);

/// Upper bound on the probability that Eve gains information from n_r rounds before
/// her k-th detection, mixing separable and GHZ detection channels. For k = 1 this is
/// u^(n_r-1) d_s [n_r >= 1] + u^n_r d_e.
double snt_bound(int k_detections, int n_r, double d_s, double d_e);

/// Detection cells weighted by P_S, P_E and the attack probability.
DetectionDistribution per_round_rates(const AttackStrategy &strategy, const ProtocolParams &params,
                                      DetectionModel model = DetectionModel::Published);

/// Eve's mean dispersion after exactly n attacked rounds, n = 0..n_cap. Rounds past the
/// cap are treated as giving her perfect knowledge.
struct LambdaCurve {
    std::vector<double> values;
    std::vector<double> std_errors;
    double tail_value = 0.0;

    int n_cap() const { return static_cast<int>(values.size()) - 1; }
    double at(int n) const { return n <= n_cap() ? values[n] : tail_value; }
};

/// 100 for a single Bob, 50 otherwise.
int default_curve_cap(int n_bobs);

struct CurveOptions {
    int repetitions = 256;
    /// Negative selects default_curve_cap.
    int n_cap = -1;
    std::size_t bins = kDefaultGridBins;
};

/// Simulates Eve's dispersion curve. Her evidence depends only on the kind of probe she
/// resends, N_B and P_F, so the curve can be reused across P_S.
LambdaCurve build_lambda_curve(const AttackStrategy &strategy, int n_bobs, double p_fidelity,
                               const CurveOptions &options, std::uint64_t seed);

/// Σ_n P(n) Λ(n) with geometric weights for one Bob and the k = 1 trinomial weights
/// otherwise. A lower bound on Eve's mean dispersion.
double lambda_e_lower_bound(const AttackStrategy &strategy, const ProtocolParams &params, const LambdaCurve &curve,
                            DetectionModel model = DetectionModel::Published);

/// Probability that Eve attacks n_rounds rounds without being detected.
double undetected_probability(const AttackStrategy &strategy, const ProtocolParams &params, int n_rounds,
                              DetectionModel model = DetectionModel::Published);

struct SecurityMapRow {
    double p_s = 0.0;
    double p_f = 0.0;
    double bound = 0.0;
};

/// Bound over an n_points × n_points grid on [0,1]², P_S outer and P_F inner.
std::vector<SecurityMapRow> security_map(const AttackStrategy &strategy, int n_bobs, int n_points,
                                         const CurveOptions &options, std::uint64_t seed,
                                         DetectionModel model = DetectionModel::Published);

std::string security_map_csv(const std::vector<SecurityMapRow> &rows);

}  // namespace sqrs
