#include "sqrs/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sqrs/montecarlo.hpp"

namespace sqrs {

namespace {

constexpr std::uint64_t kTruthStream = 0x7255;
constexpr std::uint64_t kCurveStream = 0xC25E;

/// Lattice coordinates at the finest spacing of the search.
struct Lattice {
    int units_per_axis;  // coordinate of the value 1
    std::optional<double> fixed_ps, fixed_pf;

    double ps(int i) const { return fixed_ps ? *fixed_ps : static_cast<double>(i) / units_per_axis; }
    double pf(int j) const { return fixed_pf ? *fixed_pf : static_cast<double>(j) / units_per_axis; }
    int max_i() const { return fixed_ps ? 0 : units_per_axis; }
    int max_j() const { return fixed_pf ? 0 : units_per_axis; }
};

using Coord = std::pair<int, int>;

void add_block(std::set<Coord> &out, const Lattice &lat, int i0, int i1, int j0, int j1, int step) {
    i0 = std::max(i0, 0), i1 = std::min(i1, lat.max_i());
    j0 = std::max(j0, 0), j1 = std::min(j1, lat.max_j());
    // Snap the lower corners onto the step lattice.
    i0 = (i0 + step - 1) / step * step;
    j0 = (j0 + step - 1) / step * step;
    for (int i = i0; i <= i1; i += step)
        for (int j = j0; j <= j1; j += step) out.insert({i, j});
}

}  // namespace

std::string_view approach_name(Approach a) {
    switch (a) {
        case Approach::Hybrid: return "hybrid";
        case Approach::SeparableOnly: return "separable-only";
        case Approach::EntangledOnly: return "entangled-only";
    }
    return "?";
}

Approach parse_approach(std::string_view name) {
    for (Approach a : {Approach::Hybrid, Approach::SeparableOnly, Approach::EntangledOnly})
        if (approach_name(a) == name) return a;
    throw std::invalid_argument("unknown approach '" + std::string(name) + "'");
}

void SearchConfig::validate() const {
    ProtocolParams{n_bobs, n_rounds, 0.5, 0.5}.validate();
    strategy.validate();
    if (n_rounds < 1) throw std::invalid_argument("n_rounds must be positive");
    if (initial_points < 2) throw std::invalid_argument("initial_points must be at least 2");
    if (refinements < 0 || refinements > 16) throw std::invalid_argument("refinements must lie in [0, 16]");
    if (repetitions_per_point < 1) throw std::invalid_argument("repetitions_per_point must be positive");
    if (truth_sets < 1) throw std::invalid_argument("truth_sets must be positive");
    if (!(lambda_e_threshold >= 0.0 && lambda_e_threshold <= 2.0))
        throw std::invalid_argument("lambda_e_threshold must lie in [0, 2]");
    if (fixed_p_f && !(*fixed_p_f >= 0.0 && *fixed_p_f <= 1.0))
        throw std::invalid_argument("fixed_p_f must lie in [0, 1]");
}

GridPointResult evaluate_point(double p_s, double p_f, const SearchConfig &config,
                               std::span<const TrueParameters> truths, std::uint64_t seed, const LambdaCurve *curve) {
    ProtocolParams params{config.n_bobs, config.n_rounds, p_s, p_f};
    params.validate();
    MonteCarloOptions mc{config.repetitions_per_point, config.grid_bins};

    GridPointResult r;
    r.p_s = p_s;
    r.p_f = p_f;
    SampleStats a = simulate_alice(params, truths, mc, seed);
    r.lambda_a = a.mean;
    r.lambda_a_se = a.std_error;
    EveRunSummary e = simulate_eve(params, config.strategy, truths, mc, seed);
    r.lambda_e = e.lambda.mean;
    r.lambda_e_se = e.lambda.std_error;
    r.undetected_fraction = e.undetected_fraction;
    r.mean_rounds_to_detection =
        e.rounds_to_detection.count ? e.rounds_to_detection.mean : std::numeric_limits<double>::quiet_NaN();
    r.lambda_e_bound = curve ? lambda_e_lower_bound(config.strategy, params, *curve)
                             : std::numeric_limits<double>::quiet_NaN();
    r.feasible = r.lambda_e >= config.lambda_e_threshold;
    return r;
}

bool better_point(const GridPointResult &a, const GridPointResult &b) {
    if (a.lambda_a != b.lambda_a) return a.lambda_a < b.lambda_a;
    if (a.lambda_e != b.lambda_e) return a.lambda_e > b.lambda_e;
    return a.p_f > b.p_f;
}

SearchResult refine_search(const SearchConfig &config, std::uint64_t seed) {
    config.validate();
    const int base = config.initial_points - 1;
    Lattice lat{base << config.refinements, std::nullopt, config.fixed_p_f};
    if (config.approach == Approach::SeparableOnly) lat.fixed_ps = 1.0;
    if (config.approach == Approach::EntangledOnly) lat.fixed_ps = 0.0;

    const auto truths = generate_truth_sets(config.n_bobs, config.truth_sets, derive_seed(seed, {kTruthStream}));
    std::map<Coord, GridPointResult> cache;
    std::map<int, LambdaCurve> curves;
    SearchResult result;

    auto evaluate = [&](const std::set<Coord> &points, int level) {
        for (const Coord &c : points) {
            if (cache.count(c)) continue;
            const LambdaCurve *curve = nullptr;
            if (config.report_bound) {
                auto it = curves.find(c.second);
                if (it == curves.end())
                    it = curves
                             .emplace(c.second, build_lambda_curve(config.strategy, config.n_bobs, lat.pf(c.second),
                                                                   config.curve, derive_seed(seed, {kCurveStream})))
                             .first;
                curve = &it->second;
            }
            GridPointResult r = evaluate_point(lat.ps(c.first), lat.pf(c.second), config, truths, seed, curve);
            r.level = level;
            cache.emplace(c, r);
            result.log.push_back(r);
        }
    };

    int step = 1 << config.refinements;
    std::set<Coord> current;
    add_block(current, lat, 0, lat.max_i(), 0, lat.max_j(), step);
    evaluate(current, 0);

    for (int level = 1; level <= config.refinements; ++level) {
        // Per-column feasible minimizers of Λ_A on the current grid.
        std::map<int, Coord> seeds;
        for (const Coord &c : current) {
            const GridPointResult &r = cache.at(c);
            if (!r.feasible) continue;
            auto it = seeds.find(c.first);
            if (it == seeds.end() || better_point(r, cache.at(it->second))) seeds[c.first] = c;
        }
        if (seeds.empty()) break;

        const int half = step / 2;
        std::set<Coord> next;
        std::vector<Coord> ordered;
        for (const auto &[col, c] : seeds) ordered.push_back(c);
        for (const Coord &s : ordered) add_block(next, lat, s.first - half, s.first + half, s.second - half, s.second + half, half);
        for (std::size_t k = 0; k + 1 < ordered.size(); ++k) {
            const Coord &a = ordered[k], &b = ordered[k + 1];
            add_block(next, lat, a.first, b.first, std::min(a.second, b.second) - half,
                      std::max(a.second, b.second) + half, half);
        }
        evaluate(next, level);
        current = std::move(next);
        step = half;
    }

    for (const auto &r : result.log)
        if (r.feasible && (!result.best || better_point(r, *result.best))) result.best = r;

    if (!result.best) {
        std::map<double, GridPointResult> frontier;
        for (const auto &r : result.log) {
            auto it = frontier.find(r.p_s);
            if (it == frontier.end() || r.lambda_e > it->second.lambda_e) frontier[r.p_s] = r;
        }
        for (const auto &[ps, r] : frontier) result.infeasibility_frontier.push_back(r);
    }
    return result;
}

std::string evaluation_log_csv(std::span<const GridPointResult> log) {
    std::ostringstream os;
    os << "p_s,p_f,lambda_a,lambda_a_se,lambda_e,lambda_e_se,undetected_fraction,mean_rounds,lambda_e_bound,"
          "feasible,level\n";
    char buf[320];
    for (const auto &r : log) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.10f,%.10f,%.10f,%.10f,%.10f,%.6f,%.10f,%d,%d\n", r.p_s, r.p_f,
                      r.lambda_a, r.lambda_a_se, r.lambda_e, r.lambda_e_se, r.undetected_fraction,
                      r.mean_rounds_to_detection, r.lambda_e_bound, r.feasible ? 1 : 0, r.level);
        os << buf;
    }
    return os.str();
}

}  // namespace sqrs
