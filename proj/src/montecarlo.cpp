#include "sqrs/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#include "sqrs/inference.hpp"

namespace sqrs {

namespace {

constexpr std::uint64_t kAliceStream = 0xA11CE;
constexpr std::uint64_t kEveStream = 0xE7E;

struct EveExecution {
    double lambda;
    bool detected;
    int rounds;
};

}  // namespace

SampleStats SampleStats::of(std::span<const double> xs) {
    SampleStats s;
    s.count = xs.size();
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / xs.size();
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.std_error = std::sqrt(ss / (xs.size() - 1) / xs.size());
    }
    return s;
}

std::vector<TrueParameters> generate_truth_sets(int n_bobs, int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("generate_truth_sets: count must be positive");
    std::vector<TrueParameters> out;
    out.reserve(count);
    for (int t = 0; t < count; ++t) {
        Rng rng = make_stream(seed, {0x7277, static_cast<std::uint64_t>(t)});
        out.push_back(TrueParameters::random(n_bobs, rng));
    }
    return out;
}

SampleStats simulate_alice(const ProtocolParams &params, std::span<const TrueParameters> truths,
                           const MonteCarloOptions &options, std::uint64_t seed) {
    params.validate();
    if (truths.empty() || options.repetitions < 1) throw std::invalid_argument("simulate_alice: nothing to run");
    const long total = static_cast<long>(truths.size()) * options.repetitions;
    std::vector<double> lambdas(total);
    const std::optional<AttackStrategy> none;

#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < total; ++i) {
        const std::size_t t = i / options.repetitions;
        const auto r = static_cast<std::uint64_t>(i % options.repetitions);
        Rng rng = make_stream(seed, {kAliceStream, t, r});
        EvidenceSet ev;
        for (int k = 0; k < params.n_rounds; ++k) alice_observe(run_round(params, truths[t], none, rng), ev);
        lambdas[i] = lambda_dispersion(theta_posterior(ev, params.n_bobs, options.bins), truths[t].theta().value());
    }
    return SampleStats::of(lambdas);
}

EveRunSummary simulate_eve(const ProtocolParams &params, const AttackStrategy &strategy,
                           std::span<const TrueParameters> truths, const MonteCarloOptions &options,
                           std::uint64_t seed) {
    params.validate();
    strategy.validate();
    if (truths.empty() || options.repetitions < 1) throw std::invalid_argument("simulate_eve: nothing to run");
    const long total = static_cast<long>(truths.size()) * options.repetitions;
    std::vector<EveExecution> runs(total);
    const std::optional<AttackStrategy> attack = strategy;

#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < total; ++i) {
        const std::size_t t = i / options.repetitions;
        const auto r = static_cast<std::uint64_t>(i % options.repetitions);
        Rng rng = make_stream(seed, {kEveStream, t, r});
        EvidenceSet ev;
        EveExecution run{1.0, false, 0};
        for (int k = 0; k < params.n_rounds; ++k) {
            RoundTranscript rt = run_round(params, truths[t], attack, rng);
            EveView v = rt.eve_view();
            if (v.attack_record) eve_observe(v.bob_records, *v.attack_record, ev);
            run.rounds = k + 1;
            if (rt.detected) {
                run.detected = true;
                break;
            }
        }
        run.lambda = lambda_dispersion(theta_posterior(ev, params.n_bobs, options.bins), truths[t].theta().value());
        runs[i] = run;
    }

    EveRunSummary s;
    s.trials = runs.size();
    std::vector<double> lambdas, detect_rounds;
    lambdas.reserve(runs.size());
    std::size_t undetected = 0;
    for (const auto &run : runs) {
        lambdas.push_back(run.lambda);
        if (run.detected)
            detect_rounds.push_back(run.rounds);
        else
            ++undetected;
    }
    s.lambda = SampleStats::of(lambdas);
    s.rounds_to_detection = SampleStats::of(detect_rounds);
    s.undetected_fraction = static_cast<double>(undetected) / runs.size();
    return s;
}

std::vector<double> eve_lambda_prefixes(const ProtocolParams &params, const AttackStrategy &strategy,
                                        const TrueParameters &truth, std::size_t bins, Rng &rng) {
    const std::optional<AttackStrategy> attack = strategy;
    const double theta = truth.theta().value();
    std::vector<double> out;
    out.reserve(params.n_rounds + 1);
    EvidenceSet ev;
    out.push_back(lambda_dispersion(theta_posterior(ev, params.n_bobs, bins), theta));
    for (int k = 0; k < params.n_rounds; ++k) {
        RoundTranscript rt = run_round(params, truth, attack, rng);
        EveView v = rt.eve_view();
        const std::size_t before = ev.total();
        if (v.attack_record) eve_observe(v.bob_records, *v.attack_record, ev);
        if (ev.total() == before)
            out.push_back(out.back());
        else
            out.push_back(lambda_dispersion(theta_posterior(ev, params.n_bobs, bins), theta));
    }
    return out;
}

}  // namespace sqrs
