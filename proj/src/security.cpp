#include "sqrs/security.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "sqrs/montecarlo.hpp"

namespace sqrs {

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void check_probability(double d, const char *what) {
    if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

void DetectionDistribution::validate() const {
    check_probability(d_s, "d_s");
    check_probability(d_e, "d_e");
    if (d_s + d_e > 1.0 + 1e-12) throw std::invalid_argument("d_s + d_e must not exceed 1");
}

double geo1_pmf(int n_r, double d) {
    if (!(d > 0.0 && d <= 1.0)) throw std::invalid_argument("geo1_pmf: d must lie in (0, 1]");
    if (n_r < 0) throw std::invalid_argument("geo1_pmf: n_r must be non-negative");
    return std::pow(1.0 - d, n_r) * d;
}

double geo2_pmf(int n_r, double d) {
    if (!(d > 0.0 && d <= 1.0)) throw std::invalid_argument("geo2_pmf: d must lie in (0, 1]");
    if (n_r < 1) throw std::invalid_argument("geo2_pmf: n_r must be at least 1");
    return std::pow(1.0 - d, n_r - 1) * d;
}

double snt_bound(int k_detections, int n_r, double d_s, double d_e) {
    if (k_detections < 1) throw std::invalid_argument("snt_bound: k_detections must be at least 1");
    if (n_r < 0) throw std::invalid_argument("snt_bound: n_r must be non-negative");
    DetectionDistribution{d_s, d_e}.validate();
    const double u = std::max(0.0, 1.0 - d_s - d_e);
    // k counts detections that also yielded information (separable rounds); each uses
    // one of the n_r information rounds, hence k <= n_r.
    double s = 0.0;
    for (int k = 0; k <= std::min(n_r, k_detections); ++k)
        s += binomial(k_detections, k) * std::pow(u, n_r - k) * std::pow(d_s, k) * std::pow(d_e, k_detections - k);
    return s;
}

DetectionDistribution per_round_rates(const AttackStrategy &strategy, const ProtocolParams &params,
                                      DetectionModel model) {
    params.validate();
    strategy.validate();
    const double a = strategy.attack_probability;
    DetectionDistribution d;
    d.d_s = a * params.p_separable *
            detection_probability_per_round(strategy.kind, PrepKind::Separable, params, model);
    d.d_e = a * params.p_entangled() *
            detection_probability_per_round(strategy.kind, PrepKind::Entangled, params, model);
    return d;
}

int default_curve_cap(int n_bobs) { return n_bobs == 1 ? 100 : 50; }

LambdaCurve build_lambda_curve(const AttackStrategy &strategy, int n_bobs, double p_fidelity,
                               const CurveOptions &options, std::uint64_t seed) {
    if (options.repetitions < 1) throw std::invalid_argument("build_lambda_curve: repetitions must be positive");
    const int cap = options.n_cap < 0 ? default_curve_cap(n_bobs) : options.n_cap;
    // Every round is attacked; P_S only decides which original Eve intercepts.
    AttackStrategy full = strategy;
    full.attack_probability = 1.0;
    ProtocolParams params{n_bobs, cap, resend_kind(strategy.kind) == PrepKind::Separable ? 1.0 : 0.0, p_fidelity};
    params.validate();

    std::vector<std::vector<double>> per_rep(options.repetitions);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < options.repetitions; ++r) {
        Rng rng = make_stream(seed, {0xC0FE, static_cast<std::uint64_t>(r)});
        TrueParameters truth = TrueParameters::random(n_bobs, rng);
        per_rep[r] = eve_lambda_prefixes(params, full, truth, options.bins, rng);
    }

    LambdaCurve c;
    c.values.resize(cap + 1);
    c.std_errors.resize(cap + 1);
    std::vector<double> column(options.repetitions);
    for (int n = 0; n <= cap; ++n) {
        for (int r = 0; r < options.repetitions; ++r) column[r] = per_rep[r][n];
        SampleStats s = SampleStats::of(column);
        c.values[n] = s.mean;
        c.std_errors[n] = s.std_error;
    }
    return c;
}

double lambda_e_lower_bound(const AttackStrategy &strategy, const ProtocolParams &params, const LambdaCurve &curve,
                            DetectionModel model) {
    DetectionDistribution d = per_round_rates(strategy, params, model);
    const double total = d.d_s + d.d_e;
    if (!(total > 0.0)) return curve.tail_value;
    double bound = 0.0, mass = 0.0;
    for (int n = 0; n <= curve.n_cap(); ++n) {
        // A single Bob's detecting round is a fidelity check, so it carries no phase.
        double w = params.n_bobs == 1 ? geo1_pmf(n, total) : snt_bound(1, n, d.d_s, d.d_e);
        bound += w * curve.values[n];
        mass += w;
    }
    bound += std::max(0.0, 1.0 - mass) * curve.tail_value;
    return bound;
}

double undetected_probability(const AttackStrategy &strategy, const ProtocolParams &params, int n_rounds,
                              DetectionModel model) {
    if (n_rounds < 0) throw std::invalid_argument("undetected_probability: n_rounds must be non-negative");
    return std::pow(per_round_rates(strategy, params, model).u(), n_rounds);
}

std::vector<SecurityMapRow> security_map(const AttackStrategy &strategy, int n_bobs, int n_points,
                                         const CurveOptions &options, std::uint64_t seed, DetectionModel model) {
    if (n_points < 2) throw std::invalid_argument("security_map: need at least 2 points per axis");
    std::vector<LambdaCurve> curves;
    curves.reserve(n_points);
    for (int j = 0; j < n_points; ++j) {
        double pf = static_cast<double>(j) / (n_points - 1);
        curves.push_back(build_lambda_curve(strategy, n_bobs, pf, options, derive_seed(seed, {0x5EC, (std::uint64_t)j})));
    }
    std::vector<SecurityMapRow> rows;
    for (int i = 0; i < n_points; ++i) {
        double ps = static_cast<double>(i) / (n_points - 1);
        for (int j = 0; j < n_points; ++j) {
            double pf = static_cast<double>(j) / (n_points - 1);
            ProtocolParams p{n_bobs, 1, ps, pf};
            rows.push_back({ps, pf, lambda_e_lower_bound(strategy, p, curves[j], model)});
        }
    }
    return rows;
}

std::string security_map_csv(const std::vector<SecurityMapRow> &rows) {
    std::ostringstream os;
    os << "p_s,p_f,bound\n";
    char buf[96];
    for (const auto &r : rows) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.10f\n", r.p_s, r.p_f, r.bound);
        os << buf;
    }
    return os.str();
}

}  // namespace sqrs
