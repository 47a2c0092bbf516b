#include "sqrs/fisher.hpp"

#include <cmath>
#include <stdexcept>

#include "sqrs/phase.hpp"

namespace sqrs {

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

double p_k(int m, const ProtocolParams &params) {
    const int n = params.n_bobs;
    if (m < 1 || m > n) throw std::invalid_argument("p_k: m must lie in [1, n_bobs]");
    const double pm = params.p_measure(), pf = params.p_fidelity;
    double sep = m == 1 ? params.p_separable * pm : 0.0;
    return sep + params.p_entangled() * std::pow(pm, m) * std::pow(pf, n - m);
}

double unit_information() { return 1.0; }

double unit_information_at(double x, double step) {
    // I(x) = Σ_o (∂_x P(o|x))² / P(o|x) with P(±1|x) = (1 ± cos x)/2.
    double info = 0.0;
    for (int o : {+1, -1}) {
        auto prob = [o](double a) { return 0.5 * (1.0 + o * std::cos(a)); };
        double d = (prob(x + step) - prob(x - step)) / (2.0 * step);
        info += d * d / prob(x);
    }
    return info;
}

FisherBreakdown total_information(const ProtocolParams &params) {
    params.validate();
    const int n = params.n_bobs;
    const double pm = params.p_measure(), pf = params.p_fidelity;
    FisherBreakdown f;
    f.separable_term = params.p_separable * pm * unit_information() / n;
    f.total = f.separable_term;
    for (int m = 1; m <= n; ++m) {
        double t = params.p_entangled() * std::pow(pm, m) * std::pow(pf, n - m) * (static_cast<double>(m) / n) *
                   binomial(n - 1, m - 1) * unit_information();
        f.entangled_terms.push_back(t);
        f.total += t;
    }
    return f;
}

std::optional<double> crb_variance(const ProtocolParams &params, int n_rounds) {
    if (n_rounds < 1) throw std::invalid_argument("crb_variance: n_rounds must be positive");
    double info = total_information(params).total;
    if (!(info > 0.0)) return std::nullopt;
    return 1.0 / (n_rounds * info);
}

std::optional<double> rounds_for_crb_validity(int m, const ProtocolParams &params, int n_cr) {
    double p = p_k(m, params);
    if (!(p > 0.0)) return std::nullopt;
    return n_cr / p;
}

}  // namespace sqrs
