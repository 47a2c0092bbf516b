#include "sqrs/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sqrs {

namespace {

void check_bins(std::size_t k) {
    if (k < 4 || !std::has_single_bit(k))
        throw std::invalid_argument("grid bin count must be a power of two >= 4, got " + std::to_string(k));
}

template <typename T>
struct FftwFree {
    void operator()(T *p) const { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree<T>>;

FftwBuffer<double> alloc_real(std::size_t n) { return FftwBuffer<double>(fftw_alloc_real(n)); }
FftwBuffer<fftw_complex> alloc_complex(std::size_t n) { return FftwBuffer<fftw_complex>(fftw_alloc_complex(n)); }

/// Plans are created once per size under a lock; executing a plan on fresh
/// fftw_malloc'd buffers is thread-safe.
struct PlanPair {
    fftw_plan forward;
    fftw_plan inverse;
};

const PlanPair &plans_for(std::size_t k) {
    static std::mutex mu;
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    auto in = alloc_real(k);
    auto out = alloc_complex(k / 2 + 1);
    const int n = static_cast<int>(k);
    PlanPair p{fftw_plan_dft_r2c_1d(n, in.get(), out.get(), FFTW_ESTIMATE),
               fftw_plan_dft_c2r_1d(n, out.get(), in.get(), FFTW_ESTIMATE)};
    return cache.emplace(k, p).first->second;
}

}  // namespace

LikelihoodGrid::LikelihoodGrid(std::size_t bins, double origin) : bins_(bins, 0.0), origin_(origin) { check_bins(bins); }

LikelihoodGrid::LikelihoodGrid(std::vector<double> values, double origin, bool normalized)
    : bins_(std::move(values)), origin_(origin), normalized_(normalized) {
    check_bins(bins_.size());
    for (double v : bins_)
        if (!(v >= 0.0)) throw std::invalid_argument("grid bins must be non-negative");
}

LikelihoodGrid LikelihoodGrid::uniform(std::size_t bins) {
    LikelihoodGrid g(bins);
    std::fill(g.bins_.begin(), g.bins_.end(), 1.0 / kTwoPi);
    g.normalized_ = true;
    return g;
}

LikelihoodGrid LikelihoodGrid::delta(double at, std::size_t bins) {
    LikelihoodGrid g(bins);
    g.bins_[g.nearest_bin(at)] = 1.0 / g.bin_width();
    g.normalized_ = true;
    return g;
}

std::size_t LikelihoodGrid::nearest_bin(double angle) const {
    double rel = canonical_angle(angle - origin_) / bin_width();
    auto j = static_cast<std::size_t>(std::llround(rel));
    return j % bins_.size();
}

double LikelihoodGrid::mass() const { return std::accumulate(bins_.begin(), bins_.end(), 0.0) * bin_width(); }

LikelihoodGrid &LikelihoodGrid::normalize() {
    double m = mass();
    if (!(m > 0.0) || !std::isfinite(m)) throw std::domain_error("cannot normalize a grid with zero or non-finite mass");
    for (double &v : bins_) v /= m;
    normalized_ = true;
    return *this;
}

std::string LikelihoodGrid::to_csv() const {
    std::ostringstream os;
    os << "theta,value\n";
    char buf[64];
    for (std::size_t j = 0; j < bins_.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", theta(j), bins_[j]);
        os << buf;
    }
    return os.str();
}

LikelihoodGrid circular_convolve(std::span<const LikelihoodGrid> grids) {
    if (grids.empty()) throw std::invalid_argument("circular_convolve: no grids");
    const std::size_t k = grids[0].size();
    for (const auto &g : grids) {
        if (g.size() != k) throw std::invalid_argument("circular_convolve: mismatched bin counts");
        if (g.origin() != 0.0) throw std::invalid_argument("circular_convolve: grids must have origin 0");
    }
    if (grids.size() == 1) {
        LikelihoodGrid g = grids[0];
        return g.normalize();
    }

    const PlanPair &plans = plans_for(k);
    const std::size_t nc = k / 2 + 1;
    auto real = alloc_real(k);
    auto spec = alloc_complex(nc);
    auto acc = alloc_complex(nc);

    for (std::size_t i = 0; i < grids.size(); ++i) {
        std::copy(grids[i].values().begin(), grids[i].values().end(), real.get());
        fftw_execute_dft_r2c(plans.forward, real.get(), i == 0 ? acc.get() : spec.get());
        if (i == 0) continue;
        for (std::size_t c = 0; c < nc; ++c) {
            std::complex<double> a(acc[c][0], acc[c][1]), s(spec[c][0], spec[c][1]);
            a *= s;
            acc[c][0] = a.real();
            acc[c][1] = a.imag();
        }
    }
    fftw_execute_dft_c2r(plans.inverse, acc.get(), real.get());

    // h_j = Δ^{n-1} Σ f_i g_{j-i} ...; the inverse transform is unscaled by K.
    const double dx = kTwoPi / static_cast<double>(k);
    const double scale = std::pow(dx, static_cast<double>(grids.size() - 1)) / static_cast<double>(k);
    std::vector<double> out(k);
    for (std::size_t j = 0; j < k; ++j) out[j] = std::max(0.0, real[j] * scale);
    LikelihoodGrid result(std::move(out));
    return result.normalize();
}

LikelihoodGrid direct_circular_convolve(const LikelihoodGrid &a, const LikelihoodGrid &b) {
    if (a.size() != b.size()) throw std::invalid_argument("direct_circular_convolve: mismatched bin counts");
    const std::size_t k = a.size();
    const double dx = a.bin_width();
    std::vector<double> out(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) s += a[i] * b[(j + k - i) % k];
        out[j] = s * dx;
    }
    LikelihoodGrid r(std::move(out));
    return r.normalize();
}

}  // namespace sqrs
