#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sqrs/phase.hpp"

namespace sqrs {

inline constexpr std::size_t kDefaultGridBins = 1024;

/// A discretized circular density over [θ0, θ0 + 2π), bin j centered at θ0 + 2πj/K.
/// K must be a power of two.
class LikelihoodGrid {
  public:
    explicit LikelihoodGrid(std::size_t bins = kDefaultGridBins, double origin = 0.0);
    LikelihoodGrid(std::vector<double> values, double origin = 0.0, bool normalized = false);

    static LikelihoodGrid uniform(std::size_t bins = kDefaultGridBins);
    /// All mass in the bin nearest to `at`.
    static LikelihoodGrid delta(double at, std::size_t bins = kDefaultGridBins);

    std::size_t size() const { return bins_.size(); }
    double origin() const { return origin_; }
    double bin_width() const { return kTwoPi / static_cast<double>(bins_.size()); }
    double theta(std::size_t j) const { return origin_ + bin_width() * static_cast<double>(j); }
    std::size_t nearest_bin(double angle) const;

    std::span<const double> values() const { return bins_; }
    std::span<double> mutable_values() {
        normalized_ = false;
        return bins_;
    }
    double operator[](std::size_t j) const { return bins_[j]; }

    bool normalized() const { return normalized_; }
    /// Σ bins · 2π/K.
    double mass() const;
    /// Rescales so mass() == 1. Throws if the grid carries no mass.
    LikelihoodGrid &normalize();

    /// Bins as `theta,value` CSV rows with a header line.
    std::string to_csv() const;

  private:
    std::vector<double> bins_;
    double origin_ = 0.0;
    bool normalized_ = false;
};

/// Density of the modular sum of independent angles, via FFT. All grids must share K
/// and origin 0; the result is normalized.
LikelihoodGrid circular_convolve(std::span<const LikelihoodGrid> grids);

/// O(K²) reference convolution of two normalized grids. Test oracle.
LikelihoodGrid direct_circular_convolve(const LikelihoodGrid &a, const LikelihoodGrid &b);

}  // namespace sqrs
