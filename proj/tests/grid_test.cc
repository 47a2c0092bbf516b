#include <gtest/gtest.h>

#include <cmath>

#include "sqrs/grid.hpp"
#include "sqrs/rng.hpp"

namespace sqrs {
namespace {

LikelihoodGrid random_grid(std::size_t k, Rng &rng) {
    std::vector<double> v(k);
    for (double &x : v) x = uniform01(rng);
    LikelihoodGrid g(std::move(v));
    return g.normalize();
}

double max_abs_diff(const LikelihoodGrid &a, const LikelihoodGrid &b) {
    double m = 0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

TEST(LikelihoodGrid, ConstructionRules) {
    EXPECT_THROW(LikelihoodGrid(1000), std::invalid_argument);
    EXPECT_THROW(LikelihoodGrid(2), std::invalid_argument);
    EXPECT_THROW(LikelihoodGrid(std::vector<double>{1, -1, 1, 1}), std::invalid_argument);
    EXPECT_THROW(LikelihoodGrid(8).normalize(), std::domain_error);
    auto u = LikelihoodGrid::uniform(256);
    EXPECT_NEAR(u.mass(), 1.0, 1e-12);
    EXPECT_NEAR(u[17], 1.0 / kTwoPi, 1e-15);
    EXPECT_DOUBLE_EQ(u.theta(64), kHalfPi);
}

TEST(LikelihoodGrid, DeltaAndNearestBin) {
    auto d = LikelihoodGrid::delta(kPi, 1024);
    EXPECT_EQ(d.nearest_bin(kPi), 512u);
    EXPECT_EQ(d.nearest_bin(kTwoPi - 1e-6), 0u);
    EXPECT_NEAR(d.mass(), 1.0, 1e-12);
}

TEST(LikelihoodGrid, CsvHasHeaderAndOneRowPerBin) {
    auto csv = LikelihoodGrid::uniform(8).to_csv();
    EXPECT_EQ(csv.rfind("theta,value\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
}

TEST(CircularConvolve, UniformIsAbsorbing) {
    Rng rng(1);
    auto g = random_grid(512, rng);
    std::vector<LikelihoodGrid> in{LikelihoodGrid::uniform(512), g};
    auto out = circular_convolve(in);
    for (std::size_t j = 0; j < out.size(); ++j) EXPECT_NEAR(out[j], 1.0 / kTwoPi, 1e-12);
}

TEST(CircularConvolve, DeltasAddModuloTwoPi) {
    std::vector<LikelihoodGrid> in{LikelihoodGrid::delta(5.0, 1024), LikelihoodGrid::delta(4.0, 1024)};
    auto out = circular_convolve(in);
    std::size_t peak = std::max_element(out.values().begin(), out.values().end()) - out.values().begin();
    std::size_t expect = out.nearest_bin(9.0 - kTwoPi);
    EXPECT_LE(std::min((peak + 1024 - expect) % 1024, (expect + 1024 - peak) % 1024), 1u);
}

TEST(CircularConvolve, MatchesDirectOracle) {
    Rng rng(2);
    for (std::size_t k : {64u, 256u, 1024u}) {
        for (int trial = 0; trial < 5; ++trial) {
            auto a = random_grid(k, rng), b = random_grid(k, rng), c = random_grid(k, rng);
            std::vector<LikelihoodGrid> in{a, b, c};
            auto fft = circular_convolve(in);
            auto direct = direct_circular_convolve(direct_circular_convolve(a, b), c);
            EXPECT_LT(max_abs_diff(fft, direct), 1e-9) << "k=" << k;
        }
    }
}

TEST(CircularConvolve, RejectsMismatchedGrids) {
    std::vector<LikelihoodGrid> in{LikelihoodGrid::uniform(64), LikelihoodGrid::uniform(128)};
    EXPECT_THROW(circular_convolve(in), std::invalid_argument);
    std::vector<LikelihoodGrid> none;
    EXPECT_THROW(circular_convolve(none), std::invalid_argument);
}

}  // namespace
}  // namespace sqrs
