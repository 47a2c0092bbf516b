#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "sqrs/montecarlo.hpp"
#include "sqrs/security.hpp"
#include "test_util.hpp"

namespace sqrs {
namespace {

TEST(Geometric, Geo1) {
    EXPECT_DOUBLE_EQ(geo1_pmf(0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(geo1_pmf(0, 0.25), 0.25);
    EXPECT_THROW(geo1_pmf(3, 0.0), std::invalid_argument);
    double s = 0;
    for (int n = 0; n < 400; ++n) s += geo1_pmf(n, 0.1);
    EXPECT_NEAR(s + std::pow(0.9, 400), 1.0, 1e-12);
}

TEST(Geometric, Geo2) {
    EXPECT_DOUBLE_EQ(geo2_pmf(1, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(geo2_pmf(2, 0.5), 0.25);
    EXPECT_THROW(geo2_pmf(0, 0.5), std::invalid_argument);
    double mean = 0;
    for (int n = 1; n < 2000; ++n) mean += n * geo2_pmf(n, 0.05);
    EXPECT_NEAR(mean, 1 / 0.05, 1e-10);
}

TEST(Snt, SingleDetectionReductions) {
    for (int n = 0; n < 10; ++n) {
        EXPECT_NEAR(snt_bound(1, n, 0.0, 0.2), geo1_pmf(n, 0.2), 1e-15);
        if (n >= 1) EXPECT_NEAR(snt_bound(1, n, 0.3, 0.0), geo2_pmf(n, 0.3), 1e-15);
    }
    const double u = 0.85;
    EXPECT_NEAR(snt_bound(1, 3, 0.1, 0.05), u * u * 0.1 + u * u * u * 0.05, 1e-15);
    double total = 0;
    for (int n = 0; n < 2000; ++n) total += snt_bound(1, n, 0.1, 0.05);
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Snt, MatchesTwoChannelSimulation) {
    // Separable detections happen after the round's information is gathered; GHZ
    // detections before. Count information rounds up to the first detection.
    Rng rng(1);
    const double ds = 0.1, de = 0.05;
    const std::size_t trials = 100000;
    std::vector<std::size_t> counts(6, 0);
    for (std::size_t t = 0; t < trials; ++t) {
        int info = 0;
        while (true) {
            double x = uniform01(rng);
            if (x < de) break;
            if (x < de + ds) {
                ++info;
                break;
            }
            ++info;
        }
        if (info < 6) ++counts[info];
    }
    for (int n = 0; n < 6; ++n)
        EXPECT_TRUE(testing::within_sigma(static_cast<double>(counts[n]) / trials, snt_bound(1, n, ds, de), trials));
}

TEST(Snt, MultipleDetectionsAreValidMasses) {
    for (int k = 1; k <= 4; ++k)
        for (int n = 0; n < 20; ++n) {
            double v = snt_bound(k, n, 0.2, 0.1);
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    EXPECT_THROW(snt_bound(0, 1, 0.1, 0.1), std::invalid_argument);
    EXPECT_THROW(snt_bound(1, 1, 0.7, 0.7), std::invalid_argument);
}

TEST(PerRoundRates, WeightedCells) {
    auto r = per_round_rates({AttackKind::MeasureResendEntangled}, {4, 1, 0.0, 0.5});
    EXPECT_DOUBLE_EQ(r.d_s, 0.0);
    EXPECT_NEAR(r.d_e, 0.25 * std::pow(0.5, 4) / 2, 1e-15);
    auto z = per_round_rates({AttackKind::ReplaceSeparable}, {3, 1, 0.4, 0.0});
    EXPECT_EQ(z.d_s, 0.0);
    EXPECT_EQ(z.d_e, 0.0);
    auto one = per_round_rates({AttackKind::ReplaceSeparable}, {1, 1, 1.0, 1.0});
    EXPECT_DOUBLE_EQ(one.d_s, 0.25);
}

TEST(PerRoundRates, MatchSimulatedFirstRoundDetection) {
    Rng rng(2);
    const std::size_t n = 10000;
    for (AttackKind k : kAllAttackKinds)
        for (int nb = 1; nb <= 4; ++nb)
            for (double pf : {0.25, 0.5, 0.75})
                for (double ps : {0.0, 0.5, 1.0}) {
                    ProtocolParams p{nb, 1, ps, pf};
                    auto truth = TrueParameters::random(nb, rng);
                    std::size_t det = 0;
                    for (std::size_t i = 0; i < n; ++i) det += run_round(p, truth, AttackStrategy{k}, rng).detected;
                    auto r = per_round_rates({k}, p, DetectionModel::Exact);
                    EXPECT_TRUE(testing::within_sigma(static_cast<double>(det) / n, r.d_s + r.d_e, n))
                        << attack_name(k) << " nb=" << nb << " pf=" << pf << " ps=" << ps;
                }
}

TEST(Undetected, PowerOfSurvival) {
    EXPECT_DOUBLE_EQ(undetected_probability({AttackKind::ReplaceSeparable}, {2, 1, 0.5, 0.0}, 1000), 1.0);
    EXPECT_NEAR(undetected_probability({AttackKind::ReplaceSeparable}, {1, 1, 1.0, 1.0}, 100), std::pow(0.75, 100),
                1e-25);
}

TEST(Undetected, MatchesSimulation) {
    ProtocolParams p{2, 20, 0.5, 0.3};
    AttackStrategy s{AttackKind::MeasureResendEntangled};
    auto truths = generate_truth_sets(2, 100, 3);
    auto e = simulate_eve(p, s, truths, {100, 64}, 4);
    double expect = undetected_probability(s, p, 20, DetectionModel::Exact);
    EXPECT_TRUE(testing::within_sigma(e.undetected_fraction, expect, e.trials));
}

TEST(LambdaCurve, StartsUninformedAndDecreases) {
    CurveOptions opt{64, 30, 256};
    auto c = build_lambda_curve({AttackKind::MeasureResendSeparable}, 2, 0.3, opt, 5);
    EXPECT_EQ(c.n_cap(), 30);
    EXPECT_NEAR(c.values[0], 1.0, 1e-9);
    EXPECT_LT(c.values[30], c.values[5]);
    for (double v : c.values) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 2.0);
    }
    EXPECT_EQ(c.at(31), 0.0);
    EXPECT_EQ(default_curve_cap(1), 100);
    EXPECT_EQ(default_curve_cap(5), 50);
}

TEST(LowerBound, SingleBobReplaceFullChecks) {
    CurveOptions opt{64, -1, 256};
    AttackStrategy s{AttackKind::ReplaceSeparable};
    auto c = build_lambda_curve(s, 1, 1.0, opt, 6);
    ProtocolParams p{1, 100, 1.0, 1.0};
    double expect = 0;
    for (int n = 0; n <= 100; ++n) expect += geo1_pmf(n, 0.25) * c.values[n];
    EXPECT_NEAR(lambda_e_lower_bound(s, p, c), expect, 1e-12);
    // At P_F = 1 nothing is ever measured, so Eve learns nothing at all.
    EXPECT_NEAR(expect, 1.0, 1e-6);
}

TEST(LowerBound, VanishesWithoutChecks) {
    CurveOptions opt{16, 20, 256};
    AttackStrategy s{AttackKind::MeasureResendEntangled};
    auto c = build_lambda_curve(s, 2, 0.0, opt, 7);
    EXPECT_EQ(lambda_e_lower_bound(s, {2, 1, 0.5, 0.0}, c), 0.0);
    auto c_small = build_lambda_curve(s, 2, 1e-3, opt, 7);
    // Only the first n_cap + 1 rounds carry weight, and they are rarely the detecting ones.
    ProtocolParams p{2, 1, 0.5, 1e-3};
    double caught_early = 1.0 - std::pow(per_round_rates(s, p).u(), c_small.n_cap() + 1);
    double peak = *std::max_element(c_small.values.begin(), c_small.values.end());
    EXPECT_LE(lambda_e_lower_bound(s, p, c_small), peak * caught_early + 1e-15);
    EXPECT_LT(caught_early, 0.01);
}

TEST(LowerBound, NonDecreasingInFidelityProbability) {
    CurveOptions opt{96, -1, 256};
    AttackStrategy s{AttackKind::MeasureResendSeparable};
    double prev = -1, prev_se = 0;
    for (double pf : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        auto c = build_lambda_curve(s, 1, pf, opt, 8);
        double b = lambda_e_lower_bound(s, {1, 1, 1.0, pf}, c);
        double se = 0;
        for (int n = 0; n <= c.n_cap(); ++n) se += geo1_pmf(n, pf / 8) * c.std_errors[n];
        EXPECT_GE(b, prev - 2 * std::hypot(se, prev_se)) << pf;
        prev = b;
        prev_se = se;
    }
}

TEST(LowerBound, MeasureResendBelowReplace) {
    CurveOptions opt{64, -1, 256};
    for (double pf : {0.3, 0.7}) {
        ProtocolParams p{2, 1, 0.5, pf};
        AttackStrategy mr{AttackKind::MeasureResendSeparable}, r{AttackKind::ReplaceSeparable};
        auto cm = build_lambda_curve(mr, 2, pf, opt, 9);
        auto cr = build_lambda_curve(r, 2, pf, opt, 9);
        double se = 0;
        for (int n = 0; n <= cm.n_cap(); ++n) se += std::hypot(cm.std_errors[n], cr.std_errors[n]);
        EXPECT_LE(lambda_e_lower_bound(mr, p, cm), lambda_e_lower_bound(r, p, cr) + 2 * se);
    }
}

TEST(SecurityMap, ZeroFidelityColumnIsZeroAndCsvHasHeader) {
    CurveOptions opt{8, 10, 256};
    auto rows = security_map({AttackKind::MeasureResendEntangled}, 2, 3, opt, 10);
    ASSERT_EQ(rows.size(), 9u);
    for (const auto &r : rows)
        if (r.p_f == 0.0) EXPECT_EQ(r.bound, 0.0);
    auto csv = security_map_csv(rows);
    EXPECT_EQ(csv.rfind("p_s,p_f,bound\n", 0), 0u);
}

}  // namespace
}  // namespace sqrs
