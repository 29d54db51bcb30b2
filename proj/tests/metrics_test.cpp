#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "priming/metrics.hpp"

using namespace priming;

namespace {

std::vector<PairedScore> pairs(const std::string& id, std::vector<std::pair<double, double>> v) {
    std::vector<PairedScore> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back({id, i, v[i].first, v[i].second});
    return out;
}

std::vector<TargetPE> pes(std::vector<double> v) {
    std::vector<TargetPE> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back({"t" + std::to_string(i), v[i], 1, v[i] > 0 ? 1u : 0u});
    return out;
}

}  // namespace

TEST(PrimingEffect, MeanDifference) {
    auto pe = priming_effect(pairs("t", {{-10, -12}, {-9, -9.5}, {-11, -10}, {-5, -7.5}}));
    // (2 + 0.5 - 1 + 2.5) / 4
    EXPECT_DOUBLE_EQ(pe.pe, 1.0);
    EXPECT_EQ(pe.n_pairs, 4u);
    EXPECT_EQ(pe.preference_count, 3u);
    auto two = priming_effect(pairs("u", {{-1, -2}, {-1, -2.5}}));
    EXPECT_DOUBLE_EQ(two.pe, 1.25);
    EXPECT_EQ(two.preference_count, 2u);
}

TEST(PrimingEffect, TiesAreNotPreferences) {
    auto pe = priming_effect(pairs("t", {{-3, -3}, {-4, -4}}));
    EXPECT_EQ(pe.pe, 0.0);
    EXPECT_EQ(pe.preference_count, 0u);
}

TEST(PrimingEffect, Errors) {
    EXPECT_THROW(priming_effect({}), MetricsError);
    auto mixed = pairs("a", {{-1, -2}});
    mixed.push_back({"b", 1, -1, -2});
    EXPECT_THROW(priming_effect(mixed), MetricsError);
    EXPECT_THROW(priming_effect(pairs("a", {{std::nan(""), -2}})), MetricsError);
}

TEST(PrimingEffect, AntisymmetryAndShiftInvariance) {
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> lp(-60, -5), shift(-20, 20);
    for (int t = 0; t < 200; ++t) {
        std::vector<PairedScore> s, swapped, shifted;
        for (std::size_t i = 0; i < 10; ++i) {
            const double c = lp(g), n = lp(g), d = shift(g);
            s.push_back({"t", i, c, n});
            swapped.push_back({"t", i, n, c});
            // Offsets that are exact in binary keep the comparison exact.
            const double k = std::round(d * 8) / 8;
            shifted.push_back({"t", i, c + k, n + k});
        }
        const double pe = priming_effect(s).pe;
        EXPECT_LE(std::abs(priming_effect(swapped).pe + pe), 1e-12 * std::max(1.0, std::abs(pe)));
        EXPECT_NEAR(priming_effect(shifted).pe, pe, 1e-12 * std::max(1.0, std::abs(pe)) + 1e-12);
    }
}

TEST(Summary, StudentTInterval) {
    // Oracle: mean 1.5, sd = sqrt(2.5/4) = 0.790569..., t(0.995, 4) = 4.604094...
    auto s = summarize(pes({0.5, 1.0, 1.5, 2.0, 2.5}));
    EXPECT_NEAR(s.mean_pe, 1.5, 1e-15);
    EXPECT_NEAR(s.sd, 0.7905694150420949, 1e-12);
    const double half = 4.604094871415897 * 0.7905694150420949 / std::sqrt(5.0);
    EXPECT_NEAR(s.ci99.lo, 1.5 - half, 1e-9);
    EXPECT_NEAR(s.ci99.hi, 1.5 + half, 1e-9);
    EXPECT_EQ(s.n_targets, 5u);
}

TEST(Summary, NormalInterval) {
    auto s = summarize(pes({0.5, 1.0, 1.5, 2.0, 2.5}), CiMethod::Normal);
    const double half = 2.5758293035489004 * 0.7905694150420949 / std::sqrt(5.0);
    EXPECT_NEAR(s.ci99.lo, 1.5 - half, 1e-9);
    EXPECT_NEAR(s.ci99.hi, 1.5 + half, 1e-9);
}

TEST(Summary, TQuantileOracles) {
    EXPECT_NEAR(t_quantile(0.995, 4), 4.604094871415897, 1e-10);
    EXPECT_NEAR(t_quantile(0.995, 1), 63.65674116287399, 1e-8);
    EXPECT_NEAR(t_quantile(0.995, 1499), 2.5791131239474514, 1e-10);
}

TEST(Summary, PooledPreferenceRate) {
    std::vector<TargetPE> t{{"a", 1.0, 10, 7}, {"b", -1.0, 5, 1}};
    auto s = summarize(t);
    EXPECT_EQ(s.n_pairs, 15u);
    EXPECT_EQ(s.preference_count, 8u);
    EXPECT_DOUBLE_EQ(s.preference_rate, 8.0 / 15.0);
}

TEST(Summary, NeedsTwoTargets) {
    EXPECT_THROW(summarize(pes({1.0})), MetricsError);
    EXPECT_THROW(summarize(pes({})), MetricsError);
}

TEST(Classify, Behaviors) {
    const Interval pos{0.1, 0.4}, neg{-0.5, -0.2}, zero{-0.1, 0.3};
    EXPECT_EQ(sign_of(pos), Sign::Positive);
    EXPECT_EQ(sign_of(neg), Sign::Negative);
    EXPECT_EQ(sign_of(zero), Sign::Zero);
    EXPECT_EQ(sign_of({0.0, 1.0}), Sign::Zero);
    EXPECT_EQ(classify_behavior(pos, pos), Behavior::Symmetric);
    EXPECT_EQ(classify_behavior(pos, zero), Behavior::Asymmetric);
    EXPECT_EQ(classify_behavior(zero, pos), Behavior::Asymmetric);
    EXPECT_EQ(classify_behavior(pos, neg), Behavior::Biased);
    EXPECT_EQ(classify_behavior(neg, pos), Behavior::Biased);
    EXPECT_EQ(classify_behavior(zero, zero), Behavior::Null);
    EXPECT_EQ(classify_behavior(neg, neg), Behavior::Null);
    EXPECT_EQ(classify_behavior(neg, zero), Behavior::Null);
    EXPECT_EQ(to_string(Behavior::Biased), "biased");
}

TEST(Aggregate, PairsWithPartner) {
    auto r = aggregate("core", Construction::DO, pes({1.0, 1.2, 0.9, 1.1}), pes({-1.0, -1.1, -0.9, -1.2}));
    EXPECT_EQ(r.other_structure, Construction::PO);
    ASSERT_TRUE(r.other.has_value());
    EXPECT_EQ(r.behavior, Behavior::Biased);
    auto alone = aggregate("core", Construction::DO, pes({1.0, 1.2, 0.9}), {});
    EXPECT_FALSE(alone.other.has_value());
    EXPECT_EQ(alone.behavior, Behavior::Null);
}

TEST(Cochran, Formula) {
    EXPECT_EQ(cochran_sample_size(2.576, 0.01, 0.5), 16590);  // ceil(16589.44)
    EXPECT_EQ(cochran_sample_size(1.96, 0.05, 0.5), 385);     // ceil(384.16)
    EXPECT_EQ(cochran_sample_size(1.0, 0.5, 0.5), 1);
    EXPECT_EQ(cochran_sample_size(2.0, 0.1, 0.5), 100);  // exact, no spurious round-up
    EXPECT_EQ(kReferenceCorpusSize, 15000);
    EXPECT_THROW(cochran_sample_size(2.0, 0.0, 0.5), MetricsError);
    EXPECT_THROW(cochran_sample_size(2.0, 0.1, 1.5), MetricsError);
}
