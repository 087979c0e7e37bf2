#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "rdtfg/drift.hpp"

using namespace rdtfg;
using rdtfg::test::importance;
using rdtfg::test::samples;

TEST(TemporalSplit, EightSamples) {
    auto s = samples({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}, {0, 1, 0, 1, 0, 1, 0, 1});
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i].timestamp = static_cast<std::int64_t>(i + 1);
    }
    std::reverse(s.begin(), s.end());
    const auto split = drift::temporal_split(s, 0.75);
    ASSERT_EQ(split.train.size(), 6u);
    ASSERT_EQ(split.test.size(), 2u);
    EXPECT_EQ(split.test[0].timestamp, 7);
    EXPECT_EQ(split.test[1].timestamp, 8);
    EXPECT_EQ(split.boundary_timestamp, 7);
}

TEST(TemporalSplit, FullScaleCounts) {
    std::vector<ScoredSample> s(590540);
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i].transaction_id = std::to_string(i);
        s[i].timestamp = static_cast<std::int64_t>(i / 3);
    }
    const auto split = drift::temporal_split(s, 0.75);
    EXPECT_EQ(split.train.size(), 442905u);
    EXPECT_EQ(split.test.size(), 147635u);
}

TEST(TemporalSplit, TiesBrokenByIdAndDeterministic) {
    auto s = samples({0.1, 0.2, 0.3, 0.4}, {0, 1, 0, 1});
    for (auto& x : s) {
        x.timestamp = 5;
    }
    std::mt19937 rng(1);
    for (int rep = 0; rep < 10; ++rep) {
        std::shuffle(s.begin(), s.end(), rng);
        const auto split = drift::temporal_split(s, 0.75);
        ASSERT_EQ(split.test.size(), 1u);
        EXPECT_EQ(split.test[0].transaction_id, "t3");
    }
}

TEST(TemporalSplit, TrainNeverAfterTest) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> ts(0, 50);
    for (int rep = 0; rep < 30; ++rep) {
        std::vector<ScoredSample> s(97);
        for (std::size_t i = 0; i < s.size(); ++i) {
            s[i].transaction_id = "x" + std::to_string(ts(rng)) + "_" + std::to_string(i);
            s[i].timestamp = ts(rng);
        }
        const auto split = drift::temporal_split(s, 0.6 + 0.01 * rep);
        std::int64_t max_train = INT64_MIN;
        std::int64_t min_test = INT64_MAX;
        for (const auto& x : split.train) {
            max_train = std::max(max_train, x.timestamp);
        }
        for (const auto& x : split.test) {
            min_test = std::min(min_test, x.timestamp);
        }
        EXPECT_LE(max_train, min_test);
        EXPECT_EQ(split.train.size() + split.test.size(), s.size());
        const auto again = drift::temporal_split(s, 0.6 + 0.01 * rep);
        EXPECT_EQ(again.train, split.train);
        EXPECT_EQ(again.test, split.test);
    }
}

TEST(DriftReport, PublishedRows) {
    const auto lstm = drift::drift_report(0.9205, 0.8579, 0.85);
    EXPECT_EQ(lstm.delta_auc + lstm.random_split_auc, lstm.temporal_auc);
    EXPECT_NEAR(lstm.delta_auc, -0.0626, 1e-15);
    EXPECT_TRUE(lstm.passed);

    const auto xgb = drift::drift_report(0.9021, 0.9004, 0.85);
    EXPECT_NEAR(xgb.delta_auc, -0.0017, 1e-15);
    EXPECT_TRUE(xgb.passed);

    EXPECT_TRUE(drift::drift_report(0.90, 0.85, 0.85).passed);
    EXPECT_FALSE(drift::drift_report(0.90, 0.85 - 1e-9, 0.85).passed);
}

TEST(DriftReport, IdenticalSampleSets) {
    const auto s = samples({0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1});
    const auto r = drift::drift_report(s, s, 0.85);
    EXPECT_EQ(r.delta_auc, 0.0);
    EXPECT_FALSE(r.passed); // AUC 0.75 < floor
    EXPECT_TRUE(drift::drift_report(s, s, 0.75).passed);
}

TEST(ShapStability, Series) {
    const auto base = importance({0.5, 0.3, 0.2});
    std::vector<ImportanceVector> months{base, importance({0.5, 0.2, 0.3}), base, importance({0.1, 0.2})};
    const auto series = drift::shap_stability_series(base, months);
    ASSERT_EQ(series.size(), 4u);
    EXPECT_DOUBLE_EQ(*series[0].rho, 1.0);
    EXPECT_DOUBLE_EQ(*series[1].rho, 0.5);
    EXPECT_DOUBLE_EQ(*series[2].rho, 1.0);
    EXPECT_FALSE(series[3].rho.has_value());
    EXPECT_TRUE(series[3].error.has_value());
    EXPECT_EQ(series[3].month_index, 4);
}

TEST(Ablation, LedgerOrderAndDeltas) {
    std::vector<drift::AblationInput> in{
        {{"device", {"DeviceInfo"}}, 0.9205, 0.9215},
        {{"network", {"C1", "C13"}}, 0.9205, 0.8911},
        {{"velocity", {"velocity_24h"}}, 0.9205, 0.9159},
    };
    const auto ledger = drift::ablation_ledger(in);
    ASSERT_EQ(ledger.size(), 3u);
    EXPECT_EQ(ledger[0].feature_group.name, "network");
    EXPECT_EQ(ledger[1].feature_group.name, "velocity");
    EXPECT_EQ(ledger[2].feature_group.name, "device");
    EXPECT_NEAR(ledger[0].delta_auc, -0.0294, 1e-15);
    EXPECT_NEAR(ledger[1].delta_auc, -0.0046, 1e-15);
    EXPECT_NEAR(ledger[2].delta_auc, 0.0010, 1e-15);
    for (const auto& e : ledger) {
        EXPECT_EQ(e.delta_auc, e.auc_without - e.auc_full);
    }
}

TEST(CrossDataset, Floor) {
    const auto s = drift::cross_dataset_summary({{"lstm", "a", 0.99}, {"lstm", "b", 0.97}}, 0.97);
    EXPECT_TRUE(s.all_above_floor);
    EXPECT_DOUBLE_EQ(s.min_auc, 0.97);
    EXPECT_FALSE(drift::cross_dataset_summary({{"lstm", "a", 0.96}}, 0.97).all_above_floor);
}
