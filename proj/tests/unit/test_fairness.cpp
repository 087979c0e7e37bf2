#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "rdtfg/fairness.hpp"

using namespace rdtfg;
using rdtfg::test::error_kind_of;

namespace {

std::vector<ProxyProfile> profiles(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<ProxyProfile> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)].transaction_id = "t" + std::to_string(i);
        for (auto& p : out[static_cast<std::size_t>(i)].proxy_probabilities) {
            p = u(rng);
        }
    }
    return out;
}

ShapPanel panel_for(const std::vector<ProxyProfile>& ps, int features, std::mt19937_64& rng) {
    std::normal_distribution<double> n01;
    ShapPanel panel;
    for (const auto& p : ps) {
        panel.transaction_ids.push_back(p.transaction_id);
    }
    for (int f = 0; f < features; ++f) {
        panel.features.push_back("f" + std::to_string(f));
    }
    panel.values.resize(static_cast<Eigen::Index>(ps.size()), features);
    for (Eigen::Index r = 0; r < panel.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < features; ++c) {
            panel.values(r, c) = n01(rng) * (1.0 + static_cast<double>(features - c));
        }
    }
    return panel;
}

} // namespace

TEST(Classify, BandsAreGapFree) {
    EXPECT_EQ(fairness::classify(0.0), Verdict::Violation);
    EXPECT_EQ(fairness::classify(0.05 - 1e-9), Verdict::Violation);
    EXPECT_EQ(fairness::classify(0.05), Verdict::Watch);
    EXPECT_EQ(fairness::classify(0.08), Verdict::Watch);
    EXPECT_EQ(fairness::classify(0.12), Verdict::Watch);
    EXPECT_EQ(fairness::classify(0.12 + 1e-9), Verdict::Clear);
    EXPECT_EQ(fairness::classify(1.0), Verdict::Clear);
}

TEST(QuartileBins, EvenAndRemainder) {
    std::mt19937_64 rng(1);
    const auto eight = profiles(8, rng);
    for (const auto& b : fairness::quartile_bins(eight, ProxyCategory::Asian)) {
        EXPECT_EQ(b.size(), 2u);
    }
    const auto ten = profiles(10, rng);
    const auto bins = fairness::quartile_bins(ten, ProxyCategory::Hispanic);
    EXPECT_EQ(bins[0].size(), 3u);
    EXPECT_EQ(bins[1].size(), 3u);
    EXPECT_EQ(bins[2].size(), 2u);
    EXPECT_EQ(bins[3].size(), 2u);
}

TEST(QuartileBins, OrderedByProbabilityThenId) {
    std::vector<ProxyProfile> ps(8);
    for (int i = 0; i < 8; ++i) {
        ps[static_cast<std::size_t>(i)].transaction_id = "id" + std::to_string(i);
        ps[static_cast<std::size_t>(i)].proxy_probabilities[1] = 0.5;
    }
    const auto bins = fairness::quartile_bins(ps, ProxyCategory::BlackNh);
    EXPECT_EQ(bins[0], (std::vector<std::string>{"id0", "id1"}));
    EXPECT_EQ(bins[3], (std::vector<std::string>{"id6", "id7"}));
}

TEST(QuartileBins, PartitionProperty) {
    std::mt19937_64 rng(2);
    for (int n = 4; n < 60; n += 7) {
        const auto ps = profiles(n, rng);
        for (auto c : kProxyCategories) {
            const auto bins = fairness::quartile_bins(ps, c);
            std::set<std::string> all;
            std::size_t total = 0;
            std::size_t lo = SIZE_MAX;
            std::size_t hi = 0;
            for (const auto& b : bins) {
                all.insert(b.begin(), b.end());
                total += b.size();
                lo = std::min(lo, b.size());
                hi = std::max(hi, b.size());
            }
            EXPECT_EQ(total, static_cast<std::size_t>(n));
            EXPECT_EQ(all.size(), static_cast<std::size_t>(n));
            EXPECT_LE(hi - lo, 1u);
        }
    }
}

TEST(QuartileBins, TooFewProfiles) {
    std::vector<ProxyProfile> ps(3);
    EXPECT_EQ(error_kind_of([&] { fairness::quartile_bins(ps, ProxyCategory::WhiteNh); }),
              ErrorKind::InsufficientProfiles);
}

TEST(Screen, IdenticalShapIsClear) {
    std::mt19937_64 rng(3);
    const auto ps = profiles(40, rng);
    auto panel = panel_for(ps, 5, rng);
    panel.values.setConstant(0.25);
    const auto r = fairness::screen(panel, ps, 5, 30);
    ASSERT_EQ(r.findings.size(), 20u);
    for (const auto& f : r.findings) {
        EXPECT_EQ(f.kw.h_statistic, 0.0);
        EXPECT_EQ(f.kw.p_value, 1.0);
    }
    EXPECT_EQ(r.overall, Verdict::Clear);
}

TEST(Screen, PlantedDisparityIsViolation) {
    std::mt19937_64 rng(4);
    auto ps = profiles(400, rng);
    auto panel = panel_for(ps, 6, rng);
    for (Eigen::Index r = 0; r < panel.values.rows(); ++r) {
        panel.values(r, 0) += 5.0 * ps[static_cast<std::size_t>(r)].probability(ProxyCategory::BlackNh);
    }
    const auto r = fairness::screen(panel, ps, 3, 30);
    EXPECT_EQ(r.findings.size(), 12u);
    EXPECT_EQ(r.overall, Verdict::Violation);
    bool found = false;
    for (const auto& f : r.findings) {
        if (f.feature == "f0" && f.category == ProxyCategory::BlackNh) {
            EXPECT_EQ(f.verdict, Verdict::Violation);
            found = true;
        }
    }
    EXPECT_TRUE(found);
}

TEST(Screen, InputOrderDoesNotChangeVerdicts) {
    std::mt19937_64 rng(5);
    auto ps = profiles(120, rng);
    const auto panel = panel_for(ps, 4, rng);
    const auto a = fairness::screen(panel, ps, 4, 30);
    std::shuffle(ps.begin(), ps.end(), rng);
    const auto b = fairness::screen(panel, ps, 4, 30);
    ASSERT_EQ(a.findings.size(), b.findings.size());
    for (std::size_t i = 0; i < a.findings.size(); ++i) {
        EXPECT_EQ(a.findings[i].verdict, b.findings[i].verdict);
        EXPECT_DOUBLE_EQ(a.findings[i].kw.p_value, b.findings[i].kw.p_value);
    }
}

TEST(Screen, ProfilesWithoutShapAreReported) {
    std::mt19937_64 rng(6);
    auto ps = profiles(20, rng);
    const auto panel = panel_for(ps, 3, rng);
    ps.push_back({"ghost", {0.1, 0.2, 0.3, 0.4}});
    const auto r = fairness::screen(panel, ps, 2, 30);
    EXPECT_EQ(r.missing_shap, std::vector<std::string>{"ghost"});
}
