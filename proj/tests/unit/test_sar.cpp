#include <random>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "rdtfg/sar.hpp"

using namespace rdtfg;
using rdtfg::test::error_kind_of;
using rdtfg::test::samples;

namespace {

AlertShap alert(std::vector<std::string> features, std::vector<double> phi) {
    AlertShap a;
    a.alert_id = "A1";
    a.features = std::move(features);
    a.phi = Eigen::Map<const Eigen::VectorXd>(phi.data(), static_cast<Eigen::Index>(phi.size()));
    return a;
}

AlertContext worked_context() {
    AlertContext ctx;
    ctx.amount = Money::from_dollars(842);
    ctx.rolling_mean_7d = Money::from_dollars(162);
    ctx.device_mismatch = 1;
    ctx.count_24h = 7;
    ctx.velocity_percentile = 97;
    return ctx;
}

ReasonCodeSet codes_with(std::string id, int n) {
    ReasonCodeSet s;
    s.alert_id = std::move(id);
    s.codes.resize(static_cast<std::size_t>(n));
    return s;
}

} // namespace

TEST(FlagAlerts, BoundaryAndOrder) {
    EXPECT_EQ(sar::flag_alerts(samples({0.71, 0.69}, {1, 0})), std::vector<std::string>{"t0"});
    EXPECT_TRUE(sar::flag_alerts(samples({0.1, 0.69}, {1, 0})).empty());
    EXPECT_EQ(sar::flag_alerts(samples({0.70, 0.9, 0.9}, {1, 0, 1})), (std::vector<std::string>{"t1", "t2", "t0"}));
}

TEST(CategoryMap, Defaults) {
    const auto m = CategoryMap::ieee_cis_defaults();
    EXPECT_EQ(m.lookup("C13"), FeatureCategory::Network);
    EXPECT_EQ(m.lookup("D1"), FeatureCategory::Network);
    EXPECT_EQ(m.lookup("TransactionAmt"), FeatureCategory::Amount);
    EXPECT_EQ(m.lookup("M4"), FeatureCategory::Velocity);
    EXPECT_EQ(m.lookup("velocity_24h"), FeatureCategory::Velocity);
    EXPECT_EQ(m.lookup("DeviceInfo"), FeatureCategory::Device);
    EXPECT_EQ(m.lookup("id_31"), FeatureCategory::Device);
    EXPECT_EQ(m.lookup("id_02"), FeatureCategory::Identity);
    EXPECT_FALSE(m.lookup("card1").has_value());
}

TEST(ReasonCodes, WorkedExample) {
    const auto set = sar::generate_reason_codes(
        alert({"TransactionAmt", "DeviceInfo", "velocity_24h", "C1"}, {0.31, 0.28, 0.24, 0.01}),
        CategoryMap::ieee_cis_defaults(), worked_context());
    ASSERT_EQ(set.codes.size(), 3u);
    EXPECT_EQ(set.codes[0].form111_category, "Structuring/money laundering — amount inconsistent with known business");
    EXPECT_EQ(set.codes[1].form111_category, "Identity theft — account takeover indicator");
    EXPECT_EQ(set.codes[2].form111_category, "Rapid movement of funds — velocity anomaly");
    EXPECT_NE(set.codes[0].deviation_statement.find("5.2×"), std::string::npos) << set.codes[0].deviation_statement;
    EXPECT_NE(set.codes[0].deviation_statement.find("$842"), std::string::npos);
    EXPECT_NE(set.codes[0].deviation_statement.find("$162"), std::string::npos);
    EXPECT_NE(set.codes[2].deviation_statement.find("97th percentile"), std::string::npos);
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(set.codes[static_cast<std::size_t>(i)].rank, i + 1);
        EXPECT_FALSE(set.codes[static_cast<std::size_t>(i)].baseline_missing);
    }
}

TEST(ReasonCodes, SingleNonzeroFeature) {
    const auto set = sar::generate_reason_codes(alert({"TransactionAmt", "C1", "M4"}, {0.0, -0.4, 0.0}),
                                                CategoryMap::ieee_cis_defaults(), {});
    ASSERT_EQ(set.codes.size(), 1u);
    EXPECT_EQ(set.codes[0].rank, 1);
    EXPECT_EQ(set.codes[0].feature, "C1");
    EXPECT_TRUE(set.codes[0].baseline_missing);
}

TEST(ReasonCodes, DistinctCategoriesAndTieBreak) {
    const auto set = sar::generate_reason_codes(
        alert({"C2", "C1", "D1", "M4", "TransactionAmt"}, {0.5, 0.5, 0.45, 0.2, -0.1}),
        CategoryMap::ieee_cis_defaults(), worked_context());
    ASSERT_EQ(set.codes.size(), 3u);
    EXPECT_EQ(set.codes[0].feature, "C1");
    EXPECT_EQ(set.codes[1].feature, "M4");
    EXPECT_EQ(set.codes[2].feature, "TransactionAmt");
}

TEST(ReasonCodes, OrderedByMagnitudeAndClosedWorld) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n01;
    const std::vector<std::string> features{"C1", "C13", "D1", "TransactionAmt", "M4", "velocity_24h", "DeviceInfo",
                                            "id_31", "id_02", "id_19"};
    const auto form111 = Form111Map::defaults();
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> phi(features.size());
        for (auto& p : phi) {
            p = n01(rng);
        }
        const auto set = sar::generate_reason_codes(alert(features, phi), CategoryMap::ieee_cis_defaults(),
                                                    worked_context(), form111);
        EXPECT_EQ(set.codes.size(), 3u);
        for (std::size_t i = 0; i < set.codes.size(); ++i) {
            EXPECT_EQ(set.codes[i].rank, static_cast<int>(i) + 1);
            EXPECT_TRUE(form111.contains_text(set.codes[i].form111_category));
            if (i > 0) {
                EXPECT_GT(std::fabs(set.codes[i - 1].shap_value), std::fabs(set.codes[i].shap_value));
            }
        }
    }
}

TEST(ReasonCodes, UnmappedFeature) {
    EXPECT_EQ(error_kind_of([] {
                  sar::generate_reason_codes(alert({"card1"}, {0.3}), CategoryMap::ieee_cis_defaults(), {});
              }),
              ErrorKind::UnmappedFeature);
}

TEST(ReasonCodes, UnmappedCategory) {
    Form111Map partial;
    partial.set(FeatureCategory::Amount, "Structuring");
    EXPECT_EQ(error_kind_of([&] {
                  sar::generate_reason_codes(alert({"C1"}, {0.3}), CategoryMap::ieee_cis_defaults(), {}, partial);
              }),
              ErrorKind::UnmappedCategory);
}

TEST(RenderRatio, HalfUpOnCents) {
    EXPECT_EQ(sar::render_ratio(Money::from_dollars(842), Money::from_dollars(162)), "5.2×");
    EXPECT_EQ(sar::render_ratio(Money::from_cents(105), Money::from_cents(100)), "1.1×");
    EXPECT_EQ(sar::render_ratio(Money::from_cents(104), Money::from_cents(100)), "1.0×");
}

TEST(Coverage, Examples) {
    std::vector<std::string> alerts;
    std::vector<ReasonCodeSet> sets;
    std::vector<CertificationRecord> certs;
    for (int i = 0; i < 100; ++i) {
        const std::string id = "a" + std::to_string(i);
        alerts.push_back(id);
        sets.push_back(codes_with(id, i < 96 ? 3 : 2));
        certs.push_back({id, "an1", 1000, Disposition::Certified, std::nullopt});
    }
    auto s = sar::coverage_stats(alerts, sets, certs);
    EXPECT_DOUBLE_EQ(s.coverage, 0.96);
    EXPECT_DOUBLE_EQ(s.cert_rate, 1.0);

    certs[5].disposition = Disposition::Rejected;
    certs.pop_back();
    s = sar::coverage_stats(alerts, sets, certs);
    EXPECT_DOUBLE_EQ(s.cert_rate, 0.98);

    const auto empty = sar::coverage_stats({}, {}, {});
    EXPECT_EQ(empty.coverage, 1.0);
    EXPECT_EQ(empty.cert_rate, 1.0);
}

TEST(Coverage, LatestRecordWins) {
    const std::vector<std::string> alerts{"a"};
    const std::vector<ReasonCodeSet> sets{codes_with("a", 3)};
    std::vector<CertificationRecord> certs{{"a", "x", 10, Disposition::Certified, std::nullopt},
                                           {"a", "y", 20, Disposition::Rejected, std::nullopt}};
    EXPECT_EQ(sar::coverage_stats(alerts, sets, certs).cert_rate, 0.0);
    certs.push_back({"a", "z", 30, Disposition::Amended, "rewritten narrative"});
    EXPECT_EQ(sar::coverage_stats(alerts, sets, certs).cert_rate, 1.0);
}

TEST(Certification, Validation) {
    EXPECT_NO_THROW(sar::validate({"a", "x", 1, Disposition::Certified, std::nullopt}));
    EXPECT_EQ(error_kind_of([] { sar::validate({"a", "x", 1, Disposition::Amended, std::nullopt}); }),
              ErrorKind::RowInvalid);
    EXPECT_EQ(error_kind_of([] { sar::validate({"", "x", 1, Disposition::Certified, std::nullopt}); }),
              ErrorKind::RowInvalid);
}
