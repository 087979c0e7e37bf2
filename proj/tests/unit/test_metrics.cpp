#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "rdtfg/metrics.hpp"

using namespace rdtfg;
using rdtfg::test::error_kind_of;
using rdtfg::test::importance;
using rdtfg::test::samples;

namespace {

double brute_auc(const Eigen::VectorXd& s, const Eigen::VectorXi& y) {
    double wins = 0.0;
    double pairs = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        for (Eigen::Index j = 0; j < s.size(); ++j) {
            if (y(i) == 1 && y(j) == 0) {
                wins += s(i) > s(j) ? 1.0 : (s(i) == s(j) ? 0.5 : 0.0);
                pairs += 1.0;
            }
        }
    }
    return wins / pairs;
}

} // namespace

TEST(RocAuc, HandComputedExample) {
    EXPECT_DOUBLE_EQ(metrics::roc_auc(samples({0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1})), 0.75);
}

TEST(RocAuc, PerfectAndTied) {
    EXPECT_DOUBLE_EQ(metrics::roc_auc(samples({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1})), 1.0);
    EXPECT_DOUBLE_EQ(metrics::roc_auc(samples({0.5, 0.5, 0.5, 0.5}, {0, 1, 0, 1})), 0.5);
}

TEST(RocAuc, DegenerateLabelsRejected) {
    EXPECT_EQ(error_kind_of([] { metrics::roc_auc(samples({0.1, 0.2}, {1, 1})); }), ErrorKind::DegenerateLabels);
}

TEST(RocAuc, InvariantUnderMonotoneTransform) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> level(0, 20);
    std::bernoulli_distribution coin(0.3);
    Eigen::VectorXd s(300);
    Eigen::VectorXi y(300);
    for (int i = 0; i < 300; ++i) {
        s(i) = level(rng) / 20.0;
        y(i) = coin(rng) ? 1 : 0;
    }
    const Eigen::VectorXd t = (3.0 * s.array()).exp() - 7.0;
    EXPECT_DOUBLE_EQ(metrics::roc_auc(s, y), metrics::roc_auc(t, y));
    EXPECT_NEAR(metrics::roc_auc(s, y), brute_auc(s, y), 1e-12);
}

TEST(RocAuc, WorksOnFloatExpressions) {
    Eigen::VectorXf s(4);
    s << 0.1f, 0.4f, 0.35f, 0.8f;
    Eigen::VectorXi y(4);
    y << 0, 0, 1, 1;
    EXPECT_FLOAT_EQ(metrics::roc_auc(s, y), 0.75f);
}

TEST(Confusion, Examples) {
    const auto c = metrics::confusion_at_threshold(samples({0.2, 0.8}, {0, 1}), 0.5);
    EXPECT_EQ(c.tp, 1);
    EXPECT_EQ(c.fp, 0);
    EXPECT_EQ(c.tn, 1);
    EXPECT_EQ(c.fn, 0);

    const auto all = metrics::confusion_at_threshold(samples({0.2, 0.8, 0.0}, {0, 1, 1}), 0.0);
    EXPECT_EQ(all.tp + all.fp, 3);
    EXPECT_DOUBLE_EQ(*all.recall(), 1.0);

    const auto tie = metrics::confusion_at_threshold(samples({0.6, 0.6, 0.4}, {1, 0, 1}), 0.6);
    EXPECT_EQ(tie.tp, 1);
    EXPECT_EQ(tie.fp, 1);
    EXPECT_EQ(tie.tn, 0);
    EXPECT_EQ(tie.fn, 1);
}

TEST(Confusion, TauOutsideUnitRejected) {
    EXPECT_EQ(error_kind_of([] { metrics::confusion_at_threshold(samples({0.2, 0.8}, {0, 1}), 1.5); }),
              ErrorKind::InvalidArgument);
}

TEST(F1Sweep, PerfectSeparationPicksSmallestTau) {
    const auto r = metrics::f1_threshold_sweep(samples({0.1, 0.2, 0.29, 0.7, 0.8, 0.95}, {0, 0, 0, 1, 1, 1}));
    EXPECT_DOUBLE_EQ(r.best_tau, 0.30);
    for (const auto& p : r.per_tau) {
        EXPECT_DOUBLE_EQ(p.f1, 1.0) << p.tau;
    }
}

TEST(F1Sweep, HandComputedGrid) {
    const auto r = metrics::f1_threshold_sweep(samples({0.35, 0.55}, {0, 1}), {0.30, 0.50});
    ASSERT_EQ(r.per_tau.size(), 2u);
    EXPECT_DOUBLE_EQ(r.per_tau[0].f1, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(r.per_tau[1].f1, 1.0);
    EXPECT_DOUBLE_EQ(r.best_tau, 0.50);
}

TEST(F1Sweep, BestDominatesEveryGridPoint) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> s(60);
        std::vector<int> y(60);
        for (int i = 0; i < 60; ++i) {
            y[i] = i % 3 == 0;
            s[i] = std::clamp(u(rng) * 0.7 + (y[i] ? 0.25 : 0.0), 0.0, 1.0);
        }
        const auto r = metrics::f1_threshold_sweep(samples(s, y));
        double best = 0.0;
        for (const auto& p : r.per_tau) {
            if (p.tau == r.best_tau) {
                best = p.f1;
            }
        }
        for (const auto& p : r.per_tau) {
            EXPECT_GE(best, p.f1);
        }
    }
}

TEST(DeLong, SelfComparisonAndAntisymmetry) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n01;
    std::vector<double> a(200);
    std::vector<double> b(200);
    std::vector<int> y(200);
    for (int i = 0; i < 200; ++i) {
        y[i] = i % 4 == 0;
        a[i] = n01(rng) + (y[i] ? 1.5 : 0.0);
        b[i] = n01(rng) + (y[i] ? 0.8 : 0.0);
    }
    const auto sa = samples(a, y);
    const auto sb = samples(b, y);
    const auto self = metrics::delong_test(sa, sa);
    EXPECT_EQ(self.z_statistic, 0.0);
    EXPECT_EQ(self.p_value_two_sided, 1.0);
    const auto ab = metrics::delong_test(sa, sb);
    const auto ba = metrics::delong_test(sb, sa);
    EXPECT_EQ(ab.z_statistic, -ba.z_statistic);
    EXPECT_GT(ab.z_statistic, 0.0);
    EXPECT_NEAR(ab.covariance(0, 1), ab.covariance(1, 0), 1e-15);
    EXPECT_NEAR(ab.variance_diff, ab.covariance(0, 0) + ab.covariance(1, 1) - 2 * ab.covariance(0, 1), 1e-12);
}

TEST(DeLong, MisalignedPairsRejected) {
    auto a = samples({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1});
    auto b = a;
    b[1].label = 1;
    EXPECT_EQ(error_kind_of([&] { metrics::delong_test(a, b); }), ErrorKind::InvalidArgument);
}

TEST(Spearman, Examples) {
    EXPECT_DOUBLE_EQ(metrics::spearman_rho(importance({0.5, 0.3, 0.2}), importance({0.5, 0.3, 0.2})), 1.0);
    EXPECT_DOUBLE_EQ(metrics::spearman_rho(importance({0.5, 0.3, 0.2}), importance({0.5, 0.2, 0.3})), 0.5);
    EXPECT_DOUBLE_EQ(metrics::spearman_rho(importance({0.5, 0.3, 0.2}), importance({0.2, 0.3, 0.5})), -1.0);
}

TEST(Spearman, AlignsByFeatureName) {
    ImportanceVector a = importance({0.5, 0.3, 0.2});
    ImportanceVector b;
    b.features = {"f2", "f0", "f1"};
    b.values = Eigen::Vector3d(0.2, 0.5, 0.3);
    EXPECT_DOUBLE_EQ(metrics::spearman_rho(a, b), 1.0);
    b.features = {"f2", "f0", "g"};
    EXPECT_EQ(error_kind_of([&] { metrics::spearman_rho(a, b); }), ErrorKind::FeatureMismatch);
}

TEST(Spearman, SymmetricAndRankInvariant) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        Eigen::VectorXd a(10);
        Eigen::VectorXd b(10);
        for (int i = 0; i < 10; ++i) {
            a(i) = u(rng);
            b(i) = u(rng);
        }
        const double r = metrics::spearman_rho(a, b);
        EXPECT_DOUBLE_EQ(r, metrics::spearman_rho(b, a));
        EXPECT_DOUBLE_EQ(r, metrics::spearman_rho(Eigen::VectorXd(a.array().log()), b));
        EXPECT_GE(r, -1.0);
        EXPECT_LE(r, 1.0);
    }
}

TEST(Spearman, ConstantVectorIsZeroVariance) {
    EXPECT_EQ(error_kind_of([] { metrics::spearman_rho(importance({0.2, 0.2}), importance({0.1, 0.3})); }),
              ErrorKind::ZeroVariance);
}

TEST(KruskalWallis, ThreeSeparatedGroups) {
    const auto r = metrics::kruskal_wallis({Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(4, 5, 6), Eigen::Vector3d(7, 8, 9)});
    EXPECT_NEAR(r.h_statistic, 7.2, 1e-12);
    EXPECT_EQ(r.degrees_freedom, 2);
    EXPECT_NEAR(r.p_value, std::exp(-3.6), 1e-12);
    EXPECT_DOUBLE_EQ(r.p_adjusted, std::min(1.0, r.p_value * 30));
}

TEST(KruskalWallis, ConstantValues) {
    const auto r = metrics::kruskal_wallis({Eigen::Vector2d(4, 4), Eigen::Vector3d(4, 4, 4)});
    EXPECT_EQ(r.h_statistic, 0.0);
    EXPECT_EQ(r.p_value, 1.0);
}

TEST(KruskalWallis, InvariantUnderMonotoneTransform) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> v(0, 6);
    std::vector<Eigen::VectorXd> g(4);
    for (auto& x : g) {
        x.resize(7);
        for (int i = 0; i < 7; ++i) {
            x(i) = v(rng);
        }
    }
    std::vector<Eigen::VectorXd> t;
    for (const auto& x : g) {
        t.push_back((x.array() * 2.0 + 1.0).cube().matrix());
    }
    const auto a = metrics::kruskal_wallis(g);
    const auto b = metrics::kruskal_wallis(t);
    EXPECT_NEAR(a.h_statistic, b.h_statistic, 1e-12);
}

TEST(KruskalWallis, RejectsTooFewGroups) {
    EXPECT_EQ(error_kind_of([] { metrics::kruskal_wallis({Eigen::Vector3d(1, 2, 3)}); }), ErrorKind::InsufficientGroups);
}

TEST(Bonferroni, ExactAndMonotone) {
    EXPECT_DOUBLE_EQ(metrics::bonferroni(0.004, 30), 0.12);
    EXPECT_EQ(metrics::bonferroni(0.5, 30), 1.0);
    double last = 0.0;
    for (int m = 1; m <= 40; ++m) {
        const double p = metrics::bonferroni(0.01, m);
        EXPECT_GE(p, last);
        last = p;
    }
    EXPECT_LE(metrics::bonferroni(0.01, 5), metrics::bonferroni(0.02, 5));
}
