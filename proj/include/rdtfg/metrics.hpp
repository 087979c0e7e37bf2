#ifndef RDTFG_METRICS_HPP
#define RDTFG_METRICS_HPP

// Rank statistics and ROC analysis. The kernels are templates over Eigen
// dense expressions; the ScoredSample overloads at the bottom are the
// entry points the rest of the engine uses.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rdtfg/error.hpp"
#include "rdtfg/money.hpp"

namespace rdtfg {

struct ScoredSample {
    std::string transaction_id;
    double score = 0.0;
    int label = 0; // 1 = fraud
    std::int64_t timestamp = 0;
    Money amount;
    std::optional<double> score_b; // second model, when the file carries one

    bool operator==(const ScoredSample&) const = default;
};

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;
    double threshold = 0.0;

    std::int64_t total() const { return tp + fp + tn + fn; }
    std::optional<double> precision() const {
        if (tp + fp == 0) {
            return std::nullopt;
        }
        return static_cast<double>(tp) / static_cast<double>(tp + fp);
    }
    std::optional<double> recall() const {
        if (tp + fn == 0) {
            return std::nullopt;
        }
        return static_cast<double>(tp) / static_cast<double>(tp + fn);
    }
    // 2tp / (2tp + fp + fn); zero when nothing is predicted or present.
    double f1() const {
        const auto denom = 2 * tp + fp + fn;
        return denom == 0 ? 0.0 : static_cast<double>(2 * tp) / static_cast<double>(denom);
    }
};

struct TauF1 {
    double tau = 0.0;
    double f1 = 0.0;
};

struct ThresholdSweep {
    double best_tau = 0.0;
    std::vector<TauF1> per_tau;
};

struct DeLongResult {
    double auc_a = 0.0;
    double auc_b = 0.0;
    Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
    double variance_diff = 0.0;
    double z_statistic = 0.0;
    double p_value_two_sided = 1.0;
    bool infinite_z = false; // variance_diff == 0 with auc_a != auc_b
};

struct KruskalWallisResult {
    double h_statistic = 0.0;
    int degrees_freedom = 0;
    double p_value = 1.0;
    double p_adjusted = 1.0;
    int m_comparisons = 1;
};

/// An importance value per named feature.
struct ImportanceVector {
    std::vector<std::string> features;
    Eigen::VectorXd values;
};

namespace metrics {

inline const std::vector<double>& default_tau_grid() {
    static const std::vector<double> grid{0.30, 0.35, 0.40, 0.45, 0.50, 0.55, 0.60};
    return grid;
}

/// Upper tail of the chi-square distribution.
double chi_square_sf(double x, int degrees_freedom);
/// Two-sided standard normal tail probability 2 * (1 - Phi(|z|)).
double normal_two_sided_p(double z);

inline double bonferroni(double p, int m_comparisons) {
    require(m_comparisons >= 1, ErrorKind::InvalidArgument, "bonferroni: m must be positive");
    return std::min(1.0, p * static_cast<double>(m_comparisons));
}

/// 1-based midranks; tied values share the mean of the ranks they span.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> midranks(const Eigen::DenseBase<Derived>& values) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = values.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });

    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ranks(n);
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i + 1;
        while (j < n && !(values(order[static_cast<std::size_t>(i)]) < values(order[static_cast<std::size_t>(j)]))) {
            ++j;
        }
        // positions i..j-1 hold ranks i+1..j
        const Scalar mid = static_cast<Scalar>(i + 1 + j) / Scalar(2);
        for (Eigen::Index k = i; k < j; ++k) {
            ranks(order[static_cast<std::size_t>(k)]) = mid;
        }
        i = j;
    }
    return ranks;
}

/// Sum over tie blocks of (t^3 - t).
template <typename Derived>
typename Derived::Scalar tie_term(const Eigen::DenseBase<Derived>& values) {
    using Scalar = typename Derived::Scalar;
    std::vector<Scalar> sorted(static_cast<std::size_t>(values.size()));
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        sorted[static_cast<std::size_t>(i)] = values(i);
    }
    std::sort(sorted.begin(), sorted.end());
    Scalar total = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i + 1;
        while (j < sorted.size() && sorted[j] == sorted[i]) {
            ++j;
        }
        const auto t = static_cast<Scalar>(j - i);
        total += t * t * t - t;
        i = j;
    }
    return total;
}

template <typename Labels>
std::pair<Eigen::Index, Eigen::Index> class_counts(const Eigen::DenseBase<Labels>& labels) {
    Eigen::Index positives = 0;
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        if (labels(i) != 0) {
            ++positives;
        }
    }
    return {positives, labels.size() - positives};
}

/// Mann-Whitney form of the ROC AUC with ties counted one half.
template <typename Scores, typename Labels>
typename Scores::Scalar roc_auc(const Eigen::DenseBase<Scores>& scores, const Eigen::DenseBase<Labels>& labels) {
    using Scalar = typename Scores::Scalar;
    require(scores.size() == labels.size(), ErrorKind::LengthMismatch, "roc_auc: scores and labels differ in length");
    const auto [positives, negatives] = class_counts(labels);
    require(positives > 0 && negatives > 0, ErrorKind::DegenerateLabels,
            "roc_auc: need at least one positive and one negative label");
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> evaluated = scores;
    const auto ranks = midranks(evaluated);
    Scalar positive_rank_sum = 0;
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        if (labels(i) != 0) {
            positive_rank_sum += ranks(i);
        }
    }
    const auto p = static_cast<Scalar>(positives);
    const auto n = static_cast<Scalar>(negatives);
    return (positive_rank_sum - p * (p + 1) / Scalar(2)) / (p * n);
}

/// Predicted positive iff score >= tau.
template <typename Scores, typename Labels>
ConfusionCounts confusion_at_threshold(const Eigen::DenseBase<Scores>& scores, const Eigen::DenseBase<Labels>& labels,
                                       double tau) {
    require(scores.size() == labels.size(), ErrorKind::LengthMismatch,
            "confusion_at_threshold: scores and labels differ in length");
    require(tau >= 0.0 && tau <= 1.0, ErrorKind::InvalidArgument, "confusion_at_threshold: tau outside [0,1]");
    ConfusionCounts counts;
    counts.threshold = tau;
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
        const bool predicted = static_cast<double>(scores(i)) >= tau;
        const bool actual = labels(i) != 0;
        if (predicted && actual) {
            ++counts.tp;
        } else if (predicted) {
            ++counts.fp;
        } else if (actual) {
            ++counts.fn;
        } else {
            ++counts.tn;
        }
    }
    return counts;
}

/// F1 at each grid point; the best tau is the smallest one attaining the max.
template <typename Scores, typename Labels>
ThresholdSweep f1_threshold_sweep(const Eigen::DenseBase<Scores>& scores, const Eigen::DenseBase<Labels>& labels,
                                  const std::vector<double>& grid = default_tau_grid()) {
    require(!grid.empty(), ErrorKind::InvalidArgument, "f1_threshold_sweep: empty grid");
    const auto [positives, negatives] = class_counts(labels);
    require(positives > 0 && negatives > 0, ErrorKind::DegenerateLabels,
            "f1_threshold_sweep: need at least one positive and one negative label");
    ThresholdSweep sweep;
    std::vector<double> sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    double best_f1 = -1.0;
    for (double tau : sorted) {
        const double f1 = confusion_at_threshold(scores, labels, tau).f1();
        if (f1 > best_f1) {
            best_f1 = f1;
            sweep.best_tau = tau;
        }
    }
    for (double tau : grid) {
        sweep.per_tau.push_back({tau, confusion_at_threshold(scores, labels, tau).f1()});
    }
    return sweep;
}

namespace detail {

// Sample variance (n - 1 denominator) of a column vector.
template <typename Derived>
typename Derived::Scalar sample_variance(const Eigen::MatrixBase<Derived>& v) {
    using Scalar = typename Derived::Scalar;
    const Scalar mean = v.mean();
    return (v.array() - mean).square().sum() / static_cast<Scalar>(v.size() - 1);
}

} // namespace detail

/// DeLong's test for two correlated AUCs sharing one set of labels.
/// Structural components: V10 per positive, V01 per negative, from midranks.
template <typename ScoresA, typename ScoresB, typename Labels>
DeLongResult delong_test(const Eigen::DenseBase<ScoresA>& scores_a, const Eigen::DenseBase<ScoresB>& scores_b,
                         const Eigen::DenseBase<Labels>& labels) {
    require(scores_a.size() == labels.size() && scores_b.size() == labels.size(), ErrorKind::LengthMismatch,
            "delong_test: score lists must align with labels");
    const auto [m, n] = class_counts(labels);
    require(m >= 2 && n >= 2, ErrorKind::DegenerateLabels, "delong_test: need at least two positives and two negatives");

    Eigen::MatrixXd v10(m, 2);
    Eigen::MatrixXd v01(n, 2);
    Eigen::Vector2d auc;
    for (int model = 0; model < 2; ++model) {
        Eigen::VectorXd all(labels.size());
        for (Eigen::Index i = 0; i < labels.size(); ++i) {
            all(i) = static_cast<double>(model == 0 ? scores_a(i) : scores_b(i));
        }
        Eigen::VectorXd pos(m);
        Eigen::VectorXd neg(n);
        for (Eigen::Index i = 0, ip = 0, in = 0; i < labels.size(); ++i) {
            if (labels(i) != 0) {
                pos(ip++) = all(i);
            } else {
                neg(in++) = all(i);
            }
        }
        const Eigen::VectorXd rank_all = midranks(all);
        const Eigen::VectorXd rank_pos = midranks(pos);
        const Eigen::VectorXd rank_neg = midranks(neg);
        double positive_rank_sum = 0.0;
        for (Eigen::Index i = 0, ip = 0, in = 0; i < labels.size(); ++i) {
            if (labels(i) != 0) {
                v10(ip, model) = (rank_all(i) - rank_pos(ip)) / static_cast<double>(n);
                positive_rank_sum += rank_all(i);
                ++ip;
            } else {
                v01(in, model) = 1.0 - (rank_all(i) - rank_neg(in)) / static_cast<double>(m);
                ++in;
            }
        }
        const auto dm = static_cast<double>(m);
        auc(model) = (positive_rank_sum - dm * (dm + 1.0) / 2.0) / (dm * static_cast<double>(n));
    }

    DeLongResult result;
    result.auc_a = auc(0);
    result.auc_b = auc(1);

    const Eigen::MatrixXd c10 = v10.rowwise() - v10.colwise().mean();
    const Eigen::MatrixXd c01 = v01.rowwise() - v01.colwise().mean();
    result.covariance = (c10.transpose() * c10) / (static_cast<double>(m - 1) * static_cast<double>(m)) +
                        (c01.transpose() * c01) / (static_cast<double>(n - 1) * static_cast<double>(n));

    // var(AUC_a - AUC_b) from the per-component differences; equal to
    // S_aa + S_bb - 2 S_ab and exactly symmetric in (a, b).
    const Eigen::VectorXd d10 = v10.col(0) - v10.col(1);
    const Eigen::VectorXd d01 = v01.col(0) - v01.col(1);
    result.variance_diff = std::max(0.0, detail::sample_variance(d10) / static_cast<double>(m) +
                                             detail::sample_variance(d01) / static_cast<double>(n));

    const double diff = result.auc_a - result.auc_b;
    if (diff == 0.0) {
        result.z_statistic = 0.0;
        result.p_value_two_sided = 1.0;
    } else if (result.variance_diff == 0.0) {
        result.infinite_z = true;
        result.z_statistic = diff > 0 ? HUGE_VAL : -HUGE_VAL;
        result.p_value_two_sided = 0.0;
    } else {
        result.z_statistic = diff / std::sqrt(result.variance_diff);
        result.p_value_two_sided = normal_two_sided_p(result.z_statistic);
    }
    return result;
}

/// Spearman's rho of two aligned value vectors: Pearson correlation of midranks.
template <typename DerivedA, typename DerivedB>
double spearman_rho(const Eigen::DenseBase<DerivedA>& a, const Eigen::DenseBase<DerivedB>& b) {
    require(a.size() == b.size(), ErrorKind::FeatureMismatch, "spearman_rho: vectors differ in length");
    require(a.size() >= 2, ErrorKind::InvalidArgument, "spearman_rho: need at least two entries");
    const Eigen::VectorXd ra = midranks(Eigen::VectorXd(a.derived().template cast<double>()));
    const Eigen::VectorXd rb = midranks(Eigen::VectorXd(b.derived().template cast<double>()));
    const Eigen::VectorXd ca = ra.array() - ra.mean();
    const Eigen::VectorXd cb = rb.array() - rb.mean();
    const double saa = ca.squaredNorm();
    const double sbb = cb.squaredNorm();
    require(saa > 0.0 && sbb > 0.0, ErrorKind::ZeroVariance, "spearman_rho: constant rank vector");
    const double rho = ca.dot(cb) / std::sqrt(saa * sbb);
    return std::clamp(rho, -1.0, 1.0);
}

/// Tie-corrected Kruskal-Wallis H with a chi-square p-value and Bonferroni
/// adjustment for `m_comparisons` tests.
template <typename Scalar>
KruskalWallisResult kruskal_wallis(std::span<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> groups,
                                   int m_comparisons = 30) {
    require(groups.size() >= 2, ErrorKind::InsufficientGroups, "kruskal_wallis: need at least two groups");
    require(m_comparisons >= 1, ErrorKind::InvalidArgument, "kruskal_wallis: m_comparisons must be positive");
    Eigen::Index total = 0;
    for (const auto& g : groups) {
        require(g.size() > 0, ErrorKind::InvalidArgument, "kruskal_wallis: empty group");
        total += g.size();
    }
    require(total >= static_cast<Eigen::Index>(groups.size()) + 1, ErrorKind::InvalidArgument,
            "kruskal_wallis: need more observations than groups");

    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pooled(total);
    Eigen::Index offset = 0;
    for (const auto& g : groups) {
        pooled.segment(offset, g.size()) = g;
        offset += g.size();
    }

    KruskalWallisResult result;
    result.degrees_freedom = static_cast<int>(groups.size()) - 1;
    result.m_comparisons = m_comparisons;

    const double big_n = static_cast<double>(total);
    const double correction = 1.0 - static_cast<double>(tie_term(pooled)) / (big_n * big_n * big_n - big_n);
    if (correction <= 0.0) {
        // every value identical
        result.h_statistic = 0.0;
        result.p_value = 1.0;
        result.p_adjusted = 1.0;
        return result;
    }

    const auto ranks = midranks(pooled);
    double weighted = 0.0;
    offset = 0;
    for (const auto& g : groups) {
        const double rank_sum = static_cast<double>(ranks.segment(offset, g.size()).sum());
        weighted += rank_sum * rank_sum / static_cast<double>(g.size());
        offset += g.size();
    }
    const double h = (12.0 / (big_n * (big_n + 1.0)) * weighted - 3.0 * (big_n + 1.0)) / correction;
    result.h_statistic = std::max(0.0, h);
    result.p_value = chi_square_sf(result.h_statistic, result.degrees_freedom);
    result.p_adjusted = bonferroni(result.p_value, m_comparisons);
    return result;
}

inline KruskalWallisResult kruskal_wallis(const std::vector<Eigen::VectorXd>& groups, int m_comparisons = 30) {
    return kruskal_wallis<double>(std::span<const Eigen::VectorXd>(groups), m_comparisons);
}

// ScoredSample entry points.

Eigen::VectorXd scores_of(std::span<const ScoredSample> samples);
Eigen::VectorXi labels_of(std::span<const ScoredSample> samples);

double roc_auc(std::span<const ScoredSample> samples);
ConfusionCounts confusion_at_threshold(std::span<const ScoredSample> samples, double tau);
ThresholdSweep f1_threshold_sweep(std::span<const ScoredSample> samples,
                                  const std::vector<double>& grid = default_tau_grid());
/// Compares `samples_a[i].score` with `samples_b[i].score`; both lists must
/// carry the same transaction ids and labels in the same order.
DeLongResult delong_test(std::span<const ScoredSample> samples_a, std::span<const ScoredSample> samples_b);
/// Aligns `b` to the feature order of `a` by name before ranking.
double spearman_rho(const ImportanceVector& a, const ImportanceVector& b);

} // namespace metrics
} // namespace rdtfg

#endif
