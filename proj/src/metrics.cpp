#include "rdtfg/metrics.hpp"

#include <unordered_map>

#include <boost/math/special_functions/gamma.hpp>

namespace rdtfg::metrics {

double chi_square_sf(double x, int degrees_freedom) {
    require(degrees_freedom >= 1, ErrorKind::InvalidArgument, "chi_square_sf: degrees of freedom must be positive");
    if (!(x > 0.0)) {
        return 1.0;
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    return boost::math::gamma_q(static_cast<double>(degrees_freedom) / 2.0, x / 2.0);
}

double normal_two_sided_p(double z) {
    if (std::isinf(z)) {
        return 0.0;
    }
    return std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0)));
}

Eigen::VectorXd scores_of(std::span<const ScoredSample> samples) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = samples[i].score;
    }
    return out;
}

Eigen::VectorXi labels_of(std::span<const ScoredSample> samples) {
    Eigen::VectorXi out(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = samples[i].label;
    }
    return out;
}

double roc_auc(std::span<const ScoredSample> samples) {
    return roc_auc(scores_of(samples), labels_of(samples));
}

ConfusionCounts confusion_at_threshold(std::span<const ScoredSample> samples, double tau) {
    return confusion_at_threshold(scores_of(samples), labels_of(samples), tau);
}

ThresholdSweep f1_threshold_sweep(std::span<const ScoredSample> samples, const std::vector<double>& grid) {
    for (double tau : grid) {
        require(tau >= 0.0 && tau <= 1.0, ErrorKind::InvalidArgument, "f1_threshold_sweep: grid value outside [0,1]");
    }
    return f1_threshold_sweep(scores_of(samples), labels_of(samples), grid);
}

DeLongResult delong_test(std::span<const ScoredSample> samples_a, std::span<const ScoredSample> samples_b) {
    require(samples_a.size() == samples_b.size(), ErrorKind::LengthMismatch, "delong_test: paired lists differ in length");
    for (std::size_t i = 0; i < samples_a.size(); ++i) {
        require(samples_a[i].transaction_id == samples_b[i].transaction_id && samples_a[i].label == samples_b[i].label,
                ErrorKind::InvalidArgument,
                "delong_test: paired lists disagree at position " + std::to_string(i));
    }
    return delong_test(scores_of(samples_a), scores_of(samples_b), labels_of(samples_a));
}

double spearman_rho(const ImportanceVector& a, const ImportanceVector& b) {
    require(a.features.size() == static_cast<std::size_t>(a.values.size()) &&
                b.features.size() == static_cast<std::size_t>(b.values.size()),
            ErrorKind::InvalidArgument, "spearman_rho: feature names and values differ in length");
    require(a.features.size() == b.features.size(), ErrorKind::FeatureMismatch, "spearman_rho: feature sets differ");
    std::unordered_map<std::string, Eigen::Index> index_in_b;
    for (std::size_t i = 0; i < b.features.size(); ++i) {
        index_in_b.emplace(b.features[i], static_cast<Eigen::Index>(i));
    }
    require(index_in_b.size() == b.features.size(), ErrorKind::FeatureMismatch, "spearman_rho: duplicate feature name");
    Eigen::VectorXd aligned(a.values.size());
    for (std::size_t i = 0; i < a.features.size(); ++i) {
        const auto it = index_in_b.find(a.features[i]);
        require(it != index_in_b.end(), ErrorKind::FeatureMismatch,
                "spearman_rho: feature '" + a.features[i] + "' missing from second vector");
        aligned(static_cast<Eigen::Index>(i)) = b.values(it->second);
    }
    return spearman_rho(a.values, aligned);
}

} // namespace rdtfg::metrics
