#include "rdtfg/drift.hpp"

#include <algorithm>
#include <cmath>

namespace rdtfg::drift {

TemporalSplit temporal_split(std::span<const ScoredSample> samples, double fraction) {
    require(samples.size() >= 2, ErrorKind::EmptyInput, "temporal_split: need at least two samples");
    require(fraction > 0.0 && fraction < 1.0, ErrorKind::InvalidArgument, "temporal_split: fraction must be in (0,1)");

    std::vector<ScoredSample> sorted(samples.begin(), samples.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const ScoredSample& a, const ScoredSample& b) {
        if (a.timestamp != b.timestamp) {
            return a.timestamp < b.timestamp;
        }
        return a.transaction_id < b.transaction_id;
    });

    const auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(sorted.size())));
    TemporalSplit split;
    split.split_fraction = fraction;
    split.train.assign(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.assign(sorted.begin() + static_cast<std::ptrdiff_t>(n_train), sorted.end());
    split.boundary_timestamp = split.test.empty() ? split.train.back().timestamp : split.test.front().timestamp;
    return split;
}

DriftReport drift_report(double random_split_auc, double temporal_auc, double floor) {
    require(random_split_auc >= 0.0 && random_split_auc <= 1.0 && temporal_auc >= 0.0 && temporal_auc <= 1.0,
            ErrorKind::InvalidArgument, "drift_report: AUC outside [0,1]");
    DriftReport report;
    report.random_split_auc = random_split_auc;
    report.temporal_auc = temporal_auc;
    report.delta_auc = temporal_auc - random_split_auc;
    report.threshold_floor = floor;
    report.passed = temporal_auc >= floor;
    return report;
}

DriftReport drift_report(std::span<const ScoredSample> random_samples, std::span<const ScoredSample> temporal_test_samples,
                         double floor) {
    return drift_report(metrics::roc_auc(random_samples), metrics::roc_auc(temporal_test_samples), floor);
}

std::vector<StabilityPoint> shap_stability_series(const ImportanceVector& baseline,
                                                  std::span<const ImportanceVector> monthly) {
    std::vector<StabilityPoint> series;
    series.reserve(monthly.size());
    int month = 1;
    for (const auto& vector : monthly) {
        StabilityPoint point;
        point.month_index = month++;
        try {
            point.rho = metrics::spearman_rho(baseline, vector);
        } catch (const Error& e) {
            point.error = std::string(to_string(e.kind())) + ": " + e.what();
        }
        series.push_back(std::move(point));
    }
    return series;
}

std::vector<AblationEntry> ablation_ledger(std::span<const AblationInput> entries) {
    std::vector<AblationEntry> ledger;
    ledger.reserve(entries.size());
    for (const auto& in : entries) {
        require(in.auc_full >= 0.0 && in.auc_full <= 1.0 && in.auc_without >= 0.0 && in.auc_without <= 1.0,
                ErrorKind::InvalidArgument, "ablation_ledger: AUC outside [0,1] for group '" + in.group.name + "'");
        ledger.push_back({in.group, in.auc_full, in.auc_without, in.auc_without - in.auc_full});
    }
    std::stable_sort(ledger.begin(), ledger.end(),
                     [](const AblationEntry& a, const AblationEntry& b) { return a.delta_auc < b.delta_auc; });
    return ledger;
}

CrossDatasetSummary cross_dataset_summary(std::vector<CrossDatasetEntry> entries, double floor) {
    CrossDatasetSummary summary;
    summary.floor = floor;
    summary.entries = std::move(entries);
    if (summary.entries.empty()) {
        return summary;
    }
    summary.min_auc = 1.0;
    for (const auto& e : summary.entries) {
        summary.min_auc = std::min(summary.min_auc, e.auc);
    }
    summary.all_above_floor = summary.min_auc >= floor;
    return summary;
}

} // namespace rdtfg::drift
