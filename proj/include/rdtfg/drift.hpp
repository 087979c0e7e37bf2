#ifndef RDTFG_DRIFT_HPP
#define RDTFG_DRIFT_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdtfg/metrics.hpp"

namespace rdtfg {

struct TemporalSplit {
    std::vector<ScoredSample> train;
    std::vector<ScoredSample> test;
    double split_fraction = 0.75;
    std::int64_t boundary_timestamp = 0; // first test timestamp, or last train one when test is empty
};

struct DriftReport {
    double random_split_auc = 0.0;
    double temporal_auc = 0.0;
    double delta_auc = 0.0; // temporal - random
    double threshold_floor = 0.85;
    bool passed = false;
};

struct FeatureGroup {
    std::string name;
    std::vector<std::string> members;
};

struct AblationEntry {
    FeatureGroup feature_group;
    double auc_full = 0.0;
    double auc_without = 0.0;
    double delta_auc = 0.0; // without - full
};

struct StabilityPoint {
    int month_index = 0;
    std::optional<double> rho;
    std::optional<std::string> error; // set when the month could not be compared
};

struct CrossDatasetEntry {
    std::string model;
    std::string dataset;
    double auc = 0.0;
};

struct CrossDatasetSummary {
    std::vector<CrossDatasetEntry> entries;
    double floor = 0.97;
    double min_auc = 0.0;
    bool all_above_floor = false;
};

namespace drift {

inline constexpr double kDefaultSplitFraction = 0.75;
inline constexpr double kDefaultTemporalFloor = 0.85;

/// Chronological split: stable sort by (timestamp, transaction_id), the first
/// round(fraction * N) samples train, the rest test.
TemporalSplit temporal_split(std::span<const ScoredSample> samples, double fraction = kDefaultSplitFraction);

DriftReport drift_report(std::span<const ScoredSample> random_samples, std::span<const ScoredSample> temporal_test_samples,
                         double floor = kDefaultTemporalFloor);
/// Same report from already-computed AUCs.
DriftReport drift_report(double random_split_auc, double temporal_auc, double floor = kDefaultTemporalFloor);

/// Spearman rho of every month against the baseline, in month order.
/// Months that cannot be compared carry an error instead of a rho.
std::vector<StabilityPoint> shap_stability_series(const ImportanceVector& baseline,
                                                  std::span<const ImportanceVector> monthly);

struct AblationInput {
    FeatureGroup group;
    double auc_full = 0.0;
    double auc_without = 0.0;
};

/// Most damaging removal (most negative delta) first; stable for equal deltas.
std::vector<AblationEntry> ablation_ledger(std::span<const AblationInput> entries);

CrossDatasetSummary cross_dataset_summary(std::vector<CrossDatasetEntry> entries, double floor = 0.97);

} // namespace drift
} // namespace rdtfg

#endif
