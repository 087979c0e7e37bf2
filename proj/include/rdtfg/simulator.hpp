#ifndef RDTFG_SIMULATOR_HPP
#define RDTFG_SIMULATOR_HPP

// Seeded synthetic monitoring inputs. Scores follow a binormal model
// (negatives N(0,1), positives N(mu,1) with mu = sqrt(2) * Phi^-1(AUC)),
// squashed into [0,1] with a shifted normal CDF.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rdtfg/calendar.hpp"
#include "rdtfg/drift.hpp"
#include "rdtfg/fairness.hpp"
#include "rdtfg/metrics.hpp"
#include "rdtfg/sar.hpp"
#include "rdtfg/serialize.hpp"
#include "rdtfg/shap.hpp"

namespace rdtfg {

struct CoverageTarget {
    double coverage = 1.0;  // fraction of alerts given three reason-code categories
    double cert_rate = 1.0; // fraction of alerts with a certification record
};

struct ScenarioSpec {
    std::uint64_t seed = 1;
    int months = 1;
    double base_auc = 0.92;
    double drift_rate = 0.0; // AUC points lost per month
    double shap_perturb = 0.0;
    std::optional<int> fairness_shock_month; // 1-based; shock persists afterwards
    std::vector<CoverageTarget> coverage_profile; // per month; missing months are fully covered
    int samples_per_month = 20000;
    double fraud_rate = 0.035;
    Month start_month{2025, 8};
    int shap_rows = 2000;
    std::vector<double> auc_targets; // per month, overrides base_auc/drift_rate when set
    std::vector<double> rho_targets; // per month, overrides shap_perturb when set
    int validation_samples = 80000;
    double validation_auc = 0.925;
    double benchmark_auc = 0.865; // score_b in the validation set
};

struct MonthBundle {
    int index = 1;
    Month month;
    double target_auc = 0.0;
    double realized_auc = 0.0;
    std::optional<double> target_rho;
    double realized_rho = 1.0;
    std::vector<ScoredSample> predictions;
    ShapPanel shap;
    std::vector<ProxyProfile> proxies;
    std::vector<CertificationRecord> certifications;
    std::map<std::string, AlertContext> context;
};

struct ScenarioOutput {
    ScenarioSpec spec;
    ImportanceVector baseline;
    std::vector<ScoredSample> validation; // carries score_b
    std::vector<drift::AblationInput> ablation;
    std::vector<CrossDatasetEntry> cross_dataset;
    std::vector<MonthBundle> months;
};

namespace simulator {

/// The fixed feature set and its baseline importance order.
const std::vector<std::string>& feature_names();
ImportanceVector baseline_importance();

/// AUC target for 1-based month m.
double target_auc(const ScenarioSpec& spec, int m);

/// Throws InfeasibleTarget for AUC targets outside (0.5, 1) or rho targets
/// that cannot be reached over the feature set.
ScenarioOutput generate(const ScenarioSpec& spec);

/// The five-month drift vignette plus one post-retraining month.
ScenarioSpec vignette_spec();

ScenarioSpec spec_from_json(const Json& j);
Json spec_to_json(const ScenarioSpec& spec);

/// Writes every artifact in the ingestion formats plus manifest.json; returns
/// the manifest.
Json write_scenario(const ScenarioOutput& out, const std::filesystem::path& dir);

} // namespace simulator
} // namespace rdtfg

#endif
