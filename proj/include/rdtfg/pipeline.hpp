#ifndef RDTFG_PIPELINE_HPP
#define RDTFG_PIPELINE_HPP

// Validation and monthly monitoring runs assembled from the analytical
// modules. The CLI and the vignette replay both go through here.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdtfg/audit.hpp"
#include "rdtfg/config.hpp"
#include "rdtfg/drift.hpp"
#include "rdtfg/fairness.hpp"
#include "rdtfg/sar.hpp"
#include "rdtfg/scoring.hpp"
#include "rdtfg/shap.hpp"

namespace rdtfg {

struct ValidationReport {
    std::size_t samples = 0;
    std::size_t random_test_size = 0;
    std::size_t temporal_train_size = 0;
    std::size_t temporal_test_size = 0;
    std::int64_t boundary_timestamp = 0;
    DriftReport drift;
    std::optional<DeLongResult> delong; // model vs. score_b over the full file
    std::vector<AblationEntry> ablation;
    std::optional<CrossDatasetSummary> cross_dataset;
    OccInputs occ;
    HealthScore occ_score;
};

struct MonthArtifacts {
    Month month;
    std::vector<ScoredSample> predictions;
    ShapPanel shap;
    std::optional<std::vector<ProxyProfile>> proxies; // screened this month when present
    std::vector<CertificationRecord> certifications;
    std::map<std::string, AlertContext> context;
};

struct SarBatch {
    Month month;
    std::vector<std::string> alerts;
    std::vector<ReasonCodeSet> reason_codes;
    CoverageStats coverage;
};

struct FairnessRecord {
    Month month;
    ScreenResult result;
};

struct MonthEvaluation {
    MonthInputs inputs;
    MonitoringOutcome outcome;
    double rho = 1.0;
    std::optional<FairnessRecord> fairness_screened; // set when screened this month
    std::optional<Month> fairness_source;            // month of the screen that was scored
    SarBatch sar;
};

struct VignetteMonth {
    Month month;
    std::optional<double> target_rho;
    double realized_rho = 0.0;
    double target_auc = 0.0;
    double realized_auc = 0.0;
    RfiRecord record;
};

namespace pipeline {

/// Random-split test set: the (1 - split_fraction) share of samples with the
/// smallest seeded hash of their transaction id.
std::vector<ScoredSample> random_split_test(std::span<const ScoredSample> samples, double split_fraction,
                                            std::uint64_t seed);

ValidationReport validate(std::span<const ScoredSample> predictions, std::span<const drift::AblationInput> ablation,
                          std::optional<std::vector<CrossDatasetEntry>> cross_dataset, const RunConfig& config,
                          std::uint64_t seed);
Json to_json(const ValidationReport& report);
/// Reads the occ_inputs block of a validation report.
OccInputs occ_inputs_from_json(const Json& report);

SarBatch sar_batch(const Month& month, std::span<const ScoredSample> predictions, const ShapPanel& shap,
                   const std::map<std::string, AlertContext>& context,
                   std::span<const CertificationRecord> certifications, const RunConfig& config);
Json to_json(const SarBatch& batch);
Json to_json(const FairnessRecord& record);
FairnessRecord fairness_record_from_json(const Json& j);

/// prior_fairness is the latest screen on record; screens older than twelve
/// months are treated as absent.
MonthEvaluation evaluate_month(const MonthArtifacts& artifacts, const OccInputs& occ, const ImportanceVector& baseline,
                               const std::optional<FairnessRecord>& prior_fairness,
                               std::span<const RfiRecord> history, const RunConfig& config);

/// Loads the artifacts named by the paths; every file must ingest without
/// rejects.
MonthArtifacts load_month(const Month& month, const std::filesystem::path& predictions,
                          const std::filesystem::path& shap, const std::optional<std::filesystem::path>& proxies,
                          const std::optional<std::filesystem::path>& certifications,
                          const std::optional<std::filesystem::path>& context);

/// History reconstructed from an audit store.
std::vector<RfiRecord> rfi_history(std::span<const AuditEntry> entries);
std::optional<FairnessRecord> latest_fairness(std::span<const AuditEntry> entries);

/// Appends a config_change entry when the effective config differs from the
/// last one recorded.
bool record_config(audit::Writer& writer, const RunConfig& config);

/// Appends fairness_screen (when screened), drift_report, sar_batch and
/// rfi_record for one evaluated month. Throws AlreadyRecorded if the month
/// has an rfi_record already.
void record_month(audit::Writer& writer, const MonthEvaluation& evaluation,
                  std::optional<std::int64_t> recorded_at = std::nullopt);

Json month_json(const MonthEvaluation& evaluation);

/// Generates the vignette into workdir, then monitors every month against an
/// audit store under workdir/audit. Fairness is screened in the first month
/// only.
std::vector<VignetteMonth> run_vignette(const std::filesystem::path& workdir, const RunConfig& config = {});

} // namespace pipeline
} // namespace rdtfg

#endif
