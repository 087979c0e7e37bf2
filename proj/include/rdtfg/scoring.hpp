#ifndef RDTFG_SCORING_HPP
#define RDTFG_SCORING_HPP

// Regulator health scores, the fitness index and the monthly monitoring step.
//
// Every band function evaluates Red first, then Amber, then Green, so a value
// that satisfies clauses of two bands gets the worse color. Thresholds written
// ">= x" are inclusive on the Green side; "[a, b)" bands are half-open.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rdtfg/calendar.hpp"
#include "rdtfg/fairness.hpp"

namespace rdtfg {

enum class Dimension { OccPerformance = 0, DriftMonitoring = 1, CfpbFairness = 2, FincenSar = 3 };
inline constexpr std::array<Dimension, 4> kDimensions{Dimension::OccPerformance, Dimension::DriftMonitoring,
                                                      Dimension::CfpbFairness, Dimension::FincenSar};

enum class Color { Red = 0, Amber = 1, Green = 2 };

enum class FitnessStatus { RemediationRequired, Watch, ExamReady };

enum class Severity { AmberReview, RedEscalation };

std::string_view to_string(Dimension d) noexcept;
std::string_view to_string(Color c) noexcept;
std::string_view to_string(FitnessStatus s) noexcept;
std::string_view to_string(Severity s) noexcept;
std::optional<Dimension> dimension_from_string(std::string_view text) noexcept;
std::optional<Color> color_from_string(std::string_view text) noexcept;

/// Green = 1.0, Amber = 0.5, Red = 0.0
double numeric(Color c) noexcept;

struct HealthScore {
    Dimension dimension = Dimension::OccPerformance;
    Color color = Color::Red;
    std::map<std::string, double> inputs; // the metric values that produced the color
    std::vector<std::string> notes;

    double numeric() const noexcept { return rdtfg::numeric(color); }
};

struct RemediationTrigger {
    Dimension dimension = Dimension::OccPerformance;
    Severity severity = Severity::AmberReview;
    std::string action;
    int deadline_days = 30;
    std::string raised_on; // YYYY-MM-DD
    bool escalation = false;
};

struct RfiRecord {
    Month month;
    std::array<HealthScore, 4> scores; // indexed by Dimension
    double rfi = 0.0;
    FitnessStatus status = FitnessStatus::RemediationRequired;
    std::vector<RemediationTrigger> triggers;
    bool escalate_to_cro = false;
    std::optional<double> monthly_auc;
    bool retraining_flag = false;
};

struct ScoringThresholds {
    double auc_green = 0.90;
    double auc_amber = 0.87;
    double z_green = 17.0;
    double z_amber = 10.0;
    double p_max = 0.001;
    double temporal_green = 0.85;
    double temporal_amber = 0.82;
    double rho_green = 0.80;
    double rho_amber = 0.75;
    FairnessBands fairness;
    double coverage_green = 0.95;
    double coverage_amber = 0.85;
    double retrain_auc_floor = 0.85;
    int amber_deadline_days = 30;
    int drift_red_deadline_days = 14;
};

struct OccInputs {
    double auc = 0.0;
    double min_delong_z = 0.0;
    double worst_delong_p = 1.0;
    bool ablation_documented = false;
};

struct MonthInputs {
    Month month;
    OccInputs occ;
    double monthly_auc = 0.0; // rolling-window production AUC, scored as temporal AUC
    double rho = 1.0;         // SHAP importance Spearman vs. baseline
    std::vector<FairnessFinding> findings;
    double coverage = 1.0;
    double cert_rate = 1.0;
};

struct MonitoringOutcome {
    RfiRecord record;
    bool retraining_flag = false;
};

namespace scoring {

HealthScore occ_score(double auc, double min_delong_z, double worst_delong_p, bool ablation_documented,
                      const ScoringThresholds& t = {});
HealthScore drift_score(double temporal_auc, double rho, const ScoringThresholds& t = {});
/// An empty findings list means screening was not run and scores Red.
HealthScore fairness_score(std::span<const FairnessFinding> findings, const ScoringThresholds& t = {});
HealthScore sar_score(double coverage, double cert_rate, const ScoringThresholds& t = {});

/// rfi = min of the four numeric scores; attaches remediation triggers.
RfiRecord compose_rfi(const Month& month, std::span<const HealthScore> scores, const ScoringThresholds& t = {});

/// Scores one month against the chronologically ordered, gap-free history.
/// Retraining is flagged when this and the previous month's AUC are both
/// below the floor, or when the drift score is Red.
MonitoringOutcome monitoring_step(std::span<const RfiRecord> history, const MonthInputs& inputs,
                                  const ScoringThresholds& t = {});

FitnessStatus status_for(double rfi) noexcept;

} // namespace scoring
} // namespace rdtfg

#endif
