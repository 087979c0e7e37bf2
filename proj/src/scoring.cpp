#include "rdtfg/scoring.hpp"

#include <algorithm>

namespace rdtfg {

std::string_view to_string(Dimension d) noexcept {
    switch (d) {
    case Dimension::OccPerformance: return "occ_performance";
    case Dimension::DriftMonitoring: return "drift_monitoring";
    case Dimension::CfpbFairness: return "cfpb_fairness";
    case Dimension::FincenSar: return "fincen_sar";
    }
    return "unknown";
}

std::string_view to_string(Color c) noexcept {
    switch (c) {
    case Color::Red: return "Red";
    case Color::Amber: return "Amber";
    case Color::Green: return "Green";
    }
    return "unknown";
}

std::string_view to_string(FitnessStatus s) noexcept {
    switch (s) {
    case FitnessStatus::RemediationRequired: return "remediation_required";
    case FitnessStatus::Watch: return "watch";
    case FitnessStatus::ExamReady: return "exam_ready";
    }
    return "unknown";
}

std::string_view to_string(Severity s) noexcept {
    switch (s) {
    case Severity::AmberReview: return "amber_review";
    case Severity::RedEscalation: return "red_escalation";
    }
    return "unknown";
}

std::optional<Dimension> dimension_from_string(std::string_view text) noexcept {
    for (auto d : kDimensions) {
        if (to_string(d) == text) {
            return d;
        }
    }
    return std::nullopt;
}

std::optional<Color> color_from_string(std::string_view text) noexcept {
    for (auto c : {Color::Red, Color::Amber, Color::Green}) {
        if (to_string(c) == text) {
            return c;
        }
    }
    return std::nullopt;
}

double numeric(Color c) noexcept {
    switch (c) {
    case Color::Green: return 1.0;
    case Color::Amber: return 0.5;
    case Color::Red: return 0.0;
    }
    return 0.0;
}

namespace scoring {

namespace {

struct Action {
    const char* amber;
    const char* red;
};

Action actions_for(Dimension d) {
    switch (d) {
    case Dimension::OccPerformance:
        return {"Validation review of discrimination metrics", "Immediate model revalidation; notify OCC"};
    case Dimension::DriftMonitoring:
        return {"Drift investigation", "Mandatory retraining of the sequence model"};
    case Dimension::CfpbFairness:
        return {"Review top SHAP features for demographic proxy effects",
                "Suspend deployment; engage CFPB counsel"};
    case Dimension::FincenSar:
        return {"Audit the SAR reason-code workflow", "Immediate SAR process remediation; engage FinCEN counsel"};
    }
    return {"", ""};
}

HealthScore make(Dimension d, Color c, std::map<std::string, double> inputs) {
    HealthScore s;
    s.dimension = d;
    s.color = c;
    s.inputs = std::move(inputs);
    return s;
}

} // namespace

HealthScore occ_score(double auc, double min_delong_z, double worst_delong_p, bool ablation_documented,
                      const ScoringThresholds& t) {
    require(auc >= 0.0 && auc <= 1.0, ErrorKind::InvalidArgument, "occ_score: AUC outside [0,1]");
    require(!std::isnan(min_delong_z), ErrorKind::InvalidArgument, "occ_score: z is NaN");
    require(worst_delong_p >= 0.0 && worst_delong_p <= 1.0, ErrorKind::InvalidArgument, "occ_score: p outside [0,1]");

    Color color = Color::Green;
    if (auc < t.auc_amber || worst_delong_p > t.p_max || min_delong_z < t.z_amber) {
        color = Color::Red;
    } else if (auc < t.auc_green || min_delong_z < t.z_green || !ablation_documented) {
        color = Color::Amber;
    }
    auto score = make(Dimension::OccPerformance, color,
                      {{"auc", auc},
                       {"min_delong_z", min_delong_z},
                       {"worst_delong_p", worst_delong_p},
                       {"ablation_documented", ablation_documented ? 1.0 : 0.0}});
    if (!ablation_documented) {
        score.notes.emplace_back("ablation ledger not documented");
    }
    return score;
}

HealthScore drift_score(double temporal_auc, double rho, const ScoringThresholds& t) {
    require(temporal_auc >= 0.0 && temporal_auc <= 1.0, ErrorKind::InvalidArgument, "drift_score: AUC outside [0,1]");
    require(rho >= -1.0 && rho <= 1.0, ErrorKind::InvalidArgument, "drift_score: rho outside [-1,1]");
    Color color = Color::Green;
    if (temporal_auc < t.temporal_amber || rho < t.rho_amber) {
        color = Color::Red;
    } else if (temporal_auc < t.temporal_green || rho < t.rho_green) {
        color = Color::Amber;
    }
    return make(Dimension::DriftMonitoring, color, {{"temporal_auc", temporal_auc}, {"rho", rho}});
}

HealthScore fairness_score(std::span<const FairnessFinding> findings, const ScoringThresholds& t) {
    if (findings.empty()) {
        auto score = make(Dimension::CfpbFairness, Color::Red, {});
        score.notes.emplace_back("screening absent");
        return score;
    }
    double min_p = 1.0;
    Verdict worst = Verdict::Clear;
    for (const auto& f : findings) {
        min_p = std::min(min_p, f.kw.p_adjusted);
        worst = std::max(worst, fairness::classify(f.kw.p_adjusted, t.fairness));
    }
    const Color color = worst == Verdict::Violation ? Color::Red : worst == Verdict::Watch ? Color::Amber : Color::Green;
    return make(Dimension::CfpbFairness, color,
                {{"min_p_adjusted", min_p}, {"findings", static_cast<double>(findings.size())}});
}

HealthScore sar_score(double coverage, double cert_rate, const ScoringThresholds& t) {
    require(coverage >= 0.0 && coverage <= 1.0 && cert_rate >= 0.0 && cert_rate <= 1.0, ErrorKind::InvalidArgument,
            "sar_score: fractions outside [0,1]");
    Color color = Color::Green;
    if (coverage < t.coverage_amber || cert_rate < 1.0) {
        color = Color::Red;
    } else if (coverage < t.coverage_green) {
        color = Color::Amber;
    }
    auto score = make(Dimension::FincenSar, color, {{"coverage", coverage}, {"cert_rate", cert_rate}});
    if (cert_rate < 1.0) {
        score.notes.emplace_back("missing certifications");
    }
    return score;
}

FitnessStatus status_for(double rfi) noexcept {
    if (rfi >= 1.0) {
        return FitnessStatus::ExamReady;
    }
    if (rfi >= 0.5) {
        return FitnessStatus::Watch;
    }
    return FitnessStatus::RemediationRequired;
}

RfiRecord compose_rfi(const Month& month, std::span<const HealthScore> scores, const ScoringThresholds& t) {
    RfiRecord record;
    record.month = month;
    std::array<bool, 4> seen{};
    for (const auto& s : scores) {
        const auto idx = static_cast<std::size_t>(s.dimension);
        require(!seen[idx], ErrorKind::DuplicateDimension,
                "compose_rfi: duplicate score for " + std::string(to_string(s.dimension)));
        seen[idx] = true;
        record.scores[idx] = s;
    }
    for (auto d : kDimensions) {
        require(seen[static_cast<std::size_t>(d)], ErrorKind::MissingDimension,
                "compose_rfi: no score for " + std::string(to_string(d)));
    }

    record.rfi = 1.0;
    for (const auto& s : record.scores) {
        record.rfi = std::min(record.rfi, s.numeric());
    }
    record.status = status_for(record.rfi);

    for (const auto& s : record.scores) {
        if (s.color == Color::Green) {
            continue;
        }
        const auto action = actions_for(s.dimension);
        RemediationTrigger trigger;
        trigger.dimension = s.dimension;
        trigger.raised_on = month.last_day();
        if (s.color == Color::Amber) {
            trigger.severity = Severity::AmberReview;
            trigger.action = action.amber;
            trigger.deadline_days = t.amber_deadline_days;
        } else {
            trigger.severity = Severity::RedEscalation;
            trigger.action = action.red;
            // Red outside drift is immediate.
            trigger.deadline_days = s.dimension == Dimension::DriftMonitoring ? t.drift_red_deadline_days : 0;
            trigger.escalation = true;
            record.escalate_to_cro = true;
        }
        record.triggers.push_back(std::move(trigger));
    }
    return record;
}

MonitoringOutcome monitoring_step(std::span<const RfiRecord> history, const MonthInputs& inputs,
                                  const ScoringThresholds& t) {
    for (std::size_t i = 1; i < history.size(); ++i) {
        require(history[i].month == history[i - 1].month.next(), ErrorKind::NonMonotoneMonths,
                "monitoring_step: history is not gap-free at " + history[i].month.to_string());
    }
    if (!history.empty()) {
        require(inputs.month == history.back().month.next(), ErrorKind::NonMonotoneMonths,
                "monitoring_step: " + inputs.month.to_string() + " does not follow " +
                    history.back().month.to_string());
    }

    const std::array<HealthScore, 4> scores{
        occ_score(inputs.occ.auc, inputs.occ.min_delong_z, inputs.occ.worst_delong_p, inputs.occ.ablation_documented, t),
        drift_score(inputs.monthly_auc, inputs.rho, t),
        fairness_score(inputs.findings, t),
        sar_score(inputs.coverage, inputs.cert_rate, t),
    };

    MonitoringOutcome outcome;
    outcome.record = compose_rfi(inputs.month, scores, t);
    outcome.record.monthly_auc = inputs.monthly_auc;

    const bool below_now = inputs.monthly_auc < t.retrain_auc_floor;
    const bool below_before = !history.empty() && history.back().monthly_auc.has_value() &&
                              *history.back().monthly_auc < t.retrain_auc_floor;
    const bool drift_red = outcome.record.scores[static_cast<std::size_t>(Dimension::DriftMonitoring)].color == Color::Red;
    outcome.retraining_flag = (below_now && below_before) || drift_red;
    outcome.record.retraining_flag = outcome.retraining_flag;
    if (below_now && below_before) {
        outcome.record.scores[static_cast<std::size_t>(Dimension::DriftMonitoring)].notes.emplace_back(
            "AUC below retraining floor for two consecutive months");
    }
    return outcome;
}

} // namespace scoring
} // namespace rdtfg
