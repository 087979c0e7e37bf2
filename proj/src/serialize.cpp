#include "rdtfg/serialize.hpp"

#include <algorithm>
#include <cmath>

namespace rdtfg {

namespace {

template <typename Enum, typename Parse>
Enum parse_enum(const Json& j, const char* what, Parse parse) {
    const auto text = j.get<std::string>();
    const auto value = parse(text);
    require(value.has_value(), ErrorKind::SchemaMismatch, std::string("unknown ") + what + " '" + text + "'");
    return *value;
}

Money parse_money(const Json& j) {
    const auto text = j.get<std::string>();
    const auto m = Money::parse(text);
    require(m.has_value(), ErrorKind::SchemaMismatch, "malformed amount '" + text + "'");
    return *m;
}

template <typename T>
void optional_to(Json& j, const char* key, const std::optional<T>& v) {
    if (v) {
        j[key] = *v;
    } else {
        j[key] = nullptr;
    }
}

template <typename T>
std::optional<T> optional_from(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return j.at(key).get<T>();
}

} // namespace

void to_json(Json& j, const ConfusionCounts& v) {
    j = Json{{"tp", v.tp}, {"fp", v.fp}, {"tn", v.tn}, {"fn", v.fn}, {"threshold", v.threshold}};
    optional_to(j, "precision", v.precision());
    optional_to(j, "recall", v.recall());
    j["f1"] = v.f1();
}

void from_json(const Json& j, ConfusionCounts& v) {
    j.at("tp").get_to(v.tp);
    j.at("fp").get_to(v.fp);
    j.at("tn").get_to(v.tn);
    j.at("fn").get_to(v.fn);
    j.at("threshold").get_to(v.threshold);
}

void to_json(Json& j, const DeLongResult& v) {
    j = Json{{"auc_a", v.auc_a},
             {"auc_b", v.auc_b},
             {"covariance", {{v.covariance(0, 0), v.covariance(0, 1)}, {v.covariance(1, 0), v.covariance(1, 1)}}},
             {"variance_diff", v.variance_diff},
             {"p_value_two_sided", v.p_value_two_sided},
             {"infinite_z", v.infinite_z}};
    // JSON has no infinity; the flag and the AUC difference carry the sign.
    if (v.infinite_z) {
        j["z_statistic"] = nullptr;
    } else {
        j["z_statistic"] = v.z_statistic;
    }
}

void from_json(const Json& j, DeLongResult& v) {
    j.at("auc_a").get_to(v.auc_a);
    j.at("auc_b").get_to(v.auc_b);
    const auto& c = j.at("covariance");
    v.covariance << c.at(0).at(0).get<double>(), c.at(0).at(1).get<double>(), c.at(1).at(0).get<double>(),
        c.at(1).at(1).get<double>();
    j.at("variance_diff").get_to(v.variance_diff);
    j.at("p_value_two_sided").get_to(v.p_value_two_sided);
    j.at("infinite_z").get_to(v.infinite_z);
    if (v.infinite_z) {
        v.z_statistic = v.auc_a > v.auc_b ? HUGE_VAL : -HUGE_VAL;
    } else {
        j.at("z_statistic").get_to(v.z_statistic);
    }
}

void to_json(Json& j, const KruskalWallisResult& v) {
    j = Json{{"h_statistic", v.h_statistic},
             {"degrees_freedom", v.degrees_freedom},
             {"p_value", v.p_value},
             {"p_adjusted", v.p_adjusted},
             {"m_comparisons", v.m_comparisons}};
}

void from_json(const Json& j, KruskalWallisResult& v) {
    j.at("h_statistic").get_to(v.h_statistic);
    j.at("degrees_freedom").get_to(v.degrees_freedom);
    j.at("p_value").get_to(v.p_value);
    j.at("p_adjusted").get_to(v.p_adjusted);
    j.at("m_comparisons").get_to(v.m_comparisons);
}

void to_json(Json& j, const ImportanceVector& v) {
    j = Json::array();
    for (std::size_t i = 0; i < v.features.size(); ++i) {
        j.push_back({{"feature", v.features[i]}, {"importance", v.values(static_cast<Eigen::Index>(i))}});
    }
}

void from_json(const Json& j, ImportanceVector& v) {
    v.features.clear();
    v.values.resize(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v.features.push_back(j.at(i).at("feature").get<std::string>());
        v.values(static_cast<Eigen::Index>(i)) = j.at(i).at("importance").get<double>();
    }
}

void to_json(Json& j, const DriftReport& v) {
    j = Json{{"random_split_auc", v.random_split_auc},
             {"temporal_auc", v.temporal_auc},
             {"delta_auc", v.delta_auc},
             {"threshold_floor", v.threshold_floor},
             {"passed", v.passed}};
}

void from_json(const Json& j, DriftReport& v) {
    j.at("random_split_auc").get_to(v.random_split_auc);
    j.at("temporal_auc").get_to(v.temporal_auc);
    j.at("delta_auc").get_to(v.delta_auc);
    j.at("threshold_floor").get_to(v.threshold_floor);
    j.at("passed").get_to(v.passed);
}

void to_json(Json& j, const AblationEntry& v) {
    j = Json{{"feature_group", v.feature_group.name},
             {"members", v.feature_group.members},
             {"auc_full", v.auc_full},
             {"auc_without", v.auc_without},
             {"delta_auc", v.delta_auc}};
}

void from_json(const Json& j, AblationEntry& v) {
    j.at("feature_group").get_to(v.feature_group.name);
    j.at("members").get_to(v.feature_group.members);
    j.at("auc_full").get_to(v.auc_full);
    j.at("auc_without").get_to(v.auc_without);
    j.at("delta_auc").get_to(v.delta_auc);
}

void to_json(Json& j, const StabilityPoint& v) {
    j = Json{{"month_index", v.month_index}};
    optional_to(j, "rho", v.rho);
    optional_to(j, "error", v.error);
}

void from_json(const Json& j, StabilityPoint& v) {
    j.at("month_index").get_to(v.month_index);
    v.rho = optional_from<double>(j, "rho");
    v.error = optional_from<std::string>(j, "error");
}

void to_json(Json& j, const CrossDatasetSummary& v) {
    Json entries = Json::array();
    for (const auto& e : v.entries) {
        entries.push_back({{"model", e.model}, {"dataset", e.dataset}, {"auc", e.auc}});
    }
    j = Json{{"entries", entries}, {"floor", v.floor}, {"min_auc", v.min_auc}, {"all_above_floor", v.all_above_floor}};
}

void from_json(const Json& j, CrossDatasetSummary& v) {
    v.entries.clear();
    for (const auto& e : j.at("entries")) {
        v.entries.push_back({e.at("model").get<std::string>(), e.at("dataset").get<std::string>(), e.at("auc").get<double>()});
    }
    j.at("floor").get_to(v.floor);
    j.at("min_auc").get_to(v.min_auc);
    j.at("all_above_floor").get_to(v.all_above_floor);
}

void to_json(Json& j, const FairnessFinding& v) {
    j = Json{{"feature", v.feature},
             {"category", std::string(to_string(v.category))},
             {"feature_mean_abs_shap", v.feature_mean_abs_shap},
             {"kw", v.kw},
             {"verdict", std::string(to_string(v.verdict))}};
}

void from_json(const Json& j, FairnessFinding& v) {
    j.at("feature").get_to(v.feature);
    v.category = parse_enum<ProxyCategory>(j.at("category"), "proxy category", proxy_category_from_string);
    j.at("feature_mean_abs_shap").get_to(v.feature_mean_abs_shap);
    j.at("kw").get_to(v.kw);
    v.verdict = parse_enum<Verdict>(j.at("verdict"), "verdict", [](std::string_view t) -> std::optional<Verdict> {
        for (auto x : {Verdict::Clear, Verdict::Watch, Verdict::Violation}) {
            if (to_string(x) == t) {
                return x;
            }
        }
        return std::nullopt;
    });
}

void to_json(Json& j, const ScreenResult& v) {
    j = Json{{"findings", v.findings},
             {"overall", std::string(to_string(v.overall))},
             {"missing_shap", v.missing_shap},
             {"top_k", v.top_k},
             {"m_comparisons", v.m_comparisons},
             {"quartiles", "transaction-count"}};
}

void from_json(const Json& j, ScreenResult& v) {
    j.at("findings").get_to(v.findings);
    v.overall = Verdict::Clear;
    for (const auto& f : v.findings) {
        v.overall = std::max(v.overall, f.verdict);
    }
    j.at("missing_shap").get_to(v.missing_shap);
    j.at("top_k").get_to(v.top_k);
    j.at("m_comparisons").get_to(v.m_comparisons);
}

// Non-finite inputs (an infinite DeLong z) are written as "inf", "-inf" or "nan".
void to_json(Json& j, const HealthScore& v) {
    Json inputs = Json::object();
    for (const auto& [key, value] : v.inputs) {
        if (std::isfinite(value)) {
            inputs[key] = value;
        } else {
            inputs[key] = std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
        }
    }
    j = Json{{"dimension", std::string(to_string(v.dimension))},
             {"color", std::string(to_string(v.color))},
             {"numeric", v.numeric()},
             {"inputs", inputs},
             {"notes", v.notes}};
}

void from_json(const Json& j, HealthScore& v) {
    v.dimension = parse_enum<Dimension>(j.at("dimension"), "dimension", dimension_from_string);
    v.color = parse_enum<Color>(j.at("color"), "color", color_from_string);
    v.inputs.clear();
    for (const auto& [key, value] : j.at("inputs").items()) {
        if (value.is_string()) {
            const auto text = value.get<std::string>();
            require(text == "inf" || text == "-inf" || text == "nan", ErrorKind::SchemaMismatch,
                    "HealthScore: malformed input value '" + text + "'");
            v.inputs[key] = text == "nan" ? std::nan("") : (text == "inf" ? HUGE_VAL : -HUGE_VAL);
        } else {
            v.inputs[key] = value.get<double>();
        }
    }
    j.at("notes").get_to(v.notes);
}

void to_json(Json& j, const RemediationTrigger& v) {
    j = Json{{"dimension", std::string(to_string(v.dimension))},
             {"severity", std::string(to_string(v.severity))},
             {"action", v.action},
             {"deadline_days", v.deadline_days},
             {"raised_on", v.raised_on},
             {"escalation", v.escalation}};
}

void from_json(const Json& j, RemediationTrigger& v) {
    v.dimension = parse_enum<Dimension>(j.at("dimension"), "dimension", dimension_from_string);
    v.severity = parse_enum<Severity>(j.at("severity"), "severity", [](std::string_view t) -> std::optional<Severity> {
        for (auto x : {Severity::AmberReview, Severity::RedEscalation}) {
            if (to_string(x) == t) {
                return x;
            }
        }
        return std::nullopt;
    });
    j.at("action").get_to(v.action);
    j.at("deadline_days").get_to(v.deadline_days);
    j.at("raised_on").get_to(v.raised_on);
    j.at("escalation").get_to(v.escalation);
}

void to_json(Json& j, const RfiRecord& v) {
    j = Json{{"month", v.month.to_string()},
             {"scores", v.scores},
             {"rfi", v.rfi},
             {"status", std::string(to_string(v.status))},
             {"triggers", v.triggers},
             {"escalate_to_cro", v.escalate_to_cro},
             {"retraining_flag", v.retraining_flag}};
    optional_to(j, "monthly_auc", v.monthly_auc);
}

void from_json(const Json& j, RfiRecord& v) {
    const auto month = Month::parse(j.at("month").get<std::string>());
    require(month.has_value(), ErrorKind::SchemaMismatch, "RfiRecord: malformed month");
    v.month = *month;
    const auto& scores = j.at("scores");
    require(scores.size() == 4, ErrorKind::SchemaMismatch, "RfiRecord: expected four scores");
    for (const auto& s : scores) {
        HealthScore h = s.get<HealthScore>();
        v.scores[static_cast<std::size_t>(h.dimension)] = std::move(h);
    }
    j.at("rfi").get_to(v.rfi);
    v.status = parse_enum<FitnessStatus>(j.at("status"), "status", [](std::string_view t) -> std::optional<FitnessStatus> {
        for (auto x : {FitnessStatus::RemediationRequired, FitnessStatus::Watch, FitnessStatus::ExamReady}) {
            if (to_string(x) == t) {
                return x;
            }
        }
        return std::nullopt;
    });
    j.at("triggers").get_to(v.triggers);
    j.at("escalate_to_cro").get_to(v.escalate_to_cro);
    j.at("retraining_flag").get_to(v.retraining_flag);
    v.monthly_auc = optional_from<double>(j, "monthly_auc");
}

void to_json(Json& j, const ReasonCode& v) {
    j = Json{{"rank", v.rank},
             {"shap_value", v.shap_value},
             {"feature", v.feature},
             {"feature_category", std::string(to_string(v.feature_category))},
             {"label", v.label},
             {"deviation_statement", v.deviation_statement},
             {"form111_category", v.form111_category},
             {"baseline_missing", v.baseline_missing}};
}

void from_json(const Json& j, ReasonCode& v) {
    j.at("rank").get_to(v.rank);
    j.at("shap_value").get_to(v.shap_value);
    j.at("feature").get_to(v.feature);
    v.feature_category = parse_enum<FeatureCategory>(j.at("feature_category"), "feature category",
                                                     feature_category_from_string);
    j.at("label").get_to(v.label);
    j.at("deviation_statement").get_to(v.deviation_statement);
    j.at("form111_category").get_to(v.form111_category);
    j.at("baseline_missing").get_to(v.baseline_missing);
}

void to_json(Json& j, const ReasonCodeSet& v) { j = Json{{"alert_id", v.alert_id}, {"codes", v.codes}}; }

void from_json(const Json& j, ReasonCodeSet& v) {
    j.at("alert_id").get_to(v.alert_id);
    j.at("codes").get_to(v.codes);
}

void to_json(Json& j, const CertificationRecord& v) {
    j = Json{{"alert_id", v.alert_id},
             {"analyst_id", v.analyst_id},
             {"certified_at", v.certified_at},
             {"disposition", std::string(to_string(v.disposition))}};
    if (v.amended_text) {
        j["amended_text"] = *v.amended_text;
    }
}

void from_json(const Json& j, CertificationRecord& v) {
    require(j.is_object(), ErrorKind::RowInvalid, "certification: not a JSON object");
    for (const auto& [key, _] : j.items()) {
        require(key == "alert_id" || key == "analyst_id" || key == "certified_at" || key == "disposition" ||
                    key == "amended_text",
                ErrorKind::RowInvalid, "certification: unknown field '" + key + "'");
    }
    require(j.contains("alert_id") && j.at("alert_id").is_string(), ErrorKind::RowInvalid, "certification: alert_id");
    require(j.contains("analyst_id") && j.at("analyst_id").is_string(), ErrorKind::RowInvalid,
            "certification: analyst_id");
    require(j.contains("certified_at") && j.at("certified_at").is_number_integer(), ErrorKind::RowInvalid,
            "certification: certified_at must be integer epoch seconds");
    require(j.contains("disposition") && j.at("disposition").is_string(), ErrorKind::RowInvalid,
            "certification: disposition");
    v.alert_id = j.at("alert_id").get<std::string>();
    v.analyst_id = j.at("analyst_id").get<std::string>();
    v.certified_at = j.at("certified_at").get<std::int64_t>();
    const auto d = disposition_from_string(j.at("disposition").get<std::string>());
    require(d.has_value(), ErrorKind::RowInvalid, "certification: unknown disposition");
    v.disposition = *d;
    v.amended_text.reset();
    if (j.contains("amended_text") && !j.at("amended_text").is_null()) {
        require(j.at("amended_text").is_string(), ErrorKind::RowInvalid, "certification: amended_text");
        v.amended_text = j.at("amended_text").get<std::string>();
    }
    sar::validate(v);
}

void to_json(Json& j, const CoverageStats& v) {
    j = Json{{"alerts", v.alerts},
             {"with_three_codes", v.with_three_codes},
             {"certified", v.certified},
             {"coverage", v.coverage},
             {"cert_rate", v.cert_rate}};
}

void from_json(const Json& j, CoverageStats& v) {
    j.at("alerts").get_to(v.alerts);
    j.at("with_three_codes").get_to(v.with_three_codes);
    j.at("certified").get_to(v.certified);
    j.at("coverage").get_to(v.coverage);
    j.at("cert_rate").get_to(v.cert_rate);
}

void to_json(Json& j, const BlendSearchResult& v) {
    j = Json{{"best_alpha", v.best_alpha}, {"best_tau", v.best_tau}, {"f1", v.f1}};
}

void from_json(const Json& j, BlendSearchResult& v) {
    j.at("best_alpha").get_to(v.best_alpha);
    j.at("best_tau").get_to(v.best_tau);
    j.at("f1").get_to(v.f1);
}

void to_json(Json& j, const Savings& v) {
    j = Json{{"net", v.net.to_string()}, {"benefit", v.benefit.to_string()}, {"cost", v.cost.to_string()}};
}

void from_json(const Json& j, Savings& v) {
    v.net = parse_money(j.at("net"));
    v.benefit = parse_money(j.at("benefit"));
    v.cost = parse_money(j.at("cost"));
}

void to_json(Json& j, const ComparisonRow& v) {
    j = Json{{"model", v.reference.model},
             {"recall", v.reference.recall},
             {"precision", v.reference.precision},
             {"tp", v.reference.tp},
             {"fp", v.reference.fp},
             {"derived_tp", v.derived.tp},
             {"derived_fp", v.derived.fp},
             {"formula", v.formula},
             {"formula_ratio", v.formula_ratio.to_string()},
             {"published_net", v.reference.printed_net.to_string()},
             {"published_ratio", v.reference.printed_ratio},
             {"net_deviation_pct", v.net_deviation_pct},
             {"deviates", v.deviates}};
}

namespace {

// NaN inputs survive a round-trip as NaN, so they count as equal here.
bool same_inputs(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const auto& x, const auto& y) {
        return x.first == y.first && (x.second == y.second || (std::isnan(x.second) && std::isnan(y.second)));
    });
}

} // namespace

bool operator==(const HealthScore& a, const HealthScore& b) {
    return a.dimension == b.dimension && a.color == b.color && same_inputs(a.inputs, b.inputs) && a.notes == b.notes;
}

bool operator==(const RemediationTrigger& a, const RemediationTrigger& b) {
    return a.dimension == b.dimension && a.severity == b.severity && a.action == b.action &&
           a.deadline_days == b.deadline_days && a.raised_on == b.raised_on && a.escalation == b.escalation;
}

bool operator==(const RfiRecord& a, const RfiRecord& b) {
    return a.month == b.month && a.scores == b.scores && a.rfi == b.rfi && a.status == b.status &&
           a.triggers == b.triggers && a.escalate_to_cro == b.escalate_to_cro && a.monthly_auc == b.monthly_auc &&
           a.retraining_flag == b.retraining_flag;
}

bool operator==(const ReasonCode& a, const ReasonCode& b) {
    return a.rank == b.rank && a.shap_value == b.shap_value && a.feature == b.feature &&
           a.feature_category == b.feature_category && a.label == b.label &&
           a.deviation_statement == b.deviation_statement && a.form111_category == b.form111_category &&
           a.baseline_missing == b.baseline_missing;
}

bool operator==(const ReasonCodeSet& a, const ReasonCodeSet& b) { return a.alert_id == b.alert_id && a.codes == b.codes; }

bool operator==(const KruskalWallisResult& a, const KruskalWallisResult& b) {
    return a.h_statistic == b.h_statistic && a.degrees_freedom == b.degrees_freedom && a.p_value == b.p_value &&
           a.p_adjusted == b.p_adjusted && a.m_comparisons == b.m_comparisons;
}

bool operator==(const FairnessFinding& a, const FairnessFinding& b) {
    return a.feature == b.feature && a.category == b.category && a.feature_mean_abs_shap == b.feature_mean_abs_shap &&
           a.kw == b.kw && a.verdict == b.verdict;
}

bool operator==(const DriftReport& a, const DriftReport& b) {
    return a.random_split_auc == b.random_split_auc && a.temporal_auc == b.temporal_auc && a.delta_auc == b.delta_auc &&
           a.threshold_floor == b.threshold_floor && a.passed == b.passed;
}

bool operator==(const AblationEntry& a, const AblationEntry& b) {
    return a.feature_group.name == b.feature_group.name && a.feature_group.members == b.feature_group.members &&
           a.auc_full == b.auc_full && a.auc_without == b.auc_without && a.delta_auc == b.delta_auc;
}

bool operator==(const CoverageStats& a, const CoverageStats& b) {
    return a.alerts == b.alerts && a.with_three_codes == b.with_three_codes && a.certified == b.certified &&
           a.coverage == b.coverage && a.cert_rate == b.cert_rate;
}

bool operator==(const DeLongResult& a, const DeLongResult& b) {
    return a.auc_a == b.auc_a && a.auc_b == b.auc_b && a.covariance == b.covariance &&
           a.variance_diff == b.variance_diff && a.z_statistic == b.z_statistic &&
           a.p_value_two_sided == b.p_value_two_sided && a.infinite_z == b.infinite_z;
}

} // namespace rdtfg
