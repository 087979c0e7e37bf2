#include "rdtfg/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace rdtfg::config {

namespace {

struct NumericField {
    const char* name;
    double (*get)(const RunConfig&);
    void (*set)(RunConfig&, double);
    bool integral;
};

#define RDTFG_FIELD(key, member) \
    NumericField { key, [](const RunConfig& c) { return static_cast<double>(c.member); }, \
                   [](RunConfig& c, double v) { c.member = v; }, false }
#define RDTFG_INT_FIELD(key, member) \
    NumericField { key, [](const RunConfig& c) { return static_cast<double>(c.member); }, \
                   [](RunConfig& c, double v) { c.member = static_cast<int>(v); }, true }

const std::vector<NumericField>& threshold_fields() {
    static const std::vector<NumericField> fields{
        RDTFG_FIELD("auc_floor", thresholds.auc_green),
        RDTFG_FIELD("auc_amber_floor", thresholds.auc_amber),
        RDTFG_FIELD("delong_z_floor", thresholds.z_green),
        RDTFG_FIELD("delong_z_amber_floor", thresholds.z_amber),
        RDTFG_FIELD("delong_p_max", thresholds.p_max),
        RDTFG_FIELD("temporal_floor", thresholds.temporal_green),
        RDTFG_FIELD("temporal_amber_floor", thresholds.temporal_amber),
        RDTFG_FIELD("rho_floor", thresholds.rho_green),
        RDTFG_FIELD("rho_amber_floor", thresholds.rho_amber),
        RDTFG_FIELD("fairness_clear_above", thresholds.fairness.clear_above),
        RDTFG_FIELD("fairness_violation_below", thresholds.fairness.violation_below),
        RDTFG_FIELD("coverage_green", thresholds.coverage_green),
        RDTFG_FIELD("coverage_amber", thresholds.coverage_amber),
        RDTFG_FIELD("retrain_auc_floor", thresholds.retrain_auc_floor),
        RDTFG_FIELD("risk_tau", risk_tau),
        RDTFG_FIELD("split_fraction", split_fraction),
        RDTFG_FIELD("cross_dataset_floor", cross_dataset_floor),
        RDTFG_INT_FIELD("amber_deadline_days", thresholds.amber_deadline_days),
        RDTFG_INT_FIELD("drift_red_deadline_days", thresholds.drift_red_deadline_days),
    };
    return fields;
}

#undef RDTFG_FIELD
#undef RDTFG_INT_FIELD

void reject_unknown(const Json& j, const std::set<std::string>& known, const std::string& where) {
    require(j.is_object(), ErrorKind::ConfigInvalid, where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        require(known.contains(key), ErrorKind::ConfigInvalid, "unknown key '" + key + "' in " + where);
    }
}

double number_at(const Json& j, const std::string& key, const std::string& where) {
    const auto& v = j.at(key);
    require(v.is_number(), ErrorKind::ConfigInvalid, where + "." + key + " must be a number");
    return v.get<double>();
}

Money money_at(const Json& j, const std::string& key) {
    const auto& v = j.at(key);
    require(v.is_string(), ErrorKind::ConfigInvalid, "cost_model." + key + " must be a decimal string like \"151.90\"");
    const auto m = Money::parse(v.get<std::string>());
    require(m.has_value(), ErrorKind::ConfigInvalid, "cost_model." + key + " is not a 2-place decimal");
    return *m;
}

std::vector<double> grid_at(const Json& j, const std::string& key) {
    const auto& v = j.at(key);
    require(v.is_array(), ErrorKind::ConfigInvalid, "blend." + key + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        require(x.is_number(), ErrorKind::ConfigInvalid, "blend." + key + " must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

void check(bool ok, const std::string& what) { require(ok, ErrorKind::ConfigInvalid, what); }

bool unit(double v) { return v >= 0.0 && v <= 1.0; }

} // namespace

const std::vector<std::string>& path_keys() {
    static const std::vector<std::string> keys{"predictions", "shap",       "proxies",  "certs",        "audit_dir",
                                               "baseline",    "validation", "context",  "ablation",     "cross_dataset"};
    return keys;
}

void validate(const RunConfig& c) {
    const auto& t = c.thresholds;
    check(unit(t.auc_green) && unit(t.auc_amber) && t.auc_amber <= t.auc_green,
          "auc thresholds must lie in [0,1] with auc_amber_floor <= auc_floor");
    check(std::isfinite(t.z_green) && std::isfinite(t.z_amber) && t.z_amber >= 0.0 && t.z_amber <= t.z_green,
          "DeLong z thresholds must be finite with 0 <= delong_z_amber_floor <= delong_z_floor");
    check(unit(t.p_max), "delong_p_max must lie in [0,1]");
    check(unit(t.temporal_green) && unit(t.temporal_amber) && t.temporal_amber <= t.temporal_green,
          "temporal thresholds must lie in [0,1] with temporal_amber_floor <= temporal_floor");
    check(t.rho_green >= -1.0 && t.rho_green <= 1.0 && t.rho_amber >= -1.0 && t.rho_amber <= t.rho_green,
          "rho thresholds must lie in [-1,1] with rho_amber_floor <= rho_floor");
    check(unit(t.fairness.clear_above) && unit(t.fairness.violation_below) &&
              t.fairness.violation_below <= t.fairness.clear_above,
          "fairness bands must lie in [0,1] with fairness_violation_below <= fairness_clear_above");
    check(unit(t.coverage_green) && unit(t.coverage_amber) && t.coverage_amber <= t.coverage_green,
          "coverage bands must lie in [0,1] with coverage_amber <= coverage_green");
    check(unit(t.retrain_auc_floor), "retrain_auc_floor must lie in [0,1]");
    check(t.amber_deadline_days >= 1 && t.drift_red_deadline_days >= 1, "deadlines must be at least one day");
    check(unit(c.risk_tau), "risk_tau must lie in [0,1]");
    check(c.split_fraction > 0.0 && c.split_fraction < 1.0, "split_fraction must lie in (0,1)");
    check(unit(c.cross_dataset_floor), "cross_dataset_floor must lie in [0,1]");
    check(c.cost.mean_fraud_amount.cents() >= 0 && c.cost.investigation_cost.cents() >= 0,
          "cost model amounts must be non-negative");
    check(c.total_fraud > 0, "total_fraud must be positive");
    check(unit(c.blend.alpha), "blend alpha must lie in [0,1]");
    check(!c.blend.grid.empty() && std::all_of(c.blend.grid.begin(), c.blend.grid.end(), unit),
          "alpha_grid must be a non-empty list in [0,1]");
    check(std::set<double>(c.blend.grid.begin(), c.blend.grid.end()).size() == c.blend.grid.size(),
          "alpha_grid has duplicates");
    check(!c.tau_grid.empty() && std::all_of(c.tau_grid.begin(), c.tau_grid.end(), unit),
          "tau_grid must be a non-empty list in [0,1]");
    check(c.m_comparisons >= 1, "m_comparisons must be at least 1");
    check(c.top_k >= 1, "top_k must be at least 1");
    check(!c.categories.patterns().empty(), "feature_categories must not be empty");
    for (const auto& [key, value] : c.paths) {
        check(std::find(path_keys().begin(), path_keys().end(), key) != path_keys().end(),
              "unknown key '" + key + "' in paths");
    }
}

RunConfig from_json(const Json& j) {
    reject_unknown(j, {"thresholds", "cost_model", "blend", "fairness", "feature_categories", "form111", "paths"},
                   "config");
    RunConfig c;
    if (j.contains("thresholds")) {
        const auto& t = j.at("thresholds");
        std::set<std::string> known;
        for (const auto& f : threshold_fields()) {
            known.insert(f.name);
        }
        reject_unknown(t, known, "thresholds");
        for (const auto& f : threshold_fields()) {
            if (t.contains(f.name)) {
                const double v = number_at(t, f.name, "thresholds");
                check(!f.integral || (t.at(f.name).is_number_integer()), std::string("thresholds.") + f.name +
                                                                              " must be an integer");
                f.set(c, v);
            }
        }
    }
    if (j.contains("cost_model")) {
        const auto& cm = j.at("cost_model");
        reject_unknown(cm, {"mean_fraud_amount", "investigation_cost", "total_fraud"}, "cost_model");
        if (cm.contains("mean_fraud_amount")) {
            c.cost.mean_fraud_amount = money_at(cm, "mean_fraud_amount");
        }
        if (cm.contains("investigation_cost")) {
            c.cost.investigation_cost = money_at(cm, "investigation_cost");
        }
        if (cm.contains("total_fraud")) {
            check(cm.at("total_fraud").is_number_integer(), "cost_model.total_fraud must be an integer");
            c.total_fraud = cm.at("total_fraud").get<std::int64_t>();
        }
    }
    if (j.contains("blend")) {
        const auto& b = j.at("blend");
        reject_unknown(b, {"alpha", "alpha_grid", "tau_grid"}, "blend");
        if (b.contains("alpha")) {
            c.blend.alpha = number_at(b, "alpha", "blend");
        }
        if (b.contains("alpha_grid")) {
            c.blend.grid = grid_at(b, "alpha_grid");
        }
        if (b.contains("tau_grid")) {
            c.tau_grid = grid_at(b, "tau_grid");
        }
    }
    if (j.contains("fairness")) {
        const auto& f = j.at("fairness");
        reject_unknown(f, {"m_comparisons", "top_k"}, "fairness");
        for (const char* key : {"m_comparisons", "top_k"}) {
            if (f.contains(key)) {
                check(f.at(key).is_number_integer(), std::string("fairness.") + key + " must be an integer");
            }
        }
        if (f.contains("m_comparisons")) {
            c.m_comparisons = f.at("m_comparisons").get<int>();
        }
        if (f.contains("top_k")) {
            c.top_k = f.at("top_k").get<int>();
        }
    }
    if (j.contains("feature_categories")) {
        const auto& fc = j.at("feature_categories");
        check(fc.is_object(), "feature_categories must be an object of pattern -> category");
        CategoryMap map;
        for (const auto& [pattern, category] : fc.items()) {
            check(category.is_string(), "feature_categories values must be strings");
            const auto cat = feature_category_from_string(category.get<std::string>());
            check(cat.has_value(), "unknown feature category '" + category.get<std::string>() + "'");
            map.add(pattern, *cat);
        }
        c.categories = std::move(map);
    }
    if (j.contains("form111")) {
        const auto& fm = j.at("form111");
        check(fm.is_object(), "form111 must be an object of category -> text");
        for (const auto& [category, text] : fm.items()) {
            const auto cat = feature_category_from_string(category);
            check(cat.has_value(), "unknown key '" + category + "' in form111");
            check(text.is_string() && !text.get<std::string>().empty(), "form111 texts must be non-empty strings");
            c.form111.set(*cat, text.get<std::string>());
        }
    }
    if (j.contains("paths")) {
        const auto& p = j.at("paths");
        std::set<std::string> known(path_keys().begin(), path_keys().end());
        reject_unknown(p, known, "paths");
        for (const auto& [key, value] : p.items()) {
            check(value.is_string(), "paths." + key + " must be a string");
            c.paths[key] = value.get<std::string>();
        }
    }
    validate(c);
    return c;
}

Json to_json(const RunConfig& c) {
    Json thresholds = Json::object();
    for (const auto& f : threshold_fields()) {
        if (f.integral) {
            thresholds[f.name] = static_cast<std::int64_t>(f.get(c));
        } else {
            thresholds[f.name] = f.get(c);
        }
    }
    Json categories = Json::object();
    for (const auto& [pattern, cat] : c.categories.patterns()) {
        categories[pattern] = std::string(to_string(cat));
    }
    Json form = Json::object();
    for (const auto& [cat, text] : c.form111.entries()) {
        form[std::string(to_string(cat))] = text;
    }
    return Json{{"thresholds", thresholds},
                {"cost_model",
                 {{"mean_fraud_amount", c.cost.mean_fraud_amount.to_string()},
                  {"investigation_cost", c.cost.investigation_cost.to_string()},
                  {"total_fraud", c.total_fraud}}},
                {"blend", {{"alpha", c.blend.alpha}, {"alpha_grid", c.blend.grid}, {"tau_grid", c.tau_grid}}},
                {"fairness", {{"m_comparisons", c.m_comparisons}, {"top_k", c.top_k}}},
                {"feature_categories", categories},
                {"form111", form},
                {"paths", c.paths}};
}

RunConfig load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorKind::Io, "cannot open config " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::exception& e) {
        fail(ErrorKind::ConfigInvalid, "config " + path.string() + " is not valid JSON: " + e.what());
    }
    try {
        return from_json(j);
    } catch (const Json::exception& e) {
        fail(ErrorKind::ConfigInvalid, std::string("config field has the wrong type: ") + e.what());
    }
}

std::vector<ThresholdRow> threshold_table(const RunConfig& c) {
    const RunConfig reference;
    std::vector<ThresholdRow> rows;
    for (const auto& f : threshold_fields()) {
        rows.push_back({f.name, f.get(reference), f.get(c)});
    }
    rows.push_back({"m_comparisons", static_cast<double>(reference.m_comparisons), static_cast<double>(c.m_comparisons)});
    rows.push_back({"top_k", static_cast<double>(reference.top_k), static_cast<double>(c.top_k)});
    return rows;
}

} // namespace rdtfg::config
