#include "rdtfg/report.hpp"

#include <set>
#include <sstream>

#include "rdtfg/pipeline.hpp"

namespace rdtfg::report {

namespace {

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const Json& j) {
    if (j.is_string()) {
        return j.get<std::string>();
    }
    if (j.is_null()) {
        return "n/a";
    }
    return j.dump();
}

std::string cell_text(const Json& j) {
    std::string s = is_scalar(j) ? scalar_text(j) : j.dump();
    std::string out;
    for (char c : s) {
        if (c == '|') {
            out += "\\|";
        } else if (c == '\n') {
            out += ' ';
        } else {
            out += c;
        }
    }
    return out;
}

bool flat_object(const Json& j) {
    if (!j.is_object()) {
        return false;
    }
    for (const auto& [k, v] : j.items()) {
        if (v.is_object() && !std::all_of(v.begin(), v.end(), is_scalar)) {
            return false;
        }
        if (v.is_array() && !std::all_of(v.begin(), v.end(), is_scalar)) {
            return false;
        }
    }
    return true;
}

// Column order: keys in order of first appearance across rows.
std::vector<std::string> columns_of(const Json& rows) {
    std::vector<std::string> cols;
    std::set<std::string> seen;
    for (const auto& row : rows) {
        for (const auto& [k, v] : row.items()) {
            if (seen.insert(k).second) {
                cols.push_back(k);
            }
        }
    }
    return cols;
}

void render(std::ostringstream& out, const std::string& key, const Json& j, int depth);

void render_table(std::ostringstream& out, const Json& rows) {
    const auto cols = columns_of(rows);
    out << '|';
    for (const auto& c : cols) {
        out << ' ' << c << " |";
    }
    out << "\n|";
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out << " --- |";
    }
    out << '\n';
    for (const auto& row : rows) {
        out << '|';
        for (const auto& c : cols) {
            out << ' ' << (row.contains(c) ? cell_text(row.at(c)) : std::string()) << " |";
        }
        out << '\n';
    }
    out << '\n';
}

void render_object(std::ostringstream& out, const Json& j, int depth) {
    bool listed = false;
    for (const auto& [k, v] : j.items()) {
        if (is_scalar(v)) {
            out << "- **" << k << "**: " << scalar_text(v) << '\n';
            listed = true;
        } else if (v.is_array() && std::all_of(v.begin(), v.end(), is_scalar)) {
            out << "- **" << k << "**: ";
            if (v.empty()) {
                out << "none";
            }
            for (std::size_t i = 0; i < v.size(); ++i) {
                out << (i ? ", " : "") << scalar_text(v[i]);
            }
            out << '\n';
            listed = true;
        }
    }
    if (listed) {
        out << '\n';
    }
    for (const auto& [k, v] : j.items()) {
        if (v.is_object() || (v.is_array() && !std::all_of(v.begin(), v.end(), is_scalar))) {
            render(out, k, v, depth + 1);
        }
    }
}

void render(std::ostringstream& out, const std::string& key, const Json& j, int depth) {
    const std::string hashes(static_cast<std::size_t>(std::min(depth, 6)), '#');
    out << hashes << ' ' << key << "\n\n";
    if (j.is_object()) {
        render_object(out, j, depth);
        return;
    }
    if (j.is_array() && !j.empty() && std::all_of(j.begin(), j.end(), flat_object)) {
        render_table(out, j);
        return;
    }
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (is_scalar(j[i])) {
                out << "- " << scalar_text(j[i]) << '\n';
            } else {
                render(out, key + " " + std::to_string(i + 1), j[i], depth + 1);
            }
        }
        out << '\n';
        return;
    }
    out << scalar_text(j) << "\n\n";
}

Json month_row(const RfiRecord& r) {
    Json row{{"month", r.month.to_string()}, {"rfi", r.rfi}, {"status", std::string(to_string(r.status))}};
    for (auto d : kDimensions) {
        row[std::string(to_string(d))] = std::string(to_string(r.scores[static_cast<std::size_t>(d)].color));
    }
    row["monthly_auc"] = r.monthly_auc ? Json(*r.monthly_auc) : Json(nullptr);
    row["retraining_flag"] = r.retraining_flag;
    row["escalate_to_cro"] = r.escalate_to_cro;
    return row;
}

} // namespace

std::string render_markdown(const std::string& title, const Json& doc) {
    std::ostringstream out;
    out << "# " << title << "\n\n";
    if (doc.is_object()) {
        render_object(out, doc, 1);
    } else {
        render(out, "result", doc, 2);
    }
    return out.str();
}

Json threshold_json(const RunConfig& config) {
    Json rows = Json::array();
    for (const auto& r : config::threshold_table(config)) {
        rows.push_back({{"threshold", r.name}, {"reference", r.reference}, {"configured", r.configured},
                        {"recalibrated", r.reference != r.configured}});
    }
    return rows;
}

Json examiner_report(std::span<const AuditEntry> entries, std::optional<Month> from, std::optional<Month> to,
                     const RunConfig& fallback_config) {
    RunConfig config = fallback_config;
    for (const auto& e : entries) {
        if (e.kind == AuditKind::ConfigChange) {
            config = config::from_json(e.payload);
        }
    }
    const auto history = pipeline::rfi_history(entries);
    Json months = Json::array();
    Json triggers = Json::array();
    Json detail = Json::array();
    int red = 0;
    int retrain = 0;
    double min_rfi = 1.0;
    for (const auto& r : history) {
        if ((from && r.month < *from) || (to && *to < r.month)) {
            continue;
        }
        months.push_back(month_row(r));
        for (const auto& t : r.triggers) {
            Json tj = t;
            tj["month"] = r.month.to_string();
            triggers.push_back(tj);
        }
        Json scores = Json::array();
        for (const auto& s : r.scores) {
            scores.push_back({{"month", r.month.to_string()},
                              {"dimension", std::string(to_string(s.dimension))},
                              {"color", std::string(to_string(s.color))},
                              {"numeric", s.numeric()},
                              {"inputs", Json(s).at("inputs")},
                              {"notes", s.notes}});
        }
        detail.push_back({{"month", r.month.to_string()}, {"scores", scores}});
        red += r.rfi == 0.0 ? 1 : 0;
        retrain += r.retraining_flag ? 1 : 0;
        min_rfi = std::min(min_rfi, r.rfi);
    }
    Json doc;
    doc["range"] = {{"from", from ? Json(from->to_string()) : Json(nullptr)},
                    {"to", to ? Json(to->to_string()) : Json(nullptr)}};
    doc["audit"] = {{"entries", entries.size()},
                    {"head_hash", entries.empty() ? audit::kGenesisHash : entries.back().entry_hash}};
    doc["summary"] = {{"months", months.size()},
                      {"min_rfi", months.empty() ? Json(nullptr) : Json(min_rfi)},
                      {"remediation_required_months", red},
                      {"retraining_months", retrain}};
    doc["months"] = months;
    doc["triggers"] = triggers;
    doc["score_detail"] = detail;
    doc["thresholds"] = threshold_json(config);
    doc["footnotes"] = Json::array(
        {"OCC performance turns Red when the worst pairwise DeLong p-value exceeds delong_p_max. A reading in which "
         "any comparison that is not significant at the conventional level is Red would be stricter; the numeric "
         "rule is the one applied.",
         "Thresholds are reference defaults for card-not-present transaction fraud and are meant to be recalibrated "
         "per portfolio; the table lists the reference and configured value of each."});
    return doc;
}

} // namespace rdtfg::report
