#include "rdtfg/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_set>

#include "rdtfg/serialize.hpp"

namespace rdtfg::ingest {

namespace {

// RFC 4180 style: fields may be double-quoted, "" escapes a quote.
std::optional<std::vector<std::string>> split_csv(std::string_view line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            if (!field.empty() || was_quoted) {
                return std::nullopt;
            }
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else {
            if (was_quoted) {
                return std::nullopt;
            }
            field += c;
        }
    }
    if (quoted) {
        return std::nullopt;
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string quote_csv(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
    Int v{};
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc{} || ptr != end) {
        return std::nullopt;
    }
    return v;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t") == std::string::npos; }

// Reads the header, then calls row(fields, line_no) for each non-blank line.
// row returns an error string to reject the line.
template <typename Row>
std::size_t for_each_row(std::istream& in, const std::function<void(const std::vector<std::string>&)>& header,
                         std::vector<RowReject>& rejects, Row row) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (!have_header) {
            if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
                line.erase(0, 3);
            }
            const auto fields = split_csv(line);
            require(fields.has_value(), ErrorKind::SchemaMismatch, "malformed header line");
            header(*fields);
            have_header = true;
            continue;
        }
        if (blank(line)) {
            continue;
        }
        ++rows;
        const auto fields = split_csv(line);
        if (!fields) {
            rejects.push_back({line_no, "malformed CSV quoting"});
            continue;
        }
        if (auto error = row(*fields); !error.empty()) {
            rejects.push_back({line_no, std::move(error)});
        }
    }
    require(have_header, ErrorKind::SchemaMismatch, "missing header line");
    return rows;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorKind::Io, "cannot open " + path.string());
    return in;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            out += sep;
        }
        out += parts[i];
    }
    return out;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    require(ec == std::errc{}, ErrorKind::InvalidArgument, "format_double: conversion failed");
    return std::string(buf, ptr);
}

Ingested<std::vector<ScoredSample>> parse_predictions(std::istream& in) {
    Ingested<std::vector<ScoredSample>> out;
    bool has_b = false;
    std::unordered_set<std::string> seen;
    out.input_rows = for_each_row(
        in,
        [&](const std::vector<std::string>& h) {
            const std::vector<std::string> plain{"transaction_id", "timestamp", "score", "label", "amount"};
            const std::vector<std::string> paired{"transaction_id", "timestamp", "score", "score_b", "label", "amount"};
            if (h == paired) {
                has_b = true;
            } else {
                require(h == plain, ErrorKind::SchemaMismatch,
                        "predictions header must be transaction_id,timestamp,score[,score_b],label,amount; got " +
                            join(h, ","));
            }
        },
        out.rejects,
        [&](const std::vector<std::string>& f) -> std::string {
            const std::size_t expected = has_b ? 6 : 5;
            if (f.size() != expected) {
                return "expected " + std::to_string(expected) + " fields, got " + std::to_string(f.size());
            }
            ScoredSample s;
            s.transaction_id = f[0];
            if (s.transaction_id.empty()) {
                return "empty transaction_id";
            }
            const auto ts = parse_int<std::int64_t>(f[1]);
            if (!ts) {
                return "malformed timestamp '" + f[1] + "'";
            }
            s.timestamp = *ts;
            const auto score = parse_double(f[2]);
            if (!score || *score < 0.0 || *score > 1.0) {
                return "score outside [0,1]: '" + f[2] + "'";
            }
            s.score = *score;
            std::size_t next = 3;
            if (has_b && f[3].empty()) {
                next = 4; // this row has no second model score
            } else if (has_b) {
                const auto b = parse_double(f[3]);
                if (!b || *b < 0.0 || *b > 1.0) {
                    return "score_b outside [0,1]: '" + f[3] + "'";
                }
                s.score_b = *b;
                next = 4;
            }
            if (f[next] != "0" && f[next] != "1") {
                return "label must be 0 or 1: '" + f[next] + "'";
            }
            s.label = f[next] == "1" ? 1 : 0;
            const auto amount = Money::parse(f[next + 1]);
            if (!amount || amount->cents() < 0) {
                return "amount must be a non-negative 2-place decimal: '" + f[next + 1] + "'";
            }
            s.amount = *amount;
            if (!seen.insert(s.transaction_id).second) {
                return "duplicate transaction_id '" + s.transaction_id + "'";
            }
            out.records.push_back(std::move(s));
            return {};
        });
    return out;
}

Ingested<ShapPanel> parse_shap(std::istream& in) {
    Ingested<ShapPanel> out;
    std::vector<std::vector<double>> rows;
    std::unordered_set<std::string> seen;
    out.input_rows = for_each_row(
        in,
        [&](const std::vector<std::string>& h) {
            require(h.size() >= 2 && h[0] == "transaction_id", ErrorKind::SchemaMismatch,
                    "SHAP header must be transaction_id,<feature_1>,...");
            const std::set<std::string> unique(h.begin() + 1, h.end());
            require(unique.size() == h.size() - 1 && !unique.contains(""), ErrorKind::SchemaMismatch,
                    "SHAP header has empty or duplicate feature names");
            out.records.features.assign(h.begin() + 1, h.end());
        },
        out.rejects,
        [&](const std::vector<std::string>& f) -> std::string {
            if (f.size() != out.records.features.size() + 1) {
                return "ragged row: expected " + std::to_string(out.records.features.size() + 1) + " fields, got " +
                       std::to_string(f.size());
            }
            if (f[0].empty()) {
                return "empty transaction_id";
            }
            std::vector<double> values;
            values.reserve(f.size() - 1);
            for (std::size_t i = 1; i < f.size(); ++i) {
                const auto v = parse_double(f[i]);
                if (!v) {
                    return "malformed SHAP value '" + f[i] + "' for " + out.records.features[i - 1];
                }
                values.push_back(*v);
            }
            if (!seen.insert(f[0]).second) {
                return "duplicate transaction_id '" + f[0] + "'";
            }
            out.records.transaction_ids.push_back(f[0]);
            rows.push_back(std::move(values));
            return {};
        });
    out.records.values.resize(static_cast<Eigen::Index>(rows.size()),
                              static_cast<Eigen::Index>(out.records.features.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            out.records.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return out;
}

Ingested<std::vector<ProxyProfile>> parse_proxies(std::istream& in) {
    Ingested<std::vector<ProxyProfile>> out;
    std::unordered_set<std::string> seen;
    out.input_rows = for_each_row(
        in,
        [](const std::vector<std::string>& h) {
            const std::vector<std::string> expected{"transaction_id", "p_white_nh", "p_black_nh", "p_hispanic", "p_asian"};
            require(h == expected, ErrorKind::SchemaMismatch,
                    "proxies header must be transaction_id,p_white_nh,p_black_nh,p_hispanic,p_asian");
        },
        out.rejects,
        [&](const std::vector<std::string>& f) -> std::string {
            if (f.size() != 5) {
                return "expected 5 fields, got " + std::to_string(f.size());
            }
            ProxyProfile p;
            p.transaction_id = f[0];
            if (p.transaction_id.empty()) {
                return "empty transaction_id";
            }
            for (std::size_t i = 0; i < 4; ++i) {
                const auto v = parse_double(f[i + 1]);
                if (!v || *v < 0.0 || *v > 1.0) {
                    return "proxy probability outside [0,1]: '" + f[i + 1] + "'";
                }
                p.proxy_probabilities[i] = *v;
            }
            if (!seen.insert(p.transaction_id).second) {
                return "duplicate transaction_id '" + p.transaction_id + "'";
            }
            out.records.push_back(std::move(p));
            return {};
        });
    return out;
}

Ingested<std::vector<CertificationRecord>> parse_certifications(std::istream& in) {
    Ingested<std::vector<CertificationRecord>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (blank(line)) {
            continue;
        }
        ++out.input_rows;
        try {
            const auto j = Json::parse(line);
            out.records.push_back(j.get<CertificationRecord>());
        } catch (const Error& e) {
            out.rejects.push_back({line_no, e.what()});
        } catch (const Json::exception& e) {
            out.rejects.push_back({line_no, std::string("malformed JSON: ") + e.what()});
        }
    }
    return out;
}

Ingested<std::map<std::string, AlertContext>> parse_context(std::istream& in) {
    Ingested<std::map<std::string, AlertContext>> out;
    out.input_rows = for_each_row(
        in,
        [](const std::vector<std::string>& h) {
            const std::vector<std::string> expected{"transaction_id",      "amount",          "rolling_mean_7d", "count_24h",
                                                    "velocity_percentile", "device_mismatch", "linked_accounts"};
            require(h == expected, ErrorKind::SchemaMismatch,
                    "context header must be transaction_id,amount,rolling_mean_7d,count_24h,velocity_percentile,"
                    "device_mismatch,linked_accounts");
        },
        out.rejects,
        [&](const std::vector<std::string>& f) -> std::string {
            if (f.size() != 7) {
                return "expected 7 fields, got " + std::to_string(f.size());
            }
            if (f[0].empty()) {
                return "empty transaction_id";
            }
            AlertContext ctx;
            if (!f[1].empty()) {
                ctx.amount = Money::parse(f[1]);
                if (!ctx.amount || ctx.amount->cents() < 0) {
                    return "malformed amount '" + f[1] + "'";
                }
            }
            if (!f[2].empty()) {
                ctx.rolling_mean_7d = Money::parse(f[2]);
                if (!ctx.rolling_mean_7d || ctx.rolling_mean_7d->cents() < 0) {
                    return "malformed rolling_mean_7d '" + f[2] + "'";
                }
            }
            if (!f[3].empty()) {
                ctx.count_24h = parse_int<int>(f[3]);
                if (!ctx.count_24h || *ctx.count_24h < 0) {
                    return "malformed count_24h '" + f[3] + "'";
                }
            }
            if (!f[4].empty()) {
                ctx.velocity_percentile = parse_double(f[4]);
                if (!ctx.velocity_percentile || *ctx.velocity_percentile < 0.0 || *ctx.velocity_percentile > 100.0) {
                    return "velocity_percentile outside [0,100]: '" + f[4] + "'";
                }
            }
            if (!f[5].empty()) {
                ctx.device_mismatch = parse_int<int>(f[5]);
                if (!ctx.device_mismatch || (*ctx.device_mismatch != 0 && *ctx.device_mismatch != 1)) {
                    return "device_mismatch must be 0 or 1";
                }
            }
            if (!f[6].empty()) {
                ctx.linked_accounts = parse_int<int>(f[6]);
                if (!ctx.linked_accounts || *ctx.linked_accounts < 0) {
                    return "malformed linked_accounts '" + f[6] + "'";
                }
            }
            if (!out.records.emplace(f[0], std::move(ctx)).second) {
                return "duplicate transaction_id '" + f[0] + "'";
            }
            return {};
        });
    return out;
}

Ingested<ImportanceVector> parse_importance(std::istream& in) {
    Ingested<ImportanceVector> out;
    std::vector<double> values;
    std::unordered_set<std::string> seen;
    out.input_rows = for_each_row(
        in,
        [](const std::vector<std::string>& h) {
            require(h == std::vector<std::string>{"feature", "importance"}, ErrorKind::SchemaMismatch,
                    "importance header must be feature,importance");
        },
        out.rejects,
        [&](const std::vector<std::string>& f) -> std::string {
            if (f.size() != 2) {
                return "expected 2 fields, got " + std::to_string(f.size());
            }
            const auto v = parse_double(f[1]);
            if (f[0].empty() || !v) {
                return "malformed importance row";
            }
            if (!seen.insert(f[0]).second) {
                return "duplicate feature '" + f[0] + "'";
            }
            out.records.features.push_back(f[0]);
            values.push_back(*v);
            return {};
        });
    out.records.values = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    return out;
}

Ingested<std::vector<drift::AblationInput>> parse_ablation(std::istream& in) {
    Ingested<std::vector<drift::AblationInput>> out;
    out.input_rows = for_each_row(
        in,
        [](const std::vector<std::string>& h) {
            require(h == std::vector<std::string>{"feature_group", "members", "auc_full", "auc_without"},
                    ErrorKind::SchemaMismatch, "ablation header must be feature_group,members,auc_full,auc_without");
        },
        out.rejects,
        [&](const std::vector<std::string>& f) -> std::string {
            if (f.size() != 4) {
                return "expected 4 fields, got " + std::to_string(f.size());
            }
            const auto full = parse_double(f[2]);
            const auto without = parse_double(f[3]);
            if (f[0].empty() || !full || !without || *full < 0 || *full > 1 || *without < 0 || *without > 1) {
                return "malformed ablation row";
            }
            drift::AblationInput a;
            a.group.name = f[0];
            std::stringstream members(f[1]);
            for (std::string m; std::getline(members, m, ';');) {
                if (!m.empty()) {
                    a.group.members.push_back(m);
                }
            }
            a.auc_full = *full;
            a.auc_without = *without;
            out.records.push_back(std::move(a));
            return {};
        });
    return out;
}

Ingested<std::vector<CrossDatasetEntry>> parse_cross_dataset(std::istream& in) {
    Ingested<std::vector<CrossDatasetEntry>> out;
    out.input_rows = for_each_row(
        in,
        [](const std::vector<std::string>& h) {
            require(h == std::vector<std::string>{"model", "dataset", "auc"}, ErrorKind::SchemaMismatch,
                    "cross-dataset header must be model,dataset,auc");
        },
        out.rejects,
        [&](const std::vector<std::string>& f) -> std::string {
            if (f.size() != 3) {
                return "expected 3 fields, got " + std::to_string(f.size());
            }
            const auto auc = parse_double(f[2]);
            if (f[0].empty() || f[1].empty() || !auc || *auc < 0 || *auc > 1) {
                return "malformed cross-dataset row";
            }
            out.records.push_back({f[0], f[1], *auc});
            return {};
        });
    return out;
}

Ingested<std::vector<ScoredSample>> ingest_predictions(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_predictions(in);
}

Ingested<ShapPanel> ingest_shap(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_shap(in);
}

Ingested<std::vector<ProxyProfile>> ingest_proxies(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_proxies(in);
}

Ingested<std::vector<CertificationRecord>> ingest_certifications(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_certifications(in);
}

Ingested<std::map<std::string, AlertContext>> ingest_context(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_context(in);
}

Ingested<ImportanceVector> ingest_importance(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_importance(in);
}

Ingested<std::vector<drift::AblationInput>> ingest_ablation(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_ablation(in);
}

Ingested<std::vector<CrossDatasetEntry>> ingest_cross_dataset(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_cross_dataset(in);
}

void write_predictions(std::ostream& out, const std::vector<ScoredSample>& samples) {
    const bool has_b =
        std::any_of(samples.begin(), samples.end(), [](const ScoredSample& s) { return s.score_b.has_value(); });
    out << (has_b ? "transaction_id,timestamp,score,score_b,label,amount\n" : "transaction_id,timestamp,score,label,amount\n");
    for (const auto& s : samples) {
        out << quote_csv(s.transaction_id) << ',' << s.timestamp << ',' << format_double(s.score) << ',';
        if (has_b) {
            out << (s.score_b ? format_double(*s.score_b) : std::string()) << ',';
        }
        out << s.label << ',' << s.amount.to_string() << '\n';
    }
}

void write_shap(std::ostream& out, const ShapPanel& panel) {
    out << "transaction_id";
    for (const auto& f : panel.features) {
        out << ',' << quote_csv(f);
    }
    out << '\n';
    for (Eigen::Index r = 0; r < panel.values.rows(); ++r) {
        out << quote_csv(panel.transaction_ids[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < panel.values.cols(); ++c) {
            out << ',' << format_double(panel.values(r, c));
        }
        out << '\n';
    }
}

void write_proxies(std::ostream& out, const std::vector<ProxyProfile>& profiles) {
    out << "transaction_id,p_white_nh,p_black_nh,p_hispanic,p_asian\n";
    for (const auto& p : profiles) {
        out << quote_csv(p.transaction_id);
        for (double v : p.proxy_probabilities) {
            out << ',' << format_double(v);
        }
        out << '\n';
    }
}

void write_certifications(std::ostream& out, const std::vector<CertificationRecord>& records) {
    for (const auto& r : records) {
        out << Json(r).dump() << '\n';
    }
}

void write_importance(std::ostream& out, const ImportanceVector& importance) {
    out << "feature,importance\n";
    for (std::size_t i = 0; i < importance.features.size(); ++i) {
        out << quote_csv(importance.features[i]) << ',' << format_double(importance.values(static_cast<Eigen::Index>(i)))
            << '\n';
    }
}

void write_context(std::ostream& out, const std::map<std::string, AlertContext>& context) {
    out << "transaction_id,amount,rolling_mean_7d,count_24h,velocity_percentile,device_mismatch,linked_accounts\n";
    for (const auto& [id, c] : context) {
        out << quote_csv(id) << ',';
        if (c.amount) {
            out << c.amount->to_string();
        }
        out << ',';
        if (c.rolling_mean_7d) {
            out << c.rolling_mean_7d->to_string();
        }
        out << ',';
        if (c.count_24h) {
            out << *c.count_24h;
        }
        out << ',';
        if (c.velocity_percentile) {
            out << format_double(*c.velocity_percentile);
        }
        out << ',';
        if (c.device_mismatch) {
            out << *c.device_mismatch;
        }
        out << ',';
        if (c.linked_accounts) {
            out << *c.linked_accounts;
        }
        out << '\n';
    }
}

void write_ablation(std::ostream& out, const std::vector<drift::AblationInput>& entries) {
    out << "feature_group,members,auc_full,auc_without\n";
    for (const auto& e : entries) {
        out << quote_csv(e.group.name) << ',' << quote_csv(join(e.group.members, ";")) << ','
            << format_double(e.auc_full) << ',' << format_double(e.auc_without) << '\n';
    }
}

void write_cross_dataset(std::ostream& out, const std::vector<CrossDatasetEntry>& entries) {
    out << "model,dataset,auc\n";
    for (const auto& e : entries) {
        out << quote_csv(e.model) << ',' << quote_csv(e.dataset) << ',' << format_double(e.auc) << '\n';
    }
}

void append_certification(const std::filesystem::path& path, const CertificationRecord& record) {
    sar::validate(record);
    std::ofstream out(path, std::ios::binary | std::ios::app);
    require(out.good(), ErrorKind::Io, "cannot open " + path.string() + " for append");
    out << Json(record).dump() << '\n';
    out.flush();
    require(out.good(), ErrorKind::Io, "write to " + path.string() + " failed");
}

} // namespace rdtfg::ingest
