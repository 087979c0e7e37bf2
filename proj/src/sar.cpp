#include "rdtfg/sar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <unordered_map>

namespace rdtfg {

std::string_view to_string(FeatureCategory c) noexcept {
    switch (c) {
    case FeatureCategory::Network: return "network";
    case FeatureCategory::Amount: return "amount";
    case FeatureCategory::Velocity: return "velocity";
    case FeatureCategory::Device: return "device";
    case FeatureCategory::Identity: return "identity";
    }
    return "unknown";
}

std::optional<FeatureCategory> feature_category_from_string(std::string_view text) noexcept {
    for (auto c : {FeatureCategory::Network, FeatureCategory::Amount, FeatureCategory::Velocity, FeatureCategory::Device,
                   FeatureCategory::Identity}) {
        if (to_string(c) == text) {
            return c;
        }
    }
    return std::nullopt;
}

std::string_view to_string(Disposition d) noexcept {
    switch (d) {
    case Disposition::Certified: return "certified";
    case Disposition::Amended: return "amended";
    case Disposition::Rejected: return "rejected";
    }
    return "unknown";
}

std::optional<Disposition> disposition_from_string(std::string_view text) noexcept {
    for (auto d : {Disposition::Certified, Disposition::Amended, Disposition::Rejected}) {
        if (to_string(d) == text) {
            return d;
        }
    }
    return std::nullopt;
}

void CategoryMap::add(std::string pattern, FeatureCategory category) {
    require(!pattern.empty() && pattern != "*", ErrorKind::ConfigInvalid, "CategoryMap: empty pattern");
    patterns_[std::move(pattern)] = category;
}

std::optional<FeatureCategory> CategoryMap::lookup(std::string_view feature) const {
    if (const auto it = patterns_.find(std::string(feature)); it != patterns_.end()) {
        return it->second;
    }
    std::optional<FeatureCategory> best;
    std::size_t best_len = 0;
    for (const auto& [pattern, category] : patterns_) {
        if (pattern.back() != '*') {
            continue;
        }
        const std::string_view prefix(pattern.data(), pattern.size() - 1);
        if (feature.starts_with(prefix) && prefix.size() >= best_len) {
            best = category;
            best_len = prefix.size();
        }
    }
    return best;
}

CategoryMap CategoryMap::ieee_cis_defaults() {
    CategoryMap map;
    map.add("C*", FeatureCategory::Network);
    map.add("D*", FeatureCategory::Network);
    map.add("TransactionAmt", FeatureCategory::Amount);
    map.add("M*", FeatureCategory::Velocity);
    map.add("velocity*", FeatureCategory::Velocity);
    map.add("Device*", FeatureCategory::Device);
    for (const char* id : {"id_30", "id_31", "id_32", "id_33", "id_34"}) {
        map.add(id, FeatureCategory::Device);
    }
    map.add("id_*", FeatureCategory::Identity);
    return map;
}

void Form111Map::set(FeatureCategory category, std::string text) {
    require(!text.empty(), ErrorKind::ConfigInvalid, "Form111Map: empty category text");
    entries_[category] = std::move(text);
}

const std::string& Form111Map::at(FeatureCategory category) const {
    const auto it = entries_.find(category);
    require(it != entries_.end(), ErrorKind::UnmappedCategory,
            "Form111Map: no suspicious activity category for " + std::string(to_string(category)));
    return it->second;
}

bool Form111Map::contains_text(std::string_view text) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.second == text; });
}

Form111Map Form111Map::defaults() {
    Form111Map map;
    map.set(FeatureCategory::Amount, "Structuring/money laundering — amount inconsistent with known business");
    map.set(FeatureCategory::Device, "Identity theft — account takeover indicator");
    map.set(FeatureCategory::Identity, "Identity theft — account takeover indicator");
    map.set(FeatureCategory::Velocity, "Rapid movement of funds — velocity anomaly");
    map.set(FeatureCategory::Network, "Other suspicious activity — linked-account network anomaly");
    return map;
}

namespace sar {

namespace {

std::string category_label(FeatureCategory c) {
    switch (c) {
    case FeatureCategory::Network: return "Network anomaly";
    case FeatureCategory::Amount: return "Amount anomaly";
    case FeatureCategory::Velocity: return "Velocity anomaly";
    case FeatureCategory::Device: return "Device anomaly";
    case FeatureCategory::Identity: return "Identity anomaly";
    }
    return "Anomaly";
}

std::string format_number(double v) {
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        return std::to_string(static_cast<long long>(v));
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string ordinal(double percentile) {
    if (percentile != std::floor(percentile)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1fth", percentile);
        return buf;
    }
    const auto n = static_cast<long long>(percentile);
    const char* suffix = "th";
    if (n % 100 < 11 || n % 100 > 13) {
        switch (n % 10) {
        case 1: suffix = "st"; break;
        case 2: suffix = "nd"; break;
        case 3: suffix = "rd"; break;
        default: break;
        }
    }
    return std::to_string(n) + suffix;
}

std::string raw_fallback(const std::string& feature, const AlertContext& ctx) {
    const auto it = ctx.feature_values.find(feature);
    const std::string value = it == ctx.feature_values.end() ? "n/a" : format_number(it->second);
    return feature + " = " + value + " (behavioural baseline unavailable).";
}

// Returns the statement and whether the baseline was missing.
std::pair<std::string, bool> render_statement(FeatureCategory category, const std::string& feature,
                                              const AlertContext& ctx) {
    switch (category) {
    case FeatureCategory::Amount:
        if (ctx.amount && ctx.rolling_mean_7d && ctx.rolling_mean_7d->cents() > 0 && ctx.amount->cents() >= 0) {
            return {feature + " = " + ctx.amount->to_display(true) + " is " + render_ratio(*ctx.amount, *ctx.rolling_mean_7d) +
                        " the account's 7-day rolling mean of " + ctx.rolling_mean_7d->to_display(true) + ".",
                    false};
        }
        break;
    case FeatureCategory::Velocity:
        if (ctx.count_24h && ctx.velocity_percentile) {
            return {"Transaction count in prior 24 hours = " + std::to_string(*ctx.count_24h) + "; " +
                        ordinal(*ctx.velocity_percentile) + " percentile for this account type.",
                    false};
        }
        break;
    case FeatureCategory::Device:
        if (ctx.device_mismatch) {
            if (*ctx.device_mismatch != 0) {
                return {"Device fingerprint does not match prior transaction (" + feature + " = " +
                            std::to_string(*ctx.device_mismatch) + ").",
                        false};
            }
            return {"Device fingerprint matches prior transaction (" + feature + " = 0).", false};
        }
        break;
    case FeatureCategory::Identity:
        if (ctx.device_mismatch) {
            if (*ctx.device_mismatch != 0) {
                return {"Identity attributes do not match the account profile (" + feature + " = " +
                            std::to_string(*ctx.device_mismatch) + ").",
                        false};
            }
            return {"Identity attributes match the account profile (" + feature + " = 0).", false};
        }
        break;
    case FeatureCategory::Network:
        if (ctx.linked_accounts) {
            return {"Account linked to " + std::to_string(*ctx.linked_accounts) +
                        " other accounts through shared attributes (" + feature + ").",
                    false};
        }
        break;
    }
    return {raw_fallback(feature, ctx), true};
}

} // namespace

std::vector<std::string> flag_alerts(std::span<const ScoredSample> samples, double risk_tau) {
    require(risk_tau >= 0.0 && risk_tau <= 1.0, ErrorKind::InvalidArgument, "flag_alerts: risk_tau outside [0,1]");
    std::vector<const ScoredSample*> flagged;
    for (const auto& s : samples) {
        if (s.score >= risk_tau) {
            flagged.push_back(&s);
        }
    }
    std::sort(flagged.begin(), flagged.end(), [](const ScoredSample* a, const ScoredSample* b) {
        if (a->score != b->score) {
            return a->score > b->score;
        }
        return a->transaction_id < b->transaction_id;
    });
    std::vector<std::string> ids;
    ids.reserve(flagged.size());
    for (const auto* s : flagged) {
        ids.push_back(s->transaction_id);
    }
    return ids;
}

std::string render_ratio(Money value, Money baseline) {
    const auto tenths = ratio_tenths(value, baseline);
    return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "×";
}

ReasonCodeSet generate_reason_codes(const AlertShap& alert, const CategoryMap& categories, const AlertContext& context,
                                    const Form111Map& form111) {
    require(!alert.features.empty() && alert.features.size() == static_cast<std::size_t>(alert.phi.size()),
            ErrorKind::InvalidArgument, "generate_reason_codes: SHAP vector empty or misaligned");

    std::vector<FeatureCategory> category_of;
    category_of.reserve(alert.features.size());
    for (const auto& f : alert.features) {
        const auto c = categories.lookup(f);
        require(c.has_value(), ErrorKind::UnmappedFeature, "generate_reason_codes: feature '" + f + "' has no category");
        category_of.push_back(*c);
    }

    std::vector<std::size_t> order(alert.features.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double pa = std::fabs(alert.phi(static_cast<Eigen::Index>(a)));
        const double pb = std::fabs(alert.phi(static_cast<Eigen::Index>(b)));
        if (pa != pb) {
            return pa > pb;
        }
        return alert.features[a] < alert.features[b];
    });

    ReasonCodeSet set;
    set.alert_id = alert.alert_id;
    std::set<FeatureCategory> used;
    for (std::size_t idx : order) {
        if (set.codes.size() == 3) {
            break;
        }
        const double phi = alert.phi(static_cast<Eigen::Index>(idx));
        if (phi == 0.0) {
            break; // sorted by |phi|: nothing nonzero remains
        }
        const auto category = category_of[idx];
        if (used.contains(category)) {
            continue;
        }
        used.insert(category);
        ReasonCode code;
        code.rank = static_cast<int>(set.codes.size()) + 1;
        code.shap_value = phi;
        code.feature = alert.features[idx];
        code.feature_category = category;
        code.label = category_label(category);
        std::tie(code.deviation_statement, code.baseline_missing) = render_statement(category, code.feature, context);
        code.form111_category = form111.at(category);
        set.codes.push_back(std::move(code));
    }
    return set;
}

void validate(const CertificationRecord& record) {
    require(!record.alert_id.empty(), ErrorKind::RowInvalid, "certification: empty alert_id");
    if (record.disposition != Disposition::Rejected) {
        require(!record.analyst_id.empty(), ErrorKind::RowInvalid,
                "certification: certified/amended record needs an analyst_id");
    }
    if (record.disposition == Disposition::Amended) {
        require(record.amended_text.has_value() && !record.amended_text->empty(), ErrorKind::RowInvalid,
                "certification: amended record needs amended_text");
    }
}

CoverageStats coverage_stats(std::span<const std::string> alerts, std::span<const ReasonCodeSet> reason_codes,
                             std::span<const CertificationRecord> certifications) {
    CoverageStats stats;
    stats.alerts = static_cast<std::int64_t>(alerts.size());
    if (alerts.empty()) {
        return stats;
    }

    std::unordered_map<std::string, std::size_t> code_counts;
    for (const auto& set : reason_codes) {
        code_counts[set.alert_id] = set.codes.size();
    }
    // Latest record per alert; later entries win ties on certified_at.
    std::unordered_map<std::string, const CertificationRecord*> latest;
    for (const auto& rec : certifications) {
        auto& slot = latest[rec.alert_id];
        if (slot == nullptr || rec.certified_at >= slot->certified_at) {
            slot = &rec;
        }
    }

    for (const auto& id : alerts) {
        if (const auto it = code_counts.find(id); it != code_counts.end() && it->second >= 3) {
            ++stats.with_three_codes;
        }
        if (const auto it = latest.find(id); it != latest.end() && it->second->disposition != Disposition::Rejected) {
            ++stats.certified;
        }
    }
    stats.coverage = static_cast<double>(stats.with_three_codes) / static_cast<double>(stats.alerts);
    stats.cert_rate = static_cast<double>(stats.certified) / static_cast<double>(stats.alerts);
    return stats;
}

} // namespace sar
} // namespace rdtfg
