#ifndef RDTFG_SAR_HPP
#define RDTFG_SAR_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rdtfg/metrics.hpp"
#include "rdtfg/money.hpp"

namespace rdtfg {

enum class FeatureCategory { Network, Amount, Velocity, Device, Identity };

std::string_view to_string(FeatureCategory c) noexcept;
std::optional<FeatureCategory> feature_category_from_string(std::string_view text) noexcept;

/// Feature name -> category. Patterns are exact names or prefixes ending in
/// '*'; exact names win, then the longest matching prefix.
class CategoryMap {
public:
    void add(std::string pattern, FeatureCategory category);
    std::optional<FeatureCategory> lookup(std::string_view feature) const;
    const std::map<std::string, FeatureCategory>& patterns() const { return patterns_; }

    /// C*/D* network, TransactionAmt amount, M*/velocity* velocity,
    /// Device*/id_30..id_34 device, other id_* identity.
    static CategoryMap ieee_cis_defaults();

private:
    std::map<std::string, FeatureCategory> patterns_;
};

/// Category -> suspicious activity category text. Closed world: every emitted
/// code must come from this table.
class Form111Map {
public:
    void set(FeatureCategory category, std::string text);
    const std::string& at(FeatureCategory category) const;
    bool contains_text(std::string_view text) const;
    const std::map<FeatureCategory, std::string>& entries() const { return entries_; }

    static Form111Map defaults();

private:
    std::map<FeatureCategory, std::string> entries_;
};

/// Behavioural baseline for one alert. Absent fields degrade the statement.
struct AlertContext {
    std::optional<Money> amount;
    std::optional<Money> rolling_mean_7d;
    std::optional<int> count_24h;
    std::optional<double> velocity_percentile;
    std::optional<int> device_mismatch;
    std::optional<int> linked_accounts;
    std::map<std::string, double> feature_values; // raw values by feature name
};

struct AlertShap {
    std::string alert_id;
    std::vector<std::string> features;
    Eigen::VectorXd phi;
};

struct ReasonCode {
    int rank = 1;
    double shap_value = 0.0;
    std::string feature;
    FeatureCategory feature_category = FeatureCategory::Amount;
    std::string label; // "Amount anomaly"
    std::string deviation_statement;
    std::string form111_category;
    bool baseline_missing = false;
};

struct ReasonCodeSet {
    std::string alert_id;
    std::vector<ReasonCode> codes;
};

enum class Disposition { Certified, Amended, Rejected };

std::string_view to_string(Disposition d) noexcept;
std::optional<Disposition> disposition_from_string(std::string_view text) noexcept;

struct CertificationRecord {
    std::string alert_id;
    std::string analyst_id;
    std::int64_t certified_at = 0;
    Disposition disposition = Disposition::Certified;
    std::optional<std::string> amended_text;

    bool operator==(const CertificationRecord&) const = default;
};

struct CoverageStats {
    std::int64_t alerts = 0;
    std::int64_t with_three_codes = 0;
    std::int64_t certified = 0;
    double coverage = 1.0;  // vacuously 1 with no alerts
    double cert_rate = 1.0; // vacuously 1 with no alerts
};

namespace sar {

inline constexpr double kDefaultRiskTau = 0.70;

/// Ids with score >= risk_tau, by score descending then id.
std::vector<std::string> flag_alerts(std::span<const ScoredSample> samples, double risk_tau = kDefaultRiskTau);

/// Up to three codes from the largest |phi| features, one per category.
ReasonCodeSet generate_reason_codes(const AlertShap& alert, const CategoryMap& categories, const AlertContext& context,
                                    const Form111Map& form111 = Form111Map::defaults());

/// "5.2×" for (842, 162): one decimal, half-up, exact on cents.
std::string render_ratio(Money value, Money baseline);

/// Throws RowInvalid when the record breaks its invariants.
void validate(const CertificationRecord& record);

/// Latest record per alert decides; certified and amended count.
CoverageStats coverage_stats(std::span<const std::string> alerts, std::span<const ReasonCodeSet> reason_codes,
                             std::span<const CertificationRecord> certifications);

} // namespace sar
} // namespace rdtfg

#endif
