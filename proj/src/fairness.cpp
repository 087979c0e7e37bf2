#include "rdtfg/fairness.hpp"

#include <algorithm>
#include <numeric>

namespace rdtfg {

std::string_view to_string(ProxyCategory category) noexcept {
    switch (category) {
    case ProxyCategory::WhiteNh: return "white_nh";
    case ProxyCategory::BlackNh: return "black_nh";
    case ProxyCategory::Hispanic: return "hispanic";
    case ProxyCategory::Asian: return "asian";
    }
    return "unknown";
}

std::optional<ProxyCategory> proxy_category_from_string(std::string_view text) noexcept {
    for (auto c : kProxyCategories) {
        if (to_string(c) == text) {
            return c;
        }
    }
    return std::nullopt;
}

std::string_view to_string(Verdict verdict) noexcept {
    switch (verdict) {
    case Verdict::Clear: return "clear";
    case Verdict::Watch: return "watch";
    case Verdict::Violation: return "violation";
    }
    return "unknown";
}

namespace fairness {

Verdict classify(double p_adjusted, const FairnessBands& bands) {
    if (p_adjusted < bands.violation_below) {
        return Verdict::Violation;
    }
    if (p_adjusted > bands.clear_above) {
        return Verdict::Clear;
    }
    return Verdict::Watch;
}

std::array<std::vector<std::string>, 4> quartile_bins(std::span<const ProxyProfile> profiles, ProxyCategory category) {
    require(profiles.size() >= 4, ErrorKind::InsufficientProfiles, "quartile_bins: need at least four profiles");
    std::vector<const ProxyProfile*> sorted;
    sorted.reserve(profiles.size());
    for (const auto& p : profiles) {
        sorted.push_back(&p);
    }
    std::sort(sorted.begin(), sorted.end(), [category](const ProxyProfile* a, const ProxyProfile* b) {
        const double pa = a->probability(category);
        const double pb = b->probability(category);
        if (pa != pb) {
            return pa < pb;
        }
        return a->transaction_id < b->transaction_id;
    });

    std::array<std::vector<std::string>, 4> bins;
    const std::size_t base = sorted.size() / 4;
    const std::size_t remainder = sorted.size() % 4;
    std::size_t pos = 0;
    for (std::size_t q = 0; q < 4; ++q) {
        const std::size_t size = base + (q < remainder ? 1 : 0);
        bins[q].reserve(size);
        for (std::size_t k = 0; k < size; ++k) {
            bins[q].push_back(sorted[pos++]->transaction_id);
        }
    }
    return bins;
}

ScreenResult screen(const ShapPanel& panel, std::span<const ProxyProfile> profiles, int top_k, int m_comparisons,
                    const FairnessBands& bands) {
    require(top_k >= 1 && static_cast<std::size_t>(top_k) <= panel.features.size(), ErrorKind::InvalidArgument,
            "screen: top_k must be between 1 and the feature count");
    require(m_comparisons >= 1, ErrorKind::InvalidArgument, "screen: m_comparisons must be positive");

    ScreenResult result;
    result.top_k = top_k;
    result.m_comparisons = m_comparisons;

    const auto rows = panel.row_index();
    std::vector<ProxyProfile> matched;
    matched.reserve(profiles.size());
    for (const auto& p : profiles) {
        if (rows.contains(p.transaction_id)) {
            matched.push_back(p);
        } else {
            result.missing_shap.push_back(p.transaction_id);
        }
    }
    std::sort(result.missing_shap.begin(), result.missing_shap.end());

    const auto ranked = panel.ranked_features();
    const auto importance = panel.global_importance();

    for (auto category : kProxyCategories) {
        const auto bins = quartile_bins(matched, category);
        std::array<std::vector<Eigen::Index>, 4> bin_rows;
        for (std::size_t q = 0; q < 4; ++q) {
            for (const auto& id : bins[q]) {
                bin_rows[q].push_back(rows.at(id));
            }
        }
        for (int k = 0; k < top_k; ++k) {
            const Eigen::Index col = ranked[static_cast<std::size_t>(k)];
            std::vector<Eigen::VectorXd> groups;
            for (const auto& rs : bin_rows) {
                if (rs.empty()) {
                    continue;
                }
                Eigen::VectorXd g(static_cast<Eigen::Index>(rs.size()));
                for (std::size_t i = 0; i < rs.size(); ++i) {
                    g(static_cast<Eigen::Index>(i)) = panel.values(rs[i], col);
                }
                groups.push_back(std::move(g));
            }
            FairnessFinding finding;
            finding.feature = panel.features[static_cast<std::size_t>(col)];
            finding.category = category;
            finding.feature_mean_abs_shap = importance.values(col);
            finding.kw = metrics::kruskal_wallis(groups, m_comparisons);
            finding.verdict = classify(finding.kw.p_adjusted, bands);
            result.overall = std::max(result.overall, finding.verdict);
            result.findings.push_back(std::move(finding));
        }
    }
    return result;
}

} // namespace fairness
} // namespace rdtfg
