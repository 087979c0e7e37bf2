#ifndef RDTFG_FAIRNESS_HPP
#define RDTFG_FAIRNESS_HPP

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rdtfg/metrics.hpp"
#include "rdtfg/shap.hpp"

namespace rdtfg {

enum class ProxyCategory { WhiteNh = 0, BlackNh = 1, Hispanic = 2, Asian = 3 };

inline constexpr std::array<ProxyCategory, 4> kProxyCategories{ProxyCategory::WhiteNh, ProxyCategory::BlackNh,
                                                               ProxyCategory::Hispanic, ProxyCategory::Asian};

std::string_view to_string(ProxyCategory category) noexcept;
std::optional<ProxyCategory> proxy_category_from_string(std::string_view text) noexcept;

/// Precomputed demographic proxy scores for one transaction. The four scores
/// are independent and need not sum to one.
struct ProxyProfile {
    std::string transaction_id;
    std::array<double, 4> proxy_probabilities{};

    double probability(ProxyCategory c) const { return proxy_probabilities[static_cast<std::size_t>(c)]; }
    bool operator==(const ProxyProfile&) const = default;
};

enum class Verdict { Clear = 0, Watch = 1, Violation = 2 };

std::string_view to_string(Verdict verdict) noexcept;

struct FairnessFinding {
    std::string feature;
    ProxyCategory category = ProxyCategory::WhiteNh;
    double feature_mean_abs_shap = 0.0;
    KruskalWallisResult kw;
    Verdict verdict = Verdict::Clear;
};

struct FairnessBands {
    double clear_above = 0.12;     // p_adj > clear_above is clear
    double violation_below = 0.05; // p_adj < violation_below is a violation
};

struct ScreenResult {
    std::vector<FairnessFinding> findings;
    Verdict overall = Verdict::Clear;
    std::vector<std::string> missing_shap; // profiled transactions with no SHAP row, excluded
    int top_k = 10;
    int m_comparisons = 30;
};

namespace fairness {

/// clear for p > 0.12, watch for [0.05, 0.12], violation below 0.05.
Verdict classify(double p_adjusted, const FairnessBands& bands = {});

/// Transaction-count quartiles of the category's proxy score, ties by
/// transaction id; remainder goes to the lowest quartiles.
std::array<std::vector<std::string>, 4> quartile_bins(std::span<const ProxyProfile> profiles, ProxyCategory category);

/// Kruskal-Wallis across proxy quartiles of the raw per-transaction SHAP
/// values, for each of the top_k features (by mean |phi|) and each category.
ScreenResult screen(const ShapPanel& panel, std::span<const ProxyProfile> profiles, int top_k = 10,
                    int m_comparisons = 30, const FairnessBands& bands = {});

} // namespace fairness
} // namespace rdtfg

#endif
