#ifndef RDTFG_CONFIG_HPP
#define RDTFG_CONFIG_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rdtfg/blend.hpp"
#include "rdtfg/economics.hpp"
#include "rdtfg/sar.hpp"
#include "rdtfg/scoring.hpp"
#include "rdtfg/serialize.hpp"

namespace rdtfg {

struct RunConfig {
    ScoringThresholds thresholds;
    double risk_tau = 0.70;
    double split_fraction = 0.75;
    double cross_dataset_floor = 0.97;
    CostModel cost;
    std::int64_t total_fraud = economics::kReferenceTotalFraud;
    BlendConfig blend;
    std::vector<double> tau_grid = metrics::default_tau_grid();
    int m_comparisons = 30;
    int top_k = 10;
    CategoryMap categories = CategoryMap::ieee_cis_defaults();
    Form111Map form111 = Form111Map::defaults();
    std::map<std::string, std::string> paths; // predictions, shap, proxies, certs, audit_dir, ...
};

namespace config {

/// Keys accepted under "paths".
const std::vector<std::string>& path_keys();

/// Throws ConfigInvalid on unknown keys, wrong types or out-of-range values.
RunConfig from_json(const Json& j);
Json to_json(const RunConfig& c);
RunConfig load(const std::filesystem::path& path);

/// Range and ordering checks; throws ConfigInvalid.
void validate(const RunConfig& c);

/// Flat list of (name, default, configured) for every numeric threshold.
struct ThresholdRow {
    std::string name;
    double reference = 0.0;
    double configured = 0.0;
};
std::vector<ThresholdRow> threshold_table(const RunConfig& c);

} // namespace config
} // namespace rdtfg

#endif
