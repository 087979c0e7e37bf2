#ifndef RDTFG_SHAP_HPP
#define RDTFG_SHAP_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "rdtfg/metrics.hpp"

namespace rdtfg {

/// Per-transaction feature attributions: one row per transaction, one column
/// per feature.
struct ShapPanel {
    std::vector<std::string> transaction_ids;
    std::vector<std::string> features;
    Eigen::MatrixXd values;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    std::unordered_map<std::string, Eigen::Index> row_index() const;

    /// Mean |phi| per feature.
    ImportanceVector global_importance() const;

    /// Feature column indices by descending mean |phi|, ties by feature name.
    std::vector<Eigen::Index> ranked_features() const;

    bool operator==(const ShapPanel& other) const {
        return transaction_ids == other.transaction_ids && features == other.features && values == other.values;
    }
};

} // namespace rdtfg

#endif
