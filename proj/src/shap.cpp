#include "rdtfg/shap.hpp"

#include <algorithm>
#include <numeric>

namespace rdtfg {

std::unordered_map<std::string, Eigen::Index> ShapPanel::row_index() const {
    std::unordered_map<std::string, Eigen::Index> index;
    index.reserve(transaction_ids.size());
    for (std::size_t i = 0; i < transaction_ids.size(); ++i) {
        index.emplace(transaction_ids[i], static_cast<Eigen::Index>(i));
    }
    return index;
}

ImportanceVector ShapPanel::global_importance() const {
    require(values.rows() > 0, ErrorKind::EmptyInput, "global_importance: empty SHAP panel");
    ImportanceVector importance;
    importance.features = features;
    importance.values = values.cwiseAbs().colwise().mean().transpose();
    return importance;
}

std::vector<Eigen::Index> ShapPanel::ranked_features() const {
    const auto importance = global_importance();
    std::vector<Eigen::Index> order(features.size());
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (importance.values(a) != importance.values(b)) {
            return importance.values(a) > importance.values(b);
        }
        return features[static_cast<std::size_t>(a)] < features[static_cast<std::size_t>(b)];
    });
    return order;
}

} // namespace rdtfg
