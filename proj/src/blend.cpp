#include "rdtfg/blend.hpp"

#include <set>

namespace rdtfg::blend {

BlendSearchResult alpha_search(const Eigen::VectorXd& p_a, const Eigen::VectorXd& p_b, const Eigen::VectorXi& labels,
                               const std::vector<double>& alpha_grid, const std::vector<double>& tau_grid) {
    require(p_a.size() == labels.size() && p_b.size() == labels.size(), ErrorKind::LengthMismatch,
            "alpha_search: inputs differ in length");
    require(!alpha_grid.empty() && !tau_grid.empty(), ErrorKind::InvalidArgument, "alpha_search: empty grid");
    const auto [positives, negatives] = metrics::class_counts(labels);
    require(positives > 0 && negatives > 0, ErrorKind::DegenerateLabels,
            "alpha_search: need at least one positive and one negative label");

    const std::set<double> alphas(alpha_grid.begin(), alpha_grid.end());
    const std::set<double> taus(tau_grid.begin(), tau_grid.end());
    require(alphas.size() == alpha_grid.size(), ErrorKind::InvalidArgument, "alpha_search: duplicate alpha values");

    BlendSearchResult best;
    best.f1 = -1.0;
    for (double alpha : alphas) {
        const Eigen::VectorXd blended = blend(p_a, p_b, alpha);
        for (double tau : taus) {
            const double f1 = metrics::confusion_at_threshold(blended, labels, tau).f1();
            if (f1 > best.f1) {
                best = {alpha, tau, f1};
            }
        }
    }
    return best;
}

} // namespace rdtfg::blend
