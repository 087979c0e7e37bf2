#ifndef RDTFG_BLEND_HPP
#define RDTFG_BLEND_HPP

#include <algorithm>
#include <vector>

#include <Eigen/Dense>

#include "rdtfg/error.hpp"
#include "rdtfg/metrics.hpp"

namespace rdtfg {

struct BlendConfig {
    double alpha = 0.60; // weight on model A
    std::vector<double> grid{0.4, 0.5, 0.6, 0.7, 0.8};
};

struct BlendSearchResult {
    double best_alpha = 0.0;
    double best_tau = 0.0;
    double f1 = 0.0;
};

namespace blend {

namespace detail {

// alpha*a + (1-alpha)*b, exact at alpha in {0,1} and when a == b, and never
// outside [min(a,b), max(a,b)].
template <typename Scalar>
struct WeightedMean {
    Scalar alpha;
    Scalar operator()(Scalar a, Scalar b) const {
        if (a == b || alpha == Scalar(1)) {
            return a;
        }
        if (alpha == Scalar(0)) {
            return b;
        }
        const Scalar v = b + alpha * (a - b);
        return std::clamp(v, std::min(a, b), std::max(a, b));
    }
};

} // namespace detail

/// Elementwise blend; returns an Eigen expression.
template <typename DerivedA, typename DerivedB>
auto blend(const Eigen::MatrixBase<DerivedA>& p_a, const Eigen::MatrixBase<DerivedB>& p_b,
           typename DerivedA::Scalar alpha) {
    using Scalar = typename DerivedA::Scalar;
    require(p_a.size() == p_b.size(), ErrorKind::LengthMismatch, "blend: probability lists differ in length");
    require(alpha >= Scalar(0) && alpha <= Scalar(1), ErrorKind::InvalidArgument, "blend: alpha outside [0,1]");
    return p_a.binaryExpr(p_b, detail::WeightedMean<Scalar>{alpha});
}

/// Joint (alpha, tau) grid search for maximal F1; ties go to the smaller
/// alpha, then the smaller tau.
BlendSearchResult alpha_search(const Eigen::VectorXd& p_a, const Eigen::VectorXd& p_b, const Eigen::VectorXi& labels,
                               const std::vector<double>& alpha_grid = BlendConfig{}.grid,
                               const std::vector<double>& tau_grid = metrics::default_tau_grid());

} // namespace blend
} // namespace rdtfg

#endif
