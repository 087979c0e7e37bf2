#include "rdtfg/economics.hpp"

#include <cmath>
#include <cstdio>

#include "rdtfg/error.hpp"

namespace rdtfg {

std::string BenefitCostRatio::to_string() const {
    switch (kind) {
    case Kind::Infinite: return "infinite";
    case Kind::Undefined: return "undefined";
    case Kind::Finite: break;
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.1f:1", value);
    return buf;
}

namespace economics {

Savings net_savings(std::int64_t tp, std::int64_t fp, const CostModel& model) {
    require(tp >= 0 && fp >= 0, ErrorKind::InvalidArgument, "net_savings: counts must be non-negative");
    require(model.mean_fraud_amount.cents() >= 0 && model.investigation_cost.cents() >= 0, ErrorKind::InvalidArgument,
            "net_savings: cost model amounts must be non-negative");
    Savings s;
    s.benefit = model.mean_fraud_amount * tp;
    s.cost = model.investigation_cost * fp;
    s.net = s.benefit - s.cost;
    return s;
}

BenefitCostRatio benefit_cost_ratio(Money benefit, Money cost) {
    require(benefit.cents() >= 0 && cost.cents() >= 0, ErrorKind::InvalidArgument,
            "benefit_cost_ratio: amounts must be non-negative");
    BenefitCostRatio r;
    if (cost.cents() == 0) {
        r.kind = benefit.cents() > 0 ? BenefitCostRatio::Kind::Infinite : BenefitCostRatio::Kind::Undefined;
        return r;
    }
    r.kind = BenefitCostRatio::Kind::Finite;
    r.value = static_cast<double>(benefit.cents()) / static_cast<double>(cost.cents());
    return r;
}

DerivedCounts derive_counts(double recall, double precision, std::int64_t total_fraud) {
    require(precision > 0.0, ErrorKind::ZeroPrecision, "derive_counts: precision must be positive");
    require(recall > 0.0 && recall <= 1.0 && precision <= 1.0, ErrorKind::InvalidArgument,
            "derive_counts: recall and precision must be in (0,1]");
    require(total_fraud > 0, ErrorKind::InvalidArgument, "derive_counts: total_fraud must be positive");
    DerivedCounts c;
    c.tp = std::llround(recall * static_cast<double>(total_fraud));
    c.fp = std::llround(static_cast<double>(c.tp) * (1.0 - precision) / precision);
    return c;
}

const std::vector<ReferenceRow>& reference_table() {
    static const std::vector<ReferenceRow> rows{
        {"Logistic Regression", 0.610, 0.135, 2521, 16096, Money::from_dollars(383343), "0.95:1"},
        {"Random Forest", 0.490, 0.623, 2025, 1226, Money::from_dollars(277987), "3.9:1"},
        {"XGBoost", 0.813, 0.767, 3360, 1021, Money::from_dollars(485499), "5.2:1"},
        {"LSTM", 0.623, 0.496, 2575, 2616, Money::from_dollars(326333), "4.5:1"},
        {"LSTM+XGBoost Ensemble", 0.623, 0.496, 2575, 2483, Money::from_dollars(309725), "6:1"},
    };
    return rows;
}

std::vector<ComparisonRow> comparison(const std::vector<ReferenceRow>& rows, std::int64_t total_fraud,
                                      const CostModel& model) {
    std::vector<ComparisonRow> out;
    out.reserve(rows.size());
    for (const auto& ref : rows) {
        ComparisonRow row;
        row.reference = ref;
        row.derived = derive_counts(ref.recall, ref.precision, total_fraud);
        row.formula = net_savings(ref.tp, ref.fp, model);
        row.formula_ratio = benefit_cost_ratio(row.formula.benefit, row.formula.cost);
        const auto diff = ref.printed_net.cents() - row.formula.net.cents();
        row.deviates = diff != 0;
        if (row.formula.net.cents() != 0) {
            row.net_deviation_pct = 100.0 * static_cast<double>(diff) / std::fabs(static_cast<double>(row.formula.net.cents()));
        }
        out.push_back(row);
    }
    return out;
}

} // namespace economics
} // namespace rdtfg
