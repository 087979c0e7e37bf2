#ifndef RDTFG_ECONOMICS_HPP
#define RDTFG_ECONOMICS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rdtfg/money.hpp"

namespace rdtfg {

struct CostModel {
    Money mean_fraud_amount = Money::from_cents(15190);
    Money investigation_cost = Money::from_cents(2500); // per false positive
};

struct Savings {
    Money net;
    Money benefit;
    Money cost;
};

/// benefit/cost, or a marker when cost is zero.
struct BenefitCostRatio {
    enum class Kind { Finite, Infinite, Undefined };
    Kind kind = Kind::Undefined;
    double value = 0.0;

    std::string to_string() const; // "20.0:1", "infinite", "undefined"
};

struct DerivedCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
};

/// Published benchmark row used for the comparison report.
struct ReferenceRow {
    std::string model;
    double recall = 0.0;
    double precision = 0.0;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    Money printed_net;
    std::string printed_ratio;
};

struct ComparisonRow {
    ReferenceRow reference;
    DerivedCounts derived;
    Savings formula; // from the reference tp/fp
    BenefitCostRatio formula_ratio;
    double net_deviation_pct = 0.0; // (printed - formula) / |formula| * 100
    bool deviates = false;
};

namespace economics {

Savings net_savings(std::int64_t tp, std::int64_t fp, const CostModel& model = {});
BenefitCostRatio benefit_cost_ratio(Money benefit, Money cost);
/// tp = round(recall * total_fraud), fp = round(tp * (1 - precision) / precision)
DerivedCounts derive_counts(double recall, double precision, std::int64_t total_fraud);

/// IEEE-CIS test set: 118,108 transactions, 4,133 fraud cases.
inline constexpr std::int64_t kReferenceTotalFraud = 4133;
const std::vector<ReferenceRow>& reference_table();

std::vector<ComparisonRow> comparison(const std::vector<ReferenceRow>& rows, std::int64_t total_fraud,
                                      const CostModel& model = {});

} // namespace economics
} // namespace rdtfg

#endif
