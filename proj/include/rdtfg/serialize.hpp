#ifndef RDTFG_SERIALIZE_HPP
#define RDTFG_SERIALIZE_HPP

// JSON forms of the engine's records. Objects use nlohmann's default sorted
// std::map, so dump() with no indent is the canonical form used for hashing.

#include <json.hpp>

#include "rdtfg/drift.hpp"
#include "rdtfg/economics.hpp"
#include "rdtfg/blend.hpp"
#include "rdtfg/fairness.hpp"
#include "rdtfg/metrics.hpp"
#include "rdtfg/sar.hpp"
#include "rdtfg/scoring.hpp"

namespace rdtfg {

using Json = nlohmann::json;

void to_json(Json& j, const ConfusionCounts& v);
void from_json(const Json& j, ConfusionCounts& v);
void to_json(Json& j, const DeLongResult& v);
void from_json(const Json& j, DeLongResult& v);
void to_json(Json& j, const KruskalWallisResult& v);
void from_json(const Json& j, KruskalWallisResult& v);
void to_json(Json& j, const ImportanceVector& v);
void from_json(const Json& j, ImportanceVector& v);

void to_json(Json& j, const DriftReport& v);
void from_json(const Json& j, DriftReport& v);
void to_json(Json& j, const AblationEntry& v);
void from_json(const Json& j, AblationEntry& v);
void to_json(Json& j, const StabilityPoint& v);
void from_json(const Json& j, StabilityPoint& v);
void to_json(Json& j, const CrossDatasetSummary& v);
void from_json(const Json& j, CrossDatasetSummary& v);

void to_json(Json& j, const FairnessFinding& v);
void from_json(const Json& j, FairnessFinding& v);
void to_json(Json& j, const ScreenResult& v);
void from_json(const Json& j, ScreenResult& v);

void to_json(Json& j, const HealthScore& v);
void from_json(const Json& j, HealthScore& v);
void to_json(Json& j, const RemediationTrigger& v);
void from_json(const Json& j, RemediationTrigger& v);
void to_json(Json& j, const RfiRecord& v);
void from_json(const Json& j, RfiRecord& v);

void to_json(Json& j, const ReasonCode& v);
void from_json(const Json& j, ReasonCode& v);
void to_json(Json& j, const ReasonCodeSet& v);
void from_json(const Json& j, ReasonCodeSet& v);
void to_json(Json& j, const CertificationRecord& v);
void from_json(const Json& j, CertificationRecord& v);
void to_json(Json& j, const CoverageStats& v);
void from_json(const Json& j, CoverageStats& v);

void to_json(Json& j, const BlendSearchResult& v);
void from_json(const Json& j, BlendSearchResult& v);
void to_json(Json& j, const Savings& v);
void from_json(const Json& j, Savings& v);
void to_json(Json& j, const ComparisonRow& v);

// Field-by-field equality for round-trip checks.
bool operator==(const HealthScore& a, const HealthScore& b);
bool operator==(const RemediationTrigger& a, const RemediationTrigger& b);
bool operator==(const RfiRecord& a, const RfiRecord& b);
bool operator==(const ReasonCode& a, const ReasonCode& b);
bool operator==(const ReasonCodeSet& a, const ReasonCodeSet& b);
bool operator==(const KruskalWallisResult& a, const KruskalWallisResult& b);
bool operator==(const FairnessFinding& a, const FairnessFinding& b);
bool operator==(const DriftReport& a, const DriftReport& b);
bool operator==(const AblationEntry& a, const AblationEntry& b);
bool operator==(const CoverageStats& a, const CoverageStats& b);
bool operator==(const DeLongResult& a, const DeLongResult& b);

} // namespace rdtfg

#endif
