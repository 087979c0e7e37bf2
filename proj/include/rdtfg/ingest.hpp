#ifndef RDTFG_INGEST_HPP
#define RDTFG_INGEST_HPP

// Validated readers and canonical writers for the engine's file formats.
//
//   predictions.csv     transaction_id,timestamp,score[,score_b],label,amount
//   shap.csv            transaction_id,<feature_1>,...,<feature_k>
//   proxies.csv         transaction_id,p_white_nh,p_black_nh,p_hispanic,p_asian
//   certifications.jsonl {alert_id, analyst_id, certified_at, disposition, amended_text?}
//
// A header that does not match throws SchemaMismatch. Bad rows are collected
// as rejects with their 1-based line number; accepted + rejected always equals
// the number of non-blank data lines.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rdtfg/drift.hpp"
#include "rdtfg/fairness.hpp"
#include "rdtfg/metrics.hpp"
#include "rdtfg/sar.hpp"
#include "rdtfg/shap.hpp"

namespace rdtfg {

struct RowReject {
    std::size_t line = 0;
    std::string reason;
};

template <typename T>
struct Ingested {
    T records{};
    std::vector<RowReject> rejects;
    std::size_t input_rows = 0;

    std::size_t accepted() const { return input_rows - rejects.size(); }
};

namespace ingest {

Ingested<std::vector<ScoredSample>> parse_predictions(std::istream& in);
Ingested<ShapPanel> parse_shap(std::istream& in);
Ingested<std::vector<ProxyProfile>> parse_proxies(std::istream& in);
Ingested<std::vector<CertificationRecord>> parse_certifications(std::istream& in);
/// transaction_id,amount,rolling_mean_7d,count_24h,velocity_percentile,device_mismatch,linked_accounts
/// (every column after the id may be blank)
Ingested<std::map<std::string, AlertContext>> parse_context(std::istream& in);
/// feature,importance
Ingested<ImportanceVector> parse_importance(std::istream& in);
/// feature_group,members,auc_full,auc_without (members separated by ';')
Ingested<std::vector<drift::AblationInput>> parse_ablation(std::istream& in);
/// model,dataset,auc
Ingested<std::vector<CrossDatasetEntry>> parse_cross_dataset(std::istream& in);

Ingested<std::vector<ScoredSample>> ingest_predictions(const std::filesystem::path& path);
Ingested<ShapPanel> ingest_shap(const std::filesystem::path& path);
Ingested<std::vector<ProxyProfile>> ingest_proxies(const std::filesystem::path& path);
Ingested<std::vector<CertificationRecord>> ingest_certifications(const std::filesystem::path& path);
Ingested<std::map<std::string, AlertContext>> ingest_context(const std::filesystem::path& path);
Ingested<ImportanceVector> ingest_importance(const std::filesystem::path& path);
Ingested<std::vector<drift::AblationInput>> ingest_ablation(const std::filesystem::path& path);
Ingested<std::vector<CrossDatasetEntry>> ingest_cross_dataset(const std::filesystem::path& path);

/// Writes the score_b column when every sample carries one.
void write_predictions(std::ostream& out, const std::vector<ScoredSample>& samples);
void write_shap(std::ostream& out, const ShapPanel& panel);
void write_proxies(std::ostream& out, const std::vector<ProxyProfile>& profiles);
void write_certifications(std::ostream& out, const std::vector<CertificationRecord>& records);
void write_importance(std::ostream& out, const ImportanceVector& importance);
void write_context(std::ostream& out, const std::map<std::string, AlertContext>& context);
void write_ablation(std::ostream& out, const std::vector<drift::AblationInput>& entries);
void write_cross_dataset(std::ostream& out, const std::vector<CrossDatasetEntry>& entries);

/// Throws RowInvalid naming the first reject, if any.
template <typename T>
void require_clean(const Ingested<T>& ingested, const std::string& what) {
    if (!ingested.rejects.empty()) {
        const auto& r = ingested.rejects.front();
        fail(ErrorKind::RowInvalid, what + " line " + std::to_string(r.line) + ": " + r.reason + " (" +
                                        std::to_string(ingested.rejects.size()) + " rejected rows)");
    }
}

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Appends one certification line to a JSONL ledger.
void append_certification(const std::filesystem::path& path, const CertificationRecord& record);

} // namespace ingest
} // namespace rdtfg

#endif
