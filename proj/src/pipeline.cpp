#include "rdtfg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "rdtfg/ingest.hpp"
#include "rdtfg/simulator.hpp"

namespace rdtfg::pipeline {

namespace {

// FNV-1a over the id, mixed with the seed.
std::uint64_t id_hash(const std::string& id, std::uint64_t seed) {
    std::uint64_t h = 1469598103934665603ULL ^ (seed * 0x9E3779B97F4A7C15ULL);
    for (unsigned char c : id) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    h ^= h >> 33;
    h *= 0xFF51AFD7ED558CCDULL;
    h ^= h >> 33;
    return h;
}

Month month_from(const Json& j) {
    const auto m = Month::parse(j.get<std::string>());
    require(m.has_value(), ErrorKind::SchemaMismatch, "malformed month '" + j.get<std::string>() + "'");
    return *m;
}

template <typename T>
T clean(Ingested<T> ingested, const std::filesystem::path& path) {
    ingest::require_clean(ingested, path.string());
    return std::move(ingested.records);
}

} // namespace

std::vector<ScoredSample> random_split_test(std::span<const ScoredSample> samples, double split_fraction,
                                            std::uint64_t seed) {
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
    keyed.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        keyed.emplace_back(id_hash(samples[i].transaction_id, seed), i);
    }
    std::sort(keyed.begin(), keyed.end());
    const auto n = static_cast<double>(samples.size());
    const auto test_size = samples.size() - static_cast<std::size_t>(std::llround(split_fraction * n));
    std::vector<std::size_t> chosen;
    for (std::size_t k = 0; k < test_size; ++k) {
        chosen.push_back(keyed[k].second);
    }
    std::sort(chosen.begin(), chosen.end());
    std::vector<ScoredSample> out;
    out.reserve(chosen.size());
    for (auto i : chosen) {
        out.push_back(samples[i]);
    }
    return out;
}

ValidationReport validate(std::span<const ScoredSample> predictions, std::span<const drift::AblationInput> ablation,
                          std::optional<std::vector<CrossDatasetEntry>> cross_dataset, const RunConfig& config,
                          std::uint64_t seed) {
    ValidationReport r;
    r.samples = predictions.size();
    const auto random_test = random_split_test(predictions, config.split_fraction, seed);
    const auto split = drift::temporal_split(predictions, config.split_fraction);
    r.random_test_size = random_test.size();
    r.temporal_train_size = split.train.size();
    r.temporal_test_size = split.test.size();
    r.boundary_timestamp = split.boundary_timestamp;
    r.drift = drift::drift_report(random_test, split.test, config.thresholds.temporal_green);

    const bool paired = !predictions.empty() && std::all_of(predictions.begin(), predictions.end(),
                                                            [](const ScoredSample& s) { return s.score_b.has_value(); });
    std::vector<std::string> notes;
    if (paired) {
        std::vector<ScoredSample> b(predictions.begin(), predictions.end());
        for (auto& s : b) {
            s.score = *s.score_b;
        }
        r.delong = metrics::delong_test(predictions, std::span<const ScoredSample>(b));
    }
    r.ablation = drift::ablation_ledger(ablation);
    if (cross_dataset) {
        r.cross_dataset = drift::cross_dataset_summary(std::move(*cross_dataset), config.cross_dataset_floor);
    }

    r.occ.auc = r.drift.random_split_auc;
    if (r.delong) {
        r.occ.min_delong_z = r.delong->infinite_z ? (r.delong->auc_a > r.delong->auc_b ? HUGE_VAL : -HUGE_VAL)
                                                  : r.delong->z_statistic;
        r.occ.worst_delong_p = r.delong->p_value_two_sided;
    } else {
        r.occ.min_delong_z = 0.0;
        r.occ.worst_delong_p = 1.0;
    }
    r.occ.ablation_documented = !r.ablation.empty();
    r.occ_score = scoring::occ_score(r.occ.auc, r.occ.min_delong_z, r.occ.worst_delong_p, r.occ.ablation_documented,
                                     config.thresholds);
    if (!r.delong) {
        r.occ_score.notes.push_back("no benchmark score column; DeLong comparison absent");
    }
    return r;
}

Json to_json(const ValidationReport& r) {
    Json j{{"samples", r.samples},
           {"random_test_size", r.random_test_size},
           {"temporal_train_size", r.temporal_train_size},
           {"temporal_test_size", r.temporal_test_size},
           {"boundary_timestamp", r.boundary_timestamp},
           {"drift_report", r.drift},
           {"ablation", r.ablation},
           {"occ_score", r.occ_score}};
    j["delong"] = r.delong ? Json(*r.delong) : Json(nullptr);
    j["cross_dataset"] = r.cross_dataset ? Json(*r.cross_dataset) : Json(nullptr);
    Json occ{{"auc", r.occ.auc}, {"worst_delong_p", r.occ.worst_delong_p}, {"ablation_documented", r.occ.ablation_documented}};
    if (std::isfinite(r.occ.min_delong_z)) {
        occ["min_delong_z"] = r.occ.min_delong_z;
    } else {
        occ["min_delong_z"] = r.occ.min_delong_z > 0 ? "inf" : "-inf";
    }
    j["occ_inputs"] = occ;
    return j;
}

OccInputs occ_inputs_from_json(const Json& report) {
    try {
        const auto& o = report.at("occ_inputs");
        OccInputs occ;
        occ.auc = o.at("auc").get<double>();
        const auto& z = o.at("min_delong_z");
        if (z.is_string()) {
            const auto t = z.get<std::string>();
            require(t == "inf" || t == "-inf", ErrorKind::SchemaMismatch, "occ_inputs.min_delong_z malformed");
            occ.min_delong_z = t == "inf" ? HUGE_VAL : -HUGE_VAL;
        } else {
            occ.min_delong_z = z.get<double>();
        }
        occ.worst_delong_p = o.at("worst_delong_p").get<double>();
        occ.ablation_documented = o.at("ablation_documented").get<bool>();
        require(occ.auc >= 0.0 && occ.auc <= 1.0 && occ.worst_delong_p >= 0.0 && occ.worst_delong_p <= 1.0,
                ErrorKind::SchemaMismatch, "occ_inputs values out of range");
        return occ;
    } catch (const Json::exception& e) {
        fail(ErrorKind::SchemaMismatch, std::string("validation report lacks occ_inputs: ") + e.what());
    }
}

SarBatch sar_batch(const Month& month, std::span<const ScoredSample> predictions, const ShapPanel& shap,
                   const std::map<std::string, AlertContext>& context,
                   std::span<const CertificationRecord> certifications, const RunConfig& config) {
    SarBatch batch;
    batch.month = month;
    batch.alerts = sar::flag_alerts(predictions, config.risk_tau);
    const auto rows = shap.row_index();
    for (const auto& id : batch.alerts) {
        const auto row = rows.find(id);
        if (row == rows.end()) {
            batch.reason_codes.push_back({id, {}});
            continue;
        }
        AlertShap alert;
        alert.alert_id = id;
        alert.features = shap.features;
        alert.phi = shap.values.row(row->second).transpose();
        const auto ctx = context.find(id);
        batch.reason_codes.push_back(sar::generate_reason_codes(
            alert, config.categories, ctx == context.end() ? AlertContext{} : ctx->second, config.form111));
    }
    batch.coverage = sar::coverage_stats(batch.alerts, batch.reason_codes, certifications);
    return batch;
}

Json to_json(const SarBatch& b) {
    return Json{{"month", b.month.to_string()},
                {"alerts", b.alerts},
                {"reason_codes", b.reason_codes},
                {"coverage", b.coverage}};
}

Json to_json(const FairnessRecord& r) { return Json{{"month", r.month.to_string()}, {"result", r.result}}; }

FairnessRecord fairness_record_from_json(const Json& j) {
    FairnessRecord r;
    r.month = month_from(j.at("month"));
    r.result = j.at("result").get<ScreenResult>();
    return r;
}

MonthEvaluation evaluate_month(const MonthArtifacts& a, const OccInputs& occ, const ImportanceVector& baseline,
                               const std::optional<FairnessRecord>& prior_fairness,
                               std::span<const RfiRecord> history, const RunConfig& config) {
    MonthEvaluation ev;
    ev.inputs.month = a.month;
    ev.inputs.occ = occ;
    ev.inputs.monthly_auc = metrics::roc_auc(a.predictions);
    ev.rho = metrics::spearman_rho(baseline, a.shap.global_importance());
    ev.inputs.rho = ev.rho;

    std::optional<FairnessRecord> fairness;
    if (a.proxies) {
        const int top_k = std::min<int>(config.top_k, static_cast<int>(a.shap.features.size()));
        fairness = FairnessRecord{a.month, fairness::screen(a.shap, *a.proxies, top_k, config.m_comparisons,
                                                            config.thresholds.fairness)};
        ev.fairness_screened = fairness;
    } else if (prior_fairness && prior_fairness->month <= a.month && a.month < prior_fairness->month.plus(12)) {
        fairness = prior_fairness;
    }
    if (fairness) {
        ev.inputs.findings = fairness->result.findings;
        ev.fairness_source = fairness->month;
    }

    ev.sar = sar_batch(a.month, a.predictions, a.shap, a.context, a.certifications, config);
    ev.inputs.coverage = ev.sar.coverage.coverage;
    ev.inputs.cert_rate = ev.sar.coverage.cert_rate;

    ev.outcome = scoring::monitoring_step(history, ev.inputs, config.thresholds);
    if (ev.fairness_source && !ev.fairness_screened) {
        ev.outcome.record.scores[static_cast<std::size_t>(Dimension::CfpbFairness)].notes.push_back(
            "screen carried forward from " + ev.fairness_source->to_string());
    } else if (!ev.fairness_source && prior_fairness) {
        ev.outcome.record.scores[static_cast<std::size_t>(Dimension::CfpbFairness)].notes.push_back(
            "last screen " + prior_fairness->month.to_string() + " is older than twelve months");
    }
    return ev;
}

MonthArtifacts load_month(const Month& month, const std::filesystem::path& predictions,
                          const std::filesystem::path& shap, const std::optional<std::filesystem::path>& proxies,
                          const std::optional<std::filesystem::path>& certifications,
                          const std::optional<std::filesystem::path>& context) {
    MonthArtifacts a;
    a.month = month;
    a.predictions = clean(ingest::ingest_predictions(predictions), predictions);
    a.shap = clean(ingest::ingest_shap(shap), shap);
    if (proxies) {
        a.proxies = clean(ingest::ingest_proxies(*proxies), *proxies);
    }
    if (certifications) {
        a.certifications = clean(ingest::ingest_certifications(*certifications), *certifications);
    }
    if (context) {
        a.context = clean(ingest::ingest_context(*context), *context);
    }
    return a;
}

std::vector<RfiRecord> rfi_history(std::span<const AuditEntry> entries) {
    std::vector<RfiRecord> out;
    for (const auto& e : entries) {
        if (e.kind == AuditKind::RfiRecord) {
            out.push_back(e.payload.get<RfiRecord>());
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const RfiRecord& a, const RfiRecord& b) { return a.month < b.month; });
    return out;
}

std::optional<FairnessRecord> latest_fairness(std::span<const AuditEntry> entries) {
    std::optional<FairnessRecord> latest;
    for (const auto& e : entries) {
        if (e.kind == AuditKind::FairnessScreen && e.payload.contains("result")) {
            auto r = fairness_record_from_json(e.payload);
            if (!latest || latest->month <= r.month) {
                latest = std::move(r);
            }
        }
    }
    return latest;
}

bool record_config(audit::Writer& writer, const RunConfig& config) {
    const Json snapshot = config::to_json(config);
    for (auto it = writer.entries().rbegin(); it != writer.entries().rend(); ++it) {
        if (it->kind == AuditKind::ConfigChange) {
            if (it->payload == snapshot) {
                return false;
            }
            break;
        }
    }
    writer.append(AuditKind::ConfigChange, snapshot);
    return true;
}

void record_month(audit::Writer& writer, const MonthEvaluation& ev, std::optional<std::int64_t> recorded_at) {
    const auto month = ev.inputs.month.to_string();
    for (const auto& e : writer.entries()) {
        require(!(e.kind == AuditKind::RfiRecord && e.payload.at("month") == month), ErrorKind::AlreadyRecorded,
                "month " + month + " already has an rfi_record at sequence " + std::to_string(e.sequence));
    }
    if (ev.fairness_screened) {
        writer.append(AuditKind::FairnessScreen, to_json(*ev.fairness_screened), recorded_at);
    }
    writer.append(AuditKind::DriftReport,
                  Json{{"month", month},
                       {"monthly_auc", ev.inputs.monthly_auc},
                       {"rho", ev.rho},
                       {"drift_score", ev.outcome.record.scores[static_cast<std::size_t>(Dimension::DriftMonitoring)]}},
                  recorded_at);
    writer.append(AuditKind::SarBatch, to_json(ev.sar), recorded_at);
    writer.append(AuditKind::RfiRecord, Json(ev.outcome.record), recorded_at);
}

Json month_json(const MonthEvaluation& ev) {
    return Json{{"record", ev.outcome.record},
                {"rho", ev.rho},
                {"fairness_source", ev.fairness_source ? Json(ev.fairness_source->to_string()) : Json(nullptr)},
                {"fairness_screened", ev.fairness_screened.has_value()},
                {"sar_coverage", ev.sar.coverage}};
}

std::vector<VignetteMonth> run_vignette(const std::filesystem::path& workdir, const RunConfig& config) {
    const auto scenario = simulator::generate(simulator::vignette_spec());
    const auto manifest = simulator::write_scenario(scenario, workdir);

    const auto validation_predictions =
        clean(ingest::ingest_predictions(workdir / "validation/predictions.csv"), workdir / "validation/predictions.csv");
    const auto ablation =
        clean(ingest::ingest_ablation(workdir / "validation/ablation.csv"), workdir / "validation/ablation.csv");
    auto cross = clean(ingest::ingest_cross_dataset(workdir / "validation/cross_dataset.csv"),
                       workdir / "validation/cross_dataset.csv");
    const auto report = validate(validation_predictions, ablation, std::move(cross), config, 0);
    const auto baseline =
        clean(ingest::ingest_importance(workdir / "baseline_importance.csv"), workdir / "baseline_importance.csv");

    audit::Writer writer(workdir / "audit");
    record_config(writer, config);
    std::vector<VignetteMonth> transcript;
    for (const auto& m : manifest.at("months")) {
        const auto month = month_from(m.at("month"));
        const bool screen = transcript.empty();
        const auto artifacts = load_month(
            month, workdir / m.at("predictions").get<std::string>(), workdir / m.at("shap").get<std::string>(),
            screen ? std::optional(workdir / m.at("proxies").get<std::string>()) : std::nullopt,
            workdir / m.at("certifications").get<std::string>(), workdir / m.at("context").get<std::string>());
        const auto history = rfi_history(writer.entries());
        const auto ev = evaluate_month(artifacts, report.occ, baseline, latest_fairness(writer.entries()), history, config);
        record_month(writer, ev);

        VignetteMonth v;
        v.month = month;
        if (!m.at("target_rho").is_null()) {
            v.target_rho = m.at("target_rho").get<double>();
        }
        v.realized_rho = ev.rho;
        v.target_auc = m.at("target_auc").get<double>();
        v.realized_auc = ev.inputs.monthly_auc;
        v.record = ev.outcome.record;
        transcript.push_back(std::move(v));
    }
    return transcript;
}

} // namespace rdtfg::pipeline
