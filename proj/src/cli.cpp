#include "rdtfg/cli.hpp"

#include <chrono>
#include <fstream>
#include <optional>

#include <CLI11.hpp>

#include "rdtfg/audit.hpp"
#include "rdtfg/config.hpp"
#include "rdtfg/ingest.hpp"
#include "rdtfg/pipeline.hpp"
#include "rdtfg/report.hpp"
#include "rdtfg/simulator.hpp"

namespace rdtfg::cli {

namespace {

struct Options {
    std::string config;
    std::string predictions;
    std::string shap;
    std::string proxies;
    std::string certs;
    std::string audit_dir;
    std::string month;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    std::string error_format = "text";
    std::string baseline;
    std::string validation;
    std::string context;
    std::string ablation;
    std::string cross_dataset;

    // subcommand arguments
    std::string scenario;
    std::string out_dir;
    std::string from;
    std::string to;
    std::string alert;
    std::string analyst;
    std::string disposition = "certified";
    std::string amended_text;
    std::optional<std::int64_t> certified_at;
    std::optional<double> tau;
};

struct Context {
    Options opt;
    RunConfig config;
    std::ostream& out;
};

// Flag value, else the config's paths entry, else empty.
std::optional<std::filesystem::path> path_of(const Context& c, const std::string& flag, const std::string& key) {
    if (!flag.empty()) {
        return std::filesystem::path(flag);
    }
    if (const auto it = c.config.paths.find(key); it != c.config.paths.end()) {
        return std::filesystem::path(it->second);
    }
    return std::nullopt;
}

std::filesystem::path required_path(const Context& c, const std::string& flag, const std::string& key,
                                    const std::string& option) {
    const auto p = path_of(c, flag, key);
    require(p.has_value(), ErrorKind::InvalidArgument, option + " is required");
    return *p;
}

Month required_month(const Context& c) {
    require(!c.opt.month.empty(), ErrorKind::InvalidArgument, "--month is required");
    const auto m = Month::parse(c.opt.month);
    require(m.has_value(), ErrorKind::InvalidArgument, "--month must be YYYY-MM");
    return *m;
}

std::optional<Month> optional_month(const std::string& text, const char* option) {
    if (text.empty()) {
        return std::nullopt;
    }
    const auto m = Month::parse(text);
    require(m.has_value(), ErrorKind::InvalidArgument, std::string(option) + " must be YYYY-MM");
    return m;
}

template <typename T>
T clean(Ingested<T> ingested, const std::filesystem::path& path) {
    ingest::require_clean(ingested, path.string());
    return std::move(ingested.records);
}

void emit(const Context& c, const std::string& title, const Json& doc) {
    if (c.opt.format == "md") {
        c.out << report::render_markdown(title, doc);
    } else {
        c.out << doc.dump(2) << '\n';
    }
}

int cmd_validate(Context& c) {
    const auto pred_path = required_path(c, c.opt.predictions, "predictions", "--predictions");
    const auto predictions = clean(ingest::ingest_predictions(pred_path), pred_path);
    std::vector<drift::AblationInput> ablation;
    if (const auto p = path_of(c, c.opt.ablation, "ablation")) {
        ablation = clean(ingest::ingest_ablation(*p), *p);
    }
    std::optional<std::vector<CrossDatasetEntry>> cross;
    if (const auto p = path_of(c, c.opt.cross_dataset, "cross_dataset")) {
        cross = clean(ingest::ingest_cross_dataset(*p), *p);
    }
    const auto report = pipeline::validate(predictions, ablation, std::move(cross), c.config, c.opt.seed.value_or(0));
    Json doc = pipeline::to_json(report);
    if (const auto dir = path_of(c, c.opt.audit_dir, "audit_dir")) {
        audit::Writer writer(*dir);
        pipeline::record_config(writer, c.config);
        writer.append(AuditKind::DriftReport, Json{{"validation", doc}});
    }
    emit(c, "Validation report", doc);
    return kOk;
}

int cmd_fairness(Context& c) {
    const auto shap_path = required_path(c, c.opt.shap, "shap", "--shap");
    const auto proxy_path = required_path(c, c.opt.proxies, "proxies", "--proxies");
    const auto panel = clean(ingest::ingest_shap(shap_path), shap_path);
    const auto proxies = clean(ingest::ingest_proxies(proxy_path), proxy_path);
    const int top_k = std::min<int>(c.config.top_k, static_cast<int>(panel.features.size()));
    const auto result = fairness::screen(panel, proxies, top_k, c.config.m_comparisons, c.config.thresholds.fairness);
    const auto score = scoring::fairness_score(result.findings, c.config.thresholds);
    Json doc{{"screen", result}, {"health_score", score}};
    if (const auto dir = path_of(c, c.opt.audit_dir, "audit_dir")) {
        const auto month = required_month(c);
        audit::Writer writer(*dir);
        pipeline::record_config(writer, c.config);
        writer.append(AuditKind::FairnessScreen, pipeline::to_json(FairnessRecord{month, result}));
        doc["month"] = month.to_string();
    }
    emit(c, "Fairness screen", doc);
    return kOk;
}

int cmd_monitor(Context& c) {
    const auto month = required_month(c);
    const auto dir = required_path(c, c.opt.audit_dir, "audit_dir", "--audit-dir");
    const auto pred_path = required_path(c, c.opt.predictions, "predictions", "--predictions");
    const auto shap_path = required_path(c, c.opt.shap, "shap", "--shap");
    const auto baseline_path = required_path(c, c.opt.baseline, "baseline", "--baseline");
    const auto validation_path = required_path(c, c.opt.validation, "validation", "--validation");

    audit::Writer writer(dir);
    for (const auto& e : writer.entries()) {
        require(!(e.kind == AuditKind::RfiRecord && e.payload.at("month") == month.to_string()),
                ErrorKind::AlreadyRecorded,
                "month " + month.to_string() + " is already recorded at audit sequence " + std::to_string(e.sequence));
    }

    std::ifstream vin(validation_path, std::ios::binary);
    require(vin.good(), ErrorKind::Io, "cannot open " + validation_path.string());
    Json validation;
    try {
        validation = Json::parse(vin);
    } catch (const Json::exception& e) {
        fail(ErrorKind::SchemaMismatch, validation_path.string() + " is not valid JSON: " + e.what());
    }
    const auto occ = pipeline::occ_inputs_from_json(validation);
    const auto baseline = clean(ingest::ingest_importance(baseline_path), baseline_path);
    const auto artifacts = pipeline::load_month(month, pred_path, shap_path, path_of(c, c.opt.proxies, "proxies"),
                                                path_of(c, c.opt.certs, "certs"), path_of(c, c.opt.context, "context"));

    const auto history = pipeline::rfi_history(writer.entries());
    const auto evaluation =
        pipeline::evaluate_month(artifacts, occ, baseline, pipeline::latest_fairness(writer.entries()), history, c.config);
    pipeline::record_config(writer, c.config);
    pipeline::record_month(writer, evaluation);

    Json doc = pipeline::month_json(evaluation);
    doc["audit_sequence"] = writer.entries().back().sequence;
    emit(c, "Monitoring " + month.to_string(), doc);
    return kOk;
}

SarBatch load_sar_batch(const Context& c) {
    const auto pred_path = required_path(c, c.opt.predictions, "predictions", "--predictions");
    const auto shap_path = required_path(c, c.opt.shap, "shap", "--shap");
    const auto predictions = clean(ingest::ingest_predictions(pred_path), pred_path);
    const auto panel = clean(ingest::ingest_shap(shap_path), shap_path);
    std::map<std::string, AlertContext> context;
    if (const auto p = path_of(c, c.opt.context, "context")) {
        context = clean(ingest::ingest_context(*p), *p);
    }
    std::vector<CertificationRecord> certs;
    if (const auto p = path_of(c, c.opt.certs, "certs")) {
        certs = clean(ingest::ingest_certifications(*p), *p);
    }
    const auto month = c.opt.month.empty() ? Month() : required_month(c);
    return pipeline::sar_batch(month, predictions, panel, context, certs, c.config);
}

int cmd_sar_generate(Context& c) {
    const auto batch = load_sar_batch(c);
    Json doc{{"alerts", batch.alerts}, {"reason_codes", batch.reason_codes}, {"risk_tau", c.config.risk_tau}};
    if (const auto dir = path_of(c, c.opt.audit_dir, "audit_dir")) {
        required_month(c);
        audit::Writer writer(*dir);
        pipeline::record_config(writer, c.config);
        writer.append(AuditKind::SarBatch, pipeline::to_json(batch));
    }
    emit(c, "SAR reason codes", doc);
    return kOk;
}

int cmd_sar_coverage(Context& c) {
    const auto batch = load_sar_batch(c);
    const auto score = scoring::sar_score(batch.coverage.coverage, batch.coverage.cert_rate, c.config.thresholds);
    emit(c, "SAR coverage", Json{{"coverage", batch.coverage}, {"health_score", score}});
    return kOk;
}

int cmd_sar_certify(Context& c) {
    const auto certs = required_path(c, c.opt.certs, "certs", "--certs");
    CertificationRecord rec;
    rec.alert_id = c.opt.alert;
    rec.analyst_id = c.opt.analyst;
    const auto d = disposition_from_string(c.opt.disposition);
    require(d.has_value(), ErrorKind::InvalidArgument, "--disposition must be certified, amended or rejected");
    rec.disposition = *d;
    if (!c.opt.amended_text.empty()) {
        rec.amended_text = c.opt.amended_text;
    }
    rec.certified_at = c.opt.certified_at.value_or(
        std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count());
    sar::validate(rec);
    std::optional<audit::Writer> writer;
    if (const auto dir = path_of(c, c.opt.audit_dir, "audit_dir")) {
        writer.emplace(*dir);
    }
    ingest::append_certification(certs, rec);
    if (writer) {
        writer->append(AuditKind::Certification, Json(rec));
    }
    emit(c, "Certification", Json(rec));
    return kOk;
}

int cmd_blend(Context& c) {
    const auto pred_path = required_path(c, c.opt.predictions, "predictions", "--predictions");
    const auto predictions = clean(ingest::ingest_predictions(pred_path), pred_path);
    const auto n = static_cast<Eigen::Index>(predictions.size());
    Eigen::VectorXd a(n), b(n);
    Eigen::VectorXi y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& s = predictions[static_cast<std::size_t>(i)];
        require(s.score_b.has_value(), ErrorKind::InvalidArgument, "blend search needs a score_b column");
        a(i) = s.score;
        b(i) = *s.score_b;
        y(i) = s.label;
    }
    const auto result = blend::alpha_search(a, b, y, c.config.blend.grid, c.config.tau_grid);
    const Eigen::VectorXd configured = blend::blend(a, b, c.config.blend.alpha);
    const auto sweep = metrics::f1_threshold_sweep(configured, y, c.config.tau_grid);
    double configured_f1 = 0.0;
    for (const auto& p : sweep.per_tau) {
        configured_f1 = std::max(configured_f1, p.f1);
    }
    emit(c, "Blend search",
         Json{{"search", result},
              {"alpha_grid", c.config.blend.grid},
              {"tau_grid", c.config.tau_grid},
              {"configured_alpha", c.config.blend.alpha},
              {"configured_best_tau", sweep.best_tau},
              {"configured_f1", configured_f1}});
    return kOk;
}

int cmd_economics(Context& c) {
    const auto rows = economics::comparison(economics::reference_table(), c.config.total_fraud, c.config.cost);
    Json table = Json::array();
    int deviating = 0;
    for (const auto& r : rows) {
        table.push_back(r);
        deviating += r.deviates ? 1 : 0;
    }
    Json doc{{"cost_model",
              {{"mean_fraud_amount", c.config.cost.mean_fraud_amount.to_string()},
               {"investigation_cost", c.config.cost.investigation_cost.to_string()},
               {"total_fraud", c.config.total_fraud}}},
             {"reference_comparison", table},
             {"deviating_rows", deviating}};
    if (const auto p = path_of(c, c.opt.predictions, "predictions")) {
        const auto predictions = clean(ingest::ingest_predictions(*p), *p);
        const double tau = c.opt.tau.value_or(c.config.risk_tau);
        const auto counts = metrics::confusion_at_threshold(predictions, tau);
        const auto savings = economics::net_savings(counts.tp, counts.fp, c.config.cost);
        doc["predictions"] = {{"threshold", tau},
                              {"confusion", counts},
                              {"savings", savings},
                              {"benefit_cost_ratio", economics::benefit_cost_ratio(savings.benefit, savings.cost).to_string()}};
    }
    emit(c, "Cost-benefit report", doc);
    return kOk;
}

int cmd_simulate(Context& c) {
    require(!c.opt.scenario.empty(), ErrorKind::InvalidArgument, "--scenario is required");
    require(!c.opt.out_dir.empty(), ErrorKind::InvalidArgument, "--out is required");
    ScenarioSpec spec;
    if (c.opt.scenario == "vignette") {
        spec = simulator::vignette_spec();
    } else {
        std::ifstream in(c.opt.scenario, std::ios::binary);
        require(in.good(), ErrorKind::Io, "cannot open scenario " + c.opt.scenario);
        try {
            spec = simulator::spec_from_json(Json::parse(in));
        } catch (const Json::exception& e) {
            fail(ErrorKind::ConfigInvalid, "scenario is not valid JSON: " + std::string(e.what()));
        }
    }
    if (c.opt.seed) {
        spec.seed = *c.opt.seed;
    }
    const auto scenario = simulator::generate(spec);
    const auto manifest = simulator::write_scenario(scenario, c.opt.out_dir);
    emit(c, "Simulated scenario", manifest);
    return kOk;
}

int cmd_audit_verify(Context& c) {
    const auto dir = required_path(c, c.opt.audit_dir, "audit_dir", "--audit-dir");
    const auto result = audit::verify(dir);
    Json doc{{"ok", result.ok}, {"verified_entries", result.entries.size()}};
    doc["first_broken_sequence"] =
        result.first_broken_sequence ? Json(*result.first_broken_sequence) : Json(nullptr);
    doc["reason"] = result.reason;
    emit(c, "Audit verification", doc);
    return result.ok ? kOk : kAudit;
}

int cmd_report(Context& c) {
    const auto dir = required_path(c, c.opt.audit_dir, "audit_dir", "--audit-dir");
    const auto entries = audit::read(dir);
    const auto doc = report::examiner_report(entries, optional_month(c.opt.from, "--from"),
                                             optional_month(c.opt.to, "--to"), c.config);
    emit(c, "Examiner report", doc);
    return kOk;
}

void error_out(std::ostream& err, const std::string& format, const std::string& kind, const std::string& message,
               int code) {
    if (format == "json") {
        err << Json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump() << '\n';
    } else {
        err << "error (" << kind << "): " << message << '\n';
    }
}

} // namespace

ExitCode exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::ChainBroken:
    case ErrorKind::LockHeld: return kAudit;
    case ErrorKind::DegenerateLabels:
    case ErrorKind::ZeroVariance:
    case ErrorKind::InsufficientGroups:
    case ErrorKind::InsufficientProfiles:
    case ErrorKind::ZeroPrecision:
    case ErrorKind::DuplicateDimension:
    case ErrorKind::MissingDimension:
    case ErrorKind::NonMonotoneMonths:
    case ErrorKind::InfeasibleTarget: return kComputation;
    case ErrorKind::InvalidArgument:
    case ErrorKind::FeatureMismatch:
    case ErrorKind::UnmappedFeature:
    case ErrorKind::UnmappedCategory:
    case ErrorKind::EmptyInput:
    case ErrorKind::LengthMismatch:
    case ErrorKind::SchemaMismatch:
    case ErrorKind::RowInvalid:
    case ErrorKind::ConfigInvalid:
    case ErrorKind::AlreadyRecorded:
    case ErrorKind::Io: return kInput;
    }
    return kComputation;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fraud-model governance monitoring engine", "rdtfg"};
    app.require_subcommand(1);
    app.fallthrough();
    Context c{Options{}, RunConfig{}, out};
    auto& o = c.opt;

    auto env = [](CLI::Option* opt, const char* name) { opt->envname(std::string("RDTFG_") + name); };
    env(app.add_option("--config", o.config, "Run configuration JSON"), "CONFIG");
    env(app.add_option("--predictions", o.predictions, "predictions.csv"), "PREDICTIONS");
    env(app.add_option("--shap", o.shap, "shap.csv"), "SHAP");
    env(app.add_option("--proxies", o.proxies, "proxies.csv"), "PROXIES");
    env(app.add_option("--certs", o.certs, "certifications.jsonl"), "CERTS");
    env(app.add_option("--audit-dir", o.audit_dir, "Audit store directory"), "AUDIT_DIR");
    env(app.add_option("--month", o.month, "Month, YYYY-MM"), "MONTH");
    env(app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "md"})), "FORMAT");
    env(app.add_option("--seed", o.seed, "Seed for random splits and simulation"), "SEED");
    env(app.add_option("--error-format", o.error_format, "Error output format")->check(CLI::IsMember({"text", "json"})),
        "ERROR_FORMAT");
    env(app.add_option("--baseline", o.baseline, "Baseline SHAP importance (feature,importance)"), "BASELINE");
    env(app.add_option("--validation", o.validation, "Validation report JSON from the validate command"), "VALIDATION");
    env(app.add_option("--context", o.context, "Alert behavioural context CSV"), "CONTEXT");
    env(app.add_option("--ablation", o.ablation, "Ablation AUC pairs CSV"), "ABLATION");
    env(app.add_option("--cross-dataset", o.cross_dataset, "Cross-dataset AUC CSV"), "CROSS_DATASET");

    std::function<int(Context&)> action;
    auto bind = [&](CLI::App* sub, int (*fn)(Context&)) { sub->callback([&action, fn] { action = fn; }); };

    bind(app.add_subcommand("validate", "Temporal drift, DeLong, ablation and cross-dataset validation"), cmd_validate);
    bind(app.add_subcommand("fairness", "Kruskal-Wallis screen of SHAP values across proxy quartiles"), cmd_fairness);
    bind(app.add_subcommand("monitor", "Score one month and append it to the audit trail"), cmd_monitor);

    auto* sar = app.add_subcommand("sar", "Reason codes, certification and coverage");
    sar->require_subcommand(1);
    bind(sar->add_subcommand("generate", "Reason codes for flagged alerts"), cmd_sar_generate);
    auto* certify = sar->add_subcommand("certify", "Record an analyst certification");
    certify->add_option("--alert", o.alert, "Alert id")->required();
    certify->add_option("--analyst", o.analyst, "Analyst id")->required();
    certify->add_option("--disposition", o.disposition, "certified, amended or rejected");
    certify->add_option("--amended-text", o.amended_text, "Narrative, required for amended");
    certify->add_option("--certified-at", o.certified_at, "Epoch seconds; defaults to now");
    bind(certify, cmd_sar_certify);
    bind(sar->add_subcommand("coverage", "Reason-code and certification coverage"), cmd_sar_coverage);

    auto* blend_cmd = app.add_subcommand("blend", "Ensemble blending");
    blend_cmd->require_subcommand(1);
    bind(blend_cmd->add_subcommand("search", "Joint alpha and threshold search for F1"), cmd_blend);

    auto* econ = app.add_subcommand("economics", "Net savings and benefit-cost report");
    econ->add_option("--tau", o.tau, "Alert threshold for the predictions file; defaults to risk_tau");
    bind(econ, cmd_economics);

    auto* sim = app.add_subcommand("simulate", "Generate a synthetic scenario");
    sim->add_option("--scenario", o.scenario, "Scenario JSON file or 'vignette'")->required();
    sim->add_option("--out", o.out_dir, "Output directory")->required();
    bind(sim, cmd_simulate);

    auto* audit_cmd = app.add_subcommand("audit", "Audit trail operations");
    audit_cmd->require_subcommand(1);
    bind(audit_cmd->add_subcommand("verify", "Verify the hash chain"), cmd_audit_verify);

    auto* rep = app.add_subcommand("report", "Examiner report over a month range");
    rep->add_option("--from", o.from, "First month, YYYY-MM");
    rep->add_option("--to", o.to, "Last month, YYYY-MM");
    bind(rep, cmd_report);

    std::vector<std::string> argv_storage{"rdtfg"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) {
        argv.push_back(a.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        error_out(err, o.error_format, "Usage", e.what(), kUsage);
        return kUsage;
    }

    try {
        if (!o.config.empty()) {
            c.config = config::load(o.config);
        }
        require(static_cast<bool>(action), ErrorKind::InvalidArgument, "no command selected");
        return action(c);
    } catch (const Error& e) {
        const int code = exit_code_for(e.kind());
        error_out(err, o.error_format, std::string(to_string(e.kind())), e.what(), code);
        return code;
    } catch (const Json::exception& e) {
        error_out(err, o.error_format, "SchemaMismatch", e.what(), kInput);
        return kInput;
    } catch (const std::filesystem::filesystem_error& e) {
        error_out(err, o.error_format, "Io", e.what(), kInput);
        return kInput;
    }
}

} // namespace rdtfg::cli
