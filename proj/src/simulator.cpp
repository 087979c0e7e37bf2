#include "rdtfg/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

#include <boost/math/distributions/normal.hpp>

#include "rdtfg/ingest.hpp"

namespace rdtfg::simulator {

namespace {

constexpr double kScoreOffset = 2.5;  // keeps the alert rate near a few hundred per month
constexpr double kAucTolerance = 0.005;
constexpr double kRhoTolerance = 0.01;
constexpr int kMaxAucAttempts = 200;

// Own normal and index draws on top of mt19937_64 so output does not depend on
// the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    double exponential() { return -std::log(uniform()); }

    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
        }
    }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) { return splitmix(splitmix(seed) ^ stream); }

double phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double phi_inv(double p) { return boost::math::quantile(boost::math::normal_distribution<double>(), p); }

double binormal_separation(double auc) {
    require(auc > 0.5 && auc < 1.0, ErrorKind::InfeasibleTarget,
            "AUC target " + std::to_string(auc) + " is outside (0.5, 1)");
    return std::numbers::sqrt2 * phi_inv(auc);
}

std::vector<int> shuffled_labels(Rng& rng, int n, double fraud_rate) {
    const auto positives = static_cast<int>(std::llround(fraud_rate * n));
    require(positives >= 1 && positives < n, ErrorKind::InfeasibleTarget,
            "fraud rate leaves no positives or no negatives");
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    std::fill(labels.begin(), labels.begin() + positives, 1);
    rng.shuffle(labels);
    return labels;
}

Eigen::VectorXd scores_of(const std::vector<double>& latent) {
    Eigen::VectorXd s(static_cast<Eigen::Index>(latent.size()));
    for (std::size_t i = 0; i < latent.size(); ++i) {
        s(static_cast<Eigen::Index>(i)) = phi(latent[i] - kScoreOffset);
    }
    return s;
}

Eigen::VectorXi labels_vec(const std::vector<int>& labels) {
    return Eigen::Map<const Eigen::VectorXi>(labels.data(), static_cast<Eigen::Index>(labels.size()));
}

// Draws latent scores until the empirical AUC of the squashed scores is within
// tolerance of the target.
std::pair<std::vector<double>, double> draw_latent(Rng& rng, const std::vector<int>& labels, double target) {
    const double mu = binormal_separation(target);
    std::vector<double> latent(labels.size());
    const auto y = labels_vec(labels);
    for (int attempt = 0; attempt < kMaxAucAttempts; ++attempt) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            latent[i] = rng.normal() + (labels[i] == 1 ? mu : 0.0);
        }
        const double auc = metrics::roc_auc(scores_of(latent), y);
        if (std::fabs(auc - target) <= kAucTolerance) {
            return {latent, auc};
        }
    }
    fail(ErrorKind::InfeasibleTarget, "could not realize AUC " + std::to_string(target) + " within tolerance");
}

Money draw_amount(Rng& rng, bool fraud) {
    const double dollars = fraud ? std::exp(5.2 + 1.0 * rng.normal()) : std::exp(4.6 + 0.9 * rng.normal());
    return Money::from_cents(std::max<std::int64_t>(1, std::llround(dollars * 100.0)));
}

std::string pad(std::size_t v, int width) {
    std::string s = std::to_string(v);
    return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

double rank_rho(const std::vector<int>& perm) {
    const double n = static_cast<double>(perm.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        const double d = static_cast<double>(perm[i]) - static_cast<double>(i);
        d2 += d * d;
    }
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

// perm[j] is the baseline rank whose importance feature j receives this month.
std::vector<int> rank_permutation(Rng& rng, std::size_t n, std::optional<double> target, double intensity) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    auto bounded_swap = [&] {
        const auto i = static_cast<std::size_t>(rng.below(n - 1));
        const auto reach = std::min<std::size_t>(2, n - 1 - i);
        const auto j = i + 1 + static_cast<std::size_t>(rng.below(reach));
        std::swap(perm[i], perm[j]);
    };
    if (!target) {
        const auto swaps = std::llround(intensity * static_cast<double>(n));
        for (long long s = 0; s < swaps; ++s) {
            bounded_swap();
        }
        return perm;
    }
    require(*target >= -1.0 && *target <= 1.0, ErrorKind::InfeasibleTarget, "rho target outside [-1, 1]");
    for (int attempt = 0; attempt < 20000; ++attempt) {
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t step = 0; step <= 4 * n * n; ++step) {
            const double rho = rank_rho(perm);
            if (std::fabs(rho - *target) <= kRhoTolerance) {
                return perm;
            }
            if (rho < *target - kRhoTolerance) {
                break;
            }
            bounded_swap();
        }
    }
    fail(ErrorKind::InfeasibleTarget, "rho target " + std::to_string(*target) + " unreachable over " +
                                          std::to_string(n) + " features");
}

void rescale_columns(Eigen::MatrixXd& phi_values, const Eigen::VectorXd& target_mean_abs) {
    for (Eigen::Index c = 0; c < phi_values.cols(); ++c) {
        const double mean_abs = phi_values.col(c).cwiseAbs().mean();
        if (mean_abs > 0.0) {
            phi_values.col(c) *= target_mean_abs(c) / mean_abs;
        }
    }
}

std::vector<ProxyProfile> draw_proxies(Rng& rng, const std::vector<std::string>& ids) {
    std::vector<ProxyProfile> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        ProxyProfile p;
        p.transaction_id = id;
        double total = 0.0;
        for (auto& v : p.proxy_probabilities) {
            v = rng.exponential();
            total += v;
        }
        for (auto& v : p.proxy_probabilities) {
            v /= total;
        }
        out.push_back(std::move(p));
    }
    return out;
}

MonthBundle generate_month(const ScenarioSpec& spec, int m, const ImportanceVector& baseline) {
    Rng rng(stream_seed(spec.seed, static_cast<std::uint64_t>(m)));
    MonthBundle b;
    b.index = m;
    b.month = spec.start_month.plus(m - 1);
    b.target_auc = target_auc(spec, m);
    if (static_cast<std::size_t>(m) <= spec.rho_targets.size()) {
        b.target_rho = spec.rho_targets[static_cast<std::size_t>(m - 1)];
    }

    const int n = spec.samples_per_month;
    const auto labels = shuffled_labels(rng, n, spec.fraud_rate);
    auto [latent, auc] = draw_latent(rng, labels, b.target_auc);
    b.realized_auc = auc;

    const std::int64_t start = b.month.start_epoch();
    const std::int64_t span = b.month.next().start_epoch() - start;
    std::vector<std::int64_t> ts(static_cast<std::size_t>(n));
    for (auto& t : ts) {
        t = start + static_cast<std::int64_t>(rng.uniform() * static_cast<double>(span));
    }
    std::sort(ts.begin(), ts.end());
    const auto scores = scores_of(latent);
    const std::string prefix = "T" + b.month.to_string().substr(0, 4) + b.month.to_string().substr(5, 2) + "-";
    b.predictions.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        ScoredSample s;
        s.transaction_id = prefix + pad(static_cast<std::size_t>(i + 1), 6);
        s.timestamp = ts[static_cast<std::size_t>(i)];
        s.score = scores(i);
        s.label = labels[static_cast<std::size_t>(i)];
        s.amount = draw_amount(rng, s.label == 1);
        b.predictions.push_back(std::move(s));
    }

    // SHAP rows: every alert plus the earliest other transactions up to shap_rows.
    const auto alerts = sar::flag_alerts(b.predictions, sar::kDefaultRiskTau);
    const std::set<std::string> alert_set(alerts.begin(), alerts.end());
    std::vector<std::string> rows;
    std::size_t others = spec.shap_rows > static_cast<int>(alerts.size())
                             ? static_cast<std::size_t>(spec.shap_rows) - alerts.size()
                             : 0;
    for (const auto& s : b.predictions) {
        if (alert_set.contains(s.transaction_id)) {
            rows.push_back(s.transaction_id);
        } else if (others > 0) {
            rows.push_back(s.transaction_id);
            --others;
        }
    }
    b.proxies = draw_proxies(rng, rows);

    const auto& features = feature_names();
    const auto k = static_cast<Eigen::Index>(features.size());
    const auto perm = rank_permutation(rng, features.size(), b.target_rho, spec.shap_perturb);
    Eigen::VectorXd month_importance(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        month_importance(j) = baseline.values(perm[static_cast<std::size_t>(j)]);
    }

    const auto r = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd values(r, k);
    for (Eigen::Index i = 0; i < r; ++i) {
        const double w = rng.exponential();
        for (Eigen::Index j = 0; j < k; ++j) {
            const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
            values(i, j) = sign * w * (0.5 + rng.uniform());
        }
    }
    rescale_columns(values, month_importance);

    // Alerts left uncovered keep attributions in only two categories.
    const CoverageTarget cov = static_cast<std::size_t>(m) <= spec.coverage_profile.size()
                                   ? spec.coverage_profile[static_cast<std::size_t>(m - 1)]
                                   : CoverageTarget{};
    std::vector<std::string> cover_order = alerts;
    rng.shuffle(cover_order);
    const auto uncovered = static_cast<std::size_t>(
        std::llround((1.0 - cov.coverage) * static_cast<double>(alerts.size())));
    const auto categories = CategoryMap::ieee_cis_defaults();
    std::unordered_map<std::string, Eigen::Index> row_of;
    for (Eigen::Index i = 0; i < r; ++i) {
        row_of.emplace(rows[static_cast<std::size_t>(i)], i);
    }
    for (std::size_t u = 0; u < uncovered; ++u) {
        const Eigen::Index i = row_of.at(cover_order[u]);
        std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](Eigen::Index a, Eigen::Index c) { return std::fabs(values(i, a)) > std::fabs(values(i, c)); });
        std::set<FeatureCategory> keep;
        for (auto j : order) {
            if (keep.size() < 2) {
                keep.insert(*categories.lookup(features[static_cast<std::size_t>(j)]));
            }
        }
        for (Eigen::Index j = 0; j < k; ++j) {
            if (!keep.contains(*categories.lookup(features[static_cast<std::size_t>(j)]))) {
                values(i, j) = 0.0;
            }
        }
    }

    // From the shock month on, the month's top feature scales with the
    // black_nh proxy quartile.
    if (spec.fairness_shock_month && m >= *spec.fairness_shock_month) {
        Eigen::Index top = 0;
        month_importance.maxCoeff(&top);
        const auto bins = fairness::quartile_bins(b.proxies, ProxyCategory::BlackNh);
        for (std::size_t q = 0; q < bins.size(); ++q) {
            for (const auto& id : bins[q]) {
                const Eigen::Index i = row_of.at(id);
                values(i, top) = std::fabs(values(i, top)) * (1.0 + 2.0 * static_cast<double>(q));
            }
        }
    }
    rescale_columns(values, month_importance);

    b.shap.transaction_ids = rows;
    b.shap.features = features;
    b.shap.values = std::move(values);
    b.realized_rho = metrics::spearman_rho(baseline, b.shap.global_importance());

    std::map<std::string, const ScoredSample*> by_id;
    for (const auto& s : b.predictions) {
        by_id.emplace(s.transaction_id, &s);
    }
    for (const auto& id : alerts) {
        AlertContext ctx;
        ctx.amount = by_id.at(id)->amount;
        const double ratio = 1.5 + 6.5 * rng.uniform();
        ctx.rolling_mean_7d =
            Money::from_cents(std::max<std::int64_t>(1, std::llround(static_cast<double>(ctx.amount->cents()) / ratio)));
        ctx.count_24h = 1 + static_cast<int>(rng.below(12));
        ctx.velocity_percentile = 50.0 + std::floor(50.0 * rng.uniform());
        ctx.device_mismatch = static_cast<int>(rng.below(2));
        ctx.linked_accounts = 1 + static_cast<int>(rng.below(6));
        b.context.emplace(id, std::move(ctx));
    }

    std::vector<std::string> cert_order = alerts;
    rng.shuffle(cert_order);
    const auto certified = static_cast<std::size_t>(std::llround(cov.cert_rate * static_cast<double>(alerts.size())));
    std::set<std::string> certified_set(cert_order.begin(),
                                        cert_order.begin() + static_cast<std::ptrdiff_t>(certified));
    std::size_t c = 0;
    for (const auto& id : alerts) {
        if (!certified_set.contains(id)) {
            continue;
        }
        CertificationRecord rec;
        rec.alert_id = id;
        rec.analyst_id = "analyst-" + pad(1 + rng.below(5), 2);
        rec.certified_at = start + span - 86400 + static_cast<std::int64_t>(c) * 60;
        if (c % 10 == 9) {
            rec.disposition = Disposition::Amended;
            rec.amended_text = "Narrative revised after analyst review.";
        }
        b.certifications.push_back(std::move(rec));
        ++c;
    }
    return b;
}

std::vector<ScoredSample> generate_validation(const ScenarioSpec& spec) {
    Rng rng(stream_seed(spec.seed, 0));
    const int n = spec.validation_samples;
    const auto labels = shuffled_labels(rng, n, spec.fraud_rate);
    auto [latent, auc] = draw_latent(rng, labels, spec.validation_auc);
    (void)auc;
    // Benchmark model: the same latent signal plus independent noise, tuned so
    // its binormal AUC is benchmark_auc.
    const double mu = binormal_separation(spec.validation_auc);
    const double mu_b = binormal_separation(spec.benchmark_auc);
    require(mu_b <= mu, ErrorKind::InfeasibleTarget, "benchmark AUC must not exceed the validation AUC");
    const double sigma = std::sqrt(std::max(0.0, (mu / mu_b) * (mu / mu_b) - 1.0));

    const std::int64_t end = spec.start_month.start_epoch();
    const std::int64_t begin = spec.start_month.plus(-6).start_epoch();
    std::vector<std::int64_t> ts(static_cast<std::size_t>(n));
    for (auto& t : ts) {
        t = begin + static_cast<std::int64_t>(rng.uniform() * static_cast<double>(end - begin));
    }
    std::sort(ts.begin(), ts.end());
    std::vector<ScoredSample> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto u = static_cast<std::size_t>(i);
        ScoredSample s;
        s.transaction_id = "V-" + pad(u + 1, 6);
        s.timestamp = ts[u];
        s.score = phi(latent[u] - kScoreOffset);
        s.score_b = phi((latent[u] + sigma * rng.normal()) / std::sqrt(1.0 + sigma * sigma) - kScoreOffset);
        s.label = labels[u];
        s.amount = draw_amount(rng, s.label == 1);
        out.push_back(std::move(s));
    }
    return out;
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorKind::Io, "cannot write " + path.string());
    body(out);
    out.flush();
    require(out.good(), ErrorKind::Io, "write to " + path.string() + " failed");
}

} // namespace

const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names{"C13", "C1",         "TransactionAmt", "D1",    "velocity_24h",
                                                "M4",  "DeviceInfo", "id_31",          "id_02", "id_19"};
    return names;
}

ImportanceVector baseline_importance() {
    ImportanceVector v;
    v.features = feature_names();
    v.values.resize(10);
    v.values << 0.310, 0.254, 0.198, 0.151, 0.117, 0.092, 0.071, 0.052, 0.036, 0.021;
    return v;
}

double target_auc(const ScenarioSpec& spec, int m) {
    if (static_cast<std::size_t>(m) <= spec.auc_targets.size()) {
        return spec.auc_targets[static_cast<std::size_t>(m - 1)];
    }
    return spec.base_auc - spec.drift_rate * static_cast<double>(m - 1);
}

ScenarioOutput generate(const ScenarioSpec& spec) {
    require(spec.months >= 1, ErrorKind::InvalidArgument, "scenario needs at least one month");
    require(spec.drift_rate >= 0.0, ErrorKind::InvalidArgument, "drift_rate must be non-negative");
    require(spec.shap_perturb >= 0.0 && spec.shap_perturb <= 1.0, ErrorKind::InvalidArgument,
            "shap_perturb must be in [0,1]");
    require(spec.samples_per_month >= 100 && spec.validation_samples >= 100, ErrorKind::InvalidArgument,
            "sample counts must be at least 100");
    require(spec.fraud_rate > 0.0 && spec.fraud_rate < 1.0, ErrorKind::InvalidArgument, "fraud_rate must be in (0,1)");
    require(spec.shap_rows >= 1, ErrorKind::InvalidArgument, "shap_rows must be positive");
    for (const auto& c : spec.coverage_profile) {
        require(c.coverage >= 0.0 && c.coverage <= 1.0 && c.cert_rate >= 0.0 && c.cert_rate <= 1.0,
                ErrorKind::InvalidArgument, "coverage_profile fractions must be in [0,1]");
    }
    for (int m = 1; m <= spec.months; ++m) {
        binormal_separation(target_auc(spec, m));
    }

    ScenarioOutput out;
    out.spec = spec;
    out.baseline = baseline_importance();
    out.validation = generate_validation(spec);
    out.ablation = {
        {{"network", {"C1", "C13", "D1"}}, 0.9205, 0.8911},
        {{"velocity", {"M4", "velocity_24h"}}, 0.9205, 0.9159},
        {{"device", {"DeviceInfo", "id_31"}}, 0.9205, 0.9215},
    };
    out.cross_dataset = {
        {"LSTM", "ULB", 0.9736},
        {"XGBoost", "ULB", 0.9780},
        {"Random Forest", "ULB", 0.9770},
        {"Logistic Regression", "ULB", 0.9706},
    };
    for (int m = 1; m <= spec.months; ++m) {
        out.months.push_back(generate_month(spec, m, out.baseline));
    }
    return out;
}

ScenarioSpec vignette_spec() {
    ScenarioSpec s;
    s.seed = 20251201;
    s.months = 6;
    s.start_month = Month(2025, 8);
    s.auc_targets = {0.92, 0.92, 0.92, 0.92, 0.92, 0.908};
    s.rho_targets = {0.95, 0.93, 0.92, 0.90, 0.74, 0.95};
    s.coverage_profile.assign(6, CoverageTarget{});
    return s;
}

ScenarioSpec spec_from_json(const Json& j) {
    static const std::set<std::string> known{"seed",          "months",          "base_auc",    "drift_rate",
                                             "shap_perturb",  "fairness_shock_month", "coverage_profile",
                                             "samples_per_month", "fraud_rate",  "start_month", "shap_rows",
                                             "auc_targets",   "rho_targets",     "validation_samples",
                                             "validation_auc", "benchmark_auc"};
    require(j.is_object(), ErrorKind::ConfigInvalid, "scenario must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        require(known.contains(key), ErrorKind::ConfigInvalid, "unknown scenario key '" + key + "'");
    }
    ScenarioSpec s;
    try {
        s.seed = get_or<std::uint64_t>(j, "seed", s.seed);
        s.months = get_or<int>(j, "months", s.months);
        s.base_auc = get_or<double>(j, "base_auc", s.base_auc);
        s.drift_rate = get_or<double>(j, "drift_rate", s.drift_rate);
        s.shap_perturb = get_or<double>(j, "shap_perturb", s.shap_perturb);
        if (j.contains("fairness_shock_month") && !j.at("fairness_shock_month").is_null()) {
            s.fairness_shock_month = j.at("fairness_shock_month").get<int>();
        }
        if (j.contains("coverage_profile")) {
            for (const auto& c : j.at("coverage_profile")) {
                for (const auto& [key, value] : c.items()) {
                    require(key == "coverage" || key == "cert_rate", ErrorKind::ConfigInvalid,
                            "unknown coverage_profile key '" + key + "'");
                }
                s.coverage_profile.push_back({get_or<double>(c, "coverage", 1.0), get_or<double>(c, "cert_rate", 1.0)});
            }
        }
        s.samples_per_month = get_or<int>(j, "samples_per_month", s.samples_per_month);
        s.fraud_rate = get_or<double>(j, "fraud_rate", s.fraud_rate);
        if (j.contains("start_month")) {
            const auto month = Month::parse(j.at("start_month").get<std::string>());
            require(month.has_value(), ErrorKind::ConfigInvalid, "start_month must be YYYY-MM");
            s.start_month = *month;
        }
        s.shap_rows = get_or<int>(j, "shap_rows", s.shap_rows);
        s.auc_targets = get_or<std::vector<double>>(j, "auc_targets", s.auc_targets);
        s.rho_targets = get_or<std::vector<double>>(j, "rho_targets", s.rho_targets);
        s.validation_samples = get_or<int>(j, "validation_samples", s.validation_samples);
        s.validation_auc = get_or<double>(j, "validation_auc", s.validation_auc);
        s.benchmark_auc = get_or<double>(j, "benchmark_auc", s.benchmark_auc);
    } catch (const Json::exception& e) {
        fail(ErrorKind::ConfigInvalid, std::string("scenario field has the wrong type: ") + e.what());
    }
    return s;
}

Json spec_to_json(const ScenarioSpec& s) {
    Json cov = Json::array();
    for (const auto& c : s.coverage_profile) {
        cov.push_back({{"coverage", c.coverage}, {"cert_rate", c.cert_rate}});
    }
    return Json{{"seed", s.seed},
                {"months", s.months},
                {"base_auc", s.base_auc},
                {"drift_rate", s.drift_rate},
                {"shap_perturb", s.shap_perturb},
                {"fairness_shock_month", s.fairness_shock_month ? Json(*s.fairness_shock_month) : Json(nullptr)},
                {"coverage_profile", cov},
                {"samples_per_month", s.samples_per_month},
                {"fraud_rate", s.fraud_rate},
                {"start_month", s.start_month.to_string()},
                {"shap_rows", s.shap_rows},
                {"auc_targets", s.auc_targets},
                {"rho_targets", s.rho_targets},
                {"validation_samples", s.validation_samples},
                {"validation_auc", s.validation_auc},
                {"benchmark_auc", s.benchmark_auc}};
}

Json write_scenario(const ScenarioOutput& out, const std::filesystem::path& dir) {
    Json manifest;
    manifest["scenario"] = spec_to_json(out.spec);
    manifest["baseline_importance"] = "baseline_importance.csv";
    manifest["validation"] = {{"predictions", "validation/predictions.csv"},
                              {"ablation", "validation/ablation.csv"},
                              {"cross_dataset", "validation/cross_dataset.csv"}};
    write_file(dir / "baseline_importance.csv", [&](std::ostream& o) { ingest::write_importance(o, out.baseline); });
    write_file(dir / "validation/predictions.csv", [&](std::ostream& o) { ingest::write_predictions(o, out.validation); });
    write_file(dir / "validation/ablation.csv", [&](std::ostream& o) { ingest::write_ablation(o, out.ablation); });
    write_file(dir / "validation/cross_dataset.csv",
               [&](std::ostream& o) { ingest::write_cross_dataset(o, out.cross_dataset); });

    Json months = Json::array();
    for (const auto& b : out.months) {
        const std::string m = b.month.to_string();
        write_file(dir / m / "predictions.csv", [&](std::ostream& o) { ingest::write_predictions(o, b.predictions); });
        write_file(dir / m / "shap.csv", [&](std::ostream& o) { ingest::write_shap(o, b.shap); });
        write_file(dir / m / "proxies.csv", [&](std::ostream& o) { ingest::write_proxies(o, b.proxies); });
        write_file(dir / m / "certifications.jsonl",
                   [&](std::ostream& o) { ingest::write_certifications(o, b.certifications); });
        write_file(dir / m / "context.csv", [&](std::ostream& o) { ingest::write_context(o, b.context); });
        months.push_back({{"index", b.index},
                          {"month", m},
                          {"target_auc", b.target_auc},
                          {"realized_auc", b.realized_auc},
                          {"target_rho", b.target_rho ? Json(*b.target_rho) : Json(nullptr)},
                          {"realized_rho", b.realized_rho},
                          {"alerts", b.context.size()},
                          {"predictions", m + "/predictions.csv"},
                          {"shap", m + "/shap.csv"},
                          {"proxies", m + "/proxies.csv"},
                          {"certifications", m + "/certifications.jsonl"},
                          {"context", m + "/context.csv"}});
    }
    manifest["months"] = months;
    write_file(dir / "manifest.json", [&](std::ostream& o) { o << manifest.dump(2) << '\n'; });
    return manifest;
}

} // namespace rdtfg::simulator
