// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "rdtfg/audit.hpp"
#include "rdtfg/blend.hpp"
#include "rdtfg/drift.hpp"
#include "rdtfg/economics.hpp"
#include "rdtfg/fairness.hpp"
#include "rdtfg/ingest.hpp"
#include "rdtfg/metrics.hpp"
#include "rdtfg/sar.hpp"
#include "rdtfg/scoring.hpp"
#include "rdtfg/serialize.hpp"

using namespace rdtfg;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures{RDTFG_FIXTURES};
const std::string kCli{RDTFG_CLI};

// Collects failed checks; the first few are echoed on the FAIL line.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (!ok) {
            failures_.push_back(what);
        }
    }
    void note(std::string text) { notes_.push_back(std::move(text)); }
    bool ok() const { return failures_.empty(); }
    int checks() const { return checks_; }
    const std::vector<std::string>& failures() const { return failures_; }
    const std::vector<std::string>& notes() const { return notes_; }

private:
    int checks_ = 0;
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

std::string fmt(double v, int precision = 6) {
    std::ostringstream o;
    o.precision(precision);
    o << v;
    return o.str();
}

class TempDir {
public:
    TempDir() {
        std::string templ = (fs::temp_directory_path() / "rdtfg-accept-XXXXXX").string();
        if (::mkdtemp(templ.data()) == nullptr) {
            throw std::runtime_error("mkdtemp failed");
        }
        path_ = templ;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

std::string quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) {
        q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    }
    return q + "'";
}

struct CliRun {
    int code = -1;
    std::string out;
};

// stdout captured, stderr left on the console for diagnosis
CliRun cli(const std::vector<std::string>& args) {
    std::string cmd = quote(kCli);
    for (const auto& a : args) {
        cmd += " " + quote(a);
    }
    CliRun r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return r;
    }
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), n);
    }
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

// ---- 1 ----------------------------------------------------------------------

double brute_auc(const Eigen::VectorXd& s, const Eigen::VectorXi& y) {
    double wins = 0.0;
    double pairs = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (y(i) != 1) {
            continue;
        }
        for (Eigen::Index j = 0; j < s.size(); ++j) {
            if (y(j) == 0) {
                wins += s(i) > s(j) ? 1.0 : (s(i) == s(j) ? 0.5 : 0.0);
                pairs += 1.0;
            }
        }
    }
    return wins / pairs;
}

void auc_oracle(Check& c) {
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<int> size(2, 1000);
    std::uniform_int_distribution<int> levels(2, 60);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int inst = 0; inst < 200; ++inst) {
        const int n = size(rng);
        const int lv = levels(rng); // few levels means many ties
        const double prevalence = 0.05 + 0.9 * u(rng);
        Eigen::VectorXd s(n);
        Eigen::VectorXi y(n);
        for (int i = 0; i < n; ++i) {
            y(i) = u(rng) < prevalence ? 1 : 0;
            s(i) = std::floor(u(rng) * lv) / lv + (y(i) ? 0.1 * u(rng) : 0.0);
            s(i) = std::floor(s(i) * lv) / lv;
        }
        y(0) = 1;
        y(n - 1) = 0;
        const double diff = std::fabs(metrics::roc_auc(s, y) - brute_auc(s, y));
        worst = std::max(worst, diff);
        c.expect(diff <= 1e-12, "instance " + std::to_string(inst) + " differs by " + fmt(diff));
    }
    c.note("max |diff| " + fmt(worst, 3));
}

// ---- 2 ----------------------------------------------------------------------

struct PairedFixture {
    Eigen::VectorXi y;
    Eigen::VectorXd a;
    Eigen::VectorXd b;
};

PairedFixture load_delong_fixture() {
    std::ifstream in(kFixtures / "delong_n40.csv");
    std::string line;
    std::getline(in, line); // header
    std::vector<int> y;
    std::vector<double> a;
    std::vector<double> b;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::string f;
        std::getline(row, f, ',');
        y.push_back(std::stoi(f));
        std::getline(row, f, ',');
        a.push_back(std::stod(f));
        std::getline(row, f, ',');
        b.push_back(std::stod(f));
    }
    PairedFixture p;
    p.y = Eigen::Map<Eigen::VectorXi>(y.data(), static_cast<Eigen::Index>(y.size()));
    p.a = Eigen::Map<Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
    p.b = Eigen::Map<Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
    return p;
}

void delong_sanity(Check& c) {
    std::mt19937_64 rng(2002);
    std::normal_distribution<double> n01;
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 50 + 25 * rep;
        Eigen::VectorXi y(n);
        Eigen::VectorXd a(n);
        Eigen::VectorXd b(n);
        for (int i = 0; i < n; ++i) {
            y(i) = i % 3 == 0;
            a(i) = std::round((n01(rng) + (y(i) ? 1.2 : 0.0)) * 4.0) / 4.0;
            b(i) = n01(rng) + (y(i) ? 0.7 : 0.0);
        }
        const auto self = metrics::delong_test(a, a, y);
        c.expect(self.z_statistic == 0.0, "self z != 0 at rep " + std::to_string(rep));
        const auto ab = metrics::delong_test(a, b, y);
        const auto ba = metrics::delong_test(b, a, y);
        c.expect(ab.z_statistic == -ba.z_statistic, "antisymmetry broken at rep " + std::to_string(rep));
    }

    const auto fx = load_delong_fixture();
    c.expect(fx.y.size() == 40, "fixture does not have 40 rows");
    const auto dl = metrics::delong_test(fx.a, fx.b, fx.y);

    // paired bootstrap: resample cases, keep both scores of each case together
    std::mt19937_64 boot_rng(40);
    std::uniform_int_distribution<Eigen::Index> pick(0, fx.y.size() - 1);
    std::vector<double> deltas;
    deltas.reserve(10000);
    Eigen::VectorXi yb(fx.y.size());
    Eigen::VectorXd ab(fx.y.size());
    Eigen::VectorXd bb(fx.y.size());
    int degenerate = 0;
    while (static_cast<int>(deltas.size()) < 10000) {
        for (Eigen::Index i = 0; i < fx.y.size(); ++i) {
            const auto k = pick(boot_rng);
            yb(i) = fx.y(k);
            ab(i) = fx.a(k);
            bb(i) = fx.b(k);
        }
        const auto positives = yb.sum();
        if (positives == 0 || positives == yb.size()) {
            ++degenerate;
            continue;
        }
        deltas.push_back(metrics::roc_auc(ab, yb) - metrics::roc_auc(bb, yb));
    }
    const double mean = std::accumulate(deltas.begin(), deltas.end(), 0.0) / static_cast<double>(deltas.size());
    double ss = 0.0;
    for (double d : deltas) {
        ss += (d - mean) * (d - mean);
    }
    const double boot_var = ss / static_cast<double>(deltas.size() - 1);
    const double rel = std::fabs(dl.variance_diff - boot_var) / boot_var;
    c.expect(rel <= 0.15, "variance off by " + fmt(100 * rel, 3) + "%");
    c.note("var DeLong " + fmt(dl.variance_diff) + " vs bootstrap " + fmt(boot_var) + " (" + fmt(100 * rel, 3) +
           "%, " + std::to_string(degenerate) + " degenerate draws skipped)");
}

// ---- 3 ----------------------------------------------------------------------

// Midranks written out independently of the library.
std::vector<double> oracle_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j < idx.size() && v[idx[j]] == v[idx[i]]) {
            ++j;
        }
        for (std::size_t k = i; k < j; ++k) {
            r[idx[k]] = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        }
        i = j;
    }
    return r;
}

// Rank-sum part of H; the tie correction is constant under permutation.
double rank_statistic(const std::vector<double>& ranks, const std::vector<int>& sizes) {
    double s = 0.0;
    std::size_t off = 0;
    for (int n : sizes) {
        double r = 0.0;
        for (int k = 0; k < n; ++k) {
            r += ranks[off + static_cast<std::size_t>(k)];
        }
        s += r * r / n;
        off += static_cast<std::size_t>(n);
    }
    return s;
}

double permutation_p(const std::vector<double>& pooled, const std::vector<int>& sizes, int resamples,
                     std::uint64_t seed) {
    auto ranks = oracle_ranks(pooled);
    const double observed = rank_statistic(ranks, sizes);
    std::mt19937_64 rng(seed);
    int hits = 0;
    for (int b = 0; b < resamples; ++b) {
        std::shuffle(ranks.begin(), ranks.end(), rng);
        if (rank_statistic(ranks, sizes) >= observed - 1e-9) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / resamples;
}

void kw_spearman_oracles(Check& c) {
    // quartile-style layouts: three or four groups of five to eight, some with ties
    std::mt19937_64 rng(3003);
    std::normal_distribution<double> n01;
    std::uniform_int_distribution<int> group_count(3, 4);
    std::uniform_int_distribution<int> group_size(5, 8);
    std::uniform_real_distribution<double> shift(0.0, 1.2);
    double worst = 0.0;
    for (int ci = 0; ci < 12; ++ci) {
        const bool integer_values = ci % 3 == 2;
        std::vector<int> sizes(static_cast<std::size_t>(group_count(rng)));
        std::vector<Eigen::VectorXd> groups;
        std::vector<double> pooled;
        for (auto& n : sizes) {
            n = group_size(rng);
            const double mu = ci % 4 == 3 ? 0.0 : shift(rng);
            Eigen::VectorXd v(n);
            for (int i = 0; i < n; ++i) {
                double x = n01(rng) + mu;
                if (integer_values) {
                    x = std::round(x * 2.0);
                }
                v(i) = x;
                pooled.push_back(x);
            }
            groups.push_back(v);
        }
        const auto kw = metrics::kruskal_wallis(groups);
        const double oracle = permutation_p(pooled, sizes, 100000, 77 + static_cast<std::uint64_t>(ci));
        const double diff = std::fabs(kw.p_value - oracle);
        worst = std::max(worst, diff);
        c.expect(diff <= 0.02, "case " + std::to_string(ci) + ": p " + fmt(kw.p_value, 4) + " vs permutation " +
                                   fmt(oracle, 4));
    }
    c.note("KW max |p - p_perm| " + fmt(worst, 3));

    const auto fixed = metrics::kruskal_wallis(
        {Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(4, 5, 6), Eigen::Vector3d(7, 8, 9)});
    c.expect(std::fabs(fixed.h_statistic - 7.2) < 1e-12, "H = " + fmt(fixed.h_statistic, 17));
    c.expect(std::fabs(fixed.p_value - std::exp(-3.6)) < 1e-12, "p = " + fmt(fixed.p_value, 17));
    c.expect(std::fabs(fixed.p_value - 0.0273) < 5e-5, "p not ~0.0273");

    std::array<int, 3> pa{1, 2, 3};
    int pairs = 0;
    do {
        std::array<int, 3> pb{1, 2, 3};
        do {
            double d2 = 0.0;
            for (int i = 0; i < 3; ++i) {
                d2 += (pa[i] - pb[i]) * (pa[i] - pb[i]);
            }
            const double closed = 1.0 - 6.0 * d2 / (3.0 * (9.0 - 1.0));
            const double rho = metrics::spearman_rho(Eigen::Vector3d(pa[0], pa[1], pa[2]),
                                                     Eigen::Vector3d(pb[0], pb[1], pb[2]));
            c.expect(rho == closed, "spearman " + fmt(rho, 17) + " vs closed form " + fmt(closed, 17));
            ++pairs;
        } while (std::next_permutation(pb.begin(), pb.end()));
    } while (std::next_permutation(pa.begin(), pa.end()));
    c.expect(pairs == 36, "expected 36 rank pairs");
}

// ---- 4 ----------------------------------------------------------------------

FairnessFinding finding_with(double p_adj) {
    FairnessFinding f;
    f.feature = "C13";
    f.kw.p_value = p_adj;
    f.kw.p_adjusted = p_adj;
    f.verdict = fairness::classify(p_adj);
    return f;
}

void boundary_matrix(Check& c) {
    using enum Color;
    constexpr double e = 1e-9;
    struct Row {
        std::string name;
        double threshold;
        std::function<Color(double)> score;
        std::array<Color, 3> expected; // at t - e, t, t + e
    };
    const std::vector<Row> rows{
        {"auc green", 0.90, [](double x) { return scoring::occ_score(x, 20, 0.0, true).color; }, {Amber, Green, Green}},
        {"auc amber", 0.87, [](double x) { return scoring::occ_score(x, 20, 0.0, true).color; }, {Red, Amber, Amber}},
        {"z green", 17.0, [](double x) { return scoring::occ_score(0.95, x, 0.0, true).color; }, {Amber, Green, Green}},
        {"z amber", 10.0, [](double x) { return scoring::occ_score(0.95, x, 0.0, true).color; }, {Red, Amber, Amber}},
        {"p max", 0.001, [](double x) { return scoring::occ_score(0.95, 20, x, true).color; }, {Green, Green, Red}},
        {"temporal green", 0.85, [](double x) { return scoring::drift_score(x, 0.95).color; }, {Amber, Green, Green}},
        {"temporal amber", 0.82, [](double x) { return scoring::drift_score(x, 0.95).color; }, {Red, Amber, Amber}},
        {"rho green", 0.80, [](double x) { return scoring::drift_score(0.90, x).color; }, {Amber, Green, Green}},
        {"rho amber", 0.75, [](double x) { return scoring::drift_score(0.90, x).color; }, {Red, Amber, Amber}},
        {"fairness clear", 0.12,
         [](double x) {
             const std::vector<FairnessFinding> f{finding_with(0.9), finding_with(x)};
             return scoring::fairness_score(f).color;
         },
         {Amber, Amber, Green}},
        {"fairness violation", 0.05,
         [](double x) {
             const std::vector<FairnessFinding> f{finding_with(0.9), finding_with(x)};
             return scoring::fairness_score(f).color;
         },
         {Red, Amber, Amber}},
        {"coverage green", 0.95, [](double x) { return scoring::sar_score(x, 1.0).color; }, {Amber, Green, Green}},
        {"coverage amber", 0.85, [](double x) { return scoring::sar_score(x, 1.0).color; }, {Red, Amber, Amber}},
    };
    for (const auto& r : rows) {
        const std::array<double, 3> xs{r.threshold - e, r.threshold, r.threshold + e};
        for (std::size_t i = 0; i < 3; ++i) {
            const Color got = r.score(xs[i]);
            c.expect(got == r.expected[i], r.name + " at " + fmt(xs[i], 12) + " gave " + std::string(to_string(got)));
        }
    }
    c.expect(scoring::sar_score(0.99, 1.0 - e).color == Red, "missing certification not Red");

    const Month m{2025, 12};
    for (int code = 0; code < 81; ++code) {
        std::array<HealthScore, 4> s;
        int k = code;
        double expected = 1.0;
        for (auto d : kDimensions) {
            auto& h = s[static_cast<std::size_t>(d)];
            h.dimension = d;
            h.color = static_cast<Color>(k % 3);
            expected = std::min(expected, numeric(h.color));
            k /= 3;
        }
        const auto rec = scoring::compose_rfi(m, s);
        c.expect(rec.rfi == expected, "combination " + std::to_string(code) + " rfi " + fmt(rec.rfi));
        const auto status = expected == 1.0   ? FitnessStatus::ExamReady
                            : expected == 0.5 ? FitnessStatus::Watch
                                              : FitnessStatus::RemediationRequired;
        c.expect(rec.status == status, "combination " + std::to_string(code) + " status");
        c.expect(rec.escalate_to_cro == (expected == 0.0), "combination " + std::to_string(code) + " escalation");
    }
}

// ---- 5 ----------------------------------------------------------------------

void paper_replays(Check& c) {
    const auto dr = drift::drift_report(0.9205, 0.8579);
    c.expect(dr.delta_auc == 0.8579 - 0.9205, "delta is not the exact difference");
    c.expect(std::fabs(dr.delta_auc - (-0.0626)) < 1e-15, "delta " + fmt(dr.delta_auc, 17));
    c.note("delta_auc " + fmt(dr.delta_auc, 17));

    const std::vector<drift::AblationInput> abl{
        {{"device", {"DeviceInfo", "id_31"}}, 0.9205, 0.9215},
        {{"velocity", {"velocity_24h", "M4"}}, 0.9205, 0.9159},
        {{"network", {"C1", "C13", "D1"}}, 0.9205, 0.8911},
    };
    const auto ledger = drift::ablation_ledger(abl);
    c.expect(ledger.size() == 3, "ledger size");
    if (ledger.size() == 3) {
        c.expect(ledger[0].feature_group.name == "network" && ledger[1].feature_group.name == "velocity" &&
                     ledger[2].feature_group.name == "device",
                 "ablation order");
        c.expect(std::fabs(ledger[0].delta_auc + 0.0294) < 1e-15, "network delta " + fmt(ledger[0].delta_auc, 17));
        c.expect(std::fabs(ledger[1].delta_auc + 0.0046) < 1e-15, "velocity delta " + fmt(ledger[1].delta_auc, 17));
        c.expect(std::fabs(ledger[2].delta_auc - 0.0010) < 1e-15, "device delta " + fmt(ledger[2].delta_auc, 17));
    }

    c.expect(metrics::bonferroni(0.004, 30) == 0.12, "bonferroni " + fmt(metrics::bonferroni(0.004, 30), 17));

    Eigen::VectorXd a(1);
    Eigen::VectorXd b(1);
    a << 0.9;
    b << 0.5;
    const double mixed = Eigen::VectorXd(blend::blend(a, b, 0.6))(0);
    c.expect(std::fabs(mixed - 0.74) < 1e-15, "blend " + fmt(mixed, 17));

    c.expect(sar::render_ratio(Money::from_dollars(842), Money::from_dollars(162)) == "5.2×", "render_ratio");
    AlertShap alert;
    alert.alert_id = "A1";
    alert.features = {"TransactionAmt", "DeviceInfo", "velocity_24h", "C1"};
    alert.phi = Eigen::Vector4d(0.31, 0.28, 0.24, 0.01);
    AlertContext ctx;
    ctx.amount = Money::from_dollars(842);
    ctx.rolling_mean_7d = Money::from_dollars(162);
    ctx.device_mismatch = 1;
    ctx.count_24h = 7;
    ctx.velocity_percentile = 97;
    const auto set = sar::generate_reason_codes(alert, CategoryMap::ieee_cis_defaults(), ctx);
    c.expect(!set.codes.empty() && set.codes[0].deviation_statement.find("5.2×") != std::string::npos,
             "reason code statement lacks 5.2×");
}

// ---- 6 ----------------------------------------------------------------------

void cost_table(Check& c) {
    const std::vector<std::pair<std::string, std::int64_t>> printed_tp{
        {"XGBoost", 3360}, {"LSTM", 2575}, {"Logistic Regression", 2521}, {"Random Forest", 2025}};
    const auto& table = economics::reference_table();
    for (const auto& [model, tp] : printed_tp) {
        const auto it = std::find_if(table.begin(), table.end(), [&](const auto& r) { return r.model == model; });
        c.expect(it != table.end(), model + " missing from reference table");
        if (it == table.end()) {
            continue;
        }
        const auto derived = economics::derive_counts(it->recall, it->precision, economics::kReferenceTotalFraud);
        c.expect(std::llabs(derived.tp - tp) <= 1, model + " derived tp " + std::to_string(derived.tp));
    }

    const auto rows = economics::comparison(table, economics::kReferenceTotalFraud);
    int deviating = 0;
    for (const auto& row : rows) {
        // 151.90 per caught fraud, 25.00 per false positive, in cents
        const std::int64_t cents = row.reference.tp * 15190 - row.reference.fp * 2500;
        c.expect(row.formula.net.cents() == cents, row.reference.model + " formula net");
        c.expect(row.deviates == (row.reference.printed_net.cents() != cents), row.reference.model + " deviation flag");
        deviating += row.deviates ? 1 : 0;
        if (row.reference.model == "XGBoost") {
            c.expect(row.formula.net == Money::from_dollars(484859), "XGBoost formula net");
            c.expect(row.reference.printed_net == Money::from_dollars(485499), "XGBoost printed net");
            c.expect(row.deviates, "XGBoost deviation not flagged");
        }
    }
    c.note(std::to_string(deviating) + " of " + std::to_string(rows.size()) + " rows deviate from the printed net");

    const auto run = cli({"economics"});
    c.expect(run.code == 0, "economics command exit " + std::to_string(run.code));
    if (run.code == 0) {
        const auto j = Json::parse(run.out);
        c.expect(j.at("deviating_rows") == deviating, "deviating_rows count");
        bool xgb_flagged = false;
        for (const auto& r : j.at("reference_comparison")) {
            if (r.at("model") == "XGBoost") {
                xgb_flagged = r.at("deviates") == true && r.at("formula").at("net") == "484859.00" &&
                              r.at("published_net") == "485499.00";
            }
        }
        c.expect(xgb_flagged, "XGBoost deviation missing from the economics report");
    }
}

// ---- 7 ----------------------------------------------------------------------

void vignette(Check& c) {
    TempDir dir;
    const auto sim = dir.path() / "sim";
    const auto audit_dir = dir.path() / "audit";
    const auto s = cli({"simulate", "--scenario", "vignette", "--out", sim.string()});
    c.expect(s.code == 0, "simulate exit " + std::to_string(s.code));
    if (s.code != 0) {
        return;
    }
    const auto v = cli({"validate", "--predictions", (sim / "validation/predictions.csv").string(), "--ablation",
                        (sim / "validation/ablation.csv").string(), "--cross-dataset",
                        (sim / "validation/cross_dataset.csv").string()});
    c.expect(v.code == 0, "validate exit " + std::to_string(v.code));
    if (v.code != 0) {
        return;
    }
    dump(dir.path() / "validation.json", v.out);

    std::vector<std::string> months;
    for (const auto& e : fs::directory_iterator(sim)) {
        const auto name = e.path().filename().string();
        if (e.is_directory() && name.size() == 7 && name[4] == '-') {
            months.push_back(name);
        }
    }
    std::sort(months.begin(), months.end());
    c.expect(months.size() == 6, "expected six months, got " + std::to_string(months.size()));
    if (months.size() != 6) {
        return;
    }

    for (std::size_t i = 0; i < months.size(); ++i) {
        const auto md = sim / months[i];
        std::vector<std::string> args{"monitor",      "--month",  months[i],
                                      "--audit-dir",  audit_dir.string(),
                                      "--predictions", (md / "predictions.csv").string(),
                                      "--shap",       (md / "shap.csv").string(),
                                      "--certs",      (md / "certifications.jsonl").string(),
                                      "--context",    (md / "context.csv").string(),
                                      "--baseline",   (sim / "baseline_importance.csv").string(),
                                      "--validation", (dir.path() / "validation.json").string()};
        if (i == 0) {
            // the fairness screen is annual; later months carry it forward
            args.push_back("--proxies");
            args.push_back((md / "proxies.csv").string());
        }
        const auto r = cli(args);
        c.expect(r.code == 0, months[i] + " monitor exit " + std::to_string(r.code));
        if (r.code != 0) {
            return;
        }
        const auto j = Json::parse(r.out);
        const auto& rec = j.at("record");
        const std::string drift = rec.at("scores").at(1).at("color");
        const double rho = j.at("rho");
        const double auc = rec.at("monthly_auc");
        const bool flag = rec.at("retraining_flag");
        c.note(months[i] + " drift " + drift + " rho " + fmt(rho, 4) + " auc " + fmt(auc, 4));
        if (i < 4) {
            c.expect(drift == "Green", months[i] + " drift " + drift);
            c.expect(!flag, months[i] + " retraining flagged");
        } else if (i == 4) {
            c.expect(drift == "Red", months[i] + " drift " + drift);
            c.expect(std::fabs(rho - 0.74) <= 0.01, months[i] + " rho " + fmt(rho));
            c.expect(flag, months[i] + " retraining not flagged");
            bool fourteen = false;
            for (const auto& t : rec.at("triggers")) {
                fourteen = fourteen || (t.at("dimension") == "drift_monitoring" && t.at("deadline_days") == 14 &&
                                        t.at("severity") == "red_escalation");
            }
            c.expect(fourteen, months[i] + " lacks a 14-day drift trigger");
        } else {
            c.expect(drift == "Green", months[i] + " drift " + drift);
            c.expect(std::fabs(auc - 0.908) <= 0.01, months[i] + " auc " + fmt(auc));
            c.expect(!flag, months[i] + " retraining flagged");
        }
    }
    const auto verify = cli({"audit", "verify", "--audit-dir", audit_dir.string()});
    c.expect(verify.code == 0 && Json::parse(verify.out).at("ok").get<bool>(), "audit store does not verify");
}

// ---- 8 ----------------------------------------------------------------------

void two_month_rule(Check& c) {
    std::vector<RfiRecord> history;
    std::vector<bool> flags;
    Month m{2025, 1};
    for (double auc : {0.91, 0.84, 0.84}) {
        MonthInputs in;
        in.month = m;
        in.occ = {0.92, 20.0, 0.0, true};
        in.monthly_auc = auc;
        in.rho = 0.95;
        in.findings = {finding_with(0.5)};
        const auto out = scoring::monitoring_step(history, in);
        flags.push_back(out.retraining_flag);
        history.push_back(out.record);
        m = m.next();
    }
    c.expect(!flags[0], "month 1 flagged");
    c.expect(!flags[1], "month 2 flagged");
    c.expect(flags[2], "month 3 not flagged");
}

// ---- 9 ----------------------------------------------------------------------

void audit_tamper(Check& c) {
    TempDir dir;
    {
        audit::Writer w(dir.path());
        const std::array kinds{AuditKind::RfiRecord,     AuditKind::DriftReport, AuditKind::FairnessScreen,
                               AuditKind::SarBatch,      AuditKind::Certification, AuditKind::ConfigChange};
        for (int i = 0; i < 50; ++i) {
            Json payload{{"i", i}, {"auc", 0.9 - 0.001 * i}, {"note", std::string(static_cast<std::size_t>(i % 7), 'x')}};
            w.append(kinds[static_cast<std::size_t>(i) % kinds.size()], payload, 1760000000 + 3600 * i);
        }
    }
    const auto clean = audit::verify(dir.path());
    c.expect(clean.ok && clean.entries.size() == 50, "unmutated store does not verify");

    const auto file = dir.path() / "audit.jsonl";
    const std::string original = slurp(file);
    std::vector<std::size_t> line_of(original.size());
    std::size_t line = 0;
    for (std::size_t i = 0; i < original.size(); ++i) {
        line_of[i] = line;
        if (original[i] == '\n') {
            ++line;
        }
    }
    std::mt19937_64 rng(9009);
    std::uniform_int_distribution<std::size_t> pos(0, original.size() - 1);
    std::uniform_int_distribution<int> mask(1, 255);
    int detected = 0;
    for (int k = 0; k < 100; ++k) {
        std::string text = original;
        const auto p = pos(rng);
        text[p] = static_cast<char>(static_cast<unsigned char>(text[p]) ^ static_cast<unsigned char>(mask(rng)));
        dump(file, text);
        const auto r = audit::verify(dir.path());
        const auto expected = static_cast<std::int64_t>(line_of[p]);
        const bool ok = !r.ok && r.first_broken_sequence == expected;
        detected += ok ? 1 : 0;
        c.expect(ok, "mutation at byte " + std::to_string(p) + " (line " + std::to_string(expected) + ") reported " +
                         (r.ok ? std::string("ok") : std::to_string(r.first_broken_sequence.value_or(-1))));
    }
    dump(file, original);
    c.expect(audit::verify(dir.path()).ok, "restored store does not verify");
    c.note(std::to_string(detected) + "/100 mutations located");
}

// ---- 10 ---------------------------------------------------------------------

template <typename T>
void totals(Check& c, const std::string& name, const Ingested<T>& in, std::size_t rows, std::size_t accepted) {
    c.expect(in.accepted() + in.rejects.size() == in.input_rows, name + " totals do not add up");
    c.expect(in.input_rows == rows, name + " input rows " + std::to_string(in.input_rows));
    c.expect(in.accepted() == accepted, name + " accepted " + std::to_string(in.accepted()));
}

template <typename T>
bool json_round_trip(const T& v) {
    const Json j = v;
    return Json::parse(j.dump()).get<T>() == v;
}

void ingestion(Check& c) {
    totals(c, "predictions", ingest::ingest_predictions(kFixtures / "predictions_adversarial.csv"), 12, 2);
    totals(c, "shap", ingest::ingest_shap(kFixtures / "shap_ragged.csv"), 6, 2);
    totals(c, "proxies", ingest::ingest_proxies(kFixtures / "proxies_bad.csv"), 7, 3);
    totals(c, "certifications", ingest::ingest_certifications(kFixtures / "certifications_bad.jsonl"), 6, 3);

    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> n01;

    std::vector<ScoredSample> preds(300);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        preds[i].transaction_id = i % 9 == 0 ? "q,\"" + std::to_string(i) + "\"" : "tx" + std::to_string(i);
        preds[i].timestamp = 1700000000 + static_cast<std::int64_t>(i);
        preds[i].score = i < 2 ? static_cast<double>(i) : u(rng);
        if (i % 2 == 0) {
            preds[i].score_b = u(rng);
        }
        preds[i].label = u(rng) < 0.2;
        preds[i].amount = Money::from_cents(static_cast<std::int64_t>(u(rng) * 1e6));
    }
    std::stringstream pb;
    ingest::write_predictions(pb, preds);
    c.expect(ingest::parse_predictions(pb).records == preds, "predictions round-trip");

    ShapPanel panel;
    panel.features = {"C13", "TransactionAmt", "id_31", "velocity_24h"};
    panel.values.resize(40, 4);
    for (int r = 0; r < 40; ++r) {
        panel.transaction_ids.push_back("tx" + std::to_string(r));
        for (int k = 0; k < 4; ++k) {
            panel.values(r, k) = n01(rng) * std::pow(10.0, -(r % 6));
        }
    }
    std::stringstream sb;
    ingest::write_shap(sb, panel);
    c.expect(ingest::parse_shap(sb).records == panel, "shap round-trip");

    std::vector<ProxyProfile> profiles;
    for (int i = 0; i < 30; ++i) {
        profiles.push_back({"tx" + std::to_string(i), {u(rng), u(rng), i == 0 ? 0.0 : u(rng), i == 1 ? 1.0 : u(rng)}});
    }
    std::stringstream xb;
    ingest::write_proxies(xb, profiles);
    c.expect(ingest::parse_proxies(xb).records == profiles, "proxies round-trip");

    const std::vector<CertificationRecord> certs{{"a", "analyst-1", 1760000000, Disposition::Certified, std::nullopt},
                                                {"b", "analyst-2", 1760000001, Disposition::Amended, "new, \"quoted\""},
                                                {"c", "analyst-3", 1760000002, Disposition::Rejected, std::nullopt}};
    std::stringstream cb;
    ingest::write_certifications(cb, certs);
    c.expect(ingest::parse_certifications(cb).records == certs, "certifications round-trip");

    const auto imp = panel.global_importance();
    std::stringstream ib;
    ingest::write_importance(ib, imp);
    const auto imp_back = ingest::parse_importance(ib).records;
    c.expect(imp_back.features == imp.features && imp_back.values == imp.values, "importance round-trip");

    std::map<std::string, AlertContext> ctx;
    AlertContext full;
    full.amount = Money::from_dollars(842);
    full.rolling_mean_7d = Money::from_cents(16237);
    full.count_24h = 7;
    full.velocity_percentile = 97.25;
    full.device_mismatch = 1;
    full.linked_accounts = 3;
    ctx["full"] = full;
    ctx["empty"] = AlertContext{};
    std::stringstream tb;
    ingest::write_context(tb, ctx);
    const auto ctx_back = ingest::parse_context(tb).records;
    const auto same_ctx = [](const AlertContext& x, const AlertContext& y) {
        return x.amount == y.amount && x.rolling_mean_7d == y.rolling_mean_7d && x.count_24h == y.count_24h &&
               x.velocity_percentile == y.velocity_percentile && x.device_mismatch == y.device_mismatch &&
               x.linked_accounts == y.linked_accounts;
    };
    c.expect(ctx_back.size() == 2 && same_ctx(ctx_back.at("full"), full) && same_ctx(ctx_back.at("empty"), {}),
             "context round-trip");

    const std::vector<drift::AblationInput> abl{{{"network", {"C1", "C13"}}, 0.9205, 0.8911},
                                                {{"device", {"DeviceInfo"}}, 0.9205, 0.9215}};
    std::stringstream ab;
    ingest::write_ablation(ab, abl);
    const auto abl_back = ingest::parse_ablation(ab).records;
    bool abl_same = abl_back.size() == abl.size();
    for (std::size_t i = 0; abl_same && i < abl.size(); ++i) {
        abl_same = abl_back[i].group.name == abl[i].group.name && abl_back[i].group.members == abl[i].group.members &&
                   abl_back[i].auc_full == abl[i].auc_full && abl_back[i].auc_without == abl[i].auc_without;
    }
    c.expect(abl_same, "ablation round-trip");

    const std::vector<CrossDatasetEntry> cross{{"LSTM", "ULB", 0.9736}, {"XGBoost", "PaySim", 0.9812}};
    std::stringstream db;
    ingest::write_cross_dataset(db, cross);
    const auto cross_back = ingest::parse_cross_dataset(db).records;
    bool cross_same = cross_back.size() == cross.size();
    for (std::size_t i = 0; cross_same && i < cross.size(); ++i) {
        cross_same = cross_back[i].model == cross[i].model && cross_back[i].dataset == cross[i].dataset &&
                     cross_back[i].auc == cross[i].auc;
    }
    c.expect(cross_same, "cross-dataset round-trip");

    RfiRecord rec;
    rec.month = Month{2025, 12};
    for (auto d : kDimensions) {
        auto& s = rec.scores[static_cast<std::size_t>(d)];
        s.dimension = d;
        s.color = Color::Amber;
        s.inputs = {{"x", 0.1 * static_cast<double>(d) + 1e-17}, {"inf", HUGE_VAL}, {"nan", std::nan("")}};
        s.notes = {"note"};
    }
    rec.rfi = 0.5;
    rec.status = FitnessStatus::Watch;
    rec.triggers.push_back({Dimension::DriftMonitoring, Severity::RedEscalation, "retrain", 14, "2025-12-31", true});
    rec.monthly_auc = 0.84;
    rec.retraining_flag = true;
    c.expect(json_round_trip(rec), "RFI record round-trip");

    ReasonCodeSet set;
    set.alert_id = "A";
    set.codes.push_back({1, 0.31, "TransactionAmt", FeatureCategory::Amount, "Amount anomaly", "stmt", "cat", false});
    c.expect(json_round_trip(set), "reason codes round-trip");

    FairnessFinding f;
    f.feature = "C13";
    f.category = ProxyCategory::Hispanic;
    f.feature_mean_abs_shap = 0.0123;
    f.kw = {7.2, 2, 0.0273, 0.819, 30};
    c.expect(json_round_trip(f), "fairness finding round-trip");

    c.expect(json_round_trip(DriftReport{0.9205, 0.8579, 0.8579 - 0.9205, 0.85, true}), "drift report round-trip");
    c.expect(json_round_trip(AblationEntry{{"network", {"C1"}}, 0.9205, 0.8911, 0.8911 - 0.9205}),
             "ablation entry round-trip");
    c.expect(json_round_trip(CoverageStats{100, 96, 100, 0.96, 1.0}), "coverage round-trip");

    DeLongResult dl;
    dl.auc_a = 0.9;
    dl.auc_b = 0.8;
    dl.covariance << 1e-4, 2e-5, 2e-5, 3e-4;
    dl.variance_diff = 3.6e-4;
    dl.z_statistic = 5.27;
    dl.p_value_two_sided = 1.3e-7;
    c.expect(json_round_trip(dl), "DeLong result round-trip");
    c.expect(json_round_trip(certs[1]), "certification JSON round-trip");

    // audit entries survive write, read and verify unchanged
    TempDir dir;
    std::vector<AuditEntry> written;
    {
        audit::Writer w(dir.path());
        written.push_back(w.append(AuditKind::RfiRecord, Json(rec), 1760000000));
        written.push_back(w.append(AuditKind::FairnessScreen, Json(f), 1760000001));
    }
    const auto read_back = audit::read(dir.path());
    bool audit_same = read_back.size() == written.size();
    for (std::size_t i = 0; audit_same && i < written.size(); ++i) {
        audit_same = read_back[i].entry_hash == written[i].entry_hash && read_back[i].payload == written[i].payload;
    }
    c.expect(audit_same, "audit entry round-trip");
}

struct Criterion {
    int id;
    std::string name;
    double budget_s; // 0 means no runtime bound
    std::function<void(Check&)> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "auc matches brute-force pair counting", 5.0, auc_oracle},
        {2, "delong self/antisymmetry and bootstrap variance", 30.0, delong_sanity},
        {3, "kruskal-wallis and spearman oracles", 0.0, kw_spearman_oracles},
        {4, "threshold boundary matrix and rfi = min", 1.0, boundary_matrix},
        {5, "published value replays", 0.0, paper_replays},
        {6, "cost table counts, nets and deviations", 0.0, cost_table},
        {7, "vignette end to end through the cli", 60.0, vignette},
        {8, "two consecutive months below the auc floor", 0.0, two_month_rule},
        {9, "audit store tamper evidence", 5.0, audit_tamper},
        {10, "ingestion totals and round-trips", 0.0, ingestion},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.run(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (cr.budget_s > 0.0) {
            check.expect(secs < cr.budget_s, "runtime " + fmt(secs, 3) + " s over budget " + fmt(cr.budget_s) + " s");
        }
        std::cout << (check.ok() ? "PASS" : "FAIL") << " [" << cr.id << "] " << cr.name << " (" << check.checks()
                  << " checks, " << fmt(secs, 3) << " s)\n";
        for (const auto& n : check.notes()) {
            std::cout << "       " << n << "\n";
        }
        for (std::size_t i = 0; i < check.failures().size() && i < 8; ++i) {
            std::cout << "       - " << check.failures()[i] << "\n";
        }
        if (check.failures().size() > 8) {
            std::cout << "       - ... " << check.failures().size() - 8 << " more\n";
        }
        failed += check.ok() ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
