// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
// Tolerances and time limits are fixed here.

#include "oracles.hpp"
#include "phqchat/dataset.hpp"
#include "phqchat/interview.hpp"
#include "phqchat/matcher.hpp"
#include "phqchat/report.hpp"
#include "phqchat/scoring.hpp"
#include "phqchat/stats.hpp"
#include "phqchat/synthetic.hpp"
#include "phqchat/text.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <array>
#include <functional>
#include <random>
#include <sstream>

using namespace phqchat;
namespace st = phqchat::stats;

namespace {

constexpr double kOracleTol = 1e-9;
constexpr double kQuadratureTol = 1e-8;
constexpr int kOracleInstances = 1000;
constexpr std::size_t kMaxOracleN = 30;
constexpr double kMisspellingSuccess = 0.99;
constexpr std::size_t kMinMisspellings = 500;
constexpr double kMaeEchoTol = 0.15;
constexpr auto kAc1Limit = std::chrono::milliseconds(1);
constexpr auto kAc2Limit = std::chrono::seconds(30);
constexpr auto kAc4Limit = std::chrono::seconds(5);

using SteadyClock = std::chrono::steady_clock;

/// Collects failure notes for one criterion.
struct Check {
    std::vector<std::string> failures;
    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    void near(double got, double want, double tol, const std::string& what) {
        if (!(std::abs(got - want) <= tol)) {
            std::ostringstream ss;
            ss.precision(17);
            ss << what << ": got " << got << ", want " << want << " (tol " << tol << ")";
            failures.push_back(ss.str());
        }
    }
};

int g_failed = 0;

void report(int number, const std::string& title, const Check& check, const std::string& detail) {
    const bool ok = check.failures.empty();
    if (!ok) ++g_failed;
    std::printf("[%s] AC%d %s: %s\n", ok ? "PASS" : "FAIL", number, title.c_str(), detail.c_str());
    const std::size_t shown = std::min<std::size_t>(check.failures.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) std::printf("       - %s\n", check.failures[i].c_str());
    if (check.failures.size() > shown) std::printf("       - ... %zu more\n", check.failures.size() - shown);
}

template <class F>
double seconds_of(F&& f) {
    const auto t0 = SteadyClock::now();
    f();
    return std::chrono::duration<double>(SteadyClock::now() - t0).count();
}

// ---- AC1 -------------------------------------------------------------------

/// round(scale * p / q), half up, in exact integer arithmetic.
long percent_round(long p, long q, long scale) { return (2 * scale * p + q) / (2 * q); }

void ac1() {
    Check c;
    const st::ConfusionMatrix cm{.tp = 23, .fp = 8, .fn = 1, .tn = 76};
    st::BinaryMetrics m;
    const auto t0 = SteadyClock::now();
    m = st::binary_metrics(cm);
    // Exact rationals of each metric.
    const long sens_p = cm.tp, sens_q = cm.tp + cm.fn;
    const long spec_p = cm.tn, spec_q = cm.tn + cm.fp;
    const long acc_p = cm.tp + cm.tn, acc_q = cm.n();
    const long f1_p = 2 * cm.tp, f1_q = 2 * cm.tp + cm.fp + cm.fn;
    const long pred_p = cm.tp + cm.fp, truth_p = cm.tp + cm.fn;
    const auto elapsed = SteadyClock::now() - t0;

    c.expect(cm.n() == 108, "n = 108");
    c.expect(percent_round(sens_p, sens_q, 10000) == 9583, "sensitivity 0.9583");
    c.expect(percent_round(spec_p, spec_q, 10000) == 9048, "specificity 0.9048");
    c.expect(percent_round(acc_p, acc_q, 10000) == 9167, "accuracy 0.9167");
    c.expect(percent_round(f1_p, f1_q, 10000) == 8364, "F1 0.8364");
    c.expect(percent_round(sens_p, sens_q, 100) == 96, "sensitivity rounds to 0.96");
    c.expect(percent_round(spec_p, spec_q, 100) == 90, "specificity rounds to 0.90");
    c.expect(percent_round(acc_p, acc_q, 100) == 92, "accuracy rounds to 0.92");
    c.expect(percent_round(f1_p, f1_q, 100) == 84, "F1 rounds to 0.84");
    c.expect(pred_p == 31 && percent_round(pred_p, cm.n(), 10000) == 2870, "predicted prevalence 31/108 = 28.70%");
    c.expect(truth_p == 24 && percent_round(truth_p, cm.n(), 1000) == 222, "truth prevalence 24/108 = 22.2%");
    // The library's floating results must be the nearest doubles to those rationals.
    c.expect(*m.sensitivity == double(sens_p) / double(sens_q), "library sensitivity");
    c.expect(*m.specificity == double(spec_p) / double(spec_q), "library specificity");
    c.expect(*m.accuracy == double(acc_p) / double(acc_q), "library accuracy");
    c.expect(*m.f1 == double(f1_p) / double(f1_q), "library F1");
    c.expect(*m.prevalence_pred == double(pred_p) / double(cm.n()), "library predicted prevalence");
    c.expect(*m.prevalence_truth == double(truth_p) / double(cm.n()), "library truth prevalence");
    c.expect(elapsed < kAc1Limit, "runtime under 1 ms");

    char detail[160];
    std::snprintf(detail, sizeof detail, "sensitivity %.4f specificity %.4f acc %.4f f1 %.4f prev %.4f/%.4f in %.1f us",
                  *m.sensitivity, *m.specificity, *m.accuracy, *m.f1, *m.prevalence_pred, *m.prevalence_truth,
                  std::chrono::duration<double, std::micro>(elapsed).count());
    report(1, "screening matrix metrics", c, detail);
}

// ---- AC2 -------------------------------------------------------------------

std::vector<double> reals(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

std::vector<int> ints(std::mt19937_64& rng, std::size_t n, int hi) {
    std::vector<int> v(n);
    for (auto& x : v) x = static_cast<int>(rng() % static_cast<unsigned>(hi + 1));
    return v;
}

bool both_classes(const std::vector<int>& b) {
    return std::count(b.begin(), b.end(), 1) > 0 && std::count(b.begin(), b.end(), 0) > 0;
}

void ac2() {
    Check c;
    std::mt19937_64 rng(20240601);
    std::size_t instances = 0;
    const double secs = seconds_of([&] {
        for (int i = 0; i < kOracleInstances; ++i) {
            const std::size_t n = 2 + rng() % (kMaxOracleN - 1);
            const auto x = reals(rng, n), y = reals(rng, n);
            c.near(st::pearson(x, y), oracle::pearson(x, y), kOracleTol, "pearson");

            std::vector<int> b;
            do b = ints(rng, n, 1);
            while (!both_classes(b));
            c.near(st::point_biserial(b, y), oracle::pearson({b.begin(), b.end()}, y), kOracleTol, "point_biserial");

            const auto ka = ints(rng, n, 3);
            auto kb = ints(rng, n, 3);
            if (i % 4 == 0) kb = ka;
            c.near(st::cohen_kappa(ka, kb), oracle::kappa(ka, kb), kOracleTol, "cohen_kappa");

            std::vector<std::vector<double>> m(n, std::vector<double>(2 + rng() % 8));
            // Row 0 all zeros and row 1 all threes keep the total non-constant.
            for (auto& row : m)
                for (auto& v : row) v = static_cast<double>(rng() % 4);
            for (auto& v : m[1]) v = 3;
            for (auto& v : m[0]) v = 0;
            c.near(st::cronbach_alpha(m), oracle::cronbach(m), kOracleTol, "cronbach_alpha");

            const auto mae = st::mae_stats(x, y);
            const auto [om, osd] = oracle::mae(x, y);
            c.near(mae.mae, om, kOracleTol, "mae");
            c.near(mae.sd, osd, kOracleTol, "mae sd");

            const auto scores = ints(rng, n, 27);
            c.near(st::roc_auc(scores, b).auc, oracle::mann_whitney_auc(scores, b), kOracleTol, "roc_auc");

            std::vector<std::vector<double>> groups;
            const std::size_t k = 2 + rng() % 3;
            for (std::size_t g = 0; g < k; ++g) groups.push_back(reals(rng, 2 + rng() % (kMaxOracleN / k - 1)));
            const auto anova = st::oneway_anova(groups);
            const double f = oracle::anova_f(groups);
            c.near(anova.f, f, kOracleTol * std::max(1.0, f), "anova F");
            c.near(anova.p, oracle::f_upper_tail_quadrature(f, anova.df_between, anova.df_within), kQuadratureTol,
                   "anova p");
            ++instances;
        }
    });
    c.expect(secs < std::chrono::duration<double>(kAc2Limit).count(), "runtime under 30 s");
    char detail[160];
    std::snprintf(detail, sizeof detail, "%zu instances x 7 statistics, n <= %zu, in %.2f s", instances, kMaxOracleN,
                  secs);
    report(2, "statistics match independent oracles", c, detail);
}

// ---- AC3 -------------------------------------------------------------------

void ac3() {
    Check c;
    const double kappa = st::cohen_kappa(std::vector<int>{1, 1, 1, 0}, std::vector<int>{1, 1, 0, 0});
    const std::vector<std::vector<double>> dup{{0, 0}, {1, 1}, {2, 2}};
    const double alpha = st::cronbach_alpha(dup);
    const double rpb = st::point_biserial(std::vector<int>{0, 0, 1, 1}, std::vector<double>{1, 2, 3, 4});
    const std::vector<std::vector<double>> groups{{1, 2, 3}, {4, 5, 6}};
    const auto anova = st::oneway_anova(groups);
    c.expect(kappa == 0.5, "kappa = 0.5");
    c.expect(alpha == 1.0, "alpha = 1.0");
    c.near(rpb, 0.894427, 1e-6, "point-biserial");
    c.expect(anova.f == 13.5, "ANOVA F = 13.5");
    c.expect(anova.df_between == 1 && anova.df_within == 4, "ANOVA df (1, 4)");
    char detail[160];
    std::snprintf(detail, sizeof detail, "kappa %.6f alpha %.6f r_pb %.6f F %.6f df (%d,%d)", kappa, alpha, rpb,
                  anova.f, anova.df_between, anova.df_within);
    report(3, "hand-derived fixtures", c, detail);
}

// ---- AC4 -------------------------------------------------------------------

void ac4() {
    Check c;
    long vectors = 0;
    const double secs = seconds_of([&] {
        for (int code = 0; code < 262144; ++code) {
            ItemScores s{};
            int rest = code, sum = 0;
            for (int i = 0; i < kItemCount; ++i) {
                s[i] = rest % 4;
                rest /= 4;
                sum += s[i];
            }
            const int total = total_score(s);
            const bool positive = classify(total) == ScreenClass::Positive;
            if (total != sum) c.expect(false, "total != sum for code " + std::to_string(code));
            if (positive != (total >= 10)) c.expect(false, "class wrong for code " + std::to_string(code));
            for (int i = 0; i < kItemCount && positive; ++i) {
                if (s[i] == 3) continue;
                ItemScores up = s;
                ++up[i];
                if (classify(total_score(up)) != ScreenClass::Positive)
                    c.expect(false, "monotonicity broken for code " + std::to_string(code));
            }
            ++vectors;
        }
    });
    c.expect(vectors == 262144, "all 4^9 vectors visited");
    c.expect(classify(9) == ScreenClass::Negative, "9 is negative");
    c.expect(classify(10) == ScreenClass::Positive, "10 is positive");
    c.expect(secs < std::chrono::duration<double>(kAc4Limit).count(), "runtime under 5 s");
    char detail[160];
    std::snprintf(detail, sizeof detail, "%ld vectors in %.3f s", vectors, secs);
    report(4, "exhaustive scoring sweep", c, detail);
}

// ---- AC5 -------------------------------------------------------------------

struct Replay {
    std::string transcript;
    std::optional<ScreeningResult> result;
    PhaseKind final_phase = PhaseKind::AwaitingConsent;
    std::vector<std::string> last_messages;
};

Replay replay(const Interview& iv, const std::vector<std::string>& utterances) {
    Replay out;
    auto t = iv.start();
    for (const auto& m : t.turn.messages) out.transcript += "agent: " + m + "\n";
    for (const auto& u : utterances) {
        if (t.session.phase.terminal()) break;
        out.transcript += "user: " + u + "\n";
        t = iv.advance(t.session, u);
        for (const auto& m : t.turn.messages) out.transcript += "agent: " + m + "\n";
    }
    out.result = t.turn.result;
    out.final_phase = t.session.phase.kind;
    out.last_messages = t.turn.messages;
    if (out.result) out.transcript += result_to_json(*out.result).dump() + "\n";
    return out;
}

void ac5() {
    Check c;
    const phqchat::Clock fixed = [] { return parse_iso8601("2024-01-15T12:00:00Z"); };
    const Interview iv(testsupport::shipped_script(), testsupport::shipped_lexicon(), fixed);
    const auto& script = iv.script();
    const std::string top = iv.lexicon().levels()[3].canonical;
    const std::string bottom = iv.lexicon().levels()[0].canonical;

    std::vector<std::string> high{"sí, acepto"}, low{"sí, acepto"};
    for (int i = 0; i < 9; ++i) {
        high.push_back(top);
        low.push_back(bottom);
    }
    const auto h = replay(iv, high);
    c.expect(h.final_phase == PhaseKind::Completed && h.result.has_value(), "high session completes");
    if (h.result) {
        c.expect(h.result->total == 27 && h.result->positive, "'" + top + "' x9 -> 27 positive");
        c.expect(h.last_messages ==
                     std::vector<std::string>{script.feedback_positive, script.crisis_appendix},
                 "positive feedback followed by crisis appendix");
    }
    const auto l = replay(iv, low);
    c.expect(l.final_phase == PhaseKind::Completed && l.result.has_value(), "low session completes");
    if (l.result) {
        c.expect(l.result->total == 0 && !l.result->positive, "'" + bottom + "' x9 -> 0 negative");
        c.expect(l.last_messages == std::vector<std::string>{script.feedback_negative}, "negative feedback only");
    }

    auto t = iv.start();
    t = iv.advance(t.session, "sí, acepto");
    const std::vector<std::string> expected[] = {
        {script.clarification_reply}, {script.options_reply}, {script.closing_aborted}};
    for (int i = 0; i < 3; ++i) {
        t = iv.advance(t.session, "¿qué quieres decir?");
        c.expect(t.turn.messages == expected[i], "escalation step " + std::to_string(i + 1));
    }
    c.expect(t.session.phase.kind == PhaseKind::Aborted, "third no-match aborts");

    const std::vector<std::string> mixed{"tal vez", "sí", "a veces", "?", "2", "casi todos los dias", "nunca",
                                         "hola", "1", "para nada", "3", "varios días", "0"};
    bool identical = true;
    for (const auto* script_in : std::array<const std::vector<std::string>*, 3>{&high, &low, &mixed}) {
        identical = identical && replay(iv, *script_in).transcript == replay(iv, *script_in).transcript;
    }
    c.expect(identical, "byte-identical transcripts across runs");

    char detail[160];
    std::snprintf(detail, sizeof detail, "high total %d, low total %d, escalation ends %s, transcripts %s",
                  h.result ? h.result->total : -1, l.result ? l.result->total : -1,
                  to_string(t.session.phase.kind), identical ? "identical" : "differ");
    report(5, "end-to-end engine replay", c, detail);
}

// ---- AC6 -------------------------------------------------------------------

void ac6() {
    Check c;
    const Lexicon& lex = *testsupport::shipped_lexicon();
    std::size_t phrases = 0;
    for (const auto& level : lex.levels()) {
        for (const auto& p : level.phrases) {
            ++phrases;
            const auto r = match_level(p.text, lex);
            const auto* m = std::get_if<LevelMatch>(&r);
            c.expect(m && m->score == level.score && m->confidence == 1.0, "exact phrase '" + p.text + "'");
        }
    }

    // Single-edit misspellings (substitution, insertion or deletion of one letter)
    // of phrases up to three tokens long.
    std::mt19937_64 rng(6);
    const std::string letters = "abcdefghijklmnopqrstuvwxyz";
    std::vector<std::pair<int, std::vector<std::string>>> short_phrases;
    for (const auto& level : lex.levels())
        for (const auto& p : level.phrases)
            if (p.tokens.size() <= 3) short_phrases.emplace_back(level.score, normalize(p.text));
    std::size_t tried = 0, matched = 0;
    std::vector<std::string> misses;
    for (const auto& [score, tokens] : short_phrases) {
        for (int rep = 0; rep < 4; ++rep) {
            auto typo = tokens;
            auto& tok = typo[rng() % typo.size()];
            const std::size_t pos = rng() % tok.size();
            const char letter = letters[rng() % letters.size()];
            switch (rng() % 3) {
                case 0:
                    tok[pos] = tok[pos] == letter ? letters[(letters.find(letter) + 1) % 26] : letter;
                    break;
                case 1: tok.insert(tok.begin() + static_cast<long>(pos), letter); break;
                default:
                    if (tok.size() > 1) tok.erase(pos, 1);
                    else tok[pos] = tok[pos] == letter ? letters[(letters.find(letter) + 1) % 26] : letter;
                    break;
            }
            const std::string text = join_tokens(typo);
            const auto r = match_level(text, lex);
            const auto* m = std::get_if<LevelMatch>(&r);
            ++tried;
            if (m && m->score == score) ++matched;
            else if (misses.size() < 10) misses.push_back(join_tokens(tokens) + " -> " + text);
        }
    }
    const double rate = tried ? double(matched) / double(tried) : 0.0;
    c.expect(tried >= kMinMisspellings, "at least 500 misspellings");
    c.expect(rate >= kMisspellingSuccess, "misspelling success >= 99%");
    if (rate < kMisspellingSuccess)
        for (const auto& m : misses) c.expect(false, "miss: " + m);

    // Ties: utterances quoting phrases of two levels, and phrases equidistant from a typo.
    std::size_t ties = 0, tie_ok = 0;
    for (int i = 0; i < 400; ++i) {
        const int a = static_cast<int>(rng() % 4);
        const int b = (a + 1 + static_cast<int>(rng() % 3)) % 4;
        const auto& pa = lex.levels()[a].phrases[rng() % lex.levels()[a].phrases.size()];
        const auto& pb = lex.levels()[b].phrases[rng() % lex.levels()[b].phrases.size()];
        const auto r = match_level(pa.text + " y también " + pb.text, lex);
        const auto* m = std::get_if<LevelMatch>(&r);
        ++ties;
        if (m && m->score == std::max(a, b)) ++tie_ok;
        else c.expect(false, "tie '" + pa.text + "' / '" + pb.text + "'");
    }
    for (int low = 0; low < 4; ++low) {
        for (int high = low + 1; high < 4; ++high) {
            nlohmann::json levels = nlohmann::json::array();
            for (int s = 0; s < 4; ++s) {
                const std::string p = s == low ? "abcde" : s == high ? "abcdf" : "qqqqqq" + std::to_string(s);
                levels.push_back({{"score", s}, {"canonical", p}, {"phrases", {p}}});
            }
            const Lexicon tie_lex = parse_lexicon(
                nlohmann::json{{"locale", "es"}, {"levels", levels}, {"affirm_phrases", {"acepto"}}, {"deny_phrases", {"rechazo"}}}
                    .dump());
            const auto r = match_level("abcdx", tie_lex);
            const auto* m = std::get_if<LevelMatch>(&r);
            ++ties;
            if (m && m->score == high) ++tie_ok;
            else c.expect(false, "constructed tie " + std::to_string(low) + "/" + std::to_string(high));
        }
    }

    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "%zu phrases exact, %zu/%zu misspellings matched (%.2f%%), %zu/%zu ties resolved upward", phrases,
                  matched, tried, 100.0 * rate, tie_ok, ties);
    report(6, "matcher corpus", c, detail);
}

// ---- AC7 -------------------------------------------------------------------

void ac7() {
    Check c;
    const PairedDataset d1 = make_synthetic_dataset({});
    const PairedDataset d2 = make_synthetic_dataset({});
    c.expect(d1.size() == 108, "108 rows");
    const std::string j1 = report_to_json(build_report(d1));
    const std::string j2 = report_to_json(build_report(d2));
    c.expect(j1 == j2, "report JSON byte-identical across runs");
    c.expect(report_table_csv(build_report(d1)) == report_table_csv(build_report(d2)), "table CSV byte-identical");

    const std::string csv = export_paired(d1);
    c.expect(export_paired(import_paired(csv)) == csv, "CSV round trip byte-identical");
    for (const char* shipped : {"synthetic_108.csv", "reconstruction_108.csv"}) {
        const std::string text = testsupport::read_file(testsupport::data_dir() / shipped);
        c.expect(!text.empty() && export_paired(import_paired(text)) == text,
                 std::string("shipped ") + shipped + " round trip");
    }

    const ValidationReport noisy = build_report(make_synthetic_dataset({.mean_abs_noise = 1.88, .seed = 11}));
    const double mae = noisy.mae_total.value.value_or(-1.0);
    c.near(mae, 1.88, kMaeEchoTol, "mae_total echo");

    char detail[160];
    std::snprintf(detail, sizeof detail, "report %zu bytes stable, CSV %zu bytes round-trips, mae_total %.4f", j1.size(),
                  csv.size(), mae);
    report(7, "report determinism and round trip", c, detail);
}

void guarded(int number, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        Check c;
        c.expect(false, std::string("exception: ") + e.what());
        report(number, "aborted", c, "threw");
    }
}

}  // namespace

int main() {
    guarded(1, ac1);
    guarded(2, ac2);
    guarded(3, ac3);
    guarded(4, ac4);
    guarded(5, ac5);
    guarded(6, ac6);
    guarded(7, ac7);
    std::printf("%d of 7 criteria failed\n", g_failed);
    return g_failed == 0 ? 0 : 1;
}
