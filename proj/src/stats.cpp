#include "phqchat/stats.hpp"

#include "phqchat/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace phqchat::stats {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw ValidationError(std::string(what) + ": series lengths differ (" + std::to_string(a) + " vs " +
                              std::to_string(b) + ")");
    }
}

double mean(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double clamp_unit(double r) {
    return std::clamp(r, -1.0, 1.0);
}

void require_binary(std::span<const int> values, const char* what) {
    for (const int v : values) {
        if (v != 0 && v != 1) {
            throw ValidationError(std::string(what) + ": values must be 0 or 1");
        }
    }
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
    require_same_length(x.size(), y.size(), "pearson");
    if (x.size() < 2) {
        throw UndefinedStatistic("too_few_values", "pearson: needs at least 2 pairs");
    }
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw UndefinedStatistic("zero_variance", "pearson: a series has zero variance");
    }
    return clamp_unit(sxy / std::sqrt(sxx * syy));
}

double point_biserial(std::span<const int> binary, std::span<const double> y) {
    require_same_length(binary.size(), y.size(), "point_biserial");
    require_binary(binary, "point_biserial");
    const auto n = static_cast<double>(y.size());
    double sum1 = 0.0;
    double sum0 = 0.0;
    double n1 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (binary[i] == 1) {
            sum1 += y[i];
            n1 += 1.0;
        } else {
            sum0 += y[i];
        }
    }
    const double n0 = n - n1;
    if (n1 == 0.0 || n0 == 0.0) {
        throw UndefinedStatistic("single_class", "point_biserial: both classes must be present");
    }
    const double my = mean(y);
    double ss = 0.0;
    for (const double v : y) {
        ss += (v - my) * (v - my);
    }
    if (ss == 0.0) {
        throw UndefinedStatistic("zero_variance", "point_biserial: continuous series has zero variance");
    }
    const double sd_pop = std::sqrt(ss / n);
    return clamp_unit((sum1 / n1 - sum0 / n0) / sd_pop * std::sqrt(n1 * n0 / (n * n)));
}

double cohen_kappa(std::span<const int> a, std::span<const int> b) {
    require_same_length(a.size(), b.size(), "cohen_kappa");
    if (a.empty()) {
        throw UndefinedStatistic("too_few_values", "cohen_kappa: no ratings");
    }
    std::map<int, std::pair<long, long>> marginals;
    long agree = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        marginals[a[i]].first += 1;
        marginals[b[i]].second += 1;
        agree += a[i] == b[i] ? 1 : 0;
    }
    if (marginals.size() == 1) {
        return 1.0;
    }
    const auto n = static_cast<double>(a.size());
    double expected = 0.0;
    for (const auto& [category, counts] : marginals) {
        expected += (static_cast<double>(counts.first) / n) * (static_cast<double>(counts.second) / n);
    }
    const double observed = static_cast<double>(agree) / n;
    return (observed - expected) / (1.0 - expected);
}

std::string kappa_band(double kappa) {
    constexpr double slack = 1e-12;
    if (!(kappa >= -1.0 - slack && kappa <= 1.0 + slack)) {
        throw ValidationError("kappa " + std::to_string(kappa) + " is outside [-1, 1]");
    }
    if (kappa < 0.0) return "poor";
    if (kappa <= 0.20) return "slight";
    if (kappa <= 0.40) return "fair";
    if (kappa <= 0.60) return "moderate";
    if (kappa <= 0.80) return "substantial";
    return "almost perfect";
}

double cronbach_alpha(std::span<const std::vector<double>> subjects) {
    const std::size_t n = subjects.size();
    if (n < 2) {
        throw UndefinedStatistic("too_few_values", "cronbach_alpha: needs at least 2 subjects");
    }
    const std::size_t k = subjects.front().size();
    if (k < 2) {
        throw ValidationError("cronbach_alpha: needs at least 2 items");
    }
    for (const auto& row : subjects) {
        require_same_length(row.size(), k, "cronbach_alpha");
    }

    const auto variance = [n](const auto& value_of) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            m += value_of(i);
        }
        m /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = value_of(i) - m;
            ss += d * d;
        }
        return ss / static_cast<double>(n - 1);
    };

    double item_variance_sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        item_variance_sum += variance([&](std::size_t i) { return subjects[i][j]; });
    }
    const double total_variance = variance([&](std::size_t i) {
        return std::accumulate(subjects[i].begin(), subjects[i].end(), 0.0);
    });
    if (total_variance == 0.0) {
        throw UndefinedStatistic("zero_variance", "cronbach_alpha: total score has zero variance");
    }
    const auto kd = static_cast<double>(k);
    return kd / (kd - 1.0) * (1.0 - item_variance_sum / total_variance);
}

MaeStats mae_stats(std::span<const double> x, std::span<const double> y) {
    require_same_length(x.size(), y.size(), "mae_stats");
    if (x.empty()) {
        throw UndefinedStatistic("too_few_values", "mae_stats: no pairs");
    }
    std::vector<double> diff(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        diff[i] = std::abs(x[i] - y[i]);
    }
    MaeStats out;
    out.mae = mean(diff);
    if (diff.size() > 1) {
        double ss = 0.0;
        for (const double d : diff) {
            ss += (d - out.mae) * (d - out.mae);
        }
        out.sd = std::sqrt(ss / static_cast<double>(diff.size() - 1));
    }
    return out;
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted) {
    require_same_length(truth.size(), predicted.size(), "confusion");
    require_binary(truth, "confusion");
    require_binary(predicted, "confusion");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == 1) {
            (predicted[i] == 1 ? cm.tp : cm.fn) += 1;
        } else {
            (predicted[i] == 1 ? cm.fp : cm.tn) += 1;
        }
    }
    return cm;
}

BinaryMetrics binary_metrics(const ConfusionMatrix& cm) {
    if (cm.tp < 0 || cm.fp < 0 || cm.fn < 0 || cm.tn < 0) {
        throw ValidationError("binary_metrics: negative count");
    }
    const auto ratio = [](long num, long den) -> std::optional<double> {
        if (den == 0) {
            return std::nullopt;
        }
        return static_cast<double>(num) / static_cast<double>(den);
    };
    BinaryMetrics m;
    m.sensitivity = ratio(cm.tp, cm.tp + cm.fn);
    m.specificity = ratio(cm.tn, cm.tn + cm.fp);
    m.precision = ratio(cm.tp, cm.tp + cm.fp);
    m.accuracy = ratio(cm.tp + cm.tn, cm.n());
    m.f1 = ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn);
    m.prevalence_pred = ratio(cm.tp + cm.fp, cm.n());
    m.prevalence_truth = ratio(cm.tp + cm.fn, cm.n());
    return m;
}

RocCurve roc_auc(std::span<const int> scores, std::span<const int> truth) {
    require_same_length(scores.size(), truth.size(), "roc_auc");
    require_binary(truth, "roc_auc");
    std::array<long, 28> pos{};
    std::array<long, 28> neg{};
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] < 0 || scores[i] > 27) {
            throw ValidationError("roc_auc: score " + std::to_string(scores[i]) + " is outside 0..27");
        }
        (truth[i] == 1 ? pos : neg)[static_cast<std::size_t>(scores[i])] += 1;
    }
    const long n_pos = std::accumulate(pos.begin(), pos.end(), 0L);
    const long n_neg = std::accumulate(neg.begin(), neg.end(), 0L);
    if (n_pos == 0 || n_neg == 0) {
        throw UndefinedStatistic("single_class", "roc_auc: both classes must be present");
    }

    RocCurve curve;
    curve.points.push_back({27.5, 0.0, 0.0});
    long tp = 0;
    long fp = 0;
    for (int s = 27; s >= 0; --s) {
        tp += pos[static_cast<std::size_t>(s)];
        fp += neg[static_cast<std::size_t>(s)];
        curve.points.push_back({s - 0.5, static_cast<double>(fp) / static_cast<double>(n_neg),
                                static_cast<double>(tp) / static_cast<double>(n_pos)});
    }
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& a = curve.points[i - 1];
        const auto& b = curve.points[i];
        curve.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
    }
    return curve;
}

AnovaResult oneway_anova(std::span<const std::vector<double>> groups) {
    if (groups.size() < 2) {
        throw ValidationError("oneway_anova: needs at least 2 groups");
    }
    double grand_sum = 0.0;
    std::size_t total_n = 0;
    for (const auto& g : groups) {
        if (g.size() < 2) {
            throw ValidationError("oneway_anova: every group needs at least 2 values");
        }
        grand_sum += std::accumulate(g.begin(), g.end(), 0.0);
        total_n += g.size();
    }
    const double grand_mean = grand_sum / static_cast<double>(total_n);
    double ss_between = 0.0;
    double ss_within = 0.0;
    for (const auto& g : groups) {
        const double m = mean(g);
        ss_between += static_cast<double>(g.size()) * (m - grand_mean) * (m - grand_mean);
        for (const double v : g) {
            ss_within += (v - m) * (v - m);
        }
    }
    AnovaResult r;
    r.df_between = static_cast<int>(groups.size()) - 1;
    r.df_within = static_cast<int>(total_n - groups.size());
    if (ss_within == 0.0) {
        throw UndefinedStatistic("zero_within_variance", "oneway_anova: no variance within groups");
    }
    r.f = (ss_between / r.df_between) / (ss_within / r.df_within);
    r.p = f_upper_tail(r.f, r.df_between, r.df_within);
    return r;
}

namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double x, double a, double b) {
    constexpr int max_iterations = 10000;
    constexpr double eps = 1e-15;
    constexpr double tiny = std::numeric_limits<double>::min() / eps;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) {
            return h;
        }
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0 && b > 0.0)) {
        throw ValidationError("incomplete beta: shape parameters must be positive");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw ValidationError("incomplete beta: x must lie in [0, 1]");
    }
    if (x == 0.0 || x == 1.0) {
        return x;
    }
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(x, a, b) / a;
    }
    return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double f_upper_tail(double f, double d1, double d2) {
    if (!(d1 > 0.0 && d2 > 0.0)) {
        throw ValidationError("F distribution: degrees of freedom must be positive");
    }
    if (f <= 0.0) {
        return 1.0;
    }
    if (std::isinf(f)) {
        return 0.0;
    }
    return regularized_incomplete_beta(d2 / (d2 + d1 * f), d2 / 2.0, d1 / 2.0);
}

ScoreHistogram score_histogram(std::span<const int> scores) {
    ScoreHistogram bins{};
    for (const int s : scores) {
        if (s < 0 || s > 27) {
            throw ValidationError("score_histogram: score " + std::to_string(s) + " is outside 0..27");
        }
        bins[static_cast<std::size_t>(s)] += 1;
    }
    return bins;
}

}  // namespace phqchat::stats
