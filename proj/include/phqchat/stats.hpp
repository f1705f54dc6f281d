#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace phqchat::stats {

// Length mismatches and out-of-domain inputs throw ValidationError. Inputs for
// which a statistic does not exist (no variance, one class only) throw
// UndefinedStatistic carrying a short reason code.

/// Product-moment correlation. Needs n >= 2 and variance in both series.
double pearson(std::span<const double> x, std::span<const double> y);

/// Correlation between a 0/1 series and a continuous one:
/// (M1 - M0) / s_n * sqrt(n1 * n0 / n^2), with s_n the population SD of y.
double point_biserial(std::span<const int> binary, std::span<const double> y);

/// Unweighted Cohen's kappa over the union of observed categories.
/// Returns 1.0 when both raters use one and the same category throughout.
double cohen_kappa(std::span<const int> a, std::span<const int> b);

/// Landis-Koch label: poor, slight, fair, moderate, substantial, almost perfect.
/// Each band includes its upper edge.
std::string kappa_band(double kappa);

/// Internal consistency of a scale. `subjects[i][j]` is subject i's score on item j.
double cronbach_alpha(std::span<const std::vector<double>> subjects);

struct MaeStats {
    double mae = 0.0;
    double sd = 0.0;  // sample SD of |x - y|; 0 when n == 1
};

MaeStats mae_stats(std::span<const double> x, std::span<const double> y);

struct ConfusionMatrix {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long tn = 0;

    long n() const noexcept { return tp + fp + fn + tn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

/// Cross-tabulates 0/1 ground truth against 0/1 predictions.
ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted);

/// Metrics whose denominator is zero are left empty.
struct BinaryMetrics {
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> precision;
    std::optional<double> accuracy;
    std::optional<double> f1;
    std::optional<double> prevalence_pred;
    std::optional<double> prevalence_truth;
};

BinaryMetrics binary_metrics(const ConfusionMatrix& cm);

struct RocPoint {
    double threshold = 0.0;  // positive iff score > threshold
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // thresholds 27.5, 26.5, ..., -0.5
    double auc = 0.0;
};

/// ROC over integer scores 0..27 with thresholds between integers; AUC by trapezoids.
RocCurve roc_auc(std::span<const int> scores, std::span<const int> truth);

struct AnovaResult {
    double f = 0.0;
    double p = 1.0;
    int df_between = 0;
    int df_within = 0;
};

AnovaResult oneway_anova(std::span<const std::vector<double>> groups);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double x, double a, double b);

/// P(F > f) for an F(d1, d2) variable.
double f_upper_tail(double f, double d1, double d2);

using ScoreHistogram = std::array<long, 28>;

ScoreHistogram score_histogram(std::span<const int> scores);

}  // namespace phqchat::stats
