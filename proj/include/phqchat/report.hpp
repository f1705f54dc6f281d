#pragma once

#include "phqchat/dataset.hpp"
#include "phqchat/stats.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace phqchat {

/// A statistic that may be undefined for the data at hand. When `value` is empty,
/// `reason` holds a machine-readable code.
struct Stat {
    std::optional<double> value;
    std::string reason;

    static Stat of(double v) { return {v, {}}; }
    static Stat absent(std::string why) { return {std::nullopt, std::move(why)}; }
    bool operator==(const Stat&) const = default;
};

/// Agreement between instruments for one item (or the total score).
struct AgreementRow {
    Stat pcc;
    Stat kappa;
    Stat acc;  // proportion of exact agreement
    Stat mae;
    bool operator==(const AgreementRow&) const = default;
};

/// Agreement, reliability and screening statistics comparing agent against form.
/// The form is the ground truth for every classification figure.
struct ValidationReport {
    long n = 0;
    std::array<AgreementRow, kItemCount> per_item{};
    AgreementRow total_row;
    Stat point_biserial_class;
    Stat kappa_class;
    std::optional<std::string> kappa_band;
    Stat cronbach_alpha_agent;
    Stat cronbach_alpha_form;
    stats::ConfusionMatrix confusion;
    Stat sensitivity;
    Stat specificity;
    Stat accuracy;
    Stat f1;
    Stat prevalence_agent;
    Stat prevalence_form;
    std::vector<stats::RocPoint> roc_points;
    Stat auc;
    Stat anova_f;
    Stat anova_p;
    int anova_df_between = 0;
    int anova_df_within = 0;
    Stat mae_total;
    Stat mae_sd;
    Stat mae_days_pearson;
    stats::ScoreHistogram histogram_agent{};
    stats::ScoreHistogram histogram_form{};
};

/// Throws ValidationError for n < 2 or inconsistent records; undefined
/// statistics become absent fields.
ValidationReport build_report(const PairedDataset& dataset);

/// Pretty-printed JSON with a fixed key order and six decimals per number. Absent
/// statistics are null and listed with their reason under "absent".
std::string report_to_json(const ValidationReport& report);

/// Item-by-item agreement grid: one row per metric (pcc, kappa, acc, mae), one
/// column per item plus the total. Absent cells are empty.
std::string report_table_csv(const ValidationReport& report);

/// "%.6f" with negative zero printed as zero.
std::string format_fixed6(double value);

}  // namespace phqchat
