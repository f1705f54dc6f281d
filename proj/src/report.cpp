#include "phqchat/report.hpp"

#include "phqchat/error.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <variant>

#include <json.hpp>

namespace phqchat {

namespace {

Stat attempt(const std::function<double()>& compute) {
    try {
        return Stat::of(compute());
    } catch (const UndefinedStatistic& e) {
        return Stat::absent(e.reason());
    }
}

Stat from_optional(const std::optional<double>& v, const char* reason) {
    return v ? Stat::of(*v) : Stat::absent(reason);
}

std::vector<double> to_doubles(const std::vector<int>& v) {
    return {v.begin(), v.end()};
}

AgreementRow agreement(const std::vector<int>& agent, const std::vector<int>& form) {
    const std::vector<double> a = to_doubles(agent);
    const std::vector<double> f = to_doubles(form);
    AgreementRow row;
    row.pcc = attempt([&] { return stats::pearson(a, f); });
    row.kappa = attempt([&] { return stats::cohen_kappa(agent, form); });
    long same = 0;
    for (std::size_t i = 0; i < agent.size(); ++i) {
        same += agent[i] == form[i] ? 1 : 0;
    }
    row.acc = Stat::of(static_cast<double>(same) / static_cast<double>(agent.size()));
    row.mae = attempt([&] { return stats::mae_stats(a, f).mae; });
    return row;
}

}  // namespace

ValidationReport build_report(const PairedDataset& dataset) {
    if (dataset.size() < 2) {
        throw ValidationError("validation report needs at least 2 subjects, got " + std::to_string(dataset.size()));
    }
    for (const auto& rec : dataset) {
        if (total_score(rec.form_items) != rec.form_total || total_score(rec.agent_items) != rec.agent_total) {
            throw ValidationError("subject " + rec.subject_id + ": total differs from item sum");
        }
    }

    ValidationReport r;
    r.n = static_cast<long>(dataset.size());

    for (std::size_t item = 0; item < kItemCount; ++item) {
        std::vector<int> agent;
        std::vector<int> form;
        for (const auto& rec : dataset) {
            agent.push_back(rec.agent_items[item]);
            form.push_back(rec.form_items[item]);
        }
        r.per_item[item] = agreement(agent, form);
    }

    std::vector<int> agent_total;
    std::vector<int> form_total;
    std::vector<int> agent_class;
    std::vector<int> form_class;
    std::vector<double> days;
    std::vector<std::vector<double>> agent_matrix;
    std::vector<std::vector<double>> form_matrix;
    for (const auto& rec : dataset) {
        agent_total.push_back(rec.agent_total);
        form_total.push_back(rec.form_total);
        agent_class.push_back(classify(rec.agent_total) == ScreenClass::Positive ? 1 : 0);
        form_class.push_back(classify(rec.form_total) == ScreenClass::Positive ? 1 : 0);
        days.push_back(rec.days_between);
        agent_matrix.emplace_back(rec.agent_items.begin(), rec.agent_items.end());
        form_matrix.emplace_back(rec.form_items.begin(), rec.form_items.end());
    }
    r.total_row = agreement(agent_total, form_total);

    const std::vector<double> agent_class_d = to_doubles(agent_class);
    r.point_biserial_class = attempt([&] { return stats::point_biserial(form_class, agent_class_d); });
    r.kappa_class = attempt([&] { return stats::cohen_kappa(agent_class, form_class); });
    if (r.kappa_class.value) {
        r.kappa_band = stats::kappa_band(*r.kappa_class.value);
    }
    r.cronbach_alpha_agent = attempt([&] { return stats::cronbach_alpha(agent_matrix); });
    r.cronbach_alpha_form = attempt([&] { return stats::cronbach_alpha(form_matrix); });

    r.confusion = stats::confusion(form_class, agent_class);
    const auto metrics = stats::binary_metrics(r.confusion);
    r.sensitivity = from_optional(metrics.sensitivity, "no_positive_truth");
    r.specificity = from_optional(metrics.specificity, "no_negative_truth");
    r.accuracy = from_optional(metrics.accuracy, "empty");
    r.f1 = from_optional(metrics.f1, "no_positives");
    r.prevalence_agent = from_optional(metrics.prevalence_pred, "empty");
    r.prevalence_form = from_optional(metrics.prevalence_truth, "empty");

    try {
        const auto roc = stats::roc_auc(agent_total, form_class);
        r.roc_points = roc.points;
        r.auc = Stat::of(roc.auc);
    } catch (const UndefinedStatistic& e) {
        r.auc = Stat::absent(e.reason());
    }

    const std::vector<std::vector<double>> groups{to_doubles(agent_total), to_doubles(form_total)};
    r.anova_df_between = 1;
    r.anova_df_within = static_cast<int>(2 * dataset.size()) - 2;
    try {
        const auto anova = stats::oneway_anova(groups);
        r.anova_f = Stat::of(anova.f);
        r.anova_p = Stat::of(anova.p);
    } catch (const UndefinedStatistic& e) {
        r.anova_f = Stat::absent(e.reason());
        r.anova_p = Stat::absent(e.reason());
    }

    const std::vector<double> a = to_doubles(agent_total);
    const std::vector<double> f = to_doubles(form_total);
    const auto mae = stats::mae_stats(a, f);
    r.mae_total = Stat::of(mae.mae);
    r.mae_sd = Stat::of(mae.sd);
    std::vector<double> abs_diff;
    for (std::size_t i = 0; i < a.size(); ++i) {
        abs_diff.push_back(std::abs(a[i] - f[i]));
    }
    r.mae_days_pearson = attempt([&] { return stats::pearson(abs_diff, days); });

    r.histogram_agent = stats::score_histogram(agent_total);
    r.histogram_form = stats::score_histogram(form_total);
    return r;
}

std::string format_fixed6(double value) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.6f", value);
    std::string s = buf.data();
    if (s == "-0.000000") {
        s = "0.000000";
    }
    return s;
}

namespace {

// Minimal ordered JSON tree so numbers can be emitted with fixed precision.
struct Node {
    struct Fixed {
        double value;
    };
    using Array = std::vector<Node>;
    using Object = std::vector<std::pair<std::string, Node>>;
    std::variant<std::nullptr_t, long, Fixed, std::string, Array, Object> v;
};

Node stat_node(const Stat& s, const std::string& path, Node::Object& absent) {
    if (s.value) {
        return Node{Node::Fixed{*s.value}};
    }
    absent.emplace_back(path, Node{s.reason});
    return Node{nullptr};
}

bool is_scalar(const Node& n) {
    return !std::holds_alternative<Node::Array>(n.v) && !std::holds_alternative<Node::Object>(n.v);
}

void write(const Node& node, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    if (std::holds_alternative<std::nullptr_t>(node.v)) {
        out += "null";
    } else if (const auto* i = std::get_if<long>(&node.v)) {
        out += std::to_string(*i);
    } else if (const auto* f = std::get_if<Node::Fixed>(&node.v)) {
        out += format_fixed6(f->value);
    } else if (const auto* s = std::get_if<std::string>(&node.v)) {
        out += nlohmann::json(*s).dump();
    } else if (const auto* arr = std::get_if<Node::Array>(&node.v)) {
        const bool flat = std::all_of(arr->begin(), arr->end(), is_scalar);
        out += '[';
        for (std::size_t k = 0; k < arr->size(); ++k) {
            if (k > 0) out += flat ? ", " : ",";
            if (!flat) out += "\n" + inner;
            write((*arr)[k], out, indent + 1);
        }
        if (!flat && !arr->empty()) out += "\n" + pad;
        out += ']';
    } else if (const auto* obj = std::get_if<Node::Object>(&node.v)) {
        if (obj->empty()) {
            out += "{}";
            return;
        }
        out += '{';
        for (std::size_t k = 0; k < obj->size(); ++k) {
            if (k > 0) out += ',';
            out += "\n" + inner + nlohmann::json((*obj)[k].first).dump() + ": ";
            write((*obj)[k].second, out, indent + 1);
        }
        out += "\n" + pad + '}';
    }
}

Node row_node(const AgreementRow& row, const std::string& path, Node::Object& absent, std::optional<long> item) {
    Node::Object o;
    if (item) {
        o.emplace_back("item", Node{*item});
    }
    o.emplace_back("pcc", stat_node(row.pcc, path + ".pcc", absent));
    o.emplace_back("kappa", stat_node(row.kappa, path + ".kappa", absent));
    o.emplace_back("acc", stat_node(row.acc, path + ".acc", absent));
    o.emplace_back("mae", stat_node(row.mae, path + ".mae", absent));
    return Node{std::move(o)};
}

Node histogram_node(const stats::ScoreHistogram& h) {
    Node::Array a;
    for (const long c : h) {
        a.push_back(Node{c});
    }
    return Node{std::move(a)};
}

}  // namespace

std::string report_to_json(const ValidationReport& r) {
    Node::Object absent;
    Node::Object root;
    root.emplace_back("n", Node{r.n});

    Node::Array items;
    for (std::size_t i = 0; i < r.per_item.size(); ++i) {
        items.push_back(row_node(r.per_item[i], "per_item[" + std::to_string(i) + "]", absent,
                                 static_cast<long>(i + 1)));
    }
    root.emplace_back("per_item", Node{std::move(items)});
    root.emplace_back("total_row", row_node(r.total_row, "total_row", absent, std::nullopt));
    root.emplace_back("point_biserial_class", stat_node(r.point_biserial_class, "point_biserial_class", absent));
    root.emplace_back("kappa_class", stat_node(r.kappa_class, "kappa_class", absent));
    root.emplace_back("kappa_band", r.kappa_band ? Node{*r.kappa_band} : Node{nullptr});
    root.emplace_back("cronbach_alpha_agent", stat_node(r.cronbach_alpha_agent, "cronbach_alpha_agent", absent));
    root.emplace_back("cronbach_alpha_form", stat_node(r.cronbach_alpha_form, "cronbach_alpha_form", absent));
    root.emplace_back("confusion", Node{Node::Object{{"tp", Node{r.confusion.tp}},
                                                     {"fp", Node{r.confusion.fp}},
                                                     {"fn", Node{r.confusion.fn}},
                                                     {"tn", Node{r.confusion.tn}}}});
    root.emplace_back("sensitivity", stat_node(r.sensitivity, "sensitivity", absent));
    root.emplace_back("specificity", stat_node(r.specificity, "specificity", absent));
    root.emplace_back("accuracy", stat_node(r.accuracy, "accuracy", absent));
    root.emplace_back("f1", stat_node(r.f1, "f1", absent));
    root.emplace_back("prevalence_agent", stat_node(r.prevalence_agent, "prevalence_agent", absent));
    root.emplace_back("prevalence_form", stat_node(r.prevalence_form, "prevalence_form", absent));

    Node::Array roc;
    for (const auto& p : r.roc_points) {
        roc.push_back(Node{Node::Array{Node{Node::Fixed{p.threshold}}, Node{Node::Fixed{p.fpr}},
                                       Node{Node::Fixed{p.tpr}}}});
    }
    root.emplace_back("roc_points", Node{std::move(roc)});
    root.emplace_back("auc", stat_node(r.auc, "auc", absent));
    root.emplace_back("anova_f", stat_node(r.anova_f, "anova_f", absent));
    root.emplace_back("anova_p", stat_node(r.anova_p, "anova_p", absent));
    root.emplace_back("anova_df", Node{Node::Array{Node{static_cast<long>(r.anova_df_between)},
                                                   Node{static_cast<long>(r.anova_df_within)}}});
    root.emplace_back("mae_total", stat_node(r.mae_total, "mae_total", absent));
    root.emplace_back("mae_sd", stat_node(r.mae_sd, "mae_sd", absent));
    root.emplace_back("mae_days_pearson", stat_node(r.mae_days_pearson, "mae_days_pearson", absent));
    root.emplace_back("histograms", Node{Node::Object{{"agent", histogram_node(r.histogram_agent)},
                                                      {"form", histogram_node(r.histogram_form)}}});
    root.emplace_back("absent", Node{std::move(absent)});

    std::string out;
    write(Node{std::move(root)}, out, 0);
    out += '\n';
    return out;
}

std::string report_table_csv(const ValidationReport& r) {
    std::string out = "metric";
    for (int i = 1; i <= kItemCount; ++i) {
        out += ",item" + std::to_string(i);
    }
    out += ",total\n";
    const auto cell = [](const Stat& s) { return s.value ? format_fixed6(*s.value) : std::string(); };
    const std::array<std::pair<const char*, Stat AgreementRow::*>, 4> metrics{{
        {"pcc", &AgreementRow::pcc},
        {"kappa", &AgreementRow::kappa},
        {"acc", &AgreementRow::acc},
        {"mae", &AgreementRow::mae},
    }};
    for (const auto& [name, member] : metrics) {
        out += name;
        for (const auto& row : r.per_item) {
            out += ',' + cell(row.*member);
        }
        out += ',' + cell(r.total_row.*member) + '\n';
    }
    return out;
}

}  // namespace phqchat
