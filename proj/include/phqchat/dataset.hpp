#pragma once

#include "phqchat/scoring.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace phqchat {

/// One subject measured by both instruments: the self-report form and the agent.
struct PairedRecord {
    std::string subject_id;
    ItemScores form_items{};
    int form_total = 0;
    ItemScores agent_items{};
    int agent_total = 0;
    int days_between = 0;

    bool operator==(const PairedRecord&) const = default;
};

using PairedDataset = std::vector<PairedRecord>;

/// Exact header expected by `import_paired` and written by `export_paired`.
std::string paired_csv_header();

/// Parses a paired CSV. Cells must be canonical decimal integers; totals must equal
/// item sums. Throws ValidationError naming the offending row (1-based, header = row 1).
PairedDataset import_paired(std::string_view csv);

/// LF line endings, trailing newline. `export_paired(import_paired(f)) == f` for any
/// file already in this form.
std::string export_paired(const PairedDataset& dataset);

}  // namespace phqchat
