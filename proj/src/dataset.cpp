#include "phqchat/dataset.hpp"

#include "phqchat/error.hpp"

#include <charconv>

namespace phqchat {

namespace {

constexpr std::size_t kColumns = 1 + kItemCount + 1 + kItemCount + 1 + 1;

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

[[noreturn]] void row_error(std::size_t row, const std::string& message) {
    throw ValidationError("row " + std::to_string(row) + ": " + message);
}

int parse_cell(std::string_view cell, std::size_t row, std::string_view column) {
    const bool canonical = !cell.empty() && (cell == "0" || cell.front() != '0') &&
                           cell.find_first_not_of("0123456789") == std::string_view::npos;
    int value = 0;
    if (canonical) {
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec == std::errc{} && ptr == cell.data() + cell.size()) {
            return value;
        }
    }
    row_error(row, "column " + std::string(column) + ": '" + std::string(cell) + "' is not a nonnegative integer");
}

}  // namespace

std::string paired_csv_header() {
    std::string h = "subject_id";
    for (int i = 1; i <= kItemCount; ++i) {
        h += ",i" + std::to_string(i);
    }
    h += ",phq9";
    for (int i = 1; i <= kItemCount; ++i) {
        h += ",pi" + std::to_string(i);
    }
    h += ",pphq9,days_between";
    return h;
}

PairedDataset import_paired(std::string_view csv) {
    std::vector<std::string_view> lines = split(csv, '\n');
    if (!lines.empty() && lines.back().empty()) {
        lines.pop_back();
    }
    for (auto& line : lines) {
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
    }
    if (lines.empty()) {
        throw ValidationError("row 1: file is empty; expected header '" + paired_csv_header() + "'");
    }
    if (lines.front() != paired_csv_header()) {
        throw ValidationError("row 1: header mismatch; expected '" + paired_csv_header() + "'");
    }
    const std::vector<std::string_view> names = split(lines.front(), ',');

    PairedDataset out;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const std::size_t row = r + 1;
        const auto cells = split(lines[r], ',');
        if (cells.size() != kColumns) {
            row_error(row, "expected " + std::to_string(kColumns) + " columns, found " + std::to_string(cells.size()));
        }
        PairedRecord rec;
        rec.subject_id = std::string(cells[0]);
        if (rec.subject_id.empty()) {
            row_error(row, "subject_id is empty");
        }
        std::size_t c = 1;
        const auto read_items = [&](ItemScores& items) {
            for (auto& v : items) {
                v = parse_cell(cells[c], row, names[c]);
                if (v > kMaxLevel) {
                    row_error(row, "column " + std::string(names[c]) + ": item score " + std::to_string(v) +
                                       " is outside 0..3");
                }
                ++c;
            }
        };
        read_items(rec.form_items);
        rec.form_total = parse_cell(cells[c], row, names[c]);
        ++c;
        read_items(rec.agent_items);
        rec.agent_total = parse_cell(cells[c], row, names[c]);
        ++c;
        rec.days_between = parse_cell(cells[c], row, names[c]);

        if (const int sum = total_score(rec.form_items); sum != rec.form_total) {
            row_error(row, "phq9 = " + std::to_string(rec.form_total) + " but items sum to " + std::to_string(sum));
        }
        if (const int sum = total_score(rec.agent_items); sum != rec.agent_total) {
            row_error(row, "pphq9 = " + std::to_string(rec.agent_total) + " but items sum to " + std::to_string(sum));
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::string export_paired(const PairedDataset& dataset) {
    std::string out = paired_csv_header();
    out += '\n';
    for (const auto& rec : dataset) {
        out += rec.subject_id;
        for (const int v : rec.form_items) {
            out += ',' + std::to_string(v);
        }
        out += ',' + std::to_string(rec.form_total);
        for (const int v : rec.agent_items) {
            out += ',' + std::to_string(v);
        }
        out += ',' + std::to_string(rec.agent_total);
        out += ',' + std::to_string(rec.days_between);
        out += '\n';
    }
    return out;
}

}  // namespace phqchat
