// Command-line front end: local interviews, scoring, lexicon lint, validation
// reports and synthetic paired datasets.

#include "phqchat/dataset.hpp"
#include "phqchat/error.hpp"
#include "phqchat/interview.hpp"
#include "phqchat/lexicon.hpp"
#include "phqchat/report.hpp"
#include "phqchat/service.hpp"
#include "phqchat/store.hpp"
#include "phqchat/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace phqchat;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAborted = 2;

std::optional<std::string> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    return static_cast<bool>(out.flush());
}

bool require_file(const fs::path& path, const char* what) {
    if (fs::is_regular_file(path)) return true;
    std::cerr << "error: " << what << " not found: " << path.string() << '\n';
    return false;
}

// ---- interview --------------------------------------------------------------

struct InterviewArgs {
    fs::path script;
    fs::path lexicon;
    fs::path journal;
    fs::path record;
    bool no_persist = false;
};

class Recorder {
public:
    explicit Recorder(const fs::path& path) {
        if (!path.empty()) out_.open(path, std::ios::binary | std::ios::trunc);
    }
    bool failed() const { return out_.is_open() && !out_; }
    void line(const char* role, const std::string& text) {
        if (out_.is_open()) out_ << json{{"role", role}, {"text", text}}.dump() << '\n';
    }

private:
    std::ofstream out_;
};

int run_interview(const InterviewArgs& args) {
    if (!require_file(args.script, "script") || !require_file(args.lexicon, "lexicon")) return kExitError;
    std::optional<ResultStore> store;
    std::shared_ptr<const Interview> interview;
    try {
        interview = std::make_shared<const Interview>(std::make_shared<const InterviewScript>(load_script(args.script)),
                                                      std::make_shared<const Lexicon>(load_lexicon(args.lexicon)));
        if (!args.no_persist) store.emplace(args.journal);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    Recorder recorder(args.record);
    if (!args.record.empty() && recorder.failed()) {
        std::cerr << "error: cannot write " << args.record.string() << '\n';
        return kExitError;
    }

    auto say = [&](const std::vector<std::string>& messages) {
        for (const auto& m : messages) {
            std::cout << m << '\n';
            recorder.line("agent", m);
        }
        std::cout.flush();
    };

    Transition t = interview->start({Channel::Cli, false});
    say(t.turn.messages);
    std::string line;
    while (!t.session.phase.terminal()) {
        if (!std::getline(std::cin, line)) {
            std::cerr << "input ended before the interview finished\n";
            return kExitAborted;
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        recorder.line("user", line);
        t = interview->advance(t.session, line);
        say(t.turn.messages);
    }

    try {
        switch (t.session.phase.kind) {
            case PhaseKind::Completed: {
                const ScreeningResult& r = *t.turn.result;
                std::cout << nlohmann::ordered_json{{"total", r.total},
                                  {"class", to_string(classify(r.total))},
                                  {"item9_flag", r.item9_flag}}
                                 .dump()
                          << '\n';
                if (store) std::cerr << "record_id " << store->persist_result(r, interview->script().locale) << '\n';
                return kExitOk;
            }
            case PhaseKind::Declined:
                if (store) store->record_event(SessionEvent::Declined, system_clock()());
                return kExitOk;
            default:
                if (store) store->record_event(SessionEvent::Aborted, system_clock()());
                return kExitAborted;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
}

// ---- score ------------------------------------------------------------------

int run_score(const std::string& answers) {
    std::vector<int> values;
    std::stringstream ss(answers);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.size() != 1 || cell[0] < '0' || cell[0] > '9') {
            std::cerr << "error: '" << cell << "' is not an item score\n";
            return kExitError;
        }
        values.push_back(cell[0] - '0');
    }
    if (!answers.empty() && answers.back() == ',') {
        std::cerr << "error: trailing comma\n";
        return kExitError;
    }
    try {
        const int total = total_score(values);
        std::cout << nlohmann::ordered_json{{"total", total}, {"class", to_string(classify(total))}}.dump() << '\n';
        return kExitOk;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
}

// ---- report -----------------------------------------------------------------

int run_report(const fs::path& paired, const fs::path& out, const fs::path& table) {
    const auto csv = read_file(paired);
    if (!csv) {
        std::cerr << "error: cannot read " << paired.string() << '\n';
        return kExitError;
    }
    try {
        const ValidationReport report = build_report(import_paired(*csv));
        if (!write_file(out, report_to_json(report))) {
            std::cerr << "error: cannot write " << out.string() << '\n';
            return kExitError;
        }
        if (!table.empty() && !write_file(table, report_table_csv(report))) {
            std::cerr << "error: cannot write " << table.string() << '\n';
            return kExitError;
        }
    } catch (const ValidationError& e) {
        std::cerr << paired.string() << ": " << e.what() << '\n';
        return kExitError;
    }
    return kExitOk;
}

// ---- lexicon lint -----------------------------------------------------------

struct LineRef {
    std::size_t number = 0;
    std::string text;
};

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

std::optional<LineRef> locate_phrase(const std::vector<std::string>& lines, const std::string& phrase) {
    const std::string needle = json(phrase).dump();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].find(needle) != std::string::npos) return LineRef{i + 1, lines[i]};
    }
    return std::nullopt;
}

LineRef line_of_offset(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    const std::size_t number = static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n')) + 1;
    const std::size_t begin = text.rfind('\n', offset == 0 ? 0 : offset - 1);
    const std::size_t start = begin == std::string::npos ? 0 : begin + 1;
    const std::size_t end = text.find('\n', start);
    return {number, text.substr(start, end == std::string::npos ? std::string::npos : end - start)};
}

int run_lint(const fs::path& file, std::size_t min_phrases, bool strict) {
    const auto text = read_file(file);
    if (!text) {
        std::cerr << "error: cannot read " << file.string() << '\n';
        return kExitError;
    }
    json doc;
    try {
        doc = json::parse(*text);
    } catch (const json::parse_error& e) {
        const LineRef where = line_of_offset(*text, e.byte == 0 ? 0 : e.byte - 1);
        std::cout << file.string() << ':' << where.number << ": error: malformed JSON\n    " << where.text << '\n';
        return kExitError;
    }

    std::vector<LexiconIssue> issues;
    const LexiconData data = parse_lexicon_data(doc, issues);
    if (issues.empty()) issues = check_lexicon(data);

    for (const auto& level : data.levels) {
        std::cout << "level " << level.score << ": " << level.phrases.size() << " phrases (canonical \""
                  << level.canonical << "\")\n";
        if (level.phrases.size() < min_phrases) {
            issues.push_back({LexiconIssue::Severity::Warning,
                              "level " + std::to_string(level.score) + " has fewer than " +
                                  std::to_string(min_phrases) + " phrases",
                              {}});
        }
    }
    std::cout << "affirm: " << data.affirm_phrases.size() << " phrases, deny: " << data.deny_phrases.size()
              << " phrases\n";

    const auto lines = split_lines(*text);
    std::size_t errors = 0;
    std::size_t warnings = 0;
    for (const auto& issue : issues) {
        const bool is_error = issue.severity == LexiconIssue::Severity::Error;
        (is_error ? errors : warnings) += 1;
        std::cout << file.string();
        const auto where = issue.phrase.empty() ? std::nullopt : locate_phrase(lines, issue.phrase);
        if (where) std::cout << ':' << where->number;
        std::cout << ": " << (is_error ? "error" : "warning") << ": " << issue.message << '\n';
        if (where) std::cout << "    " << where->text << '\n';
    }
    std::cout << errors << " error(s), " << warnings << " warning(s)\n";
    return errors == 0 && (!strict || warnings == 0) ? kExitOk : kExitError;
}

// ---- synth ------------------------------------------------------------------

int run_synth(const fs::path& out, std::size_t n, std::uint64_t seed, double noise, const std::string& cells) {
    SyntheticOptions options;
    options.n = n;
    options.seed = seed;
    options.mean_abs_noise = noise;
    if (!cells.empty()) {
        stats::ConfusionMatrix cm;
        char c1 = 0, c2 = 0, c3 = 0;
        std::istringstream ss(cells);
        if (!(ss >> cm.tp >> c1 >> cm.fp >> c2 >> cm.fn >> c3 >> cm.tn) || c1 != ',' || c2 != ',' || c3 != ',' ||
            !ss.eof()) {
            std::cerr << "error: --cells expects tp,fp,fn,tn\n";
            return kExitError;
        }
        options.cells = cm;
    }
    try {
        const std::string csv = export_paired(make_synthetic_dataset(options));
        if (out.empty() || out == "-") {
            std::cout << csv;
        } else if (!write_file(out, csv)) {
            std::cerr << "error: cannot write " << out.string() << '\n';
            return kExitError;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    const ServiceConfig defaults = ServiceConfig::from_env(PHQCHAT_DATA_DIR);

    CLI::App app{"Conversational PHQ-9 screening tools"};
    app.require_subcommand(1);

    InterviewArgs iv{defaults.script, defaults.lexicon, defaults.journal, {}, false};
    auto* interview = app.add_subcommand("interview", "Run an interview on standard input/output");
    interview->add_option("--script", iv.script, "Interview script JSON");
    interview->add_option("--lexicon", iv.lexicon, "Answer lexicon JSON");
    interview->add_option("--journal", iv.journal, "Results journal (JSON lines)");
    interview->add_flag("--no-persist", iv.no_persist, "Do not write to the journal");
    interview->add_option("--record", iv.record, "Write the dialogue as JSON lines to this file");

    std::string answers;
    auto* score = app.add_subcommand("score", "Score nine item answers");
    score->add_option("--answers", answers, "Nine comma-separated scores 0..3")->required();

    fs::path paired, out, table;
    auto* report = app.add_subcommand("report", "Build a validation report from a paired CSV");
    report->add_option("--paired", paired, "Paired dataset CSV")->required();
    report->add_option("--out", out, "Report JSON output")->required();
    report->add_option("--csv", table, "Item-by-item agreement table CSV output");

    fs::path lex_file;
    std::size_t min_phrases = 100;
    bool strict = false;
    auto* lexicon = app.add_subcommand("lexicon", "Lexicon utilities");
    lexicon->require_subcommand(1);
    auto* lint = lexicon->add_subcommand("lint", "Validate a lexicon file");
    lint->add_option("--file", lex_file, "Lexicon JSON")->required();
    lint->add_option("--min-phrases", min_phrases, "Warn when a level has fewer phrases")->capture_default_str();
    lint->add_flag("--strict", strict, "Treat warnings as failures");

    fs::path synth_out;
    std::size_t synth_n = 108;
    std::uint64_t synth_seed = 1;
    double synth_noise = 1.88;
    std::string synth_cells;
    auto* synth = app.add_subcommand("synth", "Generate a deterministic synthetic paired dataset");
    synth->add_option("--out", synth_out, "Output CSV (default: stdout)");
    synth->add_option("--n", synth_n, "Number of subjects")->capture_default_str()->check(CLI::Range(2, 100000));
    synth->add_option("--seed", synth_seed, "Random seed")->capture_default_str();
    synth->add_option("--noise", synth_noise, "Mean absolute total-score difference")->capture_default_str();
    synth->add_option("--cells", synth_cells, "Confusion cells tp,fp,fn,tn (overrides --n)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitError;
    }

    if (*interview) return run_interview(iv);
    if (*score) return run_score(answers);
    if (*report) return run_report(paired, out, table);
    if (*lint) return run_lint(lex_file, min_phrases, strict);
    if (*synth) return run_synth(synth_out, synth_n, synth_seed, synth_noise, synth_cells);
    return kExitError;
}
