#include "phqchat/lexicon.hpp"

#include "phqchat/error.hpp"
#include "phqchat/text.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace phqchat {

using nlohmann::json;

Phrase Phrase::from_text(std::string_view text) {
    Phrase p;
    p.text = std::string(text);
    const auto tokens = normalize(text);
    p.normalized = join_tokens(tokens);
    p.tokens.reserve(tokens.size());
    for (const auto& t : tokens) {
        p.tokens.push_back(to_code_points(t));
    }
    p.joined = to_code_points(p.normalized);
    return p;
}

namespace {

void error(std::vector<LexiconIssue>& issues, std::string message, std::string phrase = {}) {
    issues.push_back({LexiconIssue::Severity::Error, std::move(message), std::move(phrase)});
}

void warn(std::vector<LexiconIssue>& issues, std::string message, std::string phrase = {}) {
    issues.push_back({LexiconIssue::Severity::Warning, std::move(message), std::move(phrase)});
}

std::vector<std::string> read_phrase_list(const json& doc, const std::string& key, const std::string& where,
                                          std::vector<LexiconIssue>& issues) {
    std::vector<std::string> out;
    const auto it = doc.find(key);
    if (it == doc.end()) {
        error(issues, where + ": missing field '" + key + "'");
        return out;
    }
    if (!it->is_array()) {
        error(issues, where + ": field '" + key + "' must be an array of strings");
        return out;
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
        const auto& v = (*it)[i];
        if (!v.is_string()) {
            error(issues, where + "." + key + "[" + std::to_string(i) + "]: expected a string");
            continue;
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

bool contains_window(const std::vector<std::u32string>& haystack, const std::vector<std::u32string>& needle) {
    if (needle.empty() || needle.size() > haystack.size()) {
        return false;
    }
    for (std::size_t start = 0; start + needle.size() <= haystack.size(); ++start) {
        if (std::equal(needle.begin(), needle.end(), haystack.begin() + static_cast<std::ptrdiff_t>(start))) {
            return true;
        }
    }
    return false;
}

}  // namespace

LexiconData parse_lexicon_data(const json& doc, std::vector<LexiconIssue>& issues) {
    LexiconData data;
    if (!doc.is_object()) {
        error(issues, "lexicon: top level must be an object");
        return data;
    }
    if (const auto it = doc.find("locale"); it != doc.end() && it->is_string()) {
        data.locale = it->get<std::string>();
    } else {
        error(issues, "lexicon: missing string field 'locale'");
    }
    if (const auto it = doc.find("threshold"); it != doc.end()) {
        if (it->is_number()) {
            data.threshold = it->get<double>();
        } else {
            error(issues, "lexicon: 'threshold' must be a number");
        }
    }
    if (const auto it = doc.find("tie_epsilon"); it != doc.end()) {
        if (it->is_number()) {
            data.tie_epsilon = it->get<double>();
        } else {
            error(issues, "lexicon: 'tie_epsilon' must be a number");
        }
    }

    const auto levels = doc.find("levels");
    if (levels == doc.end() || !levels->is_array()) {
        error(issues, "lexicon: missing array field 'levels'");
    } else {
        for (std::size_t i = 0; i < levels->size(); ++i) {
            const auto& entry = (*levels)[i];
            const std::string where = "levels[" + std::to_string(i) + "]";
            if (!entry.is_object()) {
                error(issues, where + ": expected an object");
                continue;
            }
            LexiconData::Level level;
            if (const auto s = entry.find("score"); s != entry.end() && s->is_number_integer()) {
                level.score = s->get<int>();
            } else {
                error(issues, where + ": missing integer field 'score'");
                level.score = -1;
            }
            if (const auto c = entry.find("canonical"); c != entry.end() && c->is_string()) {
                level.canonical = c->get<std::string>();
            } else {
                error(issues, where + ": missing string field 'canonical'");
            }
            level.phrases = read_phrase_list(entry, "phrases", where, issues);
            data.levels.push_back(std::move(level));
        }
    }
    data.affirm_phrases = read_phrase_list(doc, "affirm_phrases", "lexicon", issues);
    data.deny_phrases = read_phrase_list(doc, "deny_phrases", "lexicon", issues);
    return data;
}

std::vector<LexiconIssue> check_lexicon(const LexiconData& data) {
    std::vector<LexiconIssue> issues;
    if (data.locale.empty()) {
        error(issues, "locale must not be empty");
    }
    if (!(data.threshold > 0.0 && data.threshold <= 1.0)) {
        error(issues, "threshold must lie in (0, 1]");
    }
    if (!(data.tie_epsilon >= 0.0)) {
        error(issues, "tie_epsilon must be nonnegative");
    }
    if (data.levels.size() != kLevelCount) {
        error(issues, "expected exactly 4 levels, found " + std::to_string(data.levels.size()));
    }

    std::set<int> seen_scores;
    // normalized phrase -> level score that owns it
    std::map<std::string, int> owner;
    std::vector<std::pair<int, Phrase>> all;
    for (const auto& level : data.levels) {
        const std::string where = "level " + std::to_string(level.score);
        if (level.score < 0 || level.score >= kLevelCount) {
            error(issues, where + ": score must be 0..3");
        } else if (!seen_scores.insert(level.score).second) {
            error(issues, where + ": score appears more than once");
        }
        if (level.phrases.empty()) {
            error(issues, where + ": phrase list is empty");
        }
        std::set<std::string> local;
        for (const auto& text : level.phrases) {
            Phrase p = Phrase::from_text(text);
            if (p.normalized.empty()) {
                error(issues, where + ": phrase is empty after normalization", text);
                continue;
            }
            if (!local.insert(p.normalized).second) {
                warn(issues, where + ": duplicate phrase within level", text);
                continue;
            }
            if (const auto [it, inserted] = owner.emplace(p.normalized, level.score); !inserted) {
                error(issues,
                      "phrase '" + text + "' appears in level " + std::to_string(it->second) + " and level " +
                          std::to_string(level.score),
                      text);
                continue;
            }
            if (p.joined.size() < 4) {
                warn(issues, where + ": phrase shorter than 4 characters cannot absorb a typo", text);
            }
            all.emplace_back(level.score, std::move(p));
        }
        if (!level.canonical.empty() && !local.contains(join_tokens(normalize(level.canonical)))) {
            error(issues, where + ": canonical phrase is not among its phrases", level.canonical);
        } else if (level.canonical.empty()) {
            error(issues, where + ": canonical phrase is empty");
        }
    }

    for (const auto& [score_a, a] : all) {
        for (const auto& [score_b, b] : all) {
            if (score_a == score_b) {
                continue;
            }
            if (contains_window(a.tokens, b.tokens)) {
                warn(issues,
                     "level " + std::to_string(score_a) + " phrase '" + a.text + "' contains level " +
                         std::to_string(score_b) + " phrase '" + b.text + "'",
                     a.text);
            } else if (score_a < score_b && token_similarity(a.joined, b.joined) >= data.threshold) {
                warn(issues,
                     "level " + std::to_string(score_a) + " phrase '" + a.text + "' is within the threshold of level " +
                         std::to_string(score_b) + " phrase '" + b.text + "'",
                     a.text);
            }
        }
    }

    if (data.affirm_phrases.empty()) {
        error(issues, "affirm_phrases must not be empty");
    }
    if (data.deny_phrases.empty()) {
        error(issues, "deny_phrases must not be empty");
    }
    std::set<std::string> affirm;
    for (const auto& text : data.affirm_phrases) {
        const std::string n = join_tokens(normalize(text));
        if (n.empty()) {
            error(issues, "affirm phrase is empty after normalization", text);
        }
        affirm.insert(n);
    }
    for (const auto& text : data.deny_phrases) {
        const std::string n = join_tokens(normalize(text));
        if (n.empty()) {
            error(issues, "deny phrase is empty after normalization", text);
        } else if (affirm.contains(n)) {
            error(issues, "phrase '" + text + "' appears in both affirm and deny lists", text);
        }
    }
    return issues;
}

Lexicon::Lexicon(const LexiconData& data)
    : locale_(data.locale), threshold_(data.threshold), tie_epsilon_(data.tie_epsilon) {
    for (const auto& issue : check_lexicon(data)) {
        if (issue.severity == LexiconIssue::Severity::Error) {
            throw LoadError("invalid lexicon: " + issue.message);
        }
    }
    for (const auto& level : data.levels) {
        auto& entry = levels_[static_cast<std::size_t>(level.score)];
        entry.score = level.score;
        entry.canonical = level.canonical;
        std::set<std::string> seen;
        for (const auto& text : level.phrases) {
            Phrase p = Phrase::from_text(text);
            if (seen.insert(p.normalized).second) {
                entry.phrases.push_back(std::move(p));
            }
        }
    }
    for (const auto& text : data.affirm_phrases) {
        affirm_.push_back(Phrase::from_text(text));
    }
    for (const auto& text : data.deny_phrases) {
        deny_.push_back(Phrase::from_text(text));
    }
}

Lexicon parse_lexicon(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw LoadError(std::string("lexicon parse error: ") + e.what());
    }
    std::vector<LexiconIssue> issues;
    LexiconData data = parse_lexicon_data(doc, issues);
    for (const auto& issue : issues) {
        throw LoadError("lexicon schema violation: " + issue.message);
    }
    return Lexicon(data);
}

Lexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw LoadError("cannot open lexicon file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_lexicon(buf.str());
}

}  // namespace phqchat
