#include "phqchat/matcher.hpp"

#include "phqchat/text.hpp"

#include <algorithm>
#include <cmath>

namespace phqchat {

Utterance Utterance::from_text(std::string_view text) {
    Utterance u;
    const auto tokens = normalize(text);
    for (const auto& t : tokens) {
        u.tokens.push_back(to_code_points(t));
    }
    u.joined = to_code_points(join_tokens(tokens));
    return u;
}

double phrase_score(const Phrase& phrase, const Utterance& utterance) {
    if (utterance.tokens.empty() || phrase.tokens.empty()) {
        return 0.0;
    }
    double best = token_similarity(phrase.joined, utterance.joined);
    const std::size_t width = phrase.tokens.size();
    if (width > utterance.tokens.size()) {
        return best;
    }
    for (std::size_t start = 0; start + width <= utterance.tokens.size() && best < 1.0; ++start) {
        double sum = 0.0;
        for (std::size_t k = 0; k < width; ++k) {
            sum += token_similarity(phrase.tokens[k], utterance.tokens[start + k]);
        }
        best = std::max(best, sum / static_cast<double>(width));
    }
    return best;
}

namespace {

LevelScore best_of(const std::vector<Phrase>& phrases, const Utterance& utterance) {
    LevelScore out;
    for (const auto& p : phrases) {
        const double s = phrase_score(p, utterance);
        if (out.best_phrase == nullptr || s > out.score) {
            out.score = s;
            out.best_phrase = &p;
        }
    }
    return out;
}

bool equals_any(const std::vector<Phrase>& phrases, const std::u32string& joined) {
    return std::any_of(phrases.begin(), phrases.end(), [&](const Phrase& p) { return p.joined == joined; });
}

}  // namespace

std::array<LevelScore, kLevelCount> level_scores(const Utterance& utterance, const Lexicon& lexicon) {
    std::array<LevelScore, kLevelCount> out{};
    for (const auto& level : lexicon.levels()) {
        out[static_cast<std::size_t>(level.score)] = best_of(level.phrases, utterance);
    }
    return out;
}

MatchResult match_level(std::string_view text, const Lexicon& lexicon) {
    const Utterance utterance = Utterance::from_text(text);
    if (utterance.tokens.size() == 1 && utterance.joined.size() == 1) {
        const char32_t c = utterance.joined[0];
        if (c >= U'0' && c <= U'3') {
            const int digit = static_cast<int>(c - U'0');
            return LevelMatch{digit, 1.0, std::string(1, static_cast<char>('0' + digit))};
        }
    }

    const auto scores = level_scores(utterance, lexicon);
    double best = 0.0;
    for (const auto& s : scores) {
        best = std::max(best, s.score);
    }
    if (best < lexicon.threshold()) {
        return NoMatch{best};
    }
    for (int level = kLevelCount - 1; level >= 0; --level) {
        const auto& s = scores[static_cast<std::size_t>(level)];
        if (best - s.score <= lexicon.tie_epsilon()) {
            return LevelMatch{level, s.score, s.best_phrase->text};
        }
    }
    return NoMatch{best};  // unreachable: the best level always qualifies
}

ConsentMatch match_consent(std::string_view text, const Lexicon& lexicon) {
    const Utterance utterance = Utterance::from_text(text);
    if (utterance.tokens.empty()) {
        return ConsentMatch::NoMatch;
    }
    const bool exact_affirm = equals_any(lexicon.affirm_phrases(), utterance.joined);
    const bool exact_deny = equals_any(lexicon.deny_phrases(), utterance.joined);
    if (exact_affirm != exact_deny) {
        return exact_affirm ? ConsentMatch::Affirm : ConsentMatch::Deny;
    }

    const double affirm = best_of(lexicon.affirm_phrases(), utterance).score;
    const double deny = best_of(lexicon.deny_phrases(), utterance).score;
    if (std::abs(affirm - deny) <= lexicon.tie_epsilon() || std::max(affirm, deny) < lexicon.threshold()) {
        return ConsentMatch::NoMatch;
    }
    return affirm > deny ? ConsentMatch::Affirm : ConsentMatch::Deny;
}

const char* to_string(ConsentMatch m) {
    switch (m) {
        case ConsentMatch::Affirm: return "affirm";
        case ConsentMatch::Deny: return "deny";
        case ConsentMatch::NoMatch: return "no_match";
    }
    return "no_match";
}

}  // namespace phqchat
