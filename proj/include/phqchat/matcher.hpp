#pragma once

#include "phqchat/lexicon.hpp"

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace phqchat {

struct LevelMatch {
    int score = 0;
    double confidence = 0.0;
    std::string matched_phrase;
};

struct NoMatch {
    double best_confidence = 0.0;
};

/// Either a Likert level with confidence >= threshold, or NoMatch below it.
using MatchResult = std::variant<LevelMatch, NoMatch>;

enum class ConsentMatch { Affirm, Deny, NoMatch };

/// Best phrase score of one level for an utterance.
struct LevelScore {
    double score = 0.0;
    const Phrase* best_phrase = nullptr;
};

/// Utterance prepared for repeated phrase scoring.
struct Utterance {
    std::vector<std::u32string> tokens;
    std::u32string joined;

    static Utterance from_text(std::string_view text);
};

/// Similarity of a phrase to an utterance: the larger of the whole-string
/// similarity and the best sliding-window mean of aligned token similarities.
double phrase_score(const Phrase& phrase, const Utterance& utterance);

/// Best phrase score per level, indexed by level score.
std::array<LevelScore, kLevelCount> level_scores(const Utterance& utterance, const Lexicon& lexicon);

/// Maps an utterance to a Likert level.
///
/// A bare digit 0..3 is accepted with confidence 1.0. Otherwise the level with the
/// highest score wins; levels within `tie_epsilon` of the best resolve toward the
/// higher score. Scores below the lexicon threshold yield NoMatch.
MatchResult match_level(std::string_view utterance, const Lexicon& lexicon);

/// Consent recognition against the affirm/deny lists. An utterance equal to a
/// phrase of exactly one list decides immediately; otherwise the better list wins
/// if it clears the threshold, and a tie is never read as consent.
ConsentMatch match_consent(std::string_view utterance, const Lexicon& lexicon);

const char* to_string(ConsentMatch m);

}  // namespace phqchat
