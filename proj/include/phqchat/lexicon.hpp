#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace phqchat {

inline constexpr int kLevelCount = 4;
inline constexpr double kDefaultThreshold = 0.75;
inline constexpr double kDefaultTieEpsilon = 1e-9;

/// A lexicon phrase with its precomputed comparison forms.
struct Phrase {
    std::string text;        // as authored
    std::string normalized;  // normalized tokens joined by single spaces
    std::vector<std::u32string> tokens;
    std::u32string joined;

    static Phrase from_text(std::string_view text);
};

struct LevelEntry {
    int score = 0;
    std::string canonical;
    std::vector<Phrase> phrases;
};

/// Raw lexicon contents as read from JSON, before invariant checks.
struct LexiconData {
    std::string locale;
    double threshold = kDefaultThreshold;
    double tie_epsilon = kDefaultTieEpsilon;
    struct Level {
        int score = 0;
        std::string canonical;
        std::vector<std::string> phrases;
    };
    std::vector<Level> levels;
    std::vector<std::string> affirm_phrases;
    std::vector<std::string> deny_phrases;
};

struct LexiconIssue {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string message;
    std::string phrase;  // offending phrase, empty when not phrase-specific
};

/// Reads the lexicon schema. Structural problems are appended to `issues` as errors.
LexiconData parse_lexicon_data(const nlohmann::json& doc, std::vector<LexiconIssue>& issues);

/// Checks invariants (errors) and matching hazards (warnings).
///
/// Warnings flag phrases that are too short to survive a one-character typo at the
/// lexicon threshold, duplicates within a level, phrases that contain a phrase of
/// another level as a contiguous token run, and cross-level pairs whose whole-string
/// similarity reaches the threshold.
std::vector<LexiconIssue> check_lexicon(const LexiconData& data);

/// Immutable, validated synonym lexicon. Safe to share across threads.
class Lexicon {
public:
    /// Throws LoadError naming the first invariant violation.
    explicit Lexicon(const LexiconData& data);

    const std::string& locale() const noexcept { return locale_; }
    double threshold() const noexcept { return threshold_; }
    double tie_epsilon() const noexcept { return tie_epsilon_; }

    /// Indexed by score.
    const std::array<LevelEntry, kLevelCount>& levels() const noexcept { return levels_; }
    const std::vector<Phrase>& affirm_phrases() const noexcept { return affirm_; }
    const std::vector<Phrase>& deny_phrases() const noexcept { return deny_; }

private:
    std::string locale_;
    double threshold_;
    double tie_epsilon_;
    std::array<LevelEntry, kLevelCount> levels_;
    std::vector<Phrase> affirm_;
    std::vector<Phrase> deny_;
};

Lexicon parse_lexicon(std::string_view json_text);
Lexicon load_lexicon(const std::filesystem::path& path);

}  // namespace phqchat
