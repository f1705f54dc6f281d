#pragma once

#include "phqchat/lexicon.hpp"
#include "phqchat/scoring.hpp"
#include "phqchat/script.hpp"
#include "phqchat/timeutil.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phqchat {

inline constexpr int kMaxConsecutiveNoMatch = 3;

enum class PhaseKind { AwaitingConsent, AwaitingItem, Completed, Declined, Aborted };

struct Phase {
    PhaseKind kind = PhaseKind::AwaitingConsent;
    int item = 0;  // 1..9 while AwaitingItem, otherwise 0

    static Phase awaiting_item(int k) { return {PhaseKind::AwaitingItem, k}; }
    static Phase of(PhaseKind kind) { return {kind, 0}; }

    bool terminal() const noexcept {
        return kind == PhaseKind::Completed || kind == PhaseKind::Declined || kind == PhaseKind::Aborted;
    }
    bool operator==(const Phase&) const = default;
};

/// Snake-case phase name ("awaiting_item" etc.).
const char* to_string(PhaseKind kind);

struct SessionState {
    std::string session_id;
    std::string script_id;
    Phase phase;
    std::map<int, int> collected;  // item index -> level
    int consecutive_nomatch = 0;
    Timestamp created_at{};
    bool transcript_enabled = false;
    Channel channel = Channel::Web;
    std::vector<std::string> transcript;

    bool operator==(const SessionState&) const = default;
};

struct AgentTurn {
    std::vector<std::string> messages;
    Phase new_phase;
    std::optional<ScreeningResult> result;  // present iff new_phase is Completed

    bool operator==(const AgentTurn&) const = default;
};

struct Transition {
    SessionState session;
    AgentTurn turn;
};

struct SessionOptions {
    Channel channel = Channel::Web;
    bool transcript_enabled = false;
};

/// The structured interview: consent, then the nine items in order, then feedback.
///
/// `advance` is a pure transition from one state to the next. Unmatched answers
/// escalate: the first gets the clarification reply, the second the enumerated
/// options, the third ends the session as Aborted.
class Interview {
public:
    /// Throws ValidationError if the script is invalid.
    Interview(std::shared_ptr<const InterviewScript> script, std::shared_ptr<const Lexicon> lexicon,
              Clock clock = system_clock());

    Transition start(SessionOptions options = {}) const;

    /// Throws StateError when the session is terminal or belongs to another script.
    Transition advance(const SessionState& session, std::string_view utterance) const;

    const InterviewScript& script() const noexcept { return *script_; }
    const Lexicon& lexicon() const noexcept { return *lexicon_; }

private:
    Transition on_consent(SessionState next, std::string_view utterance) const;
    Transition on_item(SessionState next, std::string_view utterance) const;

    std::shared_ptr<const InterviewScript> script_;
    std::shared_ptr<const Lexicon> lexicon_;
    Clock clock_;
};

}  // namespace phqchat
