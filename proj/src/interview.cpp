#include "phqchat/interview.hpp"

#include "phqchat/error.hpp"
#include "phqchat/matcher.hpp"

namespace phqchat {

const char* to_string(PhaseKind kind) {
    switch (kind) {
        case PhaseKind::AwaitingConsent: return "awaiting_consent";
        case PhaseKind::AwaitingItem: return "awaiting_item";
        case PhaseKind::Completed: return "completed";
        case PhaseKind::Declined: return "declined";
        case PhaseKind::Aborted: return "aborted";
    }
    return "aborted";
}

Interview::Interview(std::shared_ptr<const InterviewScript> script, std::shared_ptr<const Lexicon> lexicon,
                     Clock clock)
    : script_(std::move(script)), lexicon_(std::move(lexicon)), clock_(std::move(clock)) {
    if (!script_ || !lexicon_) {
        throw ValidationError("interview requires a script and a lexicon");
    }
    script_->validate();
}

Transition Interview::start(SessionOptions options) const {
    SessionState s;
    s.session_id = make_uuid();
    s.script_id = script_->script_id;
    s.phase = Phase::of(PhaseKind::AwaitingConsent);
    s.created_at = clock_();
    s.transcript_enabled = options.transcript_enabled;
    s.channel = options.channel;
    AgentTurn turn{{script_->consent_prompt}, s.phase, std::nullopt};
    return {std::move(s), std::move(turn)};
}

Transition Interview::advance(const SessionState& session, std::string_view utterance) const {
    if (session.phase.terminal()) {
        throw StateError(std::string("session is already ") + to_string(session.phase.kind));
    }
    if (session.script_id != script_->script_id) {
        throw StateError("session belongs to script '" + session.script_id + "'");
    }
    SessionState next = session;
    if (next.transcript_enabled) {
        next.transcript.emplace_back(utterance);
    }
    if (next.phase.kind == PhaseKind::AwaitingConsent) {
        return on_consent(std::move(next), utterance);
    }
    return on_item(std::move(next), utterance);
}

Transition Interview::on_consent(SessionState next, std::string_view utterance) const {
    AgentTurn turn;
    switch (match_consent(utterance, *lexicon_)) {
        case ConsentMatch::Affirm:
            next.phase = Phase::awaiting_item(1);
            turn.messages = {script_->prompt(1)};
            break;
        case ConsentMatch::Deny:
            next.phase = Phase::of(PhaseKind::Declined);
            turn.messages = {script_->closing_declined};
            break;
        case ConsentMatch::NoMatch:
            turn.messages = {script_->consent_prompt};
            break;
    }
    turn.new_phase = next.phase;
    return {std::move(next), std::move(turn)};
}

Transition Interview::on_item(SessionState next, std::string_view utterance) const {
    AgentTurn turn;
    const int k = next.phase.item;
    const MatchResult match = match_level(utterance, *lexicon_);

    if (const auto* level = std::get_if<LevelMatch>(&match)) {
        next.consecutive_nomatch = 0;
        next.collected[k] = level->score;
        if (k < kItemCount) {
            next.phase = Phase::awaiting_item(k + 1);
            turn.messages = {script_->prompt(k + 1)};
        } else {
            ItemScores scores{};
            for (const auto& [index, value] : next.collected) {
                scores[static_cast<std::size_t>(index - 1)] = value;
            }
            ScreeningResult result = make_result(next.session_id, scores, next.channel, clock_());
            result.transcript = next.transcript;
            next.phase = Phase::of(PhaseKind::Completed);
            turn.messages = build_feedback(result, *script_);
            turn.result = std::move(result);
        }
    } else {
        next.consecutive_nomatch += 1;
        if (next.consecutive_nomatch == 1) {
            turn.messages = {script_->clarification_reply};
        } else if (next.consecutive_nomatch == 2) {
            turn.messages = {script_->options_reply};
        } else {
            next.phase = Phase::of(PhaseKind::Aborted);
            turn.messages = {script_->closing_aborted};
        }
    }
    turn.new_phase = next.phase;
    return {std::move(next), std::move(turn)};
}

}  // namespace phqchat
