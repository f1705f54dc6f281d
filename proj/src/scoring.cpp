#include "phqchat/scoring.hpp"

#include "phqchat/error.hpp"

namespace phqchat {

const char* to_string(ScreenClass c) {
    return c == ScreenClass::Positive ? "positive" : "negative";
}

const char* to_string(Channel c) {
    switch (c) {
        case Channel::Web: return "web";
        case Channel::Cli: return "cli";
        case Channel::Api: return "api";
    }
    return "web";
}

Channel channel_from_string(const std::string& text) {
    if (text == "web") return Channel::Web;
    if (text == "cli") return Channel::Cli;
    if (text == "api") return Channel::Api;
    throw ValidationError("unknown channel '" + text + "'");
}

int total_score(std::span<const int> item_scores) {
    if (item_scores.size() != kItemCount) {
        throw ValidationError("expected 9 item scores, got " + std::to_string(item_scores.size()));
    }
    int total = 0;
    for (std::size_t i = 0; i < item_scores.size(); ++i) {
        const int v = item_scores[i];
        if (v < 0 || v > kMaxLevel) {
            throw ValidationError("item " + std::to_string(i + 1) + " score " + std::to_string(v) +
                                  " is outside 0..3");
        }
        total += v;
    }
    return total;
}

ScreenClass classify(int total) {
    if (total < 0 || total > kMaxTotal) {
        throw ValidationError("total " + std::to_string(total) + " is outside 0..27");
    }
    return total >= kCutoff ? ScreenClass::Positive : ScreenClass::Negative;
}

ScreeningResult make_result(std::string session_id, const ItemScores& item_scores, Channel channel,
                            Timestamp completed_at) {
    ScreeningResult r;
    r.session_id = std::move(session_id);
    r.item_scores = item_scores;
    r.total = total_score(item_scores);
    r.positive = classify(r.total) == ScreenClass::Positive;
    r.item9_flag = item_scores[kItemCount - 1] > 0;
    r.completed_at = completed_at;
    r.channel = channel;
    return r;
}

void validate_result(const ScreeningResult& r) {
    const int total = total_score(r.item_scores);
    if (total != r.total) {
        throw ValidationError("result total " + std::to_string(r.total) + " differs from item sum " +
                              std::to_string(total));
    }
    if (r.positive != (classify(total) == ScreenClass::Positive)) {
        throw ValidationError("result class disagrees with total");
    }
    if (r.item9_flag != (r.item_scores[kItemCount - 1] > 0)) {
        throw ValidationError("item 9 flag disagrees with item 9 score");
    }
}

std::vector<std::string> build_feedback(const ScreeningResult& result, const InterviewScript& script) {
    std::vector<std::string> out;
    out.push_back(result.positive ? script.feedback_positive : script.feedback_negative);
    if (result.item9_flag) {
        out.push_back(script.crisis_appendix);
    }
    return out;
}

nlohmann::json result_to_json(const ScreeningResult& r) {
    return {
        {"item_scores", r.item_scores},
        {"total", r.total},
        {"positive", r.positive},
        {"item9_flag", r.item9_flag},
        {"completed_at", to_iso8601(r.completed_at)},
        {"channel", to_string(r.channel)},
    };
}

}  // namespace phqchat
