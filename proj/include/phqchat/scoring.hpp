#pragma once

#include "phqchat/script.hpp"
#include "phqchat/timeutil.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace phqchat {

inline constexpr int kMaxLevel = 3;
inline constexpr int kMaxTotal = 27;
inline constexpr int kCutoff = 10;

enum class ScreenClass { Negative, Positive };
enum class Channel { Web, Cli, Api };

const char* to_string(ScreenClass c);
const char* to_string(Channel c);
Channel channel_from_string(const std::string& text);

using ItemScores = std::array<int, kItemCount>;

/// Outcome of one completed interview. Construct through `make_result` so the
/// derived fields always agree with the item scores.
struct ScreeningResult {
    std::string session_id;
    ItemScores item_scores{};
    int total = 0;
    bool positive = false;
    bool item9_flag = false;
    Timestamp completed_at{};
    Channel channel = Channel::Web;
    /// Raw utterances, only filled when the session recorded a transcript.
    std::vector<std::string> transcript;

    bool operator==(const ScreeningResult&) const = default;
};

/// Sum of nine item scores. Throws ValidationError on wrong arity or a value outside 0..3.
int total_score(std::span<const int> item_scores);

/// Positive iff total >= 10. Throws ValidationError outside 0..27.
ScreenClass classify(int total);

ScreeningResult make_result(std::string session_id, const ItemScores& item_scores, Channel channel,
                            Timestamp completed_at);

/// Throws ValidationError if derived fields disagree with the item scores.
void validate_result(const ScreeningResult& result);

/// Class feedback, followed by the crisis appendix whenever item 9 is above zero.
std::vector<std::string> build_feedback(const ScreeningResult& result, const InterviewScript& script);

/// Anonymized view: no session id, no transcript.
nlohmann::json result_to_json(const ScreeningResult& result);

}  // namespace phqchat
