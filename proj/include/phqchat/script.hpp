#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace phqchat {

inline constexpr int kItemCount = 9;

struct ItemPrompt {
    int index = 0;  // 1..9
    std::string prompt;
};

/// Everything the interviewer says. Item prompts are asked verbatim; the engine
/// never rephrases a question.
struct InterviewScript {
    std::string script_id;
    std::string locale;
    std::string consent_prompt;
    std::vector<ItemPrompt> items;
    std::string clarification_reply;
    std::string options_reply;
    std::string feedback_negative;
    std::string feedback_positive;
    std::string crisis_appendix;
    std::string closing_declined;
    std::string closing_aborted;

    /// Throws ValidationError unless there are exactly nine items indexed 1..9
    /// (in order) and every text is non-empty.
    void validate() const;

    /// Prompt of item `index` (1-based).
    const std::string& prompt(int index) const;
};

InterviewScript script_from_json(const nlohmann::json& doc);
nlohmann::json script_to_json(const InterviewScript& script);

/// Reads and validates a script file. Throws LoadError.
InterviewScript load_script(const std::filesystem::path& path);

}  // namespace phqchat
