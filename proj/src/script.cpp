#include "phqchat/script.hpp"

#include "phqchat/error.hpp"

#include <fstream>
#include <sstream>

namespace phqchat {

using nlohmann::json;

void InterviewScript::validate() const {
    const auto require = [](const std::string& value, const char* name) {
        if (value.empty()) {
            throw ValidationError(std::string("script field '") + name + "' must not be empty");
        }
    };
    require(script_id, "script_id");
    require(locale, "locale");
    require(consent_prompt, "consent_prompt");
    require(clarification_reply, "clarification_reply");
    require(options_reply, "options_reply");
    require(feedback_negative, "feedback_negative");
    require(feedback_positive, "feedback_positive");
    require(crisis_appendix, "crisis_appendix");
    require(closing_declined, "closing_declined");
    require(closing_aborted, "closing_aborted");
    if (items.size() != kItemCount) {
        throw ValidationError("script must contain exactly 9 items, found " + std::to_string(items.size()));
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].index != static_cast<int>(i) + 1) {
            throw ValidationError("script items must be indexed 1..9 in order; position " + std::to_string(i + 1) +
                                  " has index " + std::to_string(items[i].index));
        }
        if (items[i].prompt.empty()) {
            throw ValidationError("item " + std::to_string(i + 1) + " has an empty prompt");
        }
    }
}

const std::string& InterviewScript::prompt(int index) const {
    return items.at(static_cast<std::size_t>(index - 1)).prompt;
}

InterviewScript script_from_json(const json& doc) {
    InterviewScript s;
    try {
        s.script_id = doc.at("script_id").get<std::string>();
        s.locale = doc.at("locale").get<std::string>();
        s.consent_prompt = doc.at("consent_prompt").get<std::string>();
        for (const auto& item : doc.at("items")) {
            s.items.push_back({item.at("index").get<int>(), item.at("prompt").get<std::string>()});
        }
        s.clarification_reply = doc.at("clarification_reply").get<std::string>();
        s.options_reply = doc.at("options_reply").get<std::string>();
        s.feedback_negative = doc.at("feedback_negative").get<std::string>();
        s.feedback_positive = doc.at("feedback_positive").get<std::string>();
        s.crisis_appendix = doc.at("crisis_appendix").get<std::string>();
        s.closing_declined = doc.at("closing_declined").get<std::string>();
        s.closing_aborted = doc.at("closing_aborted").get<std::string>();
    } catch (const json::exception& e) {
        throw LoadError(std::string("script schema violation: ") + e.what());
    }
    try {
        s.validate();
    } catch (const ValidationError& e) {
        throw LoadError(std::string("invalid script: ") + e.what());
    }
    return s;
}

json script_to_json(const InterviewScript& s) {
    json items = json::array();
    for (const auto& item : s.items) {
        items.push_back({{"index", item.index}, {"prompt", item.prompt}});
    }
    return {
        {"script_id", s.script_id},
        {"locale", s.locale},
        {"consent_prompt", s.consent_prompt},
        {"items", items},
        {"clarification_reply", s.clarification_reply},
        {"options_reply", s.options_reply},
        {"feedback_negative", s.feedback_negative},
        {"feedback_positive", s.feedback_positive},
        {"crisis_appendix", s.crisis_appendix},
        {"closing_declined", s.closing_declined},
        {"closing_aborted", s.closing_aborted},
    };
}

InterviewScript load_script(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw LoadError("cannot open script file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    json doc;
    try {
        doc = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw LoadError(std::string("script parse error: ") + e.what());
    }
    return script_from_json(doc);
}

}  // namespace phqchat
