#include "phqchat/service.hpp"

#include "phqchat/dataset.hpp"
#include "phqchat/error.hpp"
#include "phqchat/report.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

namespace phqchat {

using nlohmann::json;

namespace {

ApiResponse error_response(int status, const std::string& code, const std::string& message) {
    return {status, json{{"error", code}, {"message", message}}.dump()};
}

json phase_json(const Phase& phase) {
    json j = {{"phase", to_string(phase.kind)}};
    if (phase.kind == PhaseKind::AwaitingItem) {
        j["item"] = phase.item;
    }
    return j;
}

std::optional<json> parse_body(const std::string& body) {
    if (body.find_first_not_of(" \t\r\n") == std::string::npos) {
        return json::object();
    }
    try {
        json doc = json::parse(body);
        if (doc.is_object()) {
            return doc;
        }
    } catch (const json::parse_error&) {
    }
    return std::nullopt;
}

}  // namespace

ServiceConfig ServiceConfig::from_env(const std::filesystem::path& data_dir) {
    ServiceConfig c;
    c.lexicon = data_dir / "lexicon_es.json";
    c.script = data_dir / "phq9_es.json";
    if (const char* bind = std::getenv("PHQCHAT_BIND")) {
        const std::string value = bind;
        const auto colon = value.rfind(':');
        if (colon == std::string::npos) {
            throw ValidationError("PHQCHAT_BIND must be host:port");
        }
        c.host = value.substr(0, colon);
        c.port = std::stoi(value.substr(colon + 1));
    }
    if (const char* v = std::getenv("PHQCHAT_JOURNAL")) c.journal = v;
    if (const char* v = std::getenv("PHQCHAT_LEXICON")) c.lexicon = v;
    if (const char* v = std::getenv("PHQCHAT_SCRIPT")) c.script = v;
    if (const char* v = std::getenv("PHQCHAT_SESSION_TTL")) c.session_ttl = std::chrono::seconds(std::stol(v));
    return c;
}

ChatService::ChatService(std::shared_ptr<const Interview> interview, std::shared_ptr<ResultStore> store,
                         std::chrono::seconds session_ttl, Clock clock)
    : interview_(std::move(interview)), store_(std::move(store)), ttl_(session_ttl), clock_(std::move(clock)) {}

std::shared_ptr<ChatService::Entry> ChatService::lookup(const std::string& session_id) const {
    std::lock_guard lock(table_mu_);
    const auto it = sessions_.find(session_id);
    return it == sessions_.end() ? nullptr : it->second;
}

ApiResponse ChatService::create_session(const std::string& body) {
    const auto doc = parse_body(body);
    if (!doc) {
        return error_response(400, "bad_request", "body must be a JSON object");
    }
    const std::string& supported = interview_->script().locale;
    if (const auto it = doc->find("locale"); it != doc->end()) {
        if (!it->is_string() || it->get<std::string>() != supported) {
            return error_response(400, "unsupported_locale", "supported locale: " + supported);
        }
    }
    SessionOptions options;
    options.channel = Channel::Web;
    if (const auto it = doc->find("channel"); it != doc->end()) {
        try {
            options.channel = channel_from_string(it->get<std::string>());
        } catch (const std::exception&) {
            return error_response(400, "bad_channel", "channel must be web, cli or api");
        }
    }

    evict_idle();
    auto [state, turn] = interview_->start(options);
    auto entry = std::make_shared<Entry>();
    entry->state = std::move(state);
    entry->last_active = clock_();

    json messages = json::array();
    for (const auto& text : turn.messages) {
        messages.push_back({{"role", "agent"}, {"text", text}, {"sequence", entry->next_sequence++}});
    }
    json out = {{"session_id", entry->state.session_id}, {"messages", messages}};
    out.update(phase_json(turn.new_phase));
    {
        std::lock_guard lock(table_mu_);
        sessions_[entry->state.session_id] = entry;
    }
    return {201, out.dump()};
}

ApiResponse ChatService::post_message(const std::string& session_id, const std::string& body) {
    const auto entry = lookup(session_id);
    if (!entry) {
        return error_response(404, "not_found", "unknown session");
    }
    const auto doc = parse_body(body);
    if (!doc) {
        return error_response(400, "bad_request", "body must be a JSON object");
    }
    const auto text_it = doc->find("text");
    if (text_it == doc->end() || !text_it->is_string()) {
        return error_response(422, "empty_text", "field 'text' is required");
    }
    const std::string text = text_it->get<std::string>();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        return error_response(422, "empty_text", "field 'text' must not be empty");
    }

    std::lock_guard lock(entry->mu);
    if (entry->state.phase.terminal()) {
        return error_response(409, "session_closed",
                              std::string("session is ") + to_string(entry->state.phase.kind));
    }
    Transition step = interview_->advance(entry->state, text);

    std::string record_id;
    if (store_) {
        try {
            if (step.turn.result) {
                ScreeningResult anonymous = *step.turn.result;
                anonymous.transcript.clear();
                record_id = store_->persist_result(anonymous, interview_->script().locale);
            } else if (step.turn.new_phase.kind == PhaseKind::Declined) {
                store_->record_event(SessionEvent::Declined, clock_());
            } else if (step.turn.new_phase.kind == PhaseKind::Aborted) {
                store_->record_event(SessionEvent::Aborted, clock_());
            }
        } catch (const IoError& e) {
            return error_response(503, "storage_unavailable", e.what());
        }
    }

    entry->state = std::move(step.session);
    entry->last_active = clock_();
    const long user_sequence = entry->next_sequence++;
    json messages = json::array();
    for (const auto& m : step.turn.messages) {
        messages.push_back({{"role", "agent"}, {"text", m}, {"sequence", entry->next_sequence++}});
    }
    json out = {{"user_sequence", user_sequence}, {"messages", messages}};
    out.update(phase_json(step.turn.new_phase));
    if (step.turn.result) {
        out["result"] = {{"total", step.turn.result->total},
                         {"positive", step.turn.result->positive},
                         {"item9_flag", step.turn.result->item9_flag}};
        entry->result = std::move(step.turn.result);
        entry->record_id = record_id;
    }
    return {200, out.dump()};
}

ApiResponse ChatService::get_result(const std::string& session_id) {
    const auto entry = lookup(session_id);
    if (!entry) {
        return error_response(404, "not_found", "unknown session");
    }
    std::lock_guard lock(entry->mu);
    if (!entry->result) {
        return error_response(409, "not_completed",
                              std::string("session is ") + to_string(entry->state.phase.kind));
    }
    json out = result_to_json(*entry->result);
    if (!entry->record_id.empty()) {
        out["record_id"] = entry->record_id;
    }
    return {200, out.dump()};
}

ApiResponse ChatService::validation_report(const std::string& csv) const {
    try {
        const PairedDataset dataset = import_paired(csv);
        return {200, report_to_json(build_report(dataset))};
    } catch (const ValidationError& e) {
        return {422, json{{"error", "invalid_dataset"}, {"diagnostics", json::array({e.what()})}}.dump()};
    }
}

std::size_t ChatService::evict_idle() {
    const Timestamp now = clock_();
    std::lock_guard lock(table_mu_);
    std::size_t removed = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        std::unique_lock entry_lock(it->second->mu, std::try_to_lock);
        if (entry_lock.owns_lock() && now - it->second->last_active > ttl_) {
            entry_lock.unlock();
            it = sessions_.erase(it);
            ++removed;
        } else {
            ++it;
        }
    }
    return removed;
}

std::size_t ChatService::session_count() const {
    std::lock_guard lock(table_mu_);
    return sessions_.size();
}

void ChatService::mount(httplib::Server& server) {
    const auto reply = [](httplib::Response& res, const ApiResponse& api) {
        res.status = api.status;
        res.set_content(api.body, "application/json; charset=utf-8");
    };
    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"status":"ok"})", "application/json");
    });
    server.Post("/api/sessions", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, create_session(req.body));
    });
    server.Post(R"(/api/sessions/([^/]+)/messages)",
                [this, reply](const httplib::Request& req, httplib::Response& res) {
                    reply(res, post_message(req.matches[1], req.body));
                });
    server.Get(R"(/api/sessions/([^/]+)/result)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, get_result(req.matches[1]));
    });
    server.Post("/api/reports/validation", [this, reply](const httplib::Request& req, httplib::Response& res) {
        std::string csv = req.body;
        if (req.is_multipart_form_data()) {
            if (req.has_file("file")) {
                csv = req.get_file_value("file").content;
            } else if (!req.files.empty()) {
                csv = req.files.begin()->second.content;
            } else {
                csv.clear();
            }
        }
        reply(res, validation_report(csv));
    });
}

}  // namespace phqchat
