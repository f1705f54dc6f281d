#pragma once

#include "phqchat/interview.hpp"
#include "phqchat/store.hpp"
#include "phqchat/timeutil.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace httplib {
class Server;
}

namespace phqchat {

/// Settings read from the environment:
///   PHQCHAT_BIND         host:port (default 127.0.0.1:8080)
///   PHQCHAT_JOURNAL      results journal (default results.jsonl)
///   PHQCHAT_LEXICON      lexicon JSON
///   PHQCHAT_SCRIPT       interview script JSON
///   PHQCHAT_SESSION_TTL  idle session lifetime in seconds (default 1800)
struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path journal = "results.jsonl";
    std::filesystem::path lexicon;
    std::filesystem::path script;
    std::chrono::seconds session_ttl{1800};

    static ServiceConfig from_env(const std::filesystem::path& data_dir);
};

struct ApiResponse {
    int status = 200;
    std::string body;  // JSON
};

/// Chat endpoints over the interview engine. The server is the only place scores
/// are computed; clients receive messages, the phase, and a result summary.
///
/// Sessions live in memory and are dropped after `session_ttl` without activity.
/// Messages to one session are handled one at a time.
class ChatService {
public:
    ChatService(std::shared_ptr<const Interview> interview, std::shared_ptr<ResultStore> store,
                std::chrono::seconds session_ttl, Clock clock = system_clock());

    ApiResponse create_session(const std::string& body);
    ApiResponse post_message(const std::string& session_id, const std::string& body);
    ApiResponse get_result(const std::string& session_id);
    ApiResponse validation_report(const std::string& csv) const;

    /// Drops idle sessions; returns how many were removed.
    std::size_t evict_idle();
    std::size_t session_count() const;

    /// Registers every route, including GET /healthz.
    void mount(httplib::Server& server);

private:
    struct Entry {
        std::mutex mu;
        SessionState state;
        long next_sequence = 1;
        Timestamp last_active{};
        std::optional<ScreeningResult> result;
        std::string record_id;
    };

    std::shared_ptr<Entry> lookup(const std::string& session_id) const;

    std::shared_ptr<const Interview> interview_;
    std::shared_ptr<ResultStore> store_;
    std::chrono::seconds ttl_;
    Clock clock_;
    mutable std::mutex table_mu_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

}  // namespace phqchat
