// HTTP chat service. Configuration comes from the environment; see ServiceConfig.

#include "phqchat/error.hpp"
#include "phqchat/service.hpp"

#include <httplib.h>

#include <atomic>
#include <csignal>
#include <condition_variable>
#include <iostream>
#include <thread>

using namespace phqchat;

namespace {

httplib::Server* g_server = nullptr;

extern "C" void on_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main() {
    ServiceConfig config;
    std::shared_ptr<ChatService> service;
    try {
        config = ServiceConfig::from_env(PHQCHAT_DATA_DIR);
        auto script = std::make_shared<const InterviewScript>(load_script(config.script));
        auto lexicon = std::make_shared<const Lexicon>(load_lexicon(config.lexicon));
        auto interview = std::make_shared<const Interview>(script, lexicon);
        auto store = std::make_shared<ResultStore>(config.journal);
        service = std::make_shared<ChatService>(interview, store, config.session_ttl);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    httplib::Server server;
    service->mount(server);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    std::mutex mu;
    std::condition_variable cv;
    bool done = false;
    std::thread janitor([&] {
        std::unique_lock lock(mu);
        while (!cv.wait_for(lock, std::chrono::seconds(30), [&] { return done; })) {
            service->evict_idle();
        }
    });

    std::cerr << "listening on " << config.host << ':' << config.port << ", journal " << config.journal.string()
              << '\n';
    const bool ok = server.listen(config.host, config.port);
    {
        std::lock_guard lock(mu);
        done = true;
    }
    cv.notify_all();
    janitor.join();
    if (!ok) {
        std::cerr << "error: cannot listen on " << config.host << ':' << config.port << '\n';
        return 1;
    }
    return 0;
}
