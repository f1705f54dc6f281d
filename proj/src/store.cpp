#include "phqchat/store.hpp"

#include "phqchat/error.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>

#include <fcntl.h>
#include <unistd.h>

namespace phqchat {

using nlohmann::json;

const char* to_string(SessionEvent e) {
    return e == SessionEvent::Declined ? "declined" : "aborted";
}

nlohmann::ordered_json record_to_json(const StoredRecord& r) {
    nlohmann::ordered_json j;
    j["schema_version"] = r.schema_version;
    j["kind"] = "result";
    j["record_id"] = r.record_id;
    j["created_at"] = to_iso8601(r.created_at);
    j["channel"] = to_string(r.channel);
    j["locale"] = r.locale;
    j["item_scores"] = r.item_scores;
    j["total"] = r.total;
    j["positive"] = r.positive;
    return j;
}

StoredRecord record_from_json(const json& doc) {
    StoredRecord r;
    try {
        r.schema_version = doc.at("schema_version").get<int>();
        r.record_id = doc.at("record_id").get<std::string>();
        r.created_at = parse_iso8601(doc.at("created_at").get<std::string>());
        r.channel = channel_from_string(doc.at("channel").get<std::string>());
        r.locale = doc.at("locale").get<std::string>();
        r.item_scores = doc.at("item_scores").get<ItemScores>();
        r.total = doc.at("total").get<int>();
        r.positive = doc.at("positive").get<bool>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed journal record: ") + e.what());
    }
    if (total_score(r.item_scores) != r.total || (r.total >= kCutoff) != r.positive) {
        throw ValidationError("journal record " + r.record_id + " is internally inconsistent");
    }
    return r;
}

JournalContents read_journal(const std::filesystem::path& path) {
    JournalContents out;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (std::filesystem::exists(path)) {
            throw IoError("cannot read journal " + path.string());
        }
        return out;
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        try {
            const json doc = json::parse(line);
            const std::string kind = doc.at("kind").get<std::string>();
            if (kind == "result") {
                out.records.push_back(record_from_json(doc));
            } else if (kind == "event") {
                const std::string event = doc.at("event").get<std::string>();
                out.events[event == "declined" ? SessionEvent::Declined : SessionEvent::Aborted] += 1;
            } else {
                out.skipped_lines += 1;
            }
        } catch (const std::exception&) {
            out.skipped_lines += 1;
        }
    }
    return out;
}

ResultStore::ResultStore(std::filesystem::path journal) : path_(std::move(journal)) {
    if (path_.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path_.parent_path(), ec);
    }
    // Fail at startup rather than on the first completed interview.
    const int probe = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (probe < 0) {
        throw IoError("cannot open journal " + path_.string() + ": " + std::strerror(errno));
    }
    ::close(probe);
    JournalContents contents = read_journal(path_);
    records_ = std::move(contents.records);
    events_ = std::move(contents.events);
    for (std::size_t i = 0; i < records_.size(); ++i) {
        by_id_[records_[i].record_id] = i;
    }
    // A crash may have left a partial last line; terminate it so the next append
    // starts on a fresh line.
    std::ifstream tail(path_, std::ios::binary | std::ios::ate);
    if (tail && tail.tellg() > 0) {
        tail.seekg(-1, std::ios::end);
        if (tail.get() != '\n') {
            append_line("");
        }
    }
}

void ResultStore::append_line(const std::string& line) {
    const std::string data = line + '\n';
    const int fd = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd < 0) {
        throw IoError("cannot open journal " + path_.string() + ": " + std::strerror(errno));
    }
    const ssize_t written = ::write(fd, data.data(), data.size());
    const int write_errno = errno;
    const bool synced = ::fsync(fd) == 0;
    ::close(fd);
    if (written != static_cast<ssize_t>(data.size())) {
        throw IoError("short write to journal " + path_.string() + ": " + std::strerror(write_errno));
    }
    if (!synced) {
        throw IoError("cannot sync journal " + path_.string());
    }
}

std::string ResultStore::persist_result(const ScreeningResult& result, const std::string& locale) {
    validate_result(result);
    if (!result.transcript.empty()) {
        throw ValidationError("result carries transcript text; only anonymized scores may be stored");
    }
    std::lock_guard lock(mu_);
    if (!result.session_id.empty()) {
        if (const auto it = by_session_.find(result.session_id); it != by_session_.end()) {
            return it->second;
        }
    }
    StoredRecord rec;
    rec.record_id = make_uuid();
    rec.created_at = result.completed_at;
    rec.channel = result.channel;
    rec.item_scores = result.item_scores;
    rec.total = result.total;
    rec.positive = result.positive;
    rec.locale = locale;
    append_line(record_to_json(rec).dump());
    by_id_[rec.record_id] = records_.size();
    records_.push_back(rec);
    if (!result.session_id.empty()) {
        by_session_[result.session_id] = rec.record_id;
    }
    return rec.record_id;
}

void ResultStore::record_event(SessionEvent event, Timestamp at) {
    nlohmann::ordered_json j;
    j["schema_version"] = kJournalSchemaVersion;
    j["kind"] = "event";
    j["event"] = to_string(event);
    j["created_at"] = to_iso8601(at);
    std::lock_guard lock(mu_);
    append_line(j.dump());
    events_[event] += 1;
}

std::optional<StoredRecord> ResultStore::find(const std::string& record_id) const {
    std::lock_guard lock(mu_);
    if (const auto it = by_id_.find(record_id); it != by_id_.end()) {
        return records_[it->second];
    }
    return std::nullopt;
}

std::vector<StoredRecord> ResultStore::records() const {
    std::lock_guard lock(mu_);
    return records_;
}

long ResultStore::event_count(SessionEvent event) const {
    std::lock_guard lock(mu_);
    const auto it = events_.find(event);
    return it == events_.end() ? 0 : it->second;
}

}  // namespace phqchat
