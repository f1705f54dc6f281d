#pragma once

#include "phqchat/scoring.hpp"
#include "phqchat/timeutil.hpp"

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace phqchat {

inline constexpr int kJournalSchemaVersion = 1;

/// Anonymized persisted result. Holds no utterances, names or addresses.
struct StoredRecord {
    std::string record_id;
    Timestamp created_at{};
    Channel channel = Channel::Web;
    ItemScores item_scores{};
    int total = 0;
    bool positive = false;
    std::string locale;
    int schema_version = kJournalSchemaVersion;

    bool operator==(const StoredRecord&) const = default;
};

/// Sessions that end without a result are only counted.
enum class SessionEvent { Declined, Aborted };

const char* to_string(SessionEvent e);

nlohmann::ordered_json record_to_json(const StoredRecord& record);
StoredRecord record_from_json(const nlohmann::json& doc);

struct JournalContents {
    std::vector<StoredRecord> records;
    std::map<SessionEvent, long> events;
    long skipped_lines = 0;  // unparseable lines, e.g. a write cut short by a crash
};

/// Reads a journal; a missing file reads as empty.
JournalContents read_journal(const std::filesystem::path& path);

/// Append-only newline-delimited JSON journal of screening results.
///
/// Each record is written with a single append and flushed to disk before the
/// call returns. Earlier lines are never rewritten. One writer per file.
class ResultStore {
public:
    /// Opens (creating if needed) and indexes an existing journal. Throws IoError.
    explicit ResultStore(std::filesystem::path journal);

    /// Appends the result and returns its record id. Persisting the same session
    /// again returns the existing id without writing. Throws ValidationError for an
    /// inconsistent result or one carrying transcript text, IoError on write failure.
    std::string persist_result(const ScreeningResult& result, const std::string& locale);

    void record_event(SessionEvent event, Timestamp at);

    std::optional<StoredRecord> find(const std::string& record_id) const;
    std::vector<StoredRecord> records() const;
    long event_count(SessionEvent event) const;

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    void append_line(const std::string& line);

    std::filesystem::path path_;
    mutable std::mutex mu_;
    std::vector<StoredRecord> records_;
    std::map<std::string, std::size_t> by_id_;
    std::map<std::string, std::string> by_session_;
    std::map<SessionEvent, long> events_;
};

}  // namespace phqchat
