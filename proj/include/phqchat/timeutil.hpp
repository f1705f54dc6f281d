#pragma once

#include <chrono>
#include <functional>
#include <string>

namespace phqchat {

using Timestamp = std::chrono::system_clock::time_point;
using Clock = std::function<Timestamp()>;

/// Formats as `YYYY-MM-DDTHH:MM:SSZ` (UTC, second resolution).
std::string to_iso8601(Timestamp t);

/// Parses the format produced by `to_iso8601`. Throws ValidationError.
Timestamp parse_iso8601(const std::string& text);

Clock system_clock();

/// Random RFC 4122 version-4 UUID in canonical lowercase form.
std::string make_uuid();

}  // namespace phqchat
