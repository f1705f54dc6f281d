#pragma once

#include "phqchat/lexicon.hpp"
#include "phqchat/script.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

namespace testsupport {

inline std::filesystem::path data_dir() { return PHQCHAT_DATA_DIR; }
inline std::filesystem::path shipped_lexicon_path() { return data_dir() / "lexicon_es.json"; }
inline std::filesystem::path shipped_script_path() { return data_dir() / "phq9_es.json"; }

inline std::shared_ptr<const phqchat::Lexicon> shipped_lexicon() {
    static const auto lex = std::make_shared<const phqchat::Lexicon>(phqchat::load_lexicon(shipped_lexicon_path()));
    return lex;
}

inline std::shared_ptr<const phqchat::InterviewScript> shipped_script() {
    static const auto script =
        std::make_shared<const phqchat::InterviewScript>(phqchat::load_script(shipped_script_path()));
    return script;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Fresh, empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("phqchat-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace testsupport
