#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "priming/lexicon.hpp"

namespace priming::testing {

inline const std::filesystem::path kFixtureDir = PRIMING_FIXTURE_LEXICON;
inline const std::filesystem::path kDataDir = PRIMING_DATA_LEXICON;

inline const Lexicon& fixture_lexicon() {
    static const Lexicon lex = load_lexicon(LexiconPaths::in_directory(kFixtureDir));
    return lex;
}

inline const Lexicon& full_lexicon() {
    static const Lexicon lex = load_lexicon(LexiconPaths::in_directory(kDataDir));
    return lex;
}

// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("priming-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
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

    void write(const std::string& name, const std::string& content) const {
        std::ofstream(path_ / name, std::ios::binary) << content;
    }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Copy of the fixture lexicon that a test can edit.
inline void copy_fixture(const TempDir& dir) {
    for (const auto& e : std::filesystem::directory_iterator(kFixtureDir))
        std::filesystem::copy_file(e.path(), dir.path() / e.path().filename());
}

}  // namespace priming::testing
