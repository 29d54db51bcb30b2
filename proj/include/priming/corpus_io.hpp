#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "priming/generator.hpp"

namespace priming {

inline constexpr const char* kCorpusSchema = "priming-corpus/1";

class CorpusFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

nlohmann::json sentence_to_json(const Sentence& s);
Sentence sentence_from_json(const nlohmann::json& j);

nlohmann::json item_to_json(const PrimeTargetItem& item);
PrimeTargetItem item_from_json(const nlohmann::json& j);

// One JSON object per line, one line per item.
void write_corpus(std::ostream& out, const std::vector<PrimeTargetItem>& items);
void write_corpus_file(const std::filesystem::path& path, const std::vector<PrimeTargetItem>& items);

// Errors carry "<name>:<line>:".
std::vector<PrimeTargetItem> read_corpus(std::istream& in, const std::string& name = "<corpus>");
std::vector<PrimeTargetItem> read_corpus_file(const std::filesystem::path& path);

}  // namespace priming
