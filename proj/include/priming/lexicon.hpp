#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "priming/types.hpp"

namespace priming {

class LexiconError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NounEntry {
    std::string lemma;
    CategorySet categories;
    bool countable = true;
    std::size_t frequency_rank = 0;
};

struct VerbEntry {
    std::string lemma;
    VerbKind kind = VerbKind::Transitive;
    std::string past;
    std::string past_participle;
    std::string third_singular;
    std::optional<std::string> po_preposition;  // "to" or "for"; ditransitive only
    CategorySet agent_categories;
    CategorySet patient_categories;
    CategorySet recipient_categories;
    std::size_t frequency_rank = 0;

    CategorySet role_categories(Role r) const;
};

struct AdjectiveEntry {
    std::string lemma;
    CategorySet compatible_categories;
    std::size_t frequency_rank = 0;
};

// Directed cue->target strengths. Zero-strength rows are dropped at load time.
class AssociationTable {
public:
    void set(std::string cue, std::string target, double strength);
    std::optional<double> strength(std::string_view cue, std::string_view target) const;
    // True iff either direction is present with strength > 0.
    bool associated(std::string_view a, std::string_view b) const;
    // Every lemma linked to `lemma` in either direction.
    const std::vector<std::string>& neighbours(std::string_view lemma) const;
    std::size_t size() const { return strengths_.size(); }

private:
    static std::string key(std::string_view a, std::string_view b);
    std::unordered_map<std::string, double> strengths_;
    std::unordered_map<std::string, std::vector<std::string>> neighbours_;
};

class EmbeddingTable {
public:
    explicit EmbeddingTable(std::size_t dimension = 0) : dimension_(dimension) {}

    void set(std::string lemma, std::vector<double> vector);
    const std::vector<double>* find(std::string_view lemma) const;
    bool contains(std::string_view lemma) const { return find(lemma) != nullptr; }
    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return vectors_.size(); }

private:
    std::size_t dimension_;
    std::unordered_map<std::string, std::vector<double>> vectors_;
};

struct LexiconPaths {
    std::filesystem::path nouns;
    std::filesystem::path verbs;
    std::filesystem::path adjectives;
    std::filesystem::path padding;
    std::filesystem::path associations;
    std::filesystem::path embeddings;
    std::filesystem::path frequency;

    // Standard file names inside one directory.
    static LexiconPaths in_directory(const std::filesystem::path& dir);
    std::vector<std::filesystem::path> all() const;
};

class Lexicon {
public:
    std::vector<NounEntry> nouns;
    std::vector<VerbEntry> verbs;
    std::vector<AdjectiveEntry> adjectives;
    std::vector<std::string> pp_with_nouns;
    std::vector<std::string> countries;
    std::vector<std::string> pronouns;
    std::vector<std::string> auxiliaries;
    AssociationTable associations;
    EmbeddingTable embeddings;
    std::size_t frequency_cutoff = 5000;

    const NounEntry* find_noun(std::string_view lemma) const;
    const VerbEntry* find_verb(std::string_view lemma) const;
    const AdjectiveEntry* find_adjective(std::string_view lemma) const;

    // Whether a word may be drawn by the generator (frequency cutoff, countability).
    bool sampleable(const NounEntry& n) const;
    bool sampleable(const VerbEntry& v) const { return v.frequency_rank <= frequency_cutoff; }
    bool sampleable(const AdjectiveEntry& a) const { return a.frequency_rank <= frequency_cutoff; }

    // Rebuilds the lemma indexes; call after editing the entry vectors by hand.
    void reindex();

private:
    std::unordered_map<std::string, std::size_t> noun_index_;
    std::unordered_map<std::string, std::size_t> verb_index_;
    std::unordered_map<std::string, std::size_t> adjective_index_;
};

inline constexpr std::size_t kDefaultFrequencyCutoff = 5000;

Lexicon load_lexicon(const LexiconPaths& paths, std::size_t frequency_cutoff = kDefaultFrequencyCutoff);

bool is_associated(std::string_view a, std::string_view b, const Lexicon& lex);

// Throws LexiconError when either lemma has no vector.
double cosine_similarity(std::string_view a, std::string_view b, const Lexicon& lex);
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Nearest-rank percentile: the ceil(p/100 * n)-th smallest sample.
double similarity_threshold(std::vector<double> samples, double percentile);

// Stable digest of the lexicon source files, used in run manifests.
std::string lexicon_fingerprint(const LexiconPaths& paths);

}  // namespace priming
