#include "priming/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "priming/digest.hpp"

namespace priming {

namespace fs = std::filesystem;

namespace {

struct Row {
    std::size_t line = 0;
    std::vector<std::string> cols;
};

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

std::ifstream open_or_throw(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw LexiconError("missing lexicon file: " + p.string());
    return in;
}

// Tab-separated rows; blank lines and '#' comments skipped.
std::vector<Row> read_rows(const fs::path& p) {
    auto in = open_or_throw(p);
    std::vector<Row> rows;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line.front() == '#') continue;
        Row r{n, split(line, '\t')};
        for (auto& c : r.cols) c = trim(c);
        rows.push_back(std::move(r));
    }
    return rows;
}

[[noreturn]] void fail(const fs::path& p, std::size_t line, const std::string& msg) {
    throw LexiconError(p.filename().string() + ":" + std::to_string(line) + ": " + msg);
}

bool valid_lemma(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return (c >= 'a' && c <= 'z') || c == '-' || c == '\''; });
}

std::map<std::string, std::string> parse_annotations(const fs::path& p, const Row& r, std::size_t first) {
    std::map<std::string, std::string> kv;
    for (std::size_t i = first; i < r.cols.size(); ++i) {
        const auto& c = r.cols[i];
        if (c.empty()) continue;
        auto eq = c.find('=');
        if (eq == std::string::npos || eq == 0) fail(p, r.line, "malformed annotation '" + c + "' (expected key=value)");
        auto key = c.substr(0, eq);
        if (!kv.emplace(key, c.substr(eq + 1)).second) fail(p, r.line, "duplicate annotation '" + key + "'");
    }
    return kv;
}

CategorySet parse_categories(const fs::path& p, std::size_t line, const std::string& value) {
    CategorySet set;
    for (const auto& part : split(value, ';')) {
        auto name = trim(part);
        if (name.empty()) continue;
        auto c = parse_category(name);
        if (!c) fail(p, line, "unknown noun category '" + name + "'");
        set.insert(*c);
    }
    return set;
}

void reject_unknown(const fs::path& p, const Row& r, const std::map<std::string, std::string>& kv,
                    std::initializer_list<std::string_view> allowed) {
    for (const auto& [k, v] : kv) {
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            fail(p, r.line, "unexpected annotation '" + k + "'");
    }
}

std::unordered_map<std::string, std::size_t> read_frequency(const fs::path& p) {
    auto in = open_or_throw(p);
    std::unordered_map<std::string, std::size_t> rank;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        auto w = trim(line);
        if (!w.empty()) rank.emplace(w, n);
    }
    return rank;
}

EmbeddingTable read_embeddings(const fs::path& p) {
    auto in = open_or_throw(p);
    std::string line;
    if (!std::getline(in, line)) fail(p, 1, "empty embedding file");
    std::istringstream header(line);
    std::size_t count = 0, dim = 0;
    if (!(header >> count >> dim) || dim == 0) fail(p, 1, "header must be 'count dimension'");
    EmbeddingTable table(dim);
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (trim(line).empty()) continue;
        std::istringstream ls(line);
        std::string lemma;
        ls >> lemma;
        std::vector<double> v;
        v.reserve(dim);
        double x = 0;
        while (ls >> x) v.push_back(x);
        if (!ls.eof()) fail(p, n, "non-numeric vector component for '" + lemma + "'");
        if (v.size() != dim)
            fail(p, n, "vector for '" + lemma + "' has " + std::to_string(v.size()) + " components, expected " +
                           std::to_string(dim));
        if (std::all_of(v.begin(), v.end(), [](double d) { return d == 0.0; }))
            fail(p, n, "zero vector for '" + lemma + "'");
        table.set(lemma, std::move(v));
    }
    if (table.size() != count)
        fail(p, 1, "header announces " + std::to_string(count) + " vectors, file has " + std::to_string(table.size()));
    return table;
}

}  // namespace

CategorySet VerbEntry::role_categories(Role r) const {
    switch (r) {
        case Role::Agent: return agent_categories;
        case Role::Patient: return patient_categories;
        case Role::Recipient: return recipient_categories;
    }
    return {};
}

// ---------------------------------------------------------------------------

std::string AssociationTable::key(std::string_view a, std::string_view b) {
    std::string k;
    k.reserve(a.size() + b.size() + 1);
    k.append(a);
    k += '\x1f';
    k.append(b);
    return k;
}

void AssociationTable::set(std::string cue, std::string target, double strength) {
    if (!(strength >= 0.0 && strength <= 1.0))
        throw LexiconError("association strength out of [0,1] for " + cue + " -> " + target);
    auto k = key(cue, target);
    if (strength == 0.0) {
        strengths_.erase(k);
        return;
    }
    bool fresh = strengths_.find(k) == strengths_.end() && strengths_.find(key(target, cue)) == strengths_.end();
    strengths_[k] = strength;
    if (fresh && cue != target) {
        neighbours_[cue].push_back(target);
        neighbours_[target].push_back(cue);
    }
}

std::optional<double> AssociationTable::strength(std::string_view cue, std::string_view target) const {
    auto it = strengths_.find(key(cue, target));
    if (it == strengths_.end()) return std::nullopt;
    return it->second;
}

bool AssociationTable::associated(std::string_view a, std::string_view b) const {
    auto ab = strength(a, b);
    if (ab && *ab > 0.0) return true;
    auto ba = strength(b, a);
    return ba && *ba > 0.0;
}

const std::vector<std::string>& AssociationTable::neighbours(std::string_view lemma) const {
    static const std::vector<std::string> kNone;
    auto it = neighbours_.find(std::string(lemma));
    return it == neighbours_.end() ? kNone : it->second;
}

void EmbeddingTable::set(std::string lemma, std::vector<double> vector) {
    if (dimension_ == 0) dimension_ = vector.size();
    if (vector.size() != dimension_) throw LexiconError("embedding dimension mismatch for '" + lemma + "'");
    vectors_[std::move(lemma)] = std::move(vector);
}

const std::vector<double>* EmbeddingTable::find(std::string_view lemma) const {
    auto it = vectors_.find(std::string(lemma));
    return it == vectors_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------

LexiconPaths LexiconPaths::in_directory(const fs::path& dir) {
    return {dir / "nouns.tsv",        dir / "verbs.tsv",      dir / "adjectives.tsv", dir / "padding.tsv",
            dir / "associations.tsv", dir / "embeddings.txt", dir / "frequency.txt"};
}

std::vector<fs::path> LexiconPaths::all() const {
    return {nouns, verbs, adjectives, padding, associations, embeddings, frequency};
}

const NounEntry* Lexicon::find_noun(std::string_view lemma) const {
    auto it = noun_index_.find(std::string(lemma));
    return it == noun_index_.end() ? nullptr : &nouns[it->second];
}

const VerbEntry* Lexicon::find_verb(std::string_view lemma) const {
    auto it = verb_index_.find(std::string(lemma));
    return it == verb_index_.end() ? nullptr : &verbs[it->second];
}

const AdjectiveEntry* Lexicon::find_adjective(std::string_view lemma) const {
    auto it = adjective_index_.find(std::string(lemma));
    return it == adjective_index_.end() ? nullptr : &adjectives[it->second];
}

bool Lexicon::sampleable(const NounEntry& n) const { return n.countable && n.frequency_rank <= frequency_cutoff; }

void Lexicon::reindex() {
    auto by_lemma = [](const auto& a, const auto& b) { return a.lemma < b.lemma; };
    std::sort(nouns.begin(), nouns.end(), by_lemma);
    std::sort(verbs.begin(), verbs.end(), by_lemma);
    std::sort(adjectives.begin(), adjectives.end(), by_lemma);
    noun_index_.clear();
    verb_index_.clear();
    adjective_index_.clear();
    for (std::size_t i = 0; i < nouns.size(); ++i) noun_index_.emplace(nouns[i].lemma, i);
    for (std::size_t i = 0; i < verbs.size(); ++i) verb_index_.emplace(verbs[i].lemma, i);
    for (std::size_t i = 0; i < adjectives.size(); ++i) adjective_index_.emplace(adjectives[i].lemma, i);

    const CategorySet with_categories{Category::Clothing, Category::Device, Category::Container};
    pp_with_nouns.clear();
    countries.clear();
    for (const auto& n : nouns) {
        if (n.categories.contains(Category::Country)) countries.push_back(n.lemma);
        else if (n.categories.subset_of(with_categories)) pp_with_nouns.push_back(n.lemma);
    }
}

Lexicon load_lexicon(const LexiconPaths& paths, std::size_t frequency_cutoff) {
    if (frequency_cutoff == 0) throw LexiconError("frequency cutoff must be positive");
    for (const auto& p : paths.all()) {
        if (!fs::exists(p)) throw LexiconError("missing lexicon file: " + p.string());
    }

    Lexicon lex;
    lex.frequency_cutoff = frequency_cutoff;
    const auto rank = read_frequency(paths.frequency);
    const std::size_t unranked = std::max<std::size_t>(rank.size(), frequency_cutoff) + 1;
    auto rank_of = [&](const std::string& lemma) {
        auto it = rank.find(lemma);
        return it == rank.end() ? unranked : it->second;
    };

    std::set<std::string> seen;
    auto check_lemma = [&](const fs::path& p, const Row& r) {
        if (r.cols.size() < 2) fail(p, r.line, "expected at least 2 tab-separated columns");
        if (!valid_lemma(r.cols[0])) fail(p, r.line, "invalid lemma '" + r.cols[0] + "' (lowercase letters only)");
        if (!seen.insert(r.cols[0]).second) fail(p, r.line, "duplicate lemma '" + r.cols[0] + "'");
    };

    for (const auto& r : read_rows(paths.nouns)) {
        check_lemma(paths.nouns, r);
        if (r.cols[1] != "noun") fail(paths.nouns, r.line, "expected class 'noun', got '" + r.cols[1] + "'");
        auto kv = parse_annotations(paths.nouns, r, 2);
        reject_unknown(paths.nouns, r, kv, {"categories", "countable"});
        NounEntry n;
        n.lemma = r.cols[0];
        if (!kv.count("categories")) fail(paths.nouns, r.line, "noun '" + n.lemma + "' has no categories");
        n.categories = parse_categories(paths.nouns, r.line, kv["categories"]);
        if (n.categories.empty()) fail(paths.nouns, r.line, "noun '" + n.lemma + "' has no categories");
        if (kv.count("countable")) {
            const auto& v = kv["countable"];
            if (v != "yes" && v != "no") fail(paths.nouns, r.line, "countable must be yes or no");
            n.countable = v == "yes";
        }
        n.frequency_rank = rank_of(n.lemma);
        lex.nouns.push_back(std::move(n));
    }

    seen.clear();
    for (const auto& r : read_rows(paths.verbs)) {
        check_lemma(paths.verbs, r);
        auto kind = parse_verb_kind(r.cols[1]);
        if (!kind) fail(paths.verbs, r.line, "unknown verb class '" + r.cols[1] + "'");
        auto kv = parse_annotations(paths.verbs, r, 2);
        reject_unknown(paths.verbs, r, kv, {"past", "participle", "third", "prep", "agent", "patient", "recipient"});
        VerbEntry v;
        v.lemma = r.cols[0];
        v.kind = *kind;
        auto get = [&](const char* k) { return kv.count(k) ? kv[k] : std::string(); };
        v.past = get("past");
        v.past_participle = get("participle");
        v.third_singular = get("third");
        if (kv.count("prep")) v.po_preposition = kv["prep"];
        v.agent_categories = parse_categories(paths.verbs, r.line, get("agent"));
        v.patient_categories = parse_categories(paths.verbs, r.line, get("patient"));
        v.recipient_categories = parse_categories(paths.verbs, r.line, get("recipient"));

        auto missing = [&](const std::string& what) {
            fail(paths.verbs, r.line, std::string(to_string(v.kind)) + " verb '" + v.lemma + "' is missing " + what);
        };
        switch (v.kind) {
            case VerbKind::Ditransitive:
                if (!v.po_preposition) missing("po_preposition (prep=to|for)");
                if (*v.po_preposition != "to" && *v.po_preposition != "for")
                    fail(paths.verbs, r.line, "verb '" + v.lemma + "': prep must be 'to' or 'for'");
                if (v.recipient_categories.empty()) missing("recipient categories");
                [[fallthrough]];
            case VerbKind::Transitive:
                if (v.past.empty()) missing("past form");
                if (v.third_singular.empty()) missing("third-person singular form");
                if (v.kind == VerbKind::Transitive && v.past_participle.empty()) missing("past participle");
                if (v.agent_categories.empty()) missing("agent categories");
                if (v.patient_categories.empty()) missing("patient categories");
                if (v.kind == VerbKind::Transitive && (!v.recipient_categories.empty() || v.po_preposition))
                    fail(paths.verbs, r.line, "transitive verb '" + v.lemma + "' carries dative annotations");
                break;
            case VerbKind::IntransitivePadding:
                if (!v.agent_categories.empty() || !v.patient_categories.empty() || !v.recipient_categories.empty())
                    fail(paths.verbs, r.line, "padding verb '" + v.lemma + "' must not carry role categories");
                break;
        }
        v.frequency_rank = rank_of(v.lemma);
        lex.verbs.push_back(std::move(v));
    }

    seen.clear();
    for (const auto& r : read_rows(paths.adjectives)) {
        check_lemma(paths.adjectives, r);
        if (r.cols[1] != "adjective")
            fail(paths.adjectives, r.line, "expected class 'adjective', got '" + r.cols[1] + "'");
        auto kv = parse_annotations(paths.adjectives, r, 2);
        reject_unknown(paths.adjectives, r, kv, {"compatible"});
        AdjectiveEntry a;
        a.lemma = r.cols[0];
        a.compatible_categories = parse_categories(paths.adjectives, r.line, kv["compatible"]);
        if (a.compatible_categories.empty())
            fail(paths.adjectives, r.line, "adjective '" + a.lemma + "' has no compatible categories");
        a.frequency_rank = rank_of(a.lemma);
        lex.adjectives.push_back(std::move(a));
    }

    for (const auto& r : read_rows(paths.padding)) {
        if (r.cols.size() != 2) fail(paths.padding, r.line, "expected 'class<TAB>word'");
        if (!valid_lemma(r.cols[1])) fail(paths.padding, r.line, "invalid word '" + r.cols[1] + "'");
        if (r.cols[0] == "pronoun") lex.pronouns.push_back(r.cols[1]);
        else if (r.cols[0] == "auxiliary") lex.auxiliaries.push_back(r.cols[1]);
        else fail(paths.padding, r.line, "unknown padding class '" + r.cols[0] + "'");
    }
    std::sort(lex.pronouns.begin(), lex.pronouns.end());
    std::sort(lex.auxiliaries.begin(), lex.auxiliaries.end());

    for (const auto& r : read_rows(paths.associations)) {
        if (r.cols.size() != 3) fail(paths.associations, r.line, "expected 'cue<TAB>target<TAB>strength'");
        double s = 0;
        try {
            std::size_t used = 0;
            s = std::stod(r.cols[2], &used);
            if (used != r.cols[2].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            fail(paths.associations, r.line, "invalid strength '" + r.cols[2] + "'");
        }
        if (!(s >= 0.0 && s <= 1.0)) fail(paths.associations, r.line, "strength out of [0,1]");
        lex.associations.set(r.cols[0], r.cols[1], s);
    }

    lex.embeddings = read_embeddings(paths.embeddings);

    for (const auto& n : lex.nouns)
        if (!lex.embeddings.contains(n.lemma)) throw LexiconError("no embedding for noun '" + n.lemma + "'");
    for (const auto& v : lex.verbs)
        if (!lex.embeddings.contains(v.lemma)) throw LexiconError("no embedding for verb '" + v.lemma + "'");
    for (const auto& a : lex.adjectives)
        if (!lex.embeddings.contains(a.lemma)) throw LexiconError("no embedding for adjective '" + a.lemma + "'");

    lex.reindex();
    return lex;
}

bool is_associated(std::string_view a, std::string_view b, const Lexicon& lex) {
    return lex.associations.associated(a, b);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw LexiconError("cosine of vectors with different dimensions");
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) throw LexiconError("cosine of a zero vector");
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double cosine_similarity(std::string_view a, std::string_view b, const Lexicon& lex) {
    const auto* va = lex.embeddings.find(a);
    const auto* vb = lex.embeddings.find(b);
    if (!va) throw LexiconError("no embedding for '" + std::string(a) + "'");
    if (!vb) throw LexiconError("no embedding for '" + std::string(b) + "'");
    return cosine_similarity(*va, *vb);
}

double similarity_threshold(std::vector<double> samples, double percentile) {
    if (samples.empty()) throw std::invalid_argument("similarity_threshold: empty sample list");
    if (!(percentile > 0.0 && percentile < 100.0))
        throw std::invalid_argument("similarity_threshold: percentile must lie in (0, 100)");
    std::sort(samples.begin(), samples.end());
    // Guard against 0.9 * 10 evaluating to 9.000000000000002.
    double pos = percentile / 100.0 * static_cast<double>(samples.size());
    auto rank = static_cast<std::size_t>(std::ceil(pos - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, samples.size());
    return samples[rank - 1];
}

std::string lexicon_fingerprint(const LexiconPaths& paths) {
    std::string joined;
    for (const auto& p : paths.all()) {
        joined += p.filename().string();
        joined += ':';
        joined += sha256_file(p);
        joined += '\n';
    }
    return sha256_hex(joined);
}

}  // namespace priming
