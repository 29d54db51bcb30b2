#include "priming/recognizer.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "priming/sentence.hpp"

namespace priming {

namespace {

bool in(const std::vector<std::string>& v, const std::string& w) { return std::find(v.begin(), v.end(), w) != v.end(); }

class Parser {
public:
    Parser(std::vector<std::string> tokens, const Lexicon& lex) : t_(std::move(tokens)), lex_(lex) {}

    std::optional<Construction> run() {
        if (auto c = padding()) return c;
        pos_ = 0;
        if (!np()) return std::nullopt;
        const std::size_t after_subject = pos_;
        if (passive()) return Construction::PASS;
        pos_ = after_subject;
        if (after_subject >= t_.size()) return std::nullopt;
        const std::size_t after_verb = after_subject + 1;
        for (const auto* verb : finite_verbs(t_[after_subject])) {
            pos_ = after_verb;
            if (verb->kind == VerbKind::Transitive) {
                if (np() && done()) return Construction::ACT;
                continue;
            }
            if (np() && np() && done()) return Construction::DO;
            pos_ = after_verb;
            if (np() && match(*verb->po_preposition) && np() && done()) return Construction::PO;
        }
        return std::nullopt;
    }

private:
    bool done() const { return pos_ == t_.size(); }
    const std::string* peek() const { return pos_ < t_.size() ? &t_[pos_] : nullptr; }

    bool match(std::string_view w) {
        if (peek() && *peek() == w) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::optional<Construction> padding() {
        if (t_.size() != 3 || !in(lex_.pronouns, t_[0]) || !in(lex_.auxiliaries, t_[1])) return std::nullopt;
        const auto* v = lex_.find_verb(t_[2]);
        if (v && v->kind == VerbKind::IntransitivePadding) return Construction::INTR_PAD;
        return std::nullopt;
    }

    // Dt (A) N, with a/an checked against the following word.
    bool simple_np(bool with_noun) {
        const auto* det = peek();
        if (!det || (*det != "the" && *det != "a" && *det != "an")) return false;
        ++pos_;
        const auto* next = peek();
        if (!next) return false;
        if (*det != "the" && indefinite_article(*next) != *det) return false;
        if (lex_.find_adjective(*next)) ++pos_;
        const auto* head = peek();
        if (!head) return false;
        const auto* noun = lex_.find_noun(*head);
        if (!noun || noun->categories.contains(Category::Country)) return false;
        if (with_noun && !in(lex_.pp_with_nouns, *head)) return false;
        ++pos_;
        return true;
    }

    bool np() {
        if (!simple_np(false)) return false;
        const std::size_t save = pos_;
        if (match("with")) {
            if (simple_np(true)) return true;
        } else if (match("from")) {
            const auto* c = peek();
            const auto* noun = c ? lex_.find_noun(*c) : nullptr;
            if (noun && noun->categories.contains(Category::Country)) {
                ++pos_;
                return true;
            }
        }
        pos_ = save;
        return true;
    }

    bool passive() {
        if (!match("is") && !match("was")) return false;
        const auto* w = peek();
        if (!w) return false;
        bool participle = std::any_of(lex_.verbs.begin(), lex_.verbs.end(), [&](const VerbEntry& v) {
            return v.kind == VerbKind::Transitive && v.past_participle == *w;
        });
        if (!participle) return false;
        ++pos_;
        return match("by") && np() && done();
    }

    std::vector<const VerbEntry*> finite_verbs(const std::string& w) const {
        std::vector<const VerbEntry*> out;
        for (const auto& v : lex_.verbs) {
            if (v.kind == VerbKind::IntransitivePadding) continue;
            if (v.past == w || (v.kind == VerbKind::Transitive && v.third_singular == w)) out.push_back(&v);
        }
        return out;
    }

    std::vector<std::string> t_;
    const Lexicon& lex_;
    std::size_t pos_ = 0;
};

}  // namespace

std::optional<Construction> recognize(std::string_view text, const Lexicon& lex) {
    std::string s(text);
    while (!s.empty() && (s.back() == '.' || std::isspace(static_cast<unsigned char>(s.back())))) s.pop_back();
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::istringstream in(s);
    std::vector<std::string> tokens;
    for (std::string w; in >> w;) tokens.push_back(w);
    if (tokens.empty()) return std::nullopt;
    return Parser(std::move(tokens), lex).run();
}

}  // namespace priming
