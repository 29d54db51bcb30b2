#include "priming/types.hpp"

#include <array>

namespace priming {

namespace {

constexpr std::array<std::string_view, kCategoryCount> kCategoryNames = {
    "person",         "social_group",     "social_control",  "institution", "physical_entity", "object_nonedible",
    "object_edible",  "object_drinkable", "clothing",        "device",      "container",       "country",
};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view s, const std::array<std::string_view, N>& names) {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == s) return static_cast<Enum>(i);
    }
    return std::nullopt;
}

constexpr std::array<std::string_view, 5> kConstructionNames = {"ACT", "PASS", "DO", "PO", "INTR_PAD"};
constexpr std::array<std::string_view, 2> kTenseNames = {"past", "present"};
constexpr std::array<std::string_view, 2> kDeterminerNames = {"a_an", "the"};
constexpr std::array<std::string_view, 3> kVerbKindNames = {"transitive", "ditransitive", "intransitive_padding"};
constexpr std::array<std::string_view, 3> kRoleNames = {"agent", "patient", "recipient"};

}  // namespace

std::string_view to_string(Category c) { return kCategoryNames[static_cast<std::size_t>(c)]; }

std::optional<Category> parse_category(std::string_view s) { return lookup<Category>(s, kCategoryNames); }

std::vector<Category> CategorySet::members() const {
    std::vector<Category> out;
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
        auto c = static_cast<Category>(i);
        if (contains(c)) out.push_back(c);
    }
    return out;
}

std::string CategorySet::to_string() const {
    std::string out;
    for (Category c : members()) {
        if (!out.empty()) out += ';';
        out += priming::to_string(c);
    }
    return out;
}

std::string_view to_string(Construction c) { return kConstructionNames[static_cast<std::size_t>(c)]; }
std::string_view to_string(Alternation a) { return a == Alternation::Dative ? "dative" : "transitive"; }
std::string_view to_string(Tense t) { return kTenseNames[static_cast<std::size_t>(t)]; }
std::string_view to_string(Determiner d) { return kDeterminerNames[static_cast<std::size_t>(d)]; }
std::string_view to_string(VerbKind k) { return kVerbKindNames[static_cast<std::size_t>(k)]; }
std::string_view to_string(Role r) { return kRoleNames[static_cast<std::size_t>(r)]; }

std::optional<Construction> parse_construction(std::string_view s) {
    return lookup<Construction>(s, kConstructionNames);
}
std::optional<Tense> parse_tense(std::string_view s) { return lookup<Tense>(s, kTenseNames); }
std::optional<Determiner> parse_determiner(std::string_view s) { return lookup<Determiner>(s, kDeterminerNames); }
std::optional<VerbKind> parse_verb_kind(std::string_view s) { return lookup<VerbKind>(s, kVerbKindNames); }
std::optional<Role> parse_role(std::string_view s) { return lookup<Role>(s, kRoleNames); }

Construction counterpart(Construction c) {
    switch (c) {
        case Construction::ACT: return Construction::PASS;
        case Construction::PASS: return Construction::ACT;
        case Construction::DO: return Construction::PO;
        case Construction::PO: return Construction::DO;
        case Construction::INTR_PAD: break;
    }
    throw std::invalid_argument("padding sentences have no alternation counterpart");
}

Alternation alternation_of(Construction c) {
    switch (c) {
        case Construction::ACT:
        case Construction::PASS: return Alternation::Transitive;
        case Construction::DO:
        case Construction::PO: return Alternation::Dative;
        case Construction::INTR_PAD: break;
    }
    throw std::invalid_argument("padding sentences belong to no alternation");
}

bool is_dative(Construction c) { return c == Construction::DO || c == Construction::PO; }

}  // namespace priming
