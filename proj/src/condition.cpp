#include "priming/condition.hpp"

#include <array>
#include <charconv>

namespace priming {

namespace {

constexpr std::array<std::string_view, 13> kKindNames = {
    "core",          "sem_sim_verb",      "sem_sim_nouns",    "sem_sim_all",    "overlap_random_noun",
    "overlap_all_nouns", "overlap_verb",  "overlap_function_words", "identical", "implausible_prime",
    "recency",       "cumulative",        "complexity",
};
constexpr std::array<std::string_view, 3> kModeNames = {"prime", "target", "both"};

int parse_int(std::string_view s, std::string_view tag) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConditionError("bad condition tag '" + std::string(tag) + "'");
    return v;
}

}  // namespace

std::string_view to_string(ConditionKind k) { return kKindNames[static_cast<std::size_t>(k)]; }
std::string_view to_string(ComplexityMode m) { return kModeNames[static_cast<std::size_t>(m)]; }

std::string ConditionSpec::tag() const {
    std::string t(to_string(kind));
    switch (kind) {
        case ConditionKind::Recency: return t + "_" + std::to_string(position);
        case ConditionKind::Cumulative: return t + "_" + std::to_string(k);
        case ConditionKind::Complexity: return t + "_" + std::string(to_string(mode));
        default: return t;
    }
}

void ConditionSpec::validate() const {
    if (kind == ConditionKind::Recency && (position < 1 || position > 4))
        throw ConditionError("recency position must lie in 1..4, got " + std::to_string(position));
    if (kind == ConditionKind::Cumulative && (k < 1 || k > 5))
        throw ConditionError("cumulative k must lie in 1..5, got " + std::to_string(k));
    if (targets_per_structure == 0) throw ConditionError("targets_per_structure must be positive");
    if (primes_per_target == 0) throw ConditionError("primes_per_target must be positive");
    if (max_attempts == 0) throw ConditionError("max_attempts must be positive");
    if (similarity_threshold && !(*similarity_threshold >= -1.0 && *similarity_threshold <= 1.0))
        throw ConditionError("similarity_threshold must lie in [-1, 1]");
}

std::size_t ConditionSpec::pairs_per_target() const { return kind == ConditionKind::Identical ? 1 : primes_per_target; }

bool ConditionSpec::uses_similarity() const {
    return kind == ConditionKind::SemSimVerb || kind == ConditionKind::SemSimNouns || kind == ConditionKind::SemSimAll;
}

ConditionSpec parse_condition_tag(std::string_view tag) {
    ConditionSpec c;
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        const auto name = kKindNames[i];
        const auto kind = static_cast<ConditionKind>(i);
        const bool parametric =
            kind == ConditionKind::Recency || kind == ConditionKind::Cumulative || kind == ConditionKind::Complexity;
        if (!parametric) {
            if (tag == name) {
                c.kind = kind;
                return c;
            }
            continue;
        }
        if (tag.size() <= name.size() + 1 || tag.substr(0, name.size()) != name || tag[name.size()] != '_') continue;
        auto arg = tag.substr(name.size() + 1);
        c.kind = kind;
        if (kind == ConditionKind::Recency) c.position = parse_int(arg, tag);
        else if (kind == ConditionKind::Cumulative) c.k = parse_int(arg, tag);
        else {
            bool found = false;
            for (std::size_t m = 0; m < kModeNames.size(); ++m) {
                if (kModeNames[m] == arg) {
                    c.mode = static_cast<ComplexityMode>(m);
                    found = true;
                }
            }
            if (!found) throw ConditionError("unknown complexity mode '" + std::string(arg) + "'");
        }
        c.validate();
        return c;
    }
    throw ConditionError("unknown condition '" + std::string(tag) + "'");
}

void to_json(nlohmann::json& j, const ConditionSpec& c) {
    j = nlohmann::json{{"name", to_string(c.kind)},
                       {"tag", c.tag()},
                       {"targets_per_structure", c.targets_per_structure},
                       {"primes_per_target", c.primes_per_target},
                       {"seed", c.seed},
                       {"max_attempts", c.max_attempts}};
    if (c.kind == ConditionKind::Recency) j["position"] = c.position;
    if (c.kind == ConditionKind::Cumulative) j["k"] = c.k;
    if (c.kind == ConditionKind::Complexity) j["mode"] = to_string(c.mode);
    if (c.similarity_threshold) j["similarity_threshold"] = *c.similarity_threshold;
}

void from_json(const nlohmann::json& j, ConditionSpec& c) {
    if (!j.is_object()) throw ConditionError("condition must be a JSON object");
    // Either a full tag ("recency_2") or a name plus parameters.
    if (j.contains("tag")) {
        c = parse_condition_tag(j.at("tag").get<std::string>());
    } else {
        const auto name = j.at("name").get<std::string>();
        std::string tag = name;
        if (name == "recency") tag += "_" + std::to_string(j.at("position").get<int>());
        else if (name == "cumulative") tag += "_" + std::to_string(j.at("k").get<int>());
        else if (name == "complexity") tag += "_" + j.at("mode").get<std::string>();
        c = parse_condition_tag(tag);
    }
    c.targets_per_structure = j.value("targets_per_structure", c.targets_per_structure);
    c.primes_per_target = j.value("primes_per_target", c.primes_per_target);
    c.seed = j.value("seed", c.seed);
    c.max_attempts = j.value("max_attempts", c.max_attempts);
    if (j.contains("similarity_threshold") && !j.at("similarity_threshold").is_null())
        c.similarity_threshold = j.at("similarity_threshold").get<double>();
    c.validate();
}

std::vector<ConditionSpec> default_condition_matrix(std::uint64_t seed, std::size_t targets_per_structure,
                                                    std::size_t primes_per_target) {
    std::vector<std::string> tags = {"core",
                                     "sem_sim_verb",
                                     "sem_sim_nouns",
                                     "sem_sim_all",
                                     "overlap_random_noun",
                                     "overlap_all_nouns",
                                     "overlap_verb",
                                     "overlap_function_words",
                                     "identical",
                                     "implausible_prime"};
    for (int p = 1; p <= 4; ++p) tags.push_back("recency_" + std::to_string(p));
    for (int k = 1; k <= 5; ++k) tags.push_back("cumulative_" + std::to_string(k));
    for (auto m : {"prime", "target", "both"}) tags.push_back(std::string("complexity_") + m);
    std::vector<ConditionSpec> out;
    for (const auto& t : tags) {
        auto c = parse_condition_tag(t);
        c.seed = seed;
        c.targets_per_structure = targets_per_structure;
        c.primes_per_target = primes_per_target;
        out.push_back(c);
    }
    return out;
}

}  // namespace priming
