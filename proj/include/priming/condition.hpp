#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace priming {

enum class ConditionKind : std::uint8_t {
    Core,
    SemSimVerb,
    SemSimNouns,
    SemSimAll,
    OverlapRandomNoun,
    OverlapAllNouns,
    OverlapVerb,
    OverlapFunctionWords,
    Identical,
    ImplausiblePrime,
    Recency,
    Cumulative,
    Complexity,
};

enum class ComplexityMode : std::uint8_t { Prime, Target, Both };

std::string_view to_string(ConditionKind k);
std::string_view to_string(ComplexityMode m);

class ConditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ConditionSpec {
    ConditionKind kind = ConditionKind::Core;
    int position = 0;  // recency: 1..4, 4 = adjacent to the target
    int k = 0;         // cumulative: 1..5
    ComplexityMode mode = ComplexityMode::Prime;
    std::size_t targets_per_structure = 1500;
    std::size_t primes_per_target = 10;  // a cap for sem_sim_all
    std::uint64_t seed = 0;
    std::optional<double> similarity_threshold;  // resolved by calibration when unset
    std::size_t max_attempts = 10000;            // rejection budget per slot

    // "core", "recency_2", "cumulative_5", "complexity_both", ...
    std::string tag() const;
    // Throws ConditionError for out-of-range parameters.
    void validate() const;
    // Prime pairs per target actually requested (identical uses one).
    std::size_t pairs_per_target() const;
    bool uses_similarity() const;

    friend bool operator==(const ConditionSpec&, const ConditionSpec&) = default;
};

// Parses a tag as produced by ConditionSpec::tag(); other fields keep defaults.
ConditionSpec parse_condition_tag(std::string_view tag);

void to_json(nlohmann::json& j, const ConditionSpec& c);
void from_json(const nlohmann::json& j, ConditionSpec& c);

// Every condition variant at the given scale, in a fixed order.
std::vector<ConditionSpec> default_condition_matrix(std::uint64_t seed, std::size_t targets_per_structure = 1500,
                                                    std::size_t primes_per_target = 10);

}  // namespace priming
