#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "priming/types.hpp"

namespace priming {

class MetricsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct PairedScore {
    std::string target_id;
    std::size_t prime_pair_index = 0;
    double lp_congruent = 0.0;
    double lp_incongruent = 0.0;
};

struct TargetPE {
    std::string target_id;
    double pe = 0.0;
    std::size_t n_pairs = 0;
    std::size_t preference_count = 0;  // lp_congruent > lp_incongruent, strictly
};

// Mean of (lp_congruent - lp_incongruent) over one target's prime pairs.
TargetPE priming_effect(std::span<const PairedScore> scores);

enum class CiMethod : std::uint8_t { StudentT, Normal };
std::string_view to_string(CiMethod m);
std::optional<CiMethod> parse_ci_method(std::string_view s);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct Summary {
    double mean_pe = 0.0;
    double sd = 0.0;  // sample standard deviation of per-target PE
    Interval ci99;
    double preference_rate = 0.0;  // pooled over pairs
    std::size_t n_targets = 0;
    std::size_t n_pairs = 0;
    std::size_t preference_count = 0;
};

// Two-sided 99% interval for the mean. Throws MetricsError for fewer than 2 targets.
Summary summarize(std::span<const TargetPE> targets, CiMethod method = CiMethod::StudentT);

// Quantile of Student's t with `df` degrees of freedom.
double t_quantile(double p, double df);

enum class Behavior : std::uint8_t { Symmetric, Asymmetric, Biased, Null };
std::string_view to_string(Behavior b);

enum class Sign : std::int8_t { Negative = -1, Zero = 0, Positive = 1 };
// Positive iff lo > 0, negative iff hi < 0.
Sign sign_of(Interval ci);

Behavior classify_behavior(Interval x, Interval y);

struct ConditionReport {
    std::string condition;
    Construction structure = Construction::ACT;
    Summary summary;
    Construction other_structure = Construction::PASS;
    std::optional<Summary> other;  // the alternation partner, when scored
    Behavior behavior = Behavior::Null;
    std::vector<TargetPE> targets;
};

// `other_structure` may be empty, which leaves `other` unset and the behavior null.
ConditionReport aggregate(std::string condition, Construction structure, std::vector<TargetPE> targets,
                          std::span<const TargetPE> other_structure, CiMethod method = CiMethod::StudentT);

// ceil(z^2 p (1-p) / margin^2).
std::int64_t cochran_sample_size(double z, double margin, double p);

// Pairs per structure in the default matrix (1500 targets x 10 primes); reports
// print it next to the formula's value.
inline constexpr std::int64_t kReferenceCorpusSize = 15000;

}  // namespace priming
