#include "priming/metrics.hpp"

#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace priming {

TargetPE priming_effect(std::span<const PairedScore> scores) {
    if (scores.empty()) throw MetricsError("priming_effect: no scores");
    TargetPE out;
    out.target_id = scores.front().target_id;
    double sum = 0.0;
    for (const auto& s : scores) {
        if (s.target_id != out.target_id)
            throw MetricsError("priming_effect: mixed targets '" + out.target_id + "' and '" + s.target_id + "'");
        if (!std::isfinite(s.lp_congruent) || !std::isfinite(s.lp_incongruent))
            throw MetricsError("priming_effect: non-finite score for '" + s.target_id + "'");
        sum += s.lp_congruent - s.lp_incongruent;
        if (s.lp_congruent > s.lp_incongruent) ++out.preference_count;
    }
    out.n_pairs = scores.size();
    out.pe = sum / static_cast<double>(scores.size());
    return out;
}

std::string_view to_string(CiMethod m) { return m == CiMethod::StudentT ? "student_t" : "normal"; }

std::optional<CiMethod> parse_ci_method(std::string_view s) {
    if (s == "student_t") return CiMethod::StudentT;
    if (s == "normal") return CiMethod::Normal;
    return std::nullopt;
}

double t_quantile(double p, double df) {
    return boost::math::quantile(boost::math::students_t_distribution<double>(df), p);
}

Summary summarize(std::span<const TargetPE> targets, CiMethod method) {
    const std::size_t n = targets.size();
    if (n < 2) throw MetricsError("confidence interval needs at least 2 targets, got " + std::to_string(n));
    Summary s;
    s.n_targets = n;
    double sum = 0.0;
    for (const auto& t : targets) {
        sum += t.pe;
        s.n_pairs += t.n_pairs;
        s.preference_count += t.preference_count;
    }
    s.mean_pe = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& t : targets) ss += (t.pe - s.mean_pe) * (t.pe - s.mean_pe);
    s.sd = std::sqrt(ss / static_cast<double>(n - 1));
    const double q = method == CiMethod::StudentT
                         ? t_quantile(0.995, static_cast<double>(n - 1))
                         : boost::math::quantile(boost::math::normal_distribution<double>(), 0.995);
    const double half = q * s.sd / std::sqrt(static_cast<double>(n));
    s.ci99 = {s.mean_pe - half, s.mean_pe + half};
    s.preference_rate = s.n_pairs ? static_cast<double>(s.preference_count) / static_cast<double>(s.n_pairs) : 0.0;
    return s;
}

std::string_view to_string(Behavior b) {
    switch (b) {
        case Behavior::Symmetric: return "symmetric";
        case Behavior::Asymmetric: return "asymmetric";
        case Behavior::Biased: return "biased";
        case Behavior::Null: return "null";
    }
    return "null";
}

Sign sign_of(Interval ci) {
    if (ci.lo > 0) return Sign::Positive;
    if (ci.hi < 0) return Sign::Negative;
    return Sign::Zero;
}

Behavior classify_behavior(Interval x, Interval y) {
    const Sign a = sign_of(x), b = sign_of(y);
    if (a == Sign::Positive && b == Sign::Positive) return Behavior::Symmetric;
    if (a != Sign::Positive && b != Sign::Positive) return Behavior::Null;
    const Sign other = a == Sign::Positive ? b : a;
    return other == Sign::Zero ? Behavior::Asymmetric : Behavior::Biased;
}

ConditionReport aggregate(std::string condition, Construction structure, std::vector<TargetPE> targets,
                          std::span<const TargetPE> other_structure, CiMethod method) {
    ConditionReport r;
    r.condition = std::move(condition);
    r.structure = structure;
    r.other_structure = counterpart(structure);
    r.summary = summarize(targets, method);
    if (!other_structure.empty()) {
        r.other = summarize(other_structure, method);
        r.behavior = classify_behavior(r.summary.ci99, r.other->ci99);
    }
    r.targets = std::move(targets);
    return r;
}

std::int64_t cochran_sample_size(double z, double margin, double p) {
    if (!(z > 0) || !(margin > 0 && margin < 1) || !(p > 0 && p < 1))
        throw MetricsError("cochran_sample_size: need z > 0, 0 < margin < 1, 0 < p < 1");
    const double n = z * z * p * (1 - p) / (margin * margin);
    // Absorb representation error so exact integers are not bumped up.
    return static_cast<std::int64_t>(std::ceil(n - 1e-9 * n));
}

}  // namespace priming
