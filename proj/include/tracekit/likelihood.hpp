#pragma once
// Exact trace likelihoods Pr(c | seeds) for every channel, in log space.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tracekit/channels.hpp"
#include "tracekit/core.hpp"

namespace tracekit {

/// Natural-log probability. Probability zero is -infinity, which absorbs
/// under multiplication (log addition).
class LogProb {
public:
    constexpr LogProb() = default;  // probability one

    static constexpr LogProb from_log(double v) { return LogProb(v); }
    static LogProb from_prob(double p) { return LogProb(std::log(p)); }
    static constexpr LogProb impossible() {
        return LogProb(-std::numeric_limits<double>::infinity());
    }
    static constexpr LogProb certain() { return LogProb(0.0); }

    constexpr double log() const noexcept { return value_; }
    double prob() const noexcept { return std::exp(value_); }
    constexpr bool is_impossible() const noexcept {
        return value_ == -std::numeric_limits<double>::infinity();
    }

    constexpr LogProb operator*(LogProb other) const { return LogProb(value_ + other.value_); }
    constexpr LogProb& operator*=(LogProb other) {
        value_ += other.value_;
        return *this;
    }
    constexpr bool operator==(const LogProb&) const = default;

private:
    constexpr explicit LogProb(double v) : value_(v) {}
    double value_ = 0.0;
};

/// Streaming log-sum-exp. Terms at -infinity are skipped, so the result is a
/// function of the finite terms and their order only.
class LogSum {
public:
    void add(double x) {
        if (x == -std::numeric_limits<double>::infinity()) return;
        if (x <= max_) {
            acc_ += std::exp(x - max_);
        } else {
            acc_ = acc_ * std::exp(max_ - x) + 1.0;
            max_ = x;
        }
    }
    double value() const {
        return max_ == -std::numeric_limits<double>::infinity() ? max_ : max_ + std::log(acc_);
    }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    double acc_ = 0.0;
};

/// Log weight of copying `length` symbols through Mutate_eps with
/// `mismatches` substitutions: mism*log(eps/(|A|-1)) + rest*log(1-eps),
/// with 0*log(0) = 0.
double mutation_log_weight(std::size_t length, std::size_t mismatches, double epsilon,
                           std::size_t alphabet_size);

/// Comparison statistics between a trace and a seed.
struct MatchSummary {
    std::size_t lcp = 0;                    // m: longest shared prefix
    std::vector<std::size_t> prefix_hamming;  // d_k for k in [0, min(|c|,|s|)]
    std::vector<std::size_t> match_run;     // t(i) for i in [0, n] (equal lengths only)
};

MatchSummary summarize(std::span<const Symbol> c, std::span<const Symbol> s);

/// log K(|s|, |A|) = -log((|s|+1) |A|^|s| (|A|-1)).
double log_trim_suffix_constant(std::size_t seed_length, std::size_t alphabet_size);

LogProb lp_trim_suffix_and_extend(std::span<const Symbol> c, std::span<const Symbol> s,
                                  std::size_t alphabet_size);

LogProb lp_suffix_extend_trim_suffix(std::span<const Symbol> c, std::span<const Symbol> s,
                                     std::uint32_t t, std::size_t alphabet_size);

LogProb lp_suffix_extend_mutate_trim_suffix(std::span<const Symbol> c, std::span<const Symbol> s,
                                            std::uint32_t t, double epsilon,
                                            std::size_t alphabet_size);

LogProb lp_trim_and_extend(std::span<const Symbol> c, std::span<const Symbol> s,
                           std::size_t alphabet_size);

LogProb lp_mutate_trim_and_extend(std::span<const Symbol> c, std::span<const Symbol> s,
                                  double epsilon, std::size_t alphabet_size);

/// Extend_t(Mutate_eps(Trim(s))). Substrings of s are counted by position,
/// so the empty substring appears |s|+1 times.
LogProb lp_extend_mutate_trim(std::span<const Symbol> c, std::span<const Symbol> s,
                              std::uint32_t t, double epsilon, std::size_t alphabet_size);

/// SuffixExtend_t(TrimSuffix(s1)) * SuffixExtend_t(TrimSuffix(s2)).
LogProb lp_concat2(std::span<const Symbol> c, std::span<const Symbol> s1,
                   std::span<const Symbol> s2, std::uint32_t t, std::size_t alphabet_size);

/// Mutate_eps(TrimSuffix(v) * Extend_t(Trim(d)) * TrimPrefix(j)).
LogProb lp_vdj(std::span<const Symbol> c, std::span<const Symbol> v, std::span<const Symbol> d,
               std::span<const Symbol> j, std::uint32_t t, double epsilon,
               std::size_t alphabet_size);

LogProb lp_vdj_multi(std::span<const Symbol> c, std::span<const SymbolString> v_set,
                     std::span<const SymbolString> d_set, std::span<const SymbolString> j_set,
                     std::uint32_t t, double epsilon, std::size_t alphabet_size);

/// Uniform mixture over a seed-set for a single-seed model kind.
LogProb lp_multiseed(std::span<const Symbol> c, std::span<const SymbolString> seed_set,
                     const ModelSpec& model, std::size_t alphabet_size);

/// Number of occurrences of c as a subsequence of s (N_s("") = 1).
boost::multiprecision::cpp_int subsequence_count(std::span<const Symbol> s,
                                                 std::span<const Symbol> c);
/// log N_s(c); -infinity when c is not a subsequence.
double log_subsequence_count(std::span<const Symbol> s, std::span<const Symbol> c);

LogProb lp_deletion(std::span<const Symbol> c, std::span<const Symbol> s, double q);

/// Pr(c | seeds) for any model, including seed-sets (uniform mixture over
/// every combination of one member per slot).
LogProb lp_trace(std::span<const Symbol> c, const Seeds& seeds, const ModelSpec& model,
                 std::size_t alphabet_size);

/// Pr(C | seeds) = prod_i Pr(c_i | seeds). Identical traces are grouped and
/// the sum runs in sorted trace order, so the value is invariant under any
/// permutation of C.
LogProb lp_trace_set(std::span<const SymbolString> traces, const Seeds& seeds,
                     const ModelSpec& model, std::size_t alphabet_size);

}  // namespace tracekit
