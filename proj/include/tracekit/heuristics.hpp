#pragma once
// Practical reconstruction: greedy symbol-wise extension, k-mer mining in the
// style of MINING-D, bitwise majority alignment, and mean-based statistics.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tracekit/channels.hpp"
#include "tracekit/core.hpp"

namespace tracekit {

/// Left to right: take the most abundant symbol at position j among the
/// surviving traces (ties to the smaller symbol), then drop the traces that
/// disagree. Once no trace survives, positions fall back to symbol 0.
SymbolString greedy_reconstruct(std::span<const SymbolString> traces, std::size_t n,
                                 std::size_t alphabet_size);
SymbolString greedy_reconstruct(const TraceSet& traces, std::size_t n);

struct KmerCatalog {
    std::size_t k = 0;
    // counted per occurrence, over every trace
    std::map<SymbolString, std::uint64_t> counts;
    // number of length-k windows scanned (the background sample size)
    std::uint64_t windows = 0;
};

KmerCatalog count_kmers(std::span<const SymbolString> traces, std::size_t k);

struct MiningOptions {
    std::size_t k = 9;
    // Extension stops when the binomial upper tail of the best flanking
    // symbol's count (null: 1/|A|) is above p_stop.
    double p_stop = 0.01;
    std::size_t max_branches = 1;
    // Family-wise level for k-mer selection; each k-mer's Poisson upper tail
    // is compared against selection_alpha / |A|^k.
    double selection_alpha = 0.01;
    // Selected k-mers processed, most abundant first.
    std::size_t max_kmers = 1000;
};

struct MiningResult {
    std::vector<SymbolString> seeds;
    std::size_t selected_kmers = 0;
    double selection_threshold = 0.0;  // per-k-mer Poisson tail cut-off
    double background_rate = 0.0;      // expected count per k-mer under uniform null
    // Describes the stopping rule so reports never present it as the
    // published MINING-D rule.
    std::string stopping_rule;
};

/// Finds significantly over-represented k-mers and extends each one symbol
/// at a time (right, then left) by the most abundant flanking symbol among
/// the traces containing the current candidate. End symbols that fail the
/// stopping test against the rest of their candidate are then trimmed, and
/// candidates contained in a longer candidate are dropped. Output is sorted.
MiningResult mine_seeds(std::span<const SymbolString> traces, std::size_t alphabet_size,
                        const MiningOptions& options = {});

struct BmaOptions {
    std::size_t lookahead = 2;
};

/// Bitwise majority alignment for the deletion channel. One cursor per
/// trace; each output symbol is the majority under the cursors. Agreeing
/// cursors advance. A disagreeing cursor advances only when its next
/// `lookahead` symbols match the majority lookahead strictly better after
/// advancing; otherwise it is held (its trace is presumed to have lost this
/// symbol). Ties hold.
SymbolString bma_reconstruct(std::span<const SymbolString> traces, std::size_t n,
                             std::size_t alphabet_size, const BmaOptions& options = {});

struct MeanProfile {
    std::size_t n = 0;
    std::vector<double> means;
};

/// Coordinate-wise fraction of ones over the traces zero-padded to length n.
MeanProfile mean_profile(std::span<const SymbolString> traces, std::size_t n);

/// Exact E[padded trace bit j] = sum_{i>=j} s_i C(i,j) (1-q)^(j+1) q^(i-j).
std::vector<double> expected_mean_profile(const SymbolString& seed, double q);

/// Candidate whose expected profile is closest (squared distance) to the
/// observed profile; ties go to the lexicographically smallest candidate.
SymbolString mean_based_select(std::span<const SymbolString> traces,
                               std::span<const SymbolString> candidates, double q);

}  // namespace tracekit
