#pragma once
// Exact reconstruction: the linear-time prefix-trie algorithm for
// TrimSuffixAndExtend and exhaustive maximum-likelihood search for any model.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tracekit/channels.hpp"
#include "tracekit/core.hpp"
#include "tracekit/likelihood.hpp"

namespace tracekit {

/// Trie over equal-length traces. Node v at depth t stands for a t-prefix;
/// sim(v) counts the traces that share it.
class PrefixTrie {
public:
    static constexpr std::int32_t kNone = -1;

    /// Unary chains are stored as one edge. A node covers depths
    /// (begin, depth]; every depth on the edge has the same sim. Its string
    /// is the first `depth` symbols of trace number `trace`.
    struct Node {
        std::uint64_t sim = 0;
        std::int32_t parent = kNone;
        std::uint32_t begin = 0;
        std::uint32_t depth = 0;
        std::uint32_t trace = 0;
    };

    PrefixTrie(std::size_t alphabet_size, std::size_t trace_length);

    /// Walks/extends the path for `trace`, adding one to sim on every node
    /// passed (root included). Splits an edge where the trace leaves it.
    void insert(std::span<const Symbol> trace);

    std::size_t alphabet_size() const noexcept { return alphabet_size_; }
    std::size_t trace_length() const noexcept { return length_; }
    void reserve(std::size_t traces);
    std::size_t node_count() const noexcept { return words_.size() / stride_; }
    std::uint64_t trace_count() const noexcept { return words_[kSim]; }

    Node node(std::int32_t id) const;
    /// Node whose edge starts with symbol s, or kNone.
    std::int32_t child(std::int32_t id, Symbol s) const noexcept {
        return static_cast<std::int32_t>(at(id)[kChildren + s]);
    }
    /// Node whose edge holds the end of `prefix` (the root for an empty
    /// prefix), or kNone when no trace starts with it.
    std::int32_t find(std::span<const Symbol> prefix) const;
    SymbolString path(std::int32_t id) const;

private:
    // One record per node: sim, parent, begin, depth, trace, then a child
    // index per symbol. Kept in a single flat array so a step down the trie
    // touches one cache line.
    enum : std::size_t { kSim, kParent, kBegin, kDepth, kTrace, kChildren };

    const std::uint32_t* at(std::int32_t id) const noexcept {
        return words_.data() + static_cast<std::size_t>(id) * stride_;
    }
    std::uint32_t* at(std::int32_t id) noexcept {
        return words_.data() + static_cast<std::size_t>(id) * stride_;
    }
    const Symbol* row(std::uint32_t trace) const noexcept {
        return symbols_.data() + static_cast<std::size_t>(trace) * length_;
    }
    std::int32_t add_node(std::uint32_t sim, std::int32_t parent, std::uint32_t begin,
                          std::uint32_t depth, std::uint32_t trace);

    std::size_t alphabet_size_;
    std::size_t length_;
    std::size_t stride_;
    std::vector<std::uint32_t> words_;
    std::vector<Symbol> symbols_;
};

/// Inserts every trace; all traces must share one length.
PrefixTrie build_trie(std::span<const SymbolString> traces, std::size_t alphabet_size);

struct TrieSelection {
    SymbolString seed;
    // sum_i log(|A|^(m_i+1) - 1), m_i = longest shared prefix with trace i
    double score = 0.0;
};

/// One depth-first pass: score(root) = T log(|A|-1), and each depth t below
/// the root adds sim * log((|A|^(t+1)-1)/(|A|^t-1)). Returns the best leaf; ties go to the
/// lexicographically smallest string.
TrieSelection score_and_select(const PrefixTrie& trie);

/// Maximum-likelihood seed for TrimSuffixAndExtend in O(|s| T).
SymbolString mle_trim_suffix_and_extend(const TraceSet& traces);
SymbolString mle_trim_suffix_and_extend(std::span<const SymbolString> traces,
                                        std::size_t alphabet_size);

struct BruteForceOptions {
    std::uint64_t max_candidates = std::uint64_t{1} << 22;
    unsigned threads = 1;
};

struct MleResult {
    Seeds seeds;
    LogProb log_likelihood;
    std::uint64_t candidates = 0;
};

/// Number of candidates brute_force_mle would evaluate; saturates at
/// UINT64_MAX.
std::uint64_t brute_force_universe_size(const ModelSpec& model,
                                        std::span<const std::size_t> lengths,
                                        std::size_t alphabet_size);

/// Exhaustive argmax of Pr(C | candidate) over all seeds with the given
/// per-slot lengths. For seed-set models every slot enumerates sorted tuples
/// of distinct strings. Ties resolve to the first candidate in lexicographic
/// enumeration order. Throws budget_exceeded above options.max_candidates.
MleResult brute_force_mle(std::span<const SymbolString> traces, const ModelSpec& model,
                          std::span<const std::size_t> lengths, std::size_t alphabet_size,
                          const BruteForceOptions& options = {});

/// True when a exceeds b by more than floating-point noise. Shared by every
/// argmax in the library so equal-likelihood candidates tie consistently.
bool clearly_greater(double a, double b);

}  // namespace tracekit
