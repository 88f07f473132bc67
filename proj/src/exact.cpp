#include "tracekit/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace tracekit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(|A|^e - 1) for e >= 1
double log_pow_minus_one(std::size_t a, std::size_t e) {
    const double x = static_cast<double>(e) * std::log(static_cast<double>(a));
    return x + std::log1p(-std::exp(-x));
}

}  // namespace

bool clearly_greater(double a, double b) {
    if (a == kNegInf) return false;
    if (b == kNegInf) return true;
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return a - b > 1e-10 * scale;
}

PrefixTrie::PrefixTrie(std::size_t alphabet_size, std::size_t trace_length)
    : alphabet_size_(alphabet_size), length_(trace_length), stride_(kChildren + alphabet_size) {
    add_node(0, kNone, 0, 0, 0);
}

void PrefixTrie::reserve(std::size_t traces) {
    // at most one leaf and one split per trace
    words_.reserve((2 * traces + 1) * stride_);
    symbols_.reserve(traces * length_);
}

std::int32_t PrefixTrie::add_node(std::uint32_t sim, std::int32_t parent, std::uint32_t begin,
                                  std::uint32_t depth, std::uint32_t trace) {
    const auto id = static_cast<std::int32_t>(node_count());
    words_.insert(words_.end(), {sim, static_cast<std::uint32_t>(parent), begin, depth, trace});
    words_.resize(words_.size() + alphabet_size_, static_cast<std::uint32_t>(kNone));
    return id;
}

PrefixTrie::Node PrefixTrie::node(std::int32_t id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= node_count()) {
        throw Error(ErrorCode::invalid_argument, "trie node id out of range");
    }
    const auto* w = at(id);
    return Node{w[kSim], static_cast<std::int32_t>(w[kParent]), w[kBegin], w[kDepth], w[kTrace]};
}

void PrefixTrie::insert(std::span<const Symbol> trace) {
    if (trace.size() != length_) {
        throw Error(ErrorCode::length_mismatch,
                    "trie traces must share one length: expected " + std::to_string(length_) +
                        ", got " + std::to_string(trace.size()));
    }
    for (Symbol s : trace) {
        if (s >= alphabet_size_) throw Error(ErrorCode::illegal_symbol, "symbol outside alphabet");
    }
    const auto id = words_[kSim];
    if (id == std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::invalid_argument, "too many traces for one trie");
    }
    symbols_.insert(symbols_.end(), trace.begin(), trace.end());
    ++words_[kSim];

    const auto n = static_cast<std::uint32_t>(length_);
    std::int32_t node = 0;
    std::uint32_t depth = 0;
    while (depth < n) {
        const Symbol s = trace[depth];
        const auto next = child(node, s);
        if (next == kNone) {
            const auto leaf = add_node(1, node, depth, n, id);
            at(node)[kChildren + s] = static_cast<std::uint32_t>(leaf);
            return;
        }
        auto* edge = at(next);
        const auto end = edge[kDepth];
        const auto other = edge[kTrace];
        const Symbol* shared = row(other);
        auto t = depth + 1;
        while (t < end && shared[t] == trace[t]) ++t;
        if (t == end) {
            ++edge[kSim];
            node = next;
            depth = end;
            continue;
        }
        const auto sim = edge[kSim];
        const Symbol kept = shared[t];
        const auto mid = add_node(sim + 1, node, depth, t, other);
        const auto leaf = add_node(1, mid, t, n, id);
        at(next)[kParent] = static_cast<std::uint32_t>(mid);
        at(next)[kBegin] = t;
        at(node)[kChildren + s] = static_cast<std::uint32_t>(mid);
        at(mid)[kChildren + kept] = static_cast<std::uint32_t>(next);
        at(mid)[kChildren + trace[t]] = static_cast<std::uint32_t>(leaf);
        return;
    }
}

std::int32_t PrefixTrie::find(std::span<const Symbol> prefix) const {
    std::int32_t at = 0;
    std::size_t depth = 0;
    while (depth < prefix.size()) {
        if (prefix[depth] >= alphabet_size_) return kNone;
        at = child(at, prefix[depth]);
        if (at == kNone) return kNone;
        const auto edge = node(at);
        const auto stop = std::min<std::size_t>(edge.depth, prefix.size());
        if (!std::equal(prefix.begin() + static_cast<std::ptrdiff_t>(depth),
                        prefix.begin() + static_cast<std::ptrdiff_t>(stop), row(edge.trace) + depth)) {
            return kNone;
        }
        depth = stop;
    }
    return at;
}

SymbolString PrefixTrie::path(std::int32_t id) const {
    const auto v = node(id);
    if (v.depth == 0) return SymbolString{};
    const Symbol* r = row(v.trace);
    return SymbolString(std::vector<Symbol>(r, r + v.depth));
}

PrefixTrie build_trie(std::span<const SymbolString> traces, std::size_t alphabet_size) {
    if (traces.empty()) throw Error(ErrorCode::invalid_argument, "cannot build a trie from no traces");
    PrefixTrie trie(alphabet_size, traces.front().size());
    trie.reserve(traces.size());
    for (const auto& c : traces) trie.insert(c);
    return trie;
}

TrieSelection score_and_select(const PrefixTrie& trie) {
    if (trie.trace_count() == 0) throw Error(ErrorCode::invalid_argument, "empty trie");
    const auto a = trie.alphabet_size();
    const auto n = trie.trace_length();

    // gain[t] = log((|A|^(t+1) - 1) / (|A|^t - 1)), t >= 1
    std::vector<double> gain(n + 1, 0.0);
    for (std::size_t t = 1; t <= n; ++t) {
        gain[t] = log_pow_minus_one(a, t + 1) - log_pow_minus_one(a, t);
    }

    // prefix[d] = gain[1] + ... + gain[d], so an edge (b, d] adds
    // sim * (prefix[d] - prefix[b])
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t t = 1; t <= n; ++t) prefix[t] = prefix[t - 1] + gain[t];

    // Splits append a node above an older one, so ids are not in
    // parent-first order; walk the links instead.
    std::vector<double> score(trie.node_count());
    score[0] = static_cast<double>(trie.trace_count()) * std::log(static_cast<double>(a - 1));
    std::int32_t best = PrefixTrie::kNone;
    std::vector<std::int32_t> stack{0};
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        const auto node = trie.node(v);
        const auto at = static_cast<std::size_t>(v);
        if (v != 0) {
            score[at] = score[static_cast<std::size_t>(node.parent)] +
                        static_cast<double>(node.sim) * (prefix[node.depth] - prefix[node.begin]);
        }
        if (node.depth != n) {
            for (std::size_t s = 0; s < a; ++s) {
                const auto c = trie.child(v, static_cast<Symbol>(s));
                if (c != PrefixTrie::kNone) stack.push_back(c);
            }
            continue;
        }
        if (best == PrefixTrie::kNone ||
            clearly_greater(score[at], score[static_cast<std::size_t>(best)])) {
            best = v;
        } else if (!clearly_greater(score[static_cast<std::size_t>(best)], score[at]) &&
                   trie.path(v) < trie.path(best)) {
            best = v;
        }
    }
    if (n == 0) return {SymbolString{}, score[0]};
    return {trie.path(best), score[static_cast<std::size_t>(best)]};
}

SymbolString mle_trim_suffix_and_extend(std::span<const SymbolString> traces,
                                        std::size_t alphabet_size) {
    if (traces.empty()) throw Error(ErrorCode::invalid_argument, "empty trace-set");
    return score_and_select(build_trie(traces, alphabet_size)).seed;
}

SymbolString mle_trim_suffix_and_extend(const TraceSet& traces) {
    return mle_trim_suffix_and_extend(traces.traces, traces.alphabet.size());
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > kSaturated / a) return kSaturated;
    return a * b;
}

std::uint64_t pow_sat(std::uint64_t base, std::size_t e) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) r = mul_sat(r, base);
    return r;
}

std::uint64_t choose_sat(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // r * (n - k + i) / i stays integral at every step
        auto num = mul_sat(r, n - k + i);
        if (num == kSaturated) return kSaturated;
        r = num / i;
    }
    return r;
}

SymbolString unrank(std::uint64_t index, std::size_t length, std::size_t a) {
    std::vector<Symbol> out(length);
    for (std::size_t i = length; i-- > 0;) {
        out[i] = static_cast<Symbol>(index % a);
        index /= a;
    }
    return SymbolString(std::move(out));
}

std::vector<std::size_t> slot_members(const ModelSpec& model) {
    if (model.is_multi_seed()) return model.multi_seed;
    return std::vector<std::size_t>(seed_slot_count(model.kind), 1);
}

// Odometer over the candidate universe in lexicographic order: slot 0 is the
// most significant digit, and within a slot the increasing index tuple is.
class CandidateCursor {
public:
    CandidateCursor(std::vector<std::size_t> members, std::vector<std::uint64_t> universe)
        : members_(std::move(members)), universe_(std::move(universe)) {
        for (std::size_t j = 0; j < members_.size(); ++j) {
            std::vector<std::uint64_t> combo(members_[j]);
            for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = i;
            combos_.push_back(std::move(combo));
        }
    }

    const std::vector<std::vector<std::uint64_t>>& current() const { return combos_; }

    bool advance() {
        for (std::size_t j = combos_.size(); j-- > 0;) {
            if (next_combination(combos_[j], universe_[j])) return true;
            for (std::size_t i = 0; i < combos_[j].size(); ++i) combos_[j][i] = i;
        }
        return false;
    }

private:
    static bool next_combination(std::vector<std::uint64_t>& c, std::uint64_t n) {
        const auto k = c.size();
        for (std::size_t i = k; i-- > 0;) {
            if (c[i] < n - k + i) {
                ++c[i];
                for (std::size_t r = i + 1; r < k; ++r) c[r] = c[r - 1] + 1;
                return true;
            }
        }
        return false;
    }

    std::vector<std::size_t> members_;
    std::vector<std::uint64_t> universe_;
    std::vector<std::vector<std::uint64_t>> combos_;
};

}  // namespace

std::uint64_t brute_force_universe_size(const ModelSpec& model,
                                        std::span<const std::size_t> lengths,
                                        std::size_t alphabet_size) {
    const auto members = slot_members(model);
    if (lengths.size() != members.size()) {
        throw Error(ErrorCode::arity_mismatch,
                    "model " + std::string(model_name(model.kind)) + " needs " +
                        std::to_string(members.size()) + " candidate length(s)");
    }
    std::uint64_t total = 1;
    for (std::size_t j = 0; j < members.size(); ++j) {
        total = mul_sat(total, choose_sat(pow_sat(alphabet_size, lengths[j]), members[j]));
    }
    return total;
}

MleResult brute_force_mle(std::span<const SymbolString> traces, const ModelSpec& model,
                          std::span<const std::size_t> lengths, std::size_t alphabet_size,
                          const BruteForceOptions& options) {
    model.validate();
    const auto total = brute_force_universe_size(model, lengths, alphabet_size);
    if (total > options.max_candidates) {
        throw Error(ErrorCode::budget_exceeded,
                    "brute-force universe of " +
                        (total == kSaturated ? std::string("more than 2^64")
                                             : std::to_string(total)) +
                        " candidates exceeds the cap of " +
                        std::to_string(options.max_candidates));
    }
    if (total == 0) {
        throw Error(ErrorCode::invalid_argument, "seed-set larger than the string universe");
    }
    const auto members = slot_members(model);
    std::vector<std::uint64_t> universe;
    for (auto n : lengths) universe.push_back(pow_sat(alphabet_size, n));

    std::map<SymbolString, std::size_t> distinct;
    for (const auto& c : traces) ++distinct[c];

    auto materialize = [&](const std::vector<std::vector<std::uint64_t>>& combos) {
        Seeds seeds;
        for (std::size_t j = 0; j < combos.size(); ++j) {
            std::vector<SymbolString> slot;
            for (auto idx : combos[j]) slot.push_back(unrank(idx, lengths[j], alphabet_size));
            seeds.slots.push_back(std::move(slot));
        }
        return seeds;
    };
    auto evaluate = [&](const Seeds& seeds) {
        double sum = 0.0;
        for (const auto& [c, count] : distinct) {
            auto lp = lp_trace(c, seeds, model, alphabet_size);
            if (lp.is_impossible()) return kNegInf;
            sum += static_cast<double>(count) * lp.log();
        }
        return sum;
    };

    // Candidates are scored in ordered batches so the reduction is identical
    // for any thread count.
    constexpr std::size_t kBatch = 1024;
    MleResult best{materialize(CandidateCursor(members, universe).current()), LogProb::impossible(),
                   total};
    bool have_best = false;
    CandidateCursor cursor(members, universe);
    bool more = true;
    std::vector<Seeds> batch;
    std::vector<double> scores;
    while (more) {
        batch.clear();
        while (more && batch.size() < kBatch) {
            batch.push_back(materialize(cursor.current()));
            more = cursor.advance();
        }
        scores.assign(batch.size(), kNegInf);
        parallel_for(batch.size(), options.threads,
                     [&](std::size_t i) { scores[i] = evaluate(batch[i]); });
        for (std::size_t i = 0; i < batch.size(); ++i) {
            if (!have_best || clearly_greater(scores[i], best.log_likelihood.log())) {
                best.seeds = std::move(batch[i]);
                best.log_likelihood = LogProb::from_log(scores[i]);
                have_best = true;
            }
        }
    }
    return best;
}

}  // namespace tracekit
