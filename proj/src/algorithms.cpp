#include "tracekit/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tracekit/exact.hpp"
#include "tracekit/heuristics.hpp"

namespace tracekit {

namespace {

void require_single_slot(std::string_view id, const ModelSpec& model) {
    if (seed_slot_count(model.kind) != 1 || model.is_multi_seed()) {
        throw Error(ErrorCode::incompatible,
                    std::string(id) + " reconstructs one seed and cannot serve model " +
                        std::string(model_name(model.kind)) +
                        (model.is_multi_seed() ? " with a seed-set" : ""));
    }
}

void require_kind(std::string_view id, const ModelSpec& model, ModelKind kind) {
    if (model.kind != kind || model.is_multi_seed()) {
        throw Error(ErrorCode::incompatible,
                    std::string(id) + " only supports single-seed " + std::string(model_name(kind)) +
                        ", not " + std::string(model_name(model.kind)));
    }
}

std::size_t seed_length(const AlgorithmContext& ctx) {
    if (ctx.lengths.empty()) throw Error(ErrorCode::invalid_argument, "seed length is required");
    return ctx.lengths.front();
}

double param(const AlgorithmContext& ctx, const std::string& name, double fallback) {
    auto it = ctx.params.find(name);
    return it == ctx.params.end() ? fallback : it->second;
}

void require_traces(std::span<const SymbolString> traces) {
    if (traces.empty()) throw Error(ErrorCode::invalid_argument, "empty trace-set");
}

constexpr std::size_t kMeanSelectMaxLength = 20;

Algorithm trie_exact() {
    return {"trie-exact",
            [](std::span<const SymbolString> traces, const AlgorithmContext& ctx) {
                require_traces(traces);
                return Seeds::single(mle_trim_suffix_and_extend(traces, ctx.alphabet_size));
            },
            [](const ModelSpec& m, std::size_t) {
                require_kind("trie-exact", m, ModelKind::trim_suffix_and_extend);
            }};
}

Algorithm brute_force() {
    return {"brute-force",
            [](std::span<const SymbolString> traces, const AlgorithmContext& ctx) {
                BruteForceOptions options;
                options.threads = ctx.threads;
                options.max_candidates = static_cast<std::uint64_t>(
                    param(ctx, "max_candidates", static_cast<double>(options.max_candidates)));
                return brute_force_mle(traces, ctx.model, ctx.lengths, ctx.alphabet_size, options)
                    .seeds;
            },
            [](const ModelSpec&, std::size_t) {}};
}

Algorithm greedy() {
    return {"greedy",
            [](std::span<const SymbolString> traces, const AlgorithmContext& ctx) {
                return Seeds::single(greedy_reconstruct(traces, seed_length(ctx), ctx.alphabet_size));
            },
            [](const ModelSpec& m, std::size_t) { require_single_slot("greedy", m); }};
}

Algorithm mining() {
    return {"mining-d",
            [](std::span<const SymbolString> traces, const AlgorithmContext& ctx) {
                MiningOptions options;
                options.k = static_cast<std::size_t>(param(ctx, "k", static_cast<double>(options.k)));
                options.p_stop = param(ctx, "p_stop", options.p_stop);
                options.max_branches = static_cast<std::size_t>(
                    param(ctx, "max_branches", static_cast<double>(options.max_branches)));
                auto mined = mine_seeds(traces, ctx.alphabet_size, options).seeds;
                if (mined.empty()) return Seeds::single(SymbolString{});
                // One answer per trace-set: the candidate closest to the
                // expected length, longer first, then lexicographic.
                const auto n = ctx.lengths.empty() ? 0 : ctx.lengths.front();
                auto key = [n](const SymbolString& s) {
                    const auto gap = s.size() > n ? s.size() - n : n - s.size();
                    return std::pair{gap, ~s.size()};
                };
                auto best = std::min_element(mined.begin(), mined.end(),
                                             [&](const auto& x, const auto& y) {
                                                 return key(x) < key(y);
                                             });
                return Seeds::single(*best);
            },
            [](const ModelSpec& m, std::size_t) { require_single_slot("mining-d", m); }};
}

Algorithm bma() {
    return {"bma",
            [](std::span<const SymbolString> traces, const AlgorithmContext& ctx) {
                BmaOptions options;
                options.lookahead = static_cast<std::size_t>(
                    param(ctx, "lookahead", static_cast<double>(options.lookahead)));
                return Seeds::single(
                    bma_reconstruct(traces, seed_length(ctx), ctx.alphabet_size, options));
            },
            [](const ModelSpec& m, std::size_t) { require_kind("bma", m, ModelKind::deletion); }};
}

Algorithm mean_select() {
    return {"mean-select",
            [](std::span<const SymbolString> traces, const AlgorithmContext& ctx) {
                const auto n = seed_length(ctx);
                if (n > kMeanSelectMaxLength) {
                    throw Error(ErrorCode::budget_exceeded,
                                "mean-select enumerates 2^n candidates; n = " + std::to_string(n) +
                                    " exceeds " + std::to_string(kMeanSelectMaxLength));
                }
                std::vector<SymbolString> candidates;
                candidates.reserve(std::size_t{1} << n);
                for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
                    std::vector<Symbol> bits(n);
                    for (std::size_t i = 0; i < n; ++i) bits[i] = (code >> (n - 1 - i)) & 1;
                    candidates.emplace_back(std::move(bits));
                }
                return Seeds::single(mean_based_select(traces, candidates, *ctx.model.params.q));
            },
            [](const ModelSpec& m, std::size_t alphabet_size) {
                require_kind("mean-select", m, ModelKind::deletion);
                if (alphabet_size != 2) {
                    throw Error(ErrorCode::incompatible, "mean-select needs a binary alphabet");
                }
            }};
}

Algorithm identity() {
    return {"identity",
            [](std::span<const SymbolString> traces, const AlgorithmContext&) {
                require_traces(traces);
                return Seeds::single(traces.front());
            },
            [](const ModelSpec& m, std::size_t) { require_single_slot("identity", m); }};
}

}  // namespace

const std::vector<std::string>& algorithm_ids() {
    static const std::vector<std::string> ids = {"trie-exact", "brute-force", "greedy", "mining-d",
                                                 "bma",        "mean-select", "identity"};
    return ids;
}

Algorithm make_algorithm(std::string_view id) {
    if (id == "trie-exact") return trie_exact();
    if (id == "brute-force") return brute_force();
    if (id == "greedy") return greedy();
    if (id == "mining-d") return mining();
    if (id == "bma") return bma();
    if (id == "mean-select") return mean_select();
    if (id == "identity") return identity();
    std::string known;
    for (const auto& k : algorithm_ids()) known += (known.empty() ? "" : ", ") + k;
    throw Error(ErrorCode::invalid_argument,
                "unknown algorithm '" + std::string(id) + "' (expected one of " + known + ")");
}

Seeds normalized(Seeds seeds) {
    for (auto& slot : seeds.slots) std::sort(slot.begin(), slot.end());
    return seeds;
}

}  // namespace tracekit
