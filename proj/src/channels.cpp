#include "tracekit/channels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tracekit {

namespace {

struct KindInfo {
    ModelKind kind;
    std::string_view name;
    std::size_t slots;
    bool t, epsilon, q, same_length;
};

constexpr KindInfo kKinds[] = {
    {ModelKind::trim_suffix_and_extend, "trim-suffix-and-extend", 1, false, false, false, true},
    {ModelKind::suffix_extend_trim_suffix, "suffix-extend-trim-suffix", 1, true, false, false, false},
    {ModelKind::suffix_extend_mutate_trim_suffix, "suffix-extend-mutate-trim-suffix", 1, true, true,
     false, false},
    {ModelKind::trim_and_extend, "trim-and-extend", 1, false, false, false, true},
    {ModelKind::mutate_trim_and_extend, "mutate-trim-and-extend", 1, false, true, false, true},
    {ModelKind::extend_mutate_trim, "extend-mutate-trim", 1, true, true, false, false},
    {ModelKind::concat2, "concat2", 2, true, false, false, false},
    {ModelKind::vdj, "vdj", 3, true, true, false, false},
    {ModelKind::deletion, "deletion", 1, false, false, true, false},
};

const KindInfo& info(ModelKind kind) {
    for (const auto& k : kKinds) {
        if (k.kind == kind) return k;
    }
    throw Error(ErrorCode::invalid_argument, "unknown model kind");
}

// (prefix, suffix) uniform over all pairs with prefix + suffix <= n.
std::pair<std::size_t, std::size_t> sample_trim_pair(std::size_t n, RandomStream& rng) {
    auto idx = rng.uniform_below((n + 1) * (n + 2) / 2);
    for (std::size_t l = 0; l <= n; ++l) {
        auto width = n - l + 1;
        if (idx < width) return {l, idx};
        idx -= width;
    }
    return {0, 0};  // unreachable
}

SymbolString trim_suffix(const SymbolString& s, RandomStream& rng) {
    auto k = rng.uniform_below(s.size() + 1);
    return trim(s, 0, k);
}

SymbolString suffix_extend(SymbolString s, std::uint32_t t, std::size_t a, RandomStream& rng) {
    s.append(sample_random_leq_t(t, a, rng).view());
    return s;
}

SymbolString extend(const SymbolString& s, std::uint32_t t, std::size_t a, RandomStream& rng) {
    auto left = sample_random_leq_t(t, a, rng);
    auto right = sample_random_leq_t(t, a, rng);
    SymbolString out;
    out.reserve(left.size() + s.size() + right.size());
    out.append(left.view());
    out.append(s.view());
    out.append(right.view());
    return out;
}

SymbolString trim_both(const SymbolString& s, RandomStream& rng) {
    auto [l, k] = sample_trim_pair(s.size(), rng);
    return trim(s, l, k);
}

}  // namespace

std::string_view model_name(ModelKind kind) { return info(kind).name; }

std::optional<ModelKind> parse_model_kind(std::string_view name) {
    for (const auto& k : kKinds) {
        if (k.name == name) return k.kind;
    }
    return std::nullopt;
}

std::size_t seed_slot_count(ModelKind kind) { return info(kind).slots; }
bool uses_t(ModelKind kind) { return info(kind).t; }
bool uses_epsilon(ModelKind kind) { return info(kind).epsilon; }
bool uses_q(ModelKind kind) { return info(kind).q; }
bool preserves_length(ModelKind kind) { return info(kind).same_length; }

void ModelSpec::validate() const {
    const auto& k = info(kind);
    auto name = std::string(k.name);
    auto check = [&](bool needed, bool present, const char* flag) {
        if (needed && !present) {
            throw Error(ErrorCode::invalid_argument, "model " + name + " requires " + flag);
        }
        if (!needed && present) {
            throw Error(ErrorCode::invalid_argument, "model " + name + " does not take " + flag);
        }
    };
    check(k.t, params.t.has_value(), "t");
    check(k.epsilon, params.epsilon.has_value(), "epsilon");
    check(k.q, params.q.has_value(), "q");
    if (params.epsilon && !(*params.epsilon >= 0.0 && *params.epsilon <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "epsilon must lie in [0,1]");
    }
    if (params.q && !(*params.q >= 0.0 && *params.q < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "q must lie in [0,1)");
    }
    if (is_multi_seed()) {
        if (multi_seed.size() != k.slots) {
            throw Error(ErrorCode::invalid_argument,
                        "model " + name + " needs " + std::to_string(k.slots) + " seed-set sizes");
        }
        for (auto m : multi_seed) {
            if (m == 0) throw Error(ErrorCode::invalid_argument, "seed-set size must be positive");
        }
    }
}

Seeds Seeds::single(SymbolString s) { return Seeds{{{std::move(s)}}}; }
Seeds Seeds::set(std::vector<SymbolString> members) { return Seeds{{std::move(members)}}; }
Seeds Seeds::pair(SymbolString first, SymbolString second) {
    return Seeds{{{std::move(first)}, {std::move(second)}}};
}
Seeds Seeds::vdj(SymbolString v, SymbolString d, SymbolString j) {
    return Seeds{{{std::move(v)}, {std::move(d)}, {std::move(j)}}};
}

void check_seeds(const ModelSpec& model, const Seeds& seeds) {
    model.validate();
    auto slots = seed_slot_count(model.kind);
    auto name = std::string(model_name(model.kind));
    if (seeds.slots.size() != slots) {
        throw Error(ErrorCode::arity_mismatch, "model " + name + " takes " + std::to_string(slots) +
                                                   " seed slot(s), got " +
                                                   std::to_string(seeds.slots.size()));
    }
    for (std::size_t i = 0; i < slots; ++i) {
        const auto& members = seeds.slots[i];
        if (members.empty()) {
            throw Error(ErrorCode::arity_mismatch, "seed slot " + std::to_string(i) + " is empty");
        }
        auto expected = model.is_multi_seed() ? model.multi_seed[i] : std::size_t{1};
        if (members.size() != expected) {
            throw Error(ErrorCode::arity_mismatch,
                        "seed slot " + std::to_string(i) + " holds " +
                            std::to_string(members.size()) + " seed(s), model expects " +
                            std::to_string(expected));
        }
    }
    if (model.kind == ModelKind::concat2) {
        auto n = seeds.slots[0].front().size();
        for (const auto& slot : seeds.slots) {
            for (const auto& s : slot) {
                if (s.size() != n) {
                    throw Error(ErrorCode::length_mismatch,
                                "concatenated model requires equal seed lengths");
                }
            }
        }
    }
}

std::size_t max_trace_length(const ModelSpec& model, const Seeds& seeds) {
    auto longest = [&](std::size_t slot) {
        std::size_t n = 0;
        for (const auto& s : seeds.slots.at(slot)) n = std::max(n, s.size());
        return n;
    };
    std::size_t t = model.params.t.value_or(0);
    switch (model.kind) {
        case ModelKind::trim_suffix_and_extend:
        case ModelKind::trim_and_extend:
        case ModelKind::mutate_trim_and_extend:
        case ModelKind::deletion:
            return longest(0);
        case ModelKind::suffix_extend_trim_suffix:
        case ModelKind::suffix_extend_mutate_trim_suffix:
            return longest(0) + t;
        case ModelKind::extend_mutate_trim:
            return longest(0) + 2 * t;
        case ModelKind::concat2:
            return longest(0) + longest(1) + 2 * t;
        case ModelKind::vdj:
            return longest(0) + longest(1) + 2 * t + longest(2);
    }
    return 0;
}

SampledTrace sample_trace(const ModelSpec& model, const Seeds& seeds, std::size_t a,
                          RandomStream& rng) {
    // Pick one member per slot, uniformly.
    std::vector<const SymbolString*> chosen;
    std::uint64_t seed_id = 0;
    for (const auto& slot : seeds.slots) {
        auto idx = slot.size() == 1 ? 0 : rng.uniform_below(slot.size());
        seed_id = seed_id * slot.size() + idx;
        chosen.push_back(&slot[idx]);
    }
    const auto& s = *chosen.front();
    const auto t = model.params.t.value_or(0);
    const auto eps = model.params.epsilon.value_or(0.0);

    SymbolString out;
    switch (model.kind) {
        case ModelKind::trim_suffix_and_extend: {
            auto k = rng.uniform_below(s.size() + 1);
            out = trim(s, 0, k);
            out.append(sample_uniform(k, a, rng).view());
            break;
        }
        case ModelKind::suffix_extend_trim_suffix:
            out = suffix_extend(trim_suffix(s, rng), t, a, rng);
            break;
        case ModelKind::suffix_extend_mutate_trim_suffix:
            out = suffix_extend(mutate(trim_suffix(s, rng), eps, a, rng), t, a, rng);
            break;
        case ModelKind::trim_and_extend:
        case ModelKind::mutate_trim_and_extend: {
            auto [l, k] = sample_trim_pair(s.size(), rng);
            out = sample_uniform(l, a, rng);
            out.append(trim(s, l, k).view());
            out.append(sample_uniform(k, a, rng).view());
            if (model.kind == ModelKind::mutate_trim_and_extend) out = mutate(out, eps, a, rng);
            break;
        }
        case ModelKind::extend_mutate_trim:
            out = extend(mutate(trim_both(s, rng), eps, a, rng), t, a, rng);
            break;
        case ModelKind::concat2: {
            out = suffix_extend(trim_suffix(s, rng), t, a, rng);
            out.append(suffix_extend(trim_suffix(*chosen[1], rng), t, a, rng).view());
            break;
        }
        case ModelKind::vdj: {
            const auto& v = s;
            const auto& d = *chosen[1];
            const auto& j = *chosen[2];
            out = trim_suffix(v, rng);
            out.append(extend(trim_both(d, rng), t, a, rng).view());
            auto k = rng.uniform_below(j.size() + 1);
            out.append(trim(j, k, 0).view());
            out = mutate(out, eps, a, rng);
            break;
        }
        case ModelKind::deletion: {
            const auto q = model.params.q.value_or(0.0);
            out.reserve(s.size());
            for (Symbol x : s) {
                if (!rng.bernoulli(q)) out.push_back(x);
            }
            break;
        }
    }
    if (out.size() > max_trace_length(model, seeds) ||
        (preserves_length(model.kind) && out.size() != s.size())) {
        throw std::logic_error("trace violates the model's length contract");
    }
    return {std::move(out), seed_id};
}

SymbolString generate_trace(const ModelSpec& model, const Seeds& seeds, std::size_t alphabet_size,
                            RandomStream& rng) {
    check_seeds(model, seeds);
    return sample_trace(model, seeds, alphabet_size, rng).trace;
}

TraceSet generate_trace_set(const ModelSpec& model, const Seeds& seeds, const Alphabet& alphabet,
                            std::size_t count, const RandomStream& rng, unsigned threads) {
    if (count == 0) throw Error(ErrorCode::invalid_argument, "trace count must be positive");
    check_seeds(model, seeds);
    std::vector<SampledTrace> sampled(count);
    parallel_for(count, threads, [&](std::size_t i) {
        auto stream = rng.derive(i);
        sampled[i] = sample_trace(model, seeds, alphabet.size(), stream);
    });
    TraceSet out(alphabet);
    out.traces.reserve(count);
    out.seed_ids.reserve(count);
    for (auto& s : sampled) {
        out.traces.push_back(std::move(s.trace));
        out.seed_ids.emplace_back(s.seed_id);
    }
    out.provenance = Provenance{model, seeds, rng.master_seed(), rng.stream_id(), count};
    return out;
}

}  // namespace tracekit
