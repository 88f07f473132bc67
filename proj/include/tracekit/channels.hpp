#pragma once
// Trace-generation channels: the immunogenomics CDR3/VDJ models and the
// binary deletion channel, for single seeds, concatenated seeds and seed-sets.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tracekit/core.hpp"

namespace tracekit {

enum class ModelKind {
    trim_suffix_and_extend,
    suffix_extend_trim_suffix,
    suffix_extend_mutate_trim_suffix,
    trim_and_extend,
    mutate_trim_and_extend,
    extend_mutate_trim,
    concat2,
    vdj,
    deletion,
};

inline constexpr std::array<ModelKind, 9> kAllModelKinds = {
    ModelKind::trim_suffix_and_extend,  ModelKind::suffix_extend_trim_suffix,
    ModelKind::suffix_extend_mutate_trim_suffix, ModelKind::trim_and_extend,
    ModelKind::mutate_trim_and_extend,  ModelKind::extend_mutate_trim,
    ModelKind::concat2,                 ModelKind::vdj,
    ModelKind::deletion,
};

std::string_view model_name(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);

/// Number of seed slots a model consumes: 2 for the concatenated model,
/// 3 (v, d, j) for VDJ, 1 otherwise.
std::size_t seed_slot_count(ModelKind kind);
bool uses_t(ModelKind kind);
bool uses_epsilon(ModelKind kind);
bool uses_q(ModelKind kind);
/// True for models whose trace always has the seed's length.
bool preserves_length(ModelKind kind);

struct ModelSpec {
    ModelKind kind = ModelKind::deletion;
    ModelParams params;
    // Empty for single-seed generation; otherwise the seed-set size per slot.
    std::vector<std::size_t> multi_seed;

    bool is_multi_seed() const noexcept { return !multi_seed.empty(); }

    /// Throws invalid_argument unless params carry exactly the parameters the
    /// kind requires, each in range.
    void validate() const;

    bool operator==(const ModelSpec&) const = default;
};

/// Seeds grouped by slot. Slot members are the seed-set for that slot; a
/// single-seed model has exactly one member per slot.
struct Seeds {
    std::vector<std::vector<SymbolString>> slots;

    static Seeds single(SymbolString s);
    static Seeds set(std::vector<SymbolString> members);
    static Seeds pair(SymbolString first, SymbolString second);
    static Seeds vdj(SymbolString v, SymbolString d, SymbolString j);

    bool operator==(const Seeds&) const = default;
};

/// Arity and length checks for a (model, seeds) pair.
void check_seeds(const ModelSpec& model, const Seeds& seeds);

/// Upper bound on trace length for the given seeds (every member considered).
std::size_t max_trace_length(const ModelSpec& model, const Seeds& seeds);

struct Provenance {
    ModelSpec model;
    Seeds seeds;
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
    std::size_t count = 0;

    bool operator==(const Provenance&) const = default;
};

struct TraceSet {
    explicit TraceSet(Alphabet a) : alphabet(std::move(a)) {}

    Alphabet alphabet;
    std::vector<SymbolString> traces;
    // Parallel to traces; empty or one entry per trace.
    std::vector<std::optional<std::uint64_t>> seed_ids;
    std::vector<std::optional<std::uint64_t>> trials;
    std::optional<Provenance> provenance;

    std::size_t size() const noexcept { return traces.size(); }
    bool operator==(const TraceSet&) const = default;
};

struct SampledTrace {
    SymbolString trace;
    // Index of the selected seed; for multi-slot models the slot indices are
    // combined row-major (v * |D| * |J| + d * |J| + j).
    std::uint64_t seed_id = 0;
};

SampledTrace sample_trace(const ModelSpec& model, const Seeds& seeds, std::size_t alphabet_size,
                          RandomStream& rng);

SymbolString generate_trace(const ModelSpec& model, const Seeds& seeds,
                            std::size_t alphabet_size, RandomStream& rng);

/// T i.i.d. traces; trace i draws from rng.derive(i), so the result does not
/// depend on `threads`.
TraceSet generate_trace_set(const ModelSpec& model, const Seeds& seeds, const Alphabet& alphabet,
                            std::size_t count, const RandomStream& rng, unsigned threads = 1);

/// Runs body(i) for i in [0, count) over up to `threads` workers. Each index
/// is handled exactly once; callers write results by index.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body);

}  // namespace tracekit

#include "tracekit/detail/parallel.hpp"
