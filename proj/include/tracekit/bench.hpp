#pragma once
// Monte Carlo estimation of success probability, amplification by majority
// vote and empirical trace complexity.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tracekit/algorithms.hpp"
#include "tracekit/channels.hpp"
#include "tracekit/core.hpp"

namespace tracekit {

inline constexpr double kDefaultReconstructionRate = 0.95;

/// Where each trial's seeds come from: a fixed Seeds value, or uniform
/// random strings with the given per-slot lengths (seed-set members drawn
/// distinct).
struct SeedSource {
    std::optional<Seeds> fixed;
    std::vector<std::size_t> lengths;

    static SeedSource fixed_seeds(Seeds seeds);
    static SeedSource uniform(std::vector<std::size_t> lengths);

    /// Per-slot seed lengths (taken from the first member for fixed seeds).
    std::vector<std::size_t> slot_lengths() const;
    Seeds draw(const ModelSpec& model, std::size_t alphabet_size, RandomStream& rng) const;
};

struct BenchReport {
    std::string algorithm;
    ModelSpec model;
    std::size_t n = 0;  // first slot's seed length
    std::size_t traces = 0;  // T
    std::size_t trials = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 0.0;
    // Failed trials whose answer is within edit distance 1 of the truth in
    // every slot; diagnostics only.
    std::size_t near_misses = 0;
    std::uint64_t master_seed = 0;
    double target_rate = kDefaultReconstructionRate;
    // Filled only when timing is requested, so default reports are
    // reproducible byte for byte.
    std::optional<double> wall_seconds;

    bool operator==(const BenchReport&) const = default;
};

struct BenchOptions {
    std::size_t trials = 100;
    unsigned threads = 1;
    bool timing = false;
    double target_rate = kDefaultReconstructionRate;
    std::map<std::string, double> params;  // forwarded to the algorithm
};

/// 95% Wilson score interval.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials);

/// Trial i uses rng.derive(i): seeds from its derive(0), traces from its
/// derive(1). Success is exact equality of the (slot-wise sorted) seeds.
BenchReport estimate_success(const Algorithm& algorithm, const ModelSpec& model,
                             const SeedSource& source, const Alphabet& alphabet,
                             std::size_t traces, const RandomStream& rng,
                             const BenchOptions& options = {});

struct WorstCaseResult {
    std::vector<BenchReport> per_seed;
    std::size_t worst_index = 0;  // lowest success rate, earliest on ties
};

/// Success over a benchmark list of seeds; seed k uses rng.derive(k).
WorstCaseResult estimate_worst_case(const Algorithm& algorithm, const ModelSpec& model,
                                    const std::vector<Seeds>& benchmark, const Alphabet& alphabet,
                                    std::size_t traces, const RandomStream& rng,
                                    const BenchOptions& options = {});

/// Runs `base` on `replicas` disjoint contiguous chunks of floor(T/replicas)
/// traces and returns the plurality answer (ties to the smallest).
Algorithm amplify(Algorithm base, std::size_t replicas);

struct TraceComplexityResult {
    std::string algorithm;
    ModelSpec model;
    std::size_t n = 0;
    double target_rate = kDefaultReconstructionRate;
    std::size_t t_cap = 0;
    std::optional<std::size_t> t_star;
    bool bracketed = false;
    std::vector<BenchReport> curve;  // strictly increasing T

    bool operator==(const TraceComplexityResult&) const = default;
};

/// Doubling search T = 1, 2, 4, ... up to t_cap until the estimated success
/// reaches the target, then binary search inside the last bracket. The
/// estimate at T uses rng.derive(T).
TraceComplexityResult estimate_trace_complexity(const Algorithm& algorithm, const ModelSpec& model,
                                                const SeedSource& source, const Alphabet& alphabet,
                                                const RandomStream& rng, std::size_t t_cap,
                                                const BenchOptions& options = {});

}  // namespace tracekit
