#pragma once
// Named reconstruction algorithms behind one calling convention, so the
// benchmark harness, population recovery and the CLI can select them by id.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tracekit/channels.hpp"
#include "tracekit/core.hpp"

namespace tracekit {

struct AlgorithmContext {
    ModelSpec model;
    // Seed length per slot.
    std::vector<std::size_t> lengths;
    std::size_t alphabet_size = 4;
    unsigned threads = 1;
    // Numeric tuning knobs by name (k, p_stop, max_branches, lookahead,
    // max_candidates).
    std::map<std::string, double> params;
};

struct Algorithm {
    std::string id;
    std::function<Seeds(std::span<const SymbolString>, const AlgorithmContext&)> run;
    // Throws incompatible when the algorithm cannot serve the model.
    std::function<void(const ModelSpec&, std::size_t alphabet_size)> check;
};

/// Ids: trie-exact, brute-force, greedy, mining-d, bma, mean-select, identity.
const std::vector<std::string>& algorithm_ids();

/// Throws invalid_argument for an unknown id.
Algorithm make_algorithm(std::string_view id);

/// Sorts every slot's members, so seed-sets compare as sets.
Seeds normalized(Seeds seeds);

}  // namespace tracekit
