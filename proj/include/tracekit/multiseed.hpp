#pragma once
// Clustering traces by origin and population recovery (cluster, then
// reconstruct each cluster with a single-seed algorithm).

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tracekit/channels.hpp"
#include "tracekit/core.hpp"

namespace tracekit {

std::size_t edit_distance(std::span<const Symbol> a, std::span<const Symbol> b);

/// Edit distance when it is at most `bound`, otherwise bound + 1. Runs a
/// diagonal band of width 2*bound+1.
std::size_t bounded_edit_distance(std::span<const Symbol> a, std::span<const Symbol> b,
                                  std::size_t bound);

struct Clustering {
    std::vector<std::vector<std::size_t>> clusters;  // trace indices, ascending
    std::vector<std::size_t> representatives;        // one trace index per cluster
};

/// Scans traces in order; each joins the first cluster whose representative
/// is within edit distance d_max, or opens a new cluster it represents.
Clustering cluster_traces(std::span<const SymbolString> traces, std::size_t d_max,
                          unsigned threads = 1);

/// Throws std::logic_error unless the clusters partition [0, trace_count).
void check_partition(const Clustering& clustering, std::size_t trace_count);

/// Expected number of edit operations separating a trace from its seed.
double expected_edit_errors(const ModelSpec& model, std::size_t n);

/// ceil(3 * expected_edit_errors), capped at n/4.
std::size_t auto_cluster_radius(const ModelSpec& model, std::size_t n);

struct RecoveryOptions {
    std::optional<std::size_t> d_max;
    unsigned threads = 1;
    std::map<std::string, double> params;  // forwarded to the reconstructor
};

struct RecoveryResult {
    std::vector<SymbolString> seeds;  // sorted, distinct
    std::vector<std::size_t> cluster_sizes;  // sizes of the kept clusters, largest first
    std::size_t clusters_found = 0;
    std::size_t d_max = 0;
    // Set when fewer than M clusters were found.
    bool fewer_clusters = false;
};

/// Clusters the pooled traces, keeps the M largest clusters (ties to the
/// earlier cluster) and reconstructs one seed of length n from each. `model`
/// describes one seed's channel; any seed-set sizes on it are ignored.
RecoveryResult population_recover(std::span<const SymbolString> traces, std::size_t m,
                                  const ModelSpec& model, std::string_view reconstructor,
                                  std::size_t n, std::size_t alphabet_size,
                                  const RecoveryOptions& options = {});

/// |recovered ∩ truth| / |truth| with both sides taken as sets.
double recovery_accuracy(std::span<const SymbolString> recovered,
                         std::span<const SymbolString> truth);

}  // namespace tracekit
