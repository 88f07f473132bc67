#include "tracekit/multiseed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "tracekit/algorithms.hpp"

namespace tracekit {

std::size_t edit_distance(std::span<const Symbol> a, std::span<const Symbol> b) {
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const auto up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] != b[j - 1])});
            diag = up;
        }
    }
    return row[b.size()];
}

std::size_t bounded_edit_distance(std::span<const Symbol> a, std::span<const Symbol> b,
                                  std::size_t bound) {
    const auto over = bound + 1;
    const auto gap = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
    if (gap > bound) return over;
    const auto n = a.size();
    const auto m = b.size();
    // Cells outside |i - j| <= bound are treated as `over`.
    std::vector<std::size_t> prev(m + 1, over);
    std::vector<std::size_t> cur(m + 1, over);
    for (std::size_t j = 0; j <= std::min(m, bound); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        const auto lo = i > bound ? i - bound : 0;
        const auto hi = std::min(m, i + bound);
        std::fill(cur.begin(), cur.end(), over);
        if (lo == 0) cur[0] = i <= bound ? i : over;
        std::size_t best = cur[0];
        for (std::size_t j = std::max<std::size_t>(lo, 1); j <= hi; ++j) {
            auto v = std::min(prev[j] + 1, cur[j - 1] + 1);
            v = std::min(v, prev[j - 1] + (a[i - 1] != b[j - 1]));
            cur[j] = std::min(v, over);
            best = std::min(best, cur[j]);
        }
        if (best >= over) return over;
        std::swap(prev, cur);
    }
    return std::min(prev[m], over);
}

Clustering cluster_traces(std::span<const SymbolString> traces, std::size_t d_max,
                          unsigned threads) {
    Clustering out;
    // Identical traces always land in the same cluster, so each distinct
    // string is placed once.
    std::map<SymbolString, std::size_t> placed;
    std::vector<std::size_t> distance;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const auto& c = traces[i];
        if (auto it = placed.find(c); it != placed.end()) {
            out.clusters[it->second].push_back(i);
            continue;
        }
        const auto reps = out.representatives.size();
        distance.assign(reps, 0);
        parallel_for(reps, reps >= 64 ? threads : 1, [&](std::size_t r) {
            distance[r] = bounded_edit_distance(c, traces[out.representatives[r]], d_max);
        });
        std::size_t home = reps;
        for (std::size_t r = 0; r < reps; ++r) {
            if (distance[r] <= d_max) {
                home = r;
                break;
            }
        }
        if (home == reps) {
            out.representatives.push_back(i);
            out.clusters.emplace_back();
        }
        out.clusters[home].push_back(i);
        placed.emplace(c, home);
    }
    return out;
}

void check_partition(const Clustering& clustering, std::size_t trace_count) {
    if (clustering.clusters.size() != clustering.representatives.size()) {
        throw std::logic_error("one representative per cluster expected");
    }
    std::vector<bool> seen(trace_count, false);
    std::size_t covered = 0;
    for (std::size_t k = 0; k < clustering.clusters.size(); ++k) {
        const auto& block = clustering.clusters[k];
        if (block.empty()) throw std::logic_error("empty cluster");
        if (std::find(block.begin(), block.end(), clustering.representatives[k]) == block.end()) {
            throw std::logic_error("representative outside its cluster");
        }
        for (auto i : block) {
            if (i >= trace_count || seen[i]) throw std::logic_error("clusters overlap");
            seen[i] = true;
            ++covered;
        }
    }
    if (covered != trace_count) throw std::logic_error("clusters miss a trace");
}

double expected_edit_errors(const ModelSpec& model, std::size_t n) {
    const double len = static_cast<double>(n);
    const double t = model.params.t ? static_cast<double>(*model.params.t) : 0.0;
    const double eps = model.params.epsilon.value_or(0.0);
    switch (model.kind) {
        case ModelKind::deletion:
            return model.params.q.value_or(0.0) * len;
        case ModelKind::trim_suffix_and_extend:
            return len / 2.0;
        case ModelKind::suffix_extend_trim_suffix:
            return len / 2.0 + t / 2.0;
        case ModelKind::suffix_extend_mutate_trim_suffix:
            return len / 2.0 + t / 2.0 + eps * len;
        case ModelKind::trim_and_extend:
            return 2.0 * len / 3.0;
        case ModelKind::mutate_trim_and_extend:
            return 2.0 * len / 3.0 + eps * len;
        case ModelKind::extend_mutate_trim:
            return 2.0 * len / 3.0 + t + eps * len;
        case ModelKind::concat2:
        case ModelKind::vdj:
            break;
    }
    throw Error(ErrorCode::incompatible, "population recovery needs a single-slot model, not " +
                                             std::string(model_name(model.kind)));
}

std::size_t auto_cluster_radius(const ModelSpec& model, std::size_t n) {
    const auto radius = static_cast<std::size_t>(std::ceil(3.0 * expected_edit_errors(model, n)));
    return std::min(radius, n / 4);
}

RecoveryResult population_recover(std::span<const SymbolString> traces, std::size_t m,
                                  const ModelSpec& model, std::string_view reconstructor,
                                  std::size_t n, std::size_t alphabet_size,
                                  const RecoveryOptions& options) {
    if (m == 0) throw Error(ErrorCode::invalid_argument, "M must be at least 1");
    ModelSpec single = model;
    single.multi_seed.clear();
    single.validate();
    const auto algorithm = make_algorithm(reconstructor);
    algorithm.check(single, alphabet_size);

    RecoveryResult result;
    result.d_max = options.d_max ? *options.d_max : auto_cluster_radius(single, n);
    const auto clustering = cluster_traces(traces, result.d_max, options.threads);
    result.clusters_found = clustering.clusters.size();

    std::vector<std::size_t> order(clustering.clusters.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return clustering.clusters[x].size() > clustering.clusters[y].size();
    });
    if (order.size() < m) result.fewer_clusters = true;
    order.resize(std::min(order.size(), m));

    AlgorithmContext ctx{single, {n}, alphabet_size, options.threads, options.params};
    std::set<SymbolString> found;
    for (auto k : order) {
        std::vector<SymbolString> members;
        for (auto i : clustering.clusters[k]) members.push_back(traces[i]);
        result.cluster_sizes.push_back(members.size());
        found.insert(algorithm.run(members, ctx).slots.front().front());
    }
    result.seeds.assign(found.begin(), found.end());
    return result;
}

double recovery_accuracy(std::span<const SymbolString> recovered,
                         std::span<const SymbolString> truth) {
    std::set<SymbolString> want(truth.begin(), truth.end());
    if (want.empty()) throw Error(ErrorCode::invalid_argument, "empty ground-truth seed-set");
    std::set<SymbolString> got(recovered.begin(), recovered.end());
    std::size_t hits = 0;
    for (const auto& s : want) hits += got.count(s);
    return static_cast<double>(hits) / static_cast<double>(want.size());
}

}  // namespace tracekit
