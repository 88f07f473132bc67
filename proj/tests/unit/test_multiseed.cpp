#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "tracekit/algorithms.hpp"
#include "tracekit/multiseed.hpp"

using namespace tracekit;
using testing_support::bin;
using testing_support::dna;

namespace {

ModelSpec deletion(double q) { return ModelSpec{ModelKind::deletion, ModelParams{{}, {}, q}, {}}; }

// Pooled traces of several seeds, T per seed, interleaved seed by seed.
std::vector<SymbolString> pooled(const std::vector<SymbolString>& seeds, double q, std::size_t t,
                                 const RandomStream& rng, std::vector<std::size_t>* origin = nullptr) {
    std::vector<SymbolString> out;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        const auto set = generate_trace_set(deletion(q), Seeds::single(seeds[k]), Alphabet::binary(), t, rng.derive(k));
        for (const auto& c : set.traces) {
            out.push_back(c);
            if (origin) origin->push_back(k);
        }
    }
    return out;
}

// Two uniform binary seeds at least `gap` edits apart.
std::vector<SymbolString> far_pair(std::size_t n, std::size_t gap, RandomStream& rng) {
    while (true) {
        auto a = sample_uniform(n, 2, rng), b = sample_uniform(n, 2, rng);
        if (edit_distance(a, b) >= gap) return {a, b};
    }
}

}  // namespace

TEST_CASE("edit distance examples") {
    CHECK(edit_distance(dna("ACGT"), dna("ACGT")) == 0);
    CHECK(edit_distance(dna(""), dna("ACG")) == 3);
    CHECK(edit_distance(dna("ACGT"), dna("AGT")) == 1);
    CHECK(edit_distance(dna("ACGT"), dna("TGCA")) == 4);
    CHECK(edit_distance(bin("11010"), bin("110")) == 2);
}

TEST_CASE("bounded edit distance agrees with the full DP") {
    RandomStream rng(61);
    for (int iter = 0; iter < 2000; ++iter) {
        const auto a = sample_uniform(rng.uniform_below(12), 2, rng);
        const auto b = sample_uniform(rng.uniform_below(12), 2, rng);
        const auto bound = rng.uniform_below(8);
        const auto full = edit_distance(a, b);
        CHECK(bounded_edit_distance(a, b, bound) == std::min(full, bound + 1));
    }
}

TEST_CASE("clustering is always a partition") {
    RandomStream rng(62);
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<SymbolString> traces;
        const auto t = rng.uniform_below(30);
        for (std::size_t i = 0; i < t; ++i) traces.push_back(sample_uniform(rng.uniform_below(6), 2, rng));
        const auto c = cluster_traces(traces, rng.uniform_below(4), 1 + static_cast<unsigned>(iter % 3));
        CHECK_NOTHROW(check_partition(c, traces.size()));
        CHECK(c.clusters.size() == c.representatives.size());
        for (std::size_t k = 0; k < c.clusters.size(); ++k) {
            CHECK(c.clusters[k].front() == c.representatives[k]);
        }
    }
    Clustering bad{{{0}, {0, 1}}, {0, 0}};
    CHECK_THROWS_AS(check_partition(bad, 2), std::logic_error);
}

TEST_CASE("clustering examples") {
    const std::vector<SymbolString> same(6, bin("0110"));
    CHECK(cluster_traces(same, 2).clusters.size() == 1);
    const std::vector<SymbolString> distinct{bin("0"), bin("1"), bin("00"), bin("0"), bin("1")};
    const auto exact = cluster_traces(distinct, 0);
    CHECK(exact.clusters == std::vector<std::vector<std::size_t>>{{0, 3}, {1, 4}, {2}});
}

TEST_CASE("clustering separates two far-apart seeds") {
    const RandomStream root(63);
    int ok = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        auto rng = root.derive(trial);
        std::vector<SymbolString> seeds{sample_uniform(100, 2, rng), sample_uniform(100, 2, rng)};
        std::vector<std::size_t> origin;
        const auto traces = pooled(seeds, 0.05, 10, rng.derive(1), &origin);
        const auto c = cluster_traces(traces, 20);
        bool pure = c.clusters.size() == 2;
        for (const auto& block : c.clusters) {
            for (auto i : block) pure = pure && origin[i] == origin[block.front()];
        }
        ok += pure;
    }
    CHECK(ok >= 95);
}

TEST_CASE("expected edit errors and the auto radius") {
    CHECK(expected_edit_errors(deletion(0.1), 40) == doctest::Approx(4.0));
    CHECK(auto_cluster_radius(deletion(0.1), 40) == 10);
    CHECK(auto_cluster_radius(deletion(0.01), 100) == 3);
    CHECK(auto_cluster_radius(deletion(0.0), 100) == 0);
    const ModelSpec c2{ModelKind::concat2, ModelParams{1, {}, {}}, {}};
    CHECK_THROWS_AS(expected_edit_errors(c2, 10), Error);
}

TEST_CASE("population recovery with M = 1 is plain reconstruction") {
    RandomStream rng(64);
    const auto s = sample_uniform(12, 2, rng);
    const auto traces = pooled({s}, 0.05, 20, rng);
    const auto r = population_recover(traces, 1, deletion(0.05), "bma", 12, 2);
    AlgorithmContext ctx{deletion(0.05), {12}, 2, 1, {}};
    CHECK(r.seeds == make_algorithm("bma").run(traces, ctx).slots[0]);
    RecoveryOptions wide;
    wide.d_max = 12;
    const auto all = population_recover(traces, 1, deletion(0.05), "bma", 12, 2, wide);
    CHECK(all.cluster_sizes == std::vector<std::size_t>{traces.size()});
}

TEST_CASE("population recovery reports too few clusters") {
    const std::vector<SymbolString> traces(5, bin("0101"));
    const auto r = population_recover(traces, 3, deletion(0.0), "identity", 4, 2);
    CHECK(r.fewer_clusters);
    CHECK(r.clusters_found == 1);
    CHECK(r.seeds == std::vector<SymbolString>{bin("0101")});
}

TEST_CASE("population recovery of two far-apart seeds") {
    const RandomStream root(65);
    int both = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        auto rng = root.derive(trial);
        auto seeds = far_pair(8, 4, rng);
        const auto traces = pooled(seeds, 0.01, 40, rng.derive(1));
        const auto r = population_recover(traces, 2, deletion(0.01), "brute-force", 8, 2);
        both += recovery_accuracy(r.seeds, seeds) == 1.0;
    }
    CHECK(both >= 95);
}

TEST_CASE("pure clusters and an exact reconstructor give accuracy 1") {
    const std::vector<SymbolString> seeds{bin("000000"), bin("111111"), bin("010101")};
    const auto traces = pooled(seeds, 0.0, 5, RandomStream(66));
    const auto r = population_recover(traces, 3, deletion(0.0), "identity", 6, 2);
    CHECK(recovery_accuracy(r.seeds, seeds) == 1.0);
    CHECK(recovery_accuracy(std::vector<SymbolString>{bin("000000")}, seeds) == doctest::Approx(1.0 / 3));
}

TEST_CASE("recovery accuracy does not improve with more noise") {
    auto mean_accuracy = [](double q) {
        const RandomStream root(67);
        double total = 0.0;
        for (std::uint64_t trial = 0; trial < 60; ++trial) {
            auto rng = root.derive(trial);
            auto seeds = far_pair(16, 6, rng);
            const auto traces = pooled(seeds, q, 12, rng.derive(1));
            total += recovery_accuracy(population_recover(traces, 2, deletion(q), "bma", 16, 2).seeds, seeds);
        }
        return total / 60;
    };
    const double a0 = mean_accuracy(0.0), a1 = mean_accuracy(0.01), a5 = mean_accuracy(0.05);
    CHECK(a0 == 1.0);
    CHECK(a1 >= a5 - 0.05);
    CHECK(a0 >= a1);
}
