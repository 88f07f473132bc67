#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "tracekit/exact.hpp"

using namespace tracekit;
using testing_support::all_strings;
using testing_support::bin;
using testing_support::dna;

namespace {

ModelSpec spec(ModelKind kind, std::optional<std::uint32_t> t = {}, std::optional<double> eps = {},
               std::optional<double> q = {}) {
    return ModelSpec{kind, ModelParams{t, eps, q}, {}};
}

// sum_i log(|A|^(m_i+1) - 1), computed directly from each trace.
double direct_score(const SymbolString& s, std::span<const SymbolString> traces, std::size_t a) {
    double total = 0.0;
    for (const auto& c : traces) {
        const auto m = longest_common_prefix(s, c);
        total += std::log(std::pow(static_cast<double>(a), static_cast<double>(m + 1)) - 1.0);
    }
    return total;
}

std::vector<SymbolString> tsae_traces(const SymbolString& s, std::size_t a, std::size_t t, RandomStream& rng) {
    std::vector<SymbolString> out;
    for (std::size_t i = 0; i < t; ++i) {
        out.push_back(generate_trace(spec(ModelKind::trim_suffix_and_extend), Seeds::single(s), a, rng));
    }
    return out;
}

}  // namespace

TEST_CASE("trie sim counts for two overlapping traces") {
    PrefixTrie trie(4, 6);
    trie.insert(dna("CATTAT"));
    trie.insert(dna("CATTTG"));
    for (const char* p : {"C", "CA", "CAT", "CATT"}) CHECK(trie.node(trie.find(dna(p))).sim == 2);
    for (const char* p : {"CATTT", "CATTTG", "CATTA", "CATTAT"}) CHECK(trie.node(trie.find(dna(p))).sim == 1);
    CHECK(trie.find(dna("G")) == PrefixTrie::kNone);
    CHECK(trie.trace_count() == 2);
    CHECK(trie.path(trie.find(dna("CATTTG"))) == dna("CATTTG"));
}

TEST_CASE("trie sim equals the number of traces sharing each prefix") {
    RandomStream rng(31);
    for (int iter = 0; iter < 40; ++iter) {
        const std::size_t a = 2 + rng.uniform_below(3);
        const std::size_t n = rng.uniform_below(7);
        std::vector<SymbolString> traces;
        const auto count = 1 + rng.uniform_below(30);
        // short alphabet and length force many shared prefixes and splits
        for (std::size_t i = 0; i < count; ++i) traces.push_back(sample_uniform(n, a, rng));
        const auto trie = build_trie(traces, a);
        CHECK(trie.node_count() <= 2 * count + 1);
        for (const auto& c : traces) {
            for (std::size_t len = 0; len <= n; ++len) {
                const auto p = c.substr(0, len);
                std::uint64_t expected = 0;
                for (const auto& other : traces) expected += other.substr(0, len) == p;
                const auto id = trie.find(p);
                REQUIRE(id != PrefixTrie::kNone);
                CHECK(trie.node(id).sim == expected);
                CHECK(trie.path(id).substr(0, len) == p);
            }
        }
        auto absent = sample_uniform(n + 1, a, rng);
        CHECK(trie.find(absent) == PrefixTrie::kNone);
    }
}

TEST_CASE("trie shapes for identical and first-symbol-distinct traces") {
    const std::vector<SymbolString> same(5, dna("ACG"));
    const auto t1 = build_trie(same, 4);
    CHECK(t1.node_count() == 2);  // root plus one compressed edge
    CHECK(t1.node(t1.find(dna("ACG"))).sim == 5);
    const std::vector<SymbolString> distinct{dna("AC"), dna("CC"), dna("GC"), dna("TC")};
    const auto t2 = build_trie(distinct, 4);
    for (Symbol x = 0; x < 4; ++x) CHECK(t2.node(t2.child(0, x)).sim == 1);
    const std::vector<SymbolString> ragged{dna("AC"), dna("A")};
    CHECK_THROWS_AS(build_trie(ragged, 4), Error);
}

TEST_CASE("score_and_select examples") {
    const std::vector<SymbolString> c{dna("AAC"), dna("AAC"), dna("ATG")};
    const auto sel = score_and_select(build_trie(c, 4));
    CHECK(sel.seed == dna("AAC"));
    CHECK(sel.score == doctest::Approx(direct_score(dna("AAC"), c, 4)).epsilon(1e-12));
    const std::vector<SymbolString> one{dna("GTCA")};
    CHECK(mle_trim_suffix_and_extend(one, 4) == dna("GTCA"));
    CHECK_THROWS_AS(mle_trim_suffix_and_extend(std::vector<SymbolString>{}, 4), Error);
}

TEST_CASE("trie selection is maximal over the whole universe") {
    RandomStream rng(41);
    for (auto [a, n] : {std::pair<std::size_t, std::size_t>{2, 5}, {4, 3}, {2, 4}, {4, 2}}) {
        for (int iter = 0; iter < 25; ++iter) {
            const auto s = sample_uniform(n, a, rng);
            const auto traces = tsae_traces(s, a, 1 + rng.uniform_below(12), rng);
            const auto sel = score_and_select(build_trie(traces, a));
            CHECK(sel.score == doctest::Approx(direct_score(sel.seed, traces, a)).epsilon(1e-12));
            CHECK(std::find(traces.begin(), traces.end(), sel.seed) != traces.end());
            SymbolString best;
            double best_score = -1e300;
            for (const auto& x : all_strings(n, a)) {
                const double sc = direct_score(x, traces, a);
                if (clearly_greater(sc, best_score)) {
                    best_score = sc;
                    best = x;
                }
            }
            CHECK(sel.seed == best);
        }
    }
}

TEST_CASE("trie-exact agrees with brute force on binary instances") {
    RandomStream rng(42);
    const auto m = spec(ModelKind::trim_suffix_and_extend);
    const std::vector<std::size_t> lengths{5};
    for (int iter = 0; iter < 50; ++iter) {
        const auto traces = tsae_traces(sample_uniform(5, 2, rng), 2, 10, rng);
        const auto trie = mle_trim_suffix_and_extend(traces, 2);
        const auto brute = brute_force_mle(traces, m, lengths, 2);
        CHECK(brute.seeds.slots[0][0] == trie);
        CHECK(brute.candidates == 32);
        CHECK(brute.log_likelihood.log() ==
              doctest::Approx(lp_trace_set(traces, Seeds::single(trie), m, 2).log()).epsilon(1e-12));
    }
}

TEST_CASE("brute force with no traces returns the smallest string") {
    const std::vector<std::size_t> lengths{3};
    const auto r = brute_force_mle({}, spec(ModelKind::deletion, {}, {}, 0.2), lengths, 2);
    CHECK(r.seeds.slots[0][0] == bin("000"));
    CHECK(r.log_likelihood.log() == 0.0);
}

TEST_CASE("brute force is invariant under permutations of the traces") {
    RandomStream rng(43);
    const auto m = spec(ModelKind::extend_mutate_trim, 1, 0.1);
    const std::vector<std::size_t> lengths{3};
    auto traces = generate_trace_set(m, Seeds::single(dna("ACG")), Alphabet::dna(), 12, rng).traces;
    const auto base = brute_force_mle(traces, m, lengths, 4).seeds;
    for (int i = 0; i < 5; ++i) {
        for (std::size_t k = traces.size(); k > 1; --k) std::swap(traces[k - 1], traces[rng.uniform_below(k)]);
        CHECK(brute_force_mle(traces, m, lengths, 4).seeds == base);
    }
}

TEST_CASE("brute force is thread-count independent") {
    RandomStream rng(44);
    const auto m = spec(ModelKind::trim_and_extend);
    const std::vector<std::size_t> lengths{5};
    const auto traces = generate_trace_set(m, Seeds::single(dna("ACGTT")), Alphabet::dna(), 8, rng).traces;
    BruteForceOptions one, many;
    many.threads = 4;
    const auto a = brute_force_mle(traces, m, lengths, 4, one);
    const auto b = brute_force_mle(traces, m, lengths, 4, many);
    CHECK(a.seeds == b.seeds);
    CHECK(a.log_likelihood.log() == b.log_likelihood.log());
}

TEST_CASE("brute force universe sizes and budget") {
    const std::vector<std::size_t> five{5};
    CHECK(brute_force_universe_size(spec(ModelKind::trim_and_extend), five, 4) == 1024);
    auto multi = spec(ModelKind::trim_suffix_and_extend);
    multi.multi_seed = {2};
    const std::vector<std::size_t> two{2};
    // unordered pairs of distinct strings among 16
    CHECK(brute_force_universe_size(multi, two, 4) == 120);
    const std::vector<std::size_t> pair{2, 2};
    CHECK(brute_force_universe_size(spec(ModelKind::concat2, 1), pair, 4) == 256);
    BruteForceOptions tight;
    tight.max_candidates = 100;
    try {
        brute_force_mle({}, spec(ModelKind::trim_and_extend), five, 4, tight);
        FAIL("expected a budget error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::budget_exceeded);
    }
}

TEST_CASE("brute force over seed-sets maximizes over every unordered pair") {
    RandomStream rng(45);
    auto multi = spec(ModelKind::trim_suffix_and_extend);
    multi.multi_seed = {2};
    const auto truth = Seeds::set({bin("001"), bin("110")});
    const auto traces = generate_trace_set(multi, truth, Alphabet::binary(), 30, rng).traces;
    const std::vector<std::size_t> three{3};
    const auto r = brute_force_mle(traces, multi, three, 2);
    CHECK(r.candidates == 28);
    const auto& got = r.seeds.slots[0];
    REQUIRE(got.size() == 2);
    CHECK(got[0] < got[1]);
    const auto strings = all_strings(3, 2);
    for (std::size_t i = 0; i < strings.size(); ++i) {
        for (std::size_t j = i + 1; j < strings.size(); ++j) {
            const double ll = lp_trace_set(traces, Seeds::set({strings[i], strings[j]}), multi, 2).log();
            CHECK_FALSE(clearly_greater(ll, r.log_likelihood.log()));
        }
    }
}

TEST_CASE("brute force recovers a concatenated pair") {
    RandomStream rng(47);
    const auto c2 = spec(ModelKind::concat2, 0);
    const auto pair = Seeds::pair(dna("AC"), dna("GT"));
    const auto ptraces = generate_trace_set(c2, pair, Alphabet::dna(), 80, rng).traces;
    const std::vector<std::size_t> lens{2, 2};
    CHECK(brute_force_mle(ptraces, c2, lens, 4).seeds == pair);
}

TEST_CASE("brute force recovers 101 from 200 deletion traces") {
    const auto m = spec(ModelKind::deletion, {}, {}, 0.2);
    const std::vector<std::size_t> lengths{3};
    const RandomStream root(46);
    int successes = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const auto traces =
            generate_trace_set(m, Seeds::single(bin("101")), Alphabet::binary(), 200, root.derive(trial)).traces;
        successes += brute_force_mle(traces, m, lengths, 2).seeds.slots[0][0] == bin("101");
    }
    CHECK(successes >= 95);
}
