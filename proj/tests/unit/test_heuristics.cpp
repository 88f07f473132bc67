#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "tracekit/heuristics.hpp"

using namespace tracekit;
using testing_support::all_strings;
using testing_support::bin;
using testing_support::dna;

namespace {

ModelSpec spec(ModelKind kind, std::optional<std::uint32_t> t = {}, std::optional<double> eps = {},
               std::optional<double> q = {}) {
    return ModelSpec{kind, ModelParams{t, eps, q}, {}};
}

// E[padded bit j] by summing over every deletion mask.
std::vector<double> mask_expectation(const SymbolString& s, double q) {
    const auto n = s.size();
    std::vector<double> out(n, 0.0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double p = 1.0;
        std::size_t j = 0;
        std::vector<Symbol> kept;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1) {
                p *= q;
            } else {
                p *= 1.0 - q;
                kept.push_back(s[i]);
            }
        }
        for (j = 0; j < kept.size(); ++j) out[j] += p * kept[j];
    }
    return out;
}

}  // namespace

TEST_CASE("greedy examples") {
    const std::vector<SymbolString> c{dna("AAC"), dna("AAG"), dna("ATT")};
    CHECK(greedy_reconstruct(c, 3, 4) == dna("AAC"));
    const std::vector<SymbolString> same(4, dna("GATT"));
    CHECK(greedy_reconstruct(same, 4, 4) == dna("GATT"));
    const std::vector<SymbolString> one{dna("TTGA")};
    CHECK(greedy_reconstruct(one, 4, 4) == dna("TTGA"));
    CHECK_THROWS_AS(greedy_reconstruct(std::vector<SymbolString>{}, 3, 4), Error);
}

TEST_CASE("greedy converges on noiseless TrimSuffixAndExtend data") {
    const RandomStream root(51);
    int ok = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        auto rng = root.derive(trial);
        const auto s = sample_uniform(10, 4, rng);
        const auto set = generate_trace_set(spec(ModelKind::trim_suffix_and_extend), Seeds::single(s),
                                            Alphabet::dna(), 10000, rng.derive(1));
        ok += greedy_reconstruct(set, 10) == s;
    }
    CHECK(ok >= 99);
}

TEST_CASE("k-mer catalog counts every window") {
    const std::vector<SymbolString> c{dna("AAAA"), dna("AAC")};
    const auto cat = count_kmers(c, 3);
    CHECK(cat.windows == 3);
    CHECK(cat.counts.at(dna("AAA")) == 2);
    CHECK(cat.counts.at(dna("AAC")) == 1);
    for (const auto& [kmer, n] : cat.counts) {
        CHECK(kmer.size() == 3);
        CHECK(n >= 1);
    }
}

TEST_CASE("mining recovers a noiseless ExtendMutateTrim seed") {
    RandomStream rng(52);
    const auto s = sample_uniform(20, 4, rng);
    const auto set = generate_trace_set(spec(ModelKind::extend_mutate_trim, 5, 0.0), Seeds::single(s),
                                        Alphabet::dna(), 2000, rng.derive(1));
    const auto r = mine_seeds(set.traces, 4);
    CHECK(std::find(r.seeds.begin(), r.seeds.end(), s) != r.seeds.end());
    CHECK(r.selected_kmers > 0);
    CHECK_FALSE(r.stopping_rule.empty());
    // one branch per k-mer caps the output
    CHECK(r.seeds.size() <= r.selected_kmers);
}

TEST_CASE("mining finds nothing in uniformly random traces") {
    RandomStream rng(53);
    std::vector<SymbolString> traces;
    for (int i = 0; i < 2000; ++i) traces.push_back(sample_uniform(20, 4, rng));
    CHECK(mine_seeds(traces, 4).seeds.empty());
}

TEST_CASE("mining output has no candidate inside another") {
    RandomStream rng(54);
    const auto seeds = Seeds::set({sample_uniform(16, 4, rng), sample_uniform(16, 4, rng)});
    auto m = spec(ModelKind::extend_mutate_trim, 3, 0.0);
    m.multi_seed = {2};
    const auto set = generate_trace_set(m, seeds, Alphabet::dna(), 2000, rng.derive(1));
    MiningOptions opt;
    opt.max_branches = 3;
    const auto r = mine_seeds(set.traces, 4, opt);
    CHECK(std::is_sorted(r.seeds.begin(), r.seeds.end()));
    for (const auto& a : r.seeds) {
        for (const auto& b : r.seeds) {
            if (a == b) continue;
            CHECK(std::search(b.begin(), b.end(), a.begin(), a.end()) == b.end());
        }
    }
}

TEST_CASE("mining argument errors") {
    const std::vector<SymbolString> c{dna("ACGTACGT")};
    MiningOptions opt;
    opt.k = 2;
    CHECK_THROWS_AS(mine_seeds(c, 4, opt), Error);
    opt.k = 9;
    CHECK_THROWS_AS(mine_seeds(c, 4, opt), Error);
    opt.k = 3;
    opt.p_stop = 1.0;
    CHECK_THROWS_AS(mine_seeds(c, 4, opt), Error);
}

TEST_CASE("bma examples") {
    const std::vector<SymbolString> c{bin("1100"), bin("100"), bin("1100")};
    CHECK(bma_reconstruct(c, 4, 2) == bin("1100"));
    const std::vector<SymbolString> copies(3, bin("10110"));
    CHECK(bma_reconstruct(copies, 5, 2) == bin("10110"));
    CHECK_THROWS_AS(bma_reconstruct(std::vector<SymbolString>{}, 4, 2), Error);
    CHECK_THROWS_AS(bma_reconstruct(c, 0, 2), Error);
}

TEST_CASE("bma output always has length n") {
    RandomStream rng(55);
    for (int iter = 0; iter < 200; ++iter) {
        const auto n = 1 + rng.uniform_below(30);
        const auto s = sample_uniform(n, 2, rng);
        const auto set = generate_trace_set(spec(ModelKind::deletion, {}, {}, 0.3), Seeds::single(s),
                                            Alphabet::binary(), 1 + rng.uniform_below(8), rng.derive(iter));
        const auto out_n = 1 + rng.uniform_below(40);
        CHECK(bma_reconstruct(set.traces, out_n, 2).size() == out_n);
    }
}

TEST_CASE("expected mean profile equals mask enumeration") {
    CHECK(expected_mean_profile(bin("111"), 0.5) ==
          std::vector<double>{0.875, 0.5, 0.125});
    RandomStream rng(56);
    for (int iter = 0; iter < 30; ++iter) {
        const auto n = 1 + rng.uniform_below(15);
        const auto s = sample_uniform(n, 2, rng);
        const double q = 0.05 + 0.9 * rng.uniform01();
        const auto want = mask_expectation(s, q);
        const auto got = expected_mean_profile(s, q);
        REQUIRE(got.size() == n);
        for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(got[j] - want[j]) < 1e-12);
    }
}

TEST_CASE("empirical mean profile of 111 matches the expectation") {
    const auto m = spec(ModelKind::deletion, {}, {}, 0.5);
    const std::size_t t = 100000;
    const auto set = generate_trace_set(m, Seeds::single(bin("111")), Alphabet::binary(), t, RandomStream(57));
    const auto prof = mean_profile(set.traces, 3);
    const std::vector<double> want{0.875, 0.5, 0.125};
    for (std::size_t j = 0; j < 3; ++j) {
        const double sd = std::sqrt(want[j] * (1 - want[j]) / t);
        CHECK(std::abs(prof.means[j] - want[j]) <= 4 * sd);
    }
}

TEST_CASE("mean profile trivial cases and linearity") {
    const std::vector<SymbolString> zeros{bin("0000"), bin("00"), bin("")};
    for (double x : mean_profile(zeros, 4).means) CHECK(x == 0.0);
    const std::vector<SymbolString> copy{bin("1011")};
    CHECK(mean_profile(copy, 4).means == std::vector<double>{1, 0, 1, 1});
    CHECK_THROWS_AS(mean_profile(copy, 3), Error);

    RandomStream rng(58);
    std::vector<SymbolString> a, b;
    for (int i = 0; i < 7; ++i) a.push_back(sample_uniform(rng.uniform_below(6), 2, rng));
    for (int i = 0; i < 3; ++i) b.push_back(sample_uniform(rng.uniform_below(6), 2, rng));
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    const auto pa = mean_profile(a, 5).means, pb = mean_profile(b, 5).means, pab = mean_profile(ab, 5).means;
    for (std::size_t j = 0; j < 5; ++j) CHECK(pab[j] == doctest::Approx((7 * pa[j] + 3 * pb[j]) / 10));
    std::reverse(ab.begin(), ab.end());
    const auto rev = mean_profile(ab, 5).means;
    for (std::size_t j = 0; j < 5; ++j) CHECK(rev[j] == doctest::Approx(pab[j]).epsilon(1e-15));
}

TEST_CASE("mean-based selection trivial cases") {
    const std::vector<SymbolString> traces{bin("1101")};
    const std::vector<SymbolString> single{bin("0000")};
    CHECK(mean_based_select(traces, single, 0.3) == bin("0000"));
    const std::vector<SymbolString> cands{bin("0000"), bin("1101"), bin("1111")};
    CHECK(mean_based_select(traces, cands, 0.0) == bin("1101"));
    const std::vector<SymbolString> mixed{bin("000"), bin("1101")};
    CHECK_THROWS_AS(mean_based_select(traces, mixed, 0.3), Error);
}
