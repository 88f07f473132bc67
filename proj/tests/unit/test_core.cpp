#include <doctest.h>

#include <array>
#include <cmath>

#include "helpers.hpp"
#include "tracekit/core.hpp"

using namespace tracekit;
using testing_support::dna;

namespace {

// |observed - expected| within k standard deviations of a binomial count.
bool within_sigma(std::size_t observed, std::size_t n, double p, double k) {
    const double mean = static_cast<double>(n) * p;
    const double sd = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
    return std::abs(static_cast<double>(observed) - mean) <= k * sd;
}

}  // namespace

TEST_CASE("alphabet basics") {
    const auto a = Alphabet::dna();
    CHECK(a.size() == 4);
    CHECK(a.to_char(2) == 'G');
    CHECK(*a.index_of('T') == 3);
    CHECK_FALSE(a.index_of('N').has_value());
    CHECK_THROWS_AS(Alphabet("A"), Error);
    CHECK_THROWS_AS(Alphabet("AA"), Error);
    CHECK(Alphabet::binary().chars() == "01");
}

TEST_CASE("encode and decode") {
    const auto a = Alphabet::dna();
    CHECK(decode(a, encode(a, "GATTACA")) == "GATTACA");
    CHECK(encode(a, "").empty());
    try {
        encode(a, "ACNT");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::illegal_symbol);
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("symbol strings order lexicographically in alphabet order") {
    CHECK(dna("A") < dna("C"));
    CHECK(dna("AC") < dna("C"));
    CHECK(dna("") < dna("A"));
    CHECK(concat(dna("AC"), dna("GT")) == dna("ACGT"));
}

TEST_CASE("hamming and longest common prefix") {
    CHECK(hamming(dna("ACGT"), dna("ACCA")) == 2);
    CHECK(hamming(dna(""), dna("")) == 0);
    CHECK_THROWS_AS(hamming(dna("A"), dna("AC")), Error);
    CHECK(longest_common_prefix(dna("ACGT"), dna("ACCA")) == 2);
    CHECK(longest_common_prefix(dna("AC"), dna("ACGT")) == 2);
}

TEST_CASE("trim examples") {
    CHECK(trim(dna("ACGT"), 1, 1) == dna("CG"));
    CHECK(trim(dna("A"), 0, 1) == dna(""));
    CHECK(trim(dna("ACGT"), 0, 0) == dna("ACGT"));
    CHECK_THROWS_AS(trim(dna("ACG"), 2, 2), Error);
}

TEST_CASE("trim pieces reassemble the string") {
    RandomStream rng(11);
    for (int iter = 0; iter < 200; ++iter) {
        const auto n = rng.uniform_below(8);
        const auto s = sample_uniform(n, 4, rng);
        const auto l = rng.uniform_below(n + 1);
        const auto k = rng.uniform_below(n - l + 1);
        const auto middle = trim(s, l, k);
        CHECK(concat(concat(s.substr(0, l), middle), s.substr(n - k, k)) == s);
    }
}

TEST_CASE("random streams are reproducible and derivation ignores draw history") {
    RandomStream a(42, 7);
    RandomStream b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    RandomStream fresh(42, 7);
    CHECK(a.derive(3).next() == fresh.derive(3).next());
    CHECK(fresh.derive(3).next() != fresh.derive(4).next());
    CHECK(RandomStream(1).next() != RandomStream(2).next());
}

TEST_CASE("uniform_below stays in range and is roughly uniform") {
    RandomStream rng(5);
    std::array<std::size_t, 6> hist{};
    const std::size_t n = 60000;
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = rng.uniform_below(6);
        REQUIRE(x < 6);
        ++hist[x];
    }
    for (auto h : hist) CHECK(within_sigma(h, n, 1.0 / 6.0, 4.0));
}

TEST_CASE("Random<=t with t = 0 is always empty") {
    RandomStream rng(3);
    for (int i = 0; i < 100; ++i) CHECK(sample_random_leq_t(0, 4, rng).empty());
}

TEST_CASE("Random<=1 over four symbols: Pr(empty) = 1/2, each symbol 1/8") {
    RandomStream rng(9);
    const std::size_t n = 100000;
    std::array<std::size_t, 5> hist{};  // 0..3 symbols, 4 = empty
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = sample_random_leq_t(1, 4, rng);
        REQUIRE(r.size() <= 1);
        ++hist[r.empty() ? 4 : r[0]];
    }
    CHECK(within_sigma(hist[4], n, 0.5, 4.0));
    for (int s = 0; s < 4; ++s) CHECK(within_sigma(hist[s], n, 0.125, 4.0));
}

TEST_CASE("Random<=3 lengths and symbols are uniform") {
    RandomStream rng(10);
    const std::size_t n = 100000;
    std::array<std::size_t, 4> lengths{};
    std::array<std::size_t, 4> symbols{};
    std::size_t total_symbols = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = sample_random_leq_t(3, 4, rng);
        ++lengths[r.size()];
        for (auto s : r) ++symbols[s];
        total_symbols += r.size();
    }
    for (auto h : lengths) CHECK(within_sigma(h, n, 0.25, 4.0));
    for (auto h : symbols) CHECK(within_sigma(h, total_symbols, 0.25, 4.0));
}

TEST_CASE("mutate edge cases") {
    RandomStream rng(4);
    const auto s = dna("ACGTACGT");
    CHECK(mutate(s, 0.0, 4, rng) == s);
    for (int i = 0; i < 50; ++i) {
        const auto m = mutate(s, 1.0, 4, rng);
        REQUIRE(m.size() == s.size());
        for (std::size_t j = 0; j < s.size(); ++j) CHECK(m[j] != s[j]);
    }
}

TEST_CASE("mutate of A gives C with probability eps/3 and preserves length") {
    RandomStream rng(8);
    const double eps = 0.3;
    const std::size_t n = 100000;
    std::size_t to_c = 0;
    std::size_t changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto m = mutate(dna("A"), eps, 4, rng);
        REQUIRE(m.size() == 1);
        to_c += m[0] == 1;
        changed += m[0] != 0;
    }
    CHECK(within_sigma(to_c, n, eps / 3.0, 4.0));
    CHECK(within_sigma(changed, n, eps, 4.0));
}

TEST_CASE("sampling replays bit for bit") {
    RandomStream a(77, 1);
    RandomStream b(77, 1);
    for (int i = 0; i < 20; ++i) {
        CHECK(mutate(dna("ACGTAC"), 0.4, 4, a) == mutate(dna("ACGTAC"), 0.4, 4, b));
        CHECK(sample_random_leq_t(5, 4, a) == sample_random_leq_t(5, 4, b));
    }
}
