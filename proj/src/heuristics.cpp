#include "tracekit/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "tracekit/exact.hpp"

namespace tracekit {

namespace {

Symbol majority(std::span<const std::uint64_t> counts) {
    Symbol best = 0;
    for (std::size_t s = 1; s < counts.size(); ++s) {
        if (counts[s] > counts[best]) best = static_cast<Symbol>(s);
    }
    return best;
}

}  // namespace

SymbolString greedy_reconstruct(std::span<const SymbolString> traces, std::size_t n,
                                std::size_t alphabet_size) {
    if (traces.empty()) throw Error(ErrorCode::invalid_argument, "empty trace-set");
    std::vector<std::size_t> alive(traces.size());
    for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
    std::vector<Symbol> out;
    out.reserve(n);
    std::vector<std::uint64_t> counts(alphabet_size);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(counts.begin(), counts.end(), 0);
        for (auto i : alive) {
            if (j < traces[i].size()) ++counts[traces[i][j]];
        }
        const Symbol pick = majority(counts);
        out.push_back(pick);
        std::erase_if(alive, [&](std::size_t i) {
            return j >= traces[i].size() || traces[i][j] != pick;
        });
    }
    return SymbolString(std::move(out));
}

SymbolString greedy_reconstruct(const TraceSet& traces, std::size_t n) {
    return greedy_reconstruct(traces.traces, n, traces.alphabet.size());
}

KmerCatalog count_kmers(std::span<const SymbolString> traces, std::size_t k) {
    if (k == 0) throw Error(ErrorCode::invalid_argument, "k must be positive");
    KmerCatalog catalog;
    catalog.k = k;
    for (const auto& c : traces) {
        if (c.size() < k) continue;
        for (std::size_t p = 0; p + k <= c.size(); ++p) {
            ++catalog.counts[c.substr(p, k)];
            ++catalog.windows;
        }
    }
    return catalog;
}

namespace {

// P(X >= x) for X ~ Poisson(lambda)
double poisson_upper_tail(std::uint64_t x, double lambda) {
    if (x == 0) return 1.0;
    return boost::math::gamma_p(static_cast<double>(x), lambda);
}

// P(X >= x) for X ~ Binomial(n, p)
double binomial_upper_tail(std::uint64_t x, std::uint64_t n, double p) {
    if (x == 0) return 1.0;
    if (x > n) return 0.0;
    return boost::math::ibeta(static_cast<double>(x), static_cast<double>(n - x + 1), p);
}

std::string_view as_bytes(const SymbolString& s) {
    return {reinterpret_cast<const char*>(s.symbols().data()), s.size()};
}

enum class Side { right, left };

// Counts the symbols flanking every occurrence of `candidate` on one side.
std::vector<std::uint64_t> flank_counts(std::span<const SymbolString> traces,
                                        const SymbolString& candidate, Side side,
                                        std::size_t alphabet_size) {
    std::vector<std::uint64_t> counts(alphabet_size, 0);
    const auto needle = as_bytes(candidate);
    for (const auto& c : traces) {
        const auto hay = as_bytes(c);
        for (auto pos = hay.find(needle); pos != std::string_view::npos;
             pos = hay.find(needle, pos + 1)) {
            if (side == Side::right && pos + needle.size() < hay.size()) {
                ++counts[c[pos + needle.size()]];
            } else if (side == Side::left && pos > 0) {
                ++counts[c[pos - 1]];
            }
        }
    }
    return counts;
}

std::vector<SymbolString> extend_side(std::span<const SymbolString> traces,
                                      std::vector<SymbolString> start, Side side,
                                      std::size_t alphabet_size, const MiningOptions& options,
                                      std::size_t max_length) {
    std::vector<SymbolString> done;
    std::vector<SymbolString> work = std::move(start);
    const double null_p = 1.0 / static_cast<double>(alphabet_size);
    while (!work.empty()) {
        auto candidate = std::move(work.back());
        work.pop_back();
        if (candidate.size() >= max_length) {
            done.push_back(std::move(candidate));
            continue;
        }
        auto counts = flank_counts(traces, candidate, side, alphabet_size);
        std::uint64_t total = 0;
        for (auto x : counts) total += x;
        std::vector<Symbol> passing;
        for (std::size_t s = 0; s < alphabet_size; ++s) {
            if (counts[s] > 0 && binomial_upper_tail(counts[s], total, null_p) <= options.p_stop) {
                passing.push_back(static_cast<Symbol>(s));
            }
        }
        if (passing.empty()) {
            done.push_back(std::move(candidate));
            continue;
        }
        std::stable_sort(passing.begin(), passing.end(),
                         [&](Symbol x, Symbol y) { return counts[x] > counts[y]; });
        const auto leaves = work.size() + done.size() + 1;
        const auto spare = options.max_branches > leaves ? options.max_branches - leaves : 0;
        const auto take = std::min(passing.size(), 1 + spare);
        // Push in reverse so the strongest branch is extended first.
        for (std::size_t b = take; b-- > 0;) {
            SymbolString next;
            next.reserve(candidate.size() + 1);
            if (side == Side::left) next.push_back(passing[b]);
            next.append(candidate.view());
            if (side == Side::right) next.push_back(passing[b]);
            work.push_back(std::move(next));
        }
    }
    return done;
}

bool contains(const SymbolString& hay, const SymbolString& needle) {
    return as_bytes(hay).find(as_bytes(needle)) != std::string_view::npos;
}

bool flank_passes(std::span<const SymbolString> traces, const SymbolString& inner, Symbol s,
                  Side side, std::size_t alphabet_size, double p_stop) {
    const auto counts = flank_counts(traces, inner, side, alphabet_size);
    std::uint64_t total = 0;
    for (auto x : counts) total += x;
    return counts[s] > 0 &&
           binomial_upper_tail(counts[s], total, 1.0 / static_cast<double>(alphabet_size)) <= p_stop;
}

// Drops end symbols that the stopping test would not have added to the rest
// of the candidate. A k-mer seeded from a random flank can otherwise grow into
// a superset of the true seed.
SymbolString prune_ends(std::span<const SymbolString> traces, SymbolString candidate,
                        std::size_t alphabet_size, const MiningOptions& options) {
    while (candidate.size() > options.k) {
        const auto inner = candidate.substr(0, candidate.size() - 1);
        if (flank_passes(traces, inner, candidate[candidate.size() - 1], Side::right, alphabet_size,
                         options.p_stop)) {
            break;
        }
        candidate = inner;
    }
    while (candidate.size() > options.k) {
        const auto inner = candidate.substr(1, candidate.size() - 1);
        if (flank_passes(traces, inner, candidate[0], Side::left, alphabet_size, options.p_stop)) break;
        candidate = inner;
    }
    return candidate;
}

}  // namespace

MiningResult mine_seeds(std::span<const SymbolString> traces, std::size_t alphabet_size,
                        const MiningOptions& options) {
    if (options.k < 3) throw Error(ErrorCode::invalid_argument, "k must be at least 3");
    if (!(options.p_stop > 0.0 && options.p_stop < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "p_stop must lie in (0,1)");
    }
    if (options.max_branches == 0) {
        throw Error(ErrorCode::invalid_argument, "max_branches must be positive");
    }
    auto catalog = count_kmers(traces, options.k);
    if (catalog.windows == 0) {
        throw Error(ErrorCode::invalid_argument,
                    "k = " + std::to_string(options.k) + " is longer than every trace");
    }
    std::size_t max_length = 0;
    for (const auto& c : traces) max_length = std::max(max_length, c.size());

    const double kmer_space = std::pow(static_cast<double>(alphabet_size),
                                       static_cast<double>(options.k));
    MiningResult result;
    result.background_rate = static_cast<double>(catalog.windows) / kmer_space;
    result.selection_threshold = options.selection_alpha / kmer_space;
    result.stopping_rule =
        "binomial-tail stand-in: stop when P(Bin(N,1/|A|) >= best flank count) > p_stop = " +
        std::to_string(options.p_stop);

    std::vector<std::pair<std::uint64_t, SymbolString>> selected;
    for (const auto& [kmer, count] : catalog.counts) {
        if (poisson_upper_tail(count, result.background_rate) < result.selection_threshold) {
            selected.emplace_back(count, kmer);
        }
    }
    std::stable_sort(selected.begin(), selected.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    if (selected.size() > options.max_kmers) selected.resize(options.max_kmers);
    result.selected_kmers = selected.size();

    std::vector<SymbolString> raw;
    for (const auto& [count, kmer] : selected) {
        if (std::any_of(raw.begin(), raw.end(),
                        [&](const SymbolString& r) { return contains(r, kmer); })) {
            continue;
        }
        auto right = extend_side(traces, {kmer}, Side::right, alphabet_size, options, max_length);
        auto both = extend_side(traces, std::move(right), Side::left, alphabet_size, options,
                                max_length);
        for (auto& c : both) raw.push_back(prune_ends(traces, std::move(c), alphabet_size, options));
    }

    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        bool covered = false;
        for (std::size_t j = 0; j < raw.size() && !covered; ++j) {
            covered = i != j && raw[j].size() > raw[i].size() && contains(raw[j], raw[i]);
        }
        if (!covered) result.seeds.push_back(raw[i]);
    }
    return result;
}

SymbolString bma_reconstruct(std::span<const SymbolString> traces, std::size_t n,
                             std::size_t alphabet_size, const BmaOptions& options) {
    if (traces.empty()) throw Error(ErrorCode::invalid_argument, "empty trace-set");
    if (n == 0) throw Error(ErrorCode::invalid_argument, "seed length must be positive");
    const auto w = options.lookahead;
    std::vector<std::size_t> cursor(traces.size(), 0);
    std::vector<std::uint64_t> counts(alphabet_size);
    std::vector<Symbol> out;
    out.reserve(n);
    std::vector<Symbol> ahead;
    std::vector<std::size_t> agreeing;

    auto matches = [&](const SymbolString& c, std::size_t from) {
        std::size_t hits = 0;
        for (std::size_t o = 0; o < ahead.size(); ++o) {
            hits += from + o < c.size() && c[from + o] == ahead[o];
        }
        return hits;
    };

    for (std::size_t j = 0; j < n; ++j) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < traces.size(); ++i) {
            if (cursor[i] < traces[i].size()) ++counts[traces[i][cursor[i]]];
        }
        const Symbol maj = majority(counts);
        out.push_back(maj);

        agreeing.clear();
        for (std::size_t i = 0; i < traces.size(); ++i) {
            if (cursor[i] < traces[i].size() && traces[i][cursor[i]] == maj) agreeing.push_back(i);
        }
        // Majority of what the agreeing traces show next.
        ahead.clear();
        for (std::size_t o = 1; o <= w; ++o) {
            std::fill(counts.begin(), counts.end(), 0);
            bool any = false;
            for (auto i : agreeing) {
                if (cursor[i] + o < traces[i].size()) {
                    ++counts[traces[i][cursor[i] + o]];
                    any = true;
                }
            }
            if (!any) break;
            ahead.push_back(majority(counts));
        }

        for (std::size_t i = 0; i < traces.size(); ++i) {
            const auto& c = traces[i];
            if (cursor[i] >= c.size()) continue;
            if (c[cursor[i]] == maj) {
                ++cursor[i];
                continue;
            }
            // Held: c[cursor..] should already show what comes next.
            if (matches(c, cursor[i]) < matches(c, cursor[i] + 1)) ++cursor[i];
        }
    }
    return SymbolString(std::move(out));
}

MeanProfile mean_profile(std::span<const SymbolString> traces, std::size_t n) {
    MeanProfile profile;
    profile.n = n;
    profile.means.assign(n, 0.0);
    std::vector<std::uint64_t> ones(n, 0);
    for (const auto& c : traces) {
        if (c.size() > n) {
            throw Error(ErrorCode::invalid_argument,
                        "trace of length " + std::to_string(c.size()) + " exceeds n = " +
                            std::to_string(n));
        }
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (c[j] > 1) throw Error(ErrorCode::incompatible, "mean profile needs a binary alphabet");
            ones[j] += c[j];
        }
    }
    if (!traces.empty()) {
        for (std::size_t j = 0; j < n; ++j) {
            profile.means[j] = static_cast<double>(ones[j]) / static_cast<double>(traces.size());
        }
    }
    return profile;
}

std::vector<double> expected_mean_profile(const SymbolString& seed, double q) {
    const auto n = seed.size();
    std::vector<double> expected(n, 0.0);
    const double keep = 1.0 - q;
    // Bit i lands at padded position j when it survives and exactly j of the
    // i bits before it survive.
    std::vector<double> row{1.0};  // binomial coefficients C(i, .)
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            std::vector<double> next(i + 1, 1.0);
            for (std::size_t j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
            row = std::move(next);
        }
        if (seed[i] > 1) throw Error(ErrorCode::incompatible, "mean profile needs a binary alphabet");
        if (seed[i] == 0) continue;
        for (std::size_t j = 0; j <= i; ++j) {
            expected[j] += row[j] * std::pow(keep, static_cast<double>(j + 1)) *
                           std::pow(q, static_cast<double>(i - j));
        }
    }
    return expected;
}

SymbolString mean_based_select(std::span<const SymbolString> traces,
                               std::span<const SymbolString> candidates, double q) {
    if (candidates.empty()) throw Error(ErrorCode::invalid_argument, "no candidates");
    const auto n = candidates.front().size();
    for (const auto& c : candidates) {
        if (c.size() != n) throw Error(ErrorCode::length_mismatch, "candidates differ in length");
    }
    const auto observed = mean_profile(traces, n);
    const SymbolString* best = nullptr;
    double best_distance = 0.0;
    for (const auto& candidate : candidates) {
        const auto expected = expected_mean_profile(candidate, q);
        double distance = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double diff = observed.means[j] - expected[j];
            distance += diff * diff;
        }
        if (best == nullptr || clearly_greater(-distance, -best_distance) ||
            (!clearly_greater(-best_distance, -distance) && candidate < *best)) {
            best = &candidate;
            best_distance = distance;
        }
    }
    return *best;
}

}  // namespace tracekit
