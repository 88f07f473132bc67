#include "tracekit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "tracekit/multiseed.hpp"

namespace tracekit {

SeedSource SeedSource::fixed_seeds(Seeds seeds) {
    SeedSource source;
    source.fixed = std::move(seeds);
    return source;
}

SeedSource SeedSource::uniform(std::vector<std::size_t> lengths) {
    SeedSource source;
    source.lengths = std::move(lengths);
    return source;
}

std::vector<std::size_t> SeedSource::slot_lengths() const {
    if (!fixed) return lengths;
    std::vector<std::size_t> out;
    for (const auto& slot : fixed->slots) out.push_back(slot.empty() ? 0 : slot.front().size());
    return out;
}

Seeds SeedSource::draw(const ModelSpec& model, std::size_t alphabet_size, RandomStream& rng) const {
    if (fixed) return *fixed;
    const auto slots = seed_slot_count(model.kind);
    if (lengths.size() != slots) {
        throw Error(ErrorCode::arity_mismatch, "model " + std::string(model_name(model.kind)) +
                                                   " needs " + std::to_string(slots) +
                                                   " seed length(s)");
    }
    Seeds seeds;
    for (std::size_t j = 0; j < slots; ++j) {
        const auto members = model.is_multi_seed() ? model.multi_seed.at(j) : 1;
        const double universe =
            std::pow(static_cast<double>(alphabet_size), static_cast<double>(lengths[j]));
        if (static_cast<double>(members) > universe) {
            throw Error(ErrorCode::invalid_argument, "seed-set larger than the string universe");
        }
        std::set<SymbolString> seen;
        std::vector<SymbolString> slot;
        while (slot.size() < members) {
            auto s = sample_uniform(lengths[j], alphabet_size, rng);
            if (seen.insert(s).second) slot.push_back(std::move(s));
        }
        seeds.slots.push_back(std::move(slot));
    }
    return seeds;
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials) {
    if (trials == 0) throw Error(ErrorCode::invalid_argument, "trials must be at least 1");
    constexpr double z = 1.959963984540054;
    const double nt = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nt;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double centre = (p + z2 / (2.0 * nt)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;
    // Clamp so the interval always contains the point estimate despite rounding.
    return {std::min(p, std::max(0.0, centre - half)), std::max(p, std::min(1.0, centre + half))};
}

namespace {

bool near_miss(const Seeds& got, const Seeds& want) {
    if (got.slots.size() != want.slots.size()) return false;
    for (std::size_t j = 0; j < got.slots.size(); ++j) {
        if (got.slots[j].size() != want.slots[j].size()) return false;
        for (std::size_t i = 0; i < got.slots[j].size(); ++i) {
            if (bounded_edit_distance(got.slots[j][i], want.slots[j][i], 1) > 1) return false;
        }
    }
    return true;
}

}  // namespace

BenchReport estimate_success(const Algorithm& algorithm, const ModelSpec& model,
                             const SeedSource& source, const Alphabet& alphabet,
                             std::size_t traces, const RandomStream& rng,
                             const BenchOptions& options) {
    if (options.trials == 0) throw Error(ErrorCode::invalid_argument, "trials must be at least 1");
    if (traces == 0) throw Error(ErrorCode::invalid_argument, "T must be at least 1");
    model.validate();
    algorithm.check(model, alphabet.size());

    const auto start = std::chrono::steady_clock::now();
    const AlgorithmContext ctx{model, source.slot_lengths(), alphabet.size(), 1, options.params};
    enum Outcome : char { failure, success, near };
    std::vector<char> outcome(options.trials, failure);
    parallel_for(options.trials, options.threads, [&](std::size_t i) {
        const auto trial = rng.derive(i);
        auto seed_rng = trial.derive(0);
        const auto truth = normalized(source.draw(model, alphabet.size(), seed_rng));
        const auto set = generate_trace_set(model, truth, alphabet, traces, trial.derive(1));
        const auto answer = normalized(algorithm.run(set.traces, ctx));
        if (answer == truth) {
            outcome[i] = success;
        } else if (near_miss(answer, truth)) {
            outcome[i] = near;
        }
    });

    BenchReport report;
    report.algorithm = algorithm.id;
    report.model = model;
    const auto lengths = source.slot_lengths();
    report.n = lengths.empty() ? 0 : lengths.front();
    report.traces = traces;
    report.trials = options.trials;
    report.successes = static_cast<std::size_t>(std::count(outcome.begin(), outcome.end(), success));
    report.near_misses = static_cast<std::size_t>(std::count(outcome.begin(), outcome.end(), near));
    report.success_rate =
        static_cast<double>(report.successes) / static_cast<double>(report.trials);
    std::tie(report.wilson_low, report.wilson_high) =
        wilson_interval(report.successes, report.trials);
    report.master_seed = rng.master_seed();
    report.target_rate = options.target_rate;
    if (options.timing) {
        report.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return report;
}

WorstCaseResult estimate_worst_case(const Algorithm& algorithm, const ModelSpec& model,
                                    const std::vector<Seeds>& benchmark, const Alphabet& alphabet,
                                    std::size_t traces, const RandomStream& rng,
                                    const BenchOptions& options) {
    if (benchmark.empty()) throw Error(ErrorCode::invalid_argument, "empty benchmark seed list");
    WorstCaseResult result;
    for (std::size_t k = 0; k < benchmark.size(); ++k) {
        result.per_seed.push_back(estimate_success(algorithm, model,
                                                   SeedSource::fixed_seeds(benchmark[k]), alphabet,
                                                   traces, rng.derive(k), options));
        if (result.per_seed[k].success_rate < result.per_seed[result.worst_index].success_rate) {
            result.worst_index = k;
        }
    }
    return result;
}

Algorithm amplify(Algorithm base, std::size_t replicas) {
    if (replicas == 0 || replicas % 2 == 0) {
        throw Error(ErrorCode::invalid_argument, "replicas must be odd and at least 1");
    }
    Algorithm out;
    out.id = replicas == 1 ? base.id : base.id + "x" + std::to_string(replicas);
    out.check = base.check;
    out.run = [base, replicas](std::span<const SymbolString> traces, const AlgorithmContext& ctx) {
        if (traces.size() < replicas) {
            throw Error(ErrorCode::invalid_argument,
                        "trace-set of " + std::to_string(traces.size()) +
                            " traces is smaller than " + std::to_string(replicas) + " replicas");
        }
        const auto chunk = traces.size() / replicas;
        std::vector<std::pair<Seeds, std::size_t>> votes;
        for (std::size_t r = 0; r < replicas; ++r) {
            auto answer = normalized(base.run(traces.subspan(r * chunk, chunk), ctx));
            auto it = std::find_if(votes.begin(), votes.end(),
                                   [&](const auto& v) { return v.first == answer; });
            if (it == votes.end()) {
                votes.emplace_back(std::move(answer), 1);
            } else {
                ++it->second;
            }
        }
        auto best = votes.begin();
        for (auto it = votes.begin(); it != votes.end(); ++it) {
            if (it->second > best->second ||
                (it->second == best->second && it->first.slots < best->first.slots)) {
                best = it;
            }
        }
        return best->first;
    };
    return out;
}

TraceComplexityResult estimate_trace_complexity(const Algorithm& algorithm, const ModelSpec& model,
                                                const SeedSource& source, const Alphabet& alphabet,
                                                const RandomStream& rng, std::size_t t_cap,
                                                const BenchOptions& options) {
    if (!(options.target_rate > 0.0 && options.target_rate < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "target rate must lie in (0,1)");
    }
    if (t_cap == 0) throw Error(ErrorCode::invalid_argument, "T cap must be at least 1");

    std::map<std::size_t, BenchReport> probed;
    auto reaches = [&](std::size_t t) {
        auto it = probed.find(t);
        if (it == probed.end()) {
            it = probed
                     .emplace(t, estimate_success(algorithm, model, source, alphabet, t,
                                                  rng.derive(t), options))
                     .first;
        }
        return it->second.success_rate >= options.target_rate;
    };

    TraceComplexityResult result;
    result.algorithm = algorithm.id;
    result.model = model;
    const auto lengths = source.slot_lengths();
    result.n = lengths.empty() ? 0 : lengths.front();
    result.target_rate = options.target_rate;
    result.t_cap = t_cap;

    std::size_t lo = 0;  // largest probed T known to miss the target
    std::size_t hi = 0;
    for (std::size_t t = 1;; t = std::min(2 * t, t_cap)) {
        if (reaches(t)) {
            hi = t;
            break;
        }
        lo = t;
        if (t == t_cap) break;
    }
    if (hi != 0) {
        while (hi - lo > 1) {
            const auto mid = lo + (hi - lo) / 2;
            if (reaches(mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        result.t_star = hi;
        result.bracketed = true;
    }
    for (auto& [t, report] : probed) result.curve.push_back(std::move(report));
    return result;
}

}  // namespace tracekit
