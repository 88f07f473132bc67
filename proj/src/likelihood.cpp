#include "tracekit/likelihood.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace tracekit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_same_length(std::span<const Symbol> c, std::span<const Symbol> s, const char* model) {
    if (c.size() != s.size()) {
        throw Error(ErrorCode::length_mismatch,
                    std::string(model) + " preserves length: trace has " +
                        std::to_string(c.size()) + " symbols, seed has " +
                        std::to_string(s.size()));
    }
}

void require_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, std::string(name) + " must lie in [0,1]");
    }
}

double log_trim_pair_count(std::size_t n) {
    // -log(#{(l,k): l+k <= n}) = log 2 - log(n+1) - log(n+2)
    return std::log(2.0) - std::log(static_cast<double>(n + 1)) -
           std::log(static_cast<double>(n + 2));
}

std::size_t positive_part(std::ptrdiff_t x) { return x > 0 ? static_cast<std::size_t>(x) : 0; }

// log Pr(trace | Mutate(middle)) summed over equally sized substring pairs
// for ExtendMutateTrim: substrings of s by position, substrings of c whose
// flanks each stay within t.
double log_extend_mutate_trim(std::span<const Symbol> c, std::span<const Symbol> s,
                              std::uint32_t t, double eps, std::size_t a) {
    const auto n = s.size();
    const auto len_c = c.size();
    const double log_a = std::log(static_cast<double>(a));
    LogSum total;
    for (std::size_t l = 0; l <= std::min(n, len_c); ++l) {
        const auto flank = len_c - l;
        if (flank > 2 * std::size_t{t}) continue;
        const auto pc_lo = positive_part(static_cast<std::ptrdiff_t>(flank) - t);
        const auto pc_hi = std::min<std::size_t>(t, flank);
        const double ext = -static_cast<double>(flank) * log_a;
        for (std::size_t ps = 0; ps + l <= n; ++ps) {
            for (std::size_t pc = pc_lo; pc <= pc_hi; ++pc) {
                auto d = hamming(s.subspan(ps, l), c.subspan(pc, l));
                total.add(ext + mutation_log_weight(l, d, eps, a));
            }
        }
    }
    const double prefactor = -2.0 * std::log(static_cast<double>(t) + 1.0) + log_trim_pair_count(n);
    const double sum = total.value();
    return sum == kNegInf ? kNegInf : prefactor + sum;
}

}  // namespace

double mutation_log_weight(std::size_t length, std::size_t mismatches, double epsilon,
                           std::size_t alphabet_size) {
    double r = 0.0;
    if (mismatches > 0) {
        if (epsilon == 0.0) return kNegInf;
        r += static_cast<double>(mismatches) *
             std::log(epsilon / static_cast<double>(alphabet_size - 1));
    }
    if (length > mismatches) {
        if (epsilon == 1.0) return kNegInf;
        r += static_cast<double>(length - mismatches) * std::log1p(-epsilon);
    }
    return r;
}

MatchSummary summarize(std::span<const Symbol> c, std::span<const Symbol> s) {
    MatchSummary out;
    out.lcp = longest_common_prefix(c, s);
    const auto shared = std::min(c.size(), s.size());
    out.prefix_hamming.assign(shared + 1, 0);
    for (std::size_t k = 1; k <= shared; ++k) {
        out.prefix_hamming[k] = out.prefix_hamming[k - 1] + (c[k - 1] != s[k - 1]);
    }
    if (c.size() == s.size()) {
        out.match_run.assign(s.size() + 1, 0);
        for (std::size_t i = s.size(); i-- > 0;) {
            out.match_run[i] = c[i] == s[i] ? out.match_run[i + 1] + 1 : 0;
        }
    }
    return out;
}

double log_trim_suffix_constant(std::size_t n, std::size_t a) {
    const double la = std::log(static_cast<double>(a));
    return -std::log(static_cast<double>(n + 1)) - static_cast<double>(n) * la -
           std::log(static_cast<double>(a - 1));
}

LogProb lp_trim_suffix_and_extend(std::span<const Symbol> c, std::span<const Symbol> s,
                                  std::size_t a) {
    require_same_length(c, s, "trim-suffix-and-extend");
    const auto m = longest_common_prefix(c, s);
    // log(|A|^(m+1) - 1) without forming the power.
    const double e = static_cast<double>(m + 1) * std::log(static_cast<double>(a));
    const double log_term = e + std::log1p(-std::exp(-e));
    return LogProb::from_log(log_trim_suffix_constant(s.size(), a) + log_term);
}

LogProb lp_suffix_extend_trim_suffix(std::span<const Symbol> c, std::span<const Symbol> s,
                                     std::uint32_t t, std::size_t a) {
    const auto m = longest_common_prefix(c, s);
    const auto lo = positive_part(static_cast<std::ptrdiff_t>(c.size()) - t);
    if (m < lo) return LogProb::impossible();
    const double log_a = std::log(static_cast<double>(a));
    LogSum sum;
    for (std::size_t k = lo; k <= m; ++k) {
        sum.add(-static_cast<double>(c.size() - k) * log_a);
    }
    const double prefactor =
        -std::log(static_cast<double>(s.size() + 1)) - std::log(static_cast<double>(t) + 1.0);
    return LogProb::from_log(prefactor + sum.value());
}

LogProb lp_suffix_extend_mutate_trim_suffix(std::span<const Symbol> c, std::span<const Symbol> s,
                                            std::uint32_t t, double eps, std::size_t a) {
    require_probability(eps, "epsilon");
    const auto lo = positive_part(static_cast<std::ptrdiff_t>(c.size()) - t);
    const auto hi = std::min(c.size(), s.size());
    if (lo > hi) return LogProb::impossible();
    const double log_a = std::log(static_cast<double>(a));
    std::size_t d = 0;
    for (std::size_t k = 0; k < lo; ++k) d += c[k] != s[k];
    LogSum sum;
    for (std::size_t k = lo; k <= hi; ++k) {
        if (k > lo) d += c[k - 1] != s[k - 1];
        sum.add(-static_cast<double>(c.size() - k) * log_a + mutation_log_weight(k, d, eps, a));
    }
    const double total = sum.value();
    if (total == kNegInf) return LogProb::impossible();
    const double prefactor =
        -std::log(static_cast<double>(s.size() + 1)) - std::log(static_cast<double>(t) + 1.0);
    return LogProb::from_log(prefactor + total);
}

LogProb lp_trim_and_extend(std::span<const Symbol> c, std::span<const Symbol> s, std::size_t a) {
    require_same_length(c, s, "trim-and-extend");
    const auto n = s.size();
    const auto run = summarize(c, s).match_run;
    const double log_a = std::log(static_cast<double>(a));
    LogSum sum;
    for (std::size_t i = 0; i <= n; ++i) {
        // The kept middle [i, n-k) must match exactly: k >= n - i - t(i).
        for (std::size_t k = n - i - run[i]; k <= n - i; ++k) {
            sum.add(-static_cast<double>(i + k) * log_a);
        }
    }
    return LogProb::from_log(log_trim_pair_count(n) + sum.value());
}

LogProb lp_mutate_trim_and_extend(std::span<const Symbol> c, std::span<const Symbol> s,
                                  double eps, std::size_t a) {
    require_same_length(c, s, "mutate-trim-and-extend");
    require_probability(eps, "epsilon");
    const auto n = s.size();
    const auto& prefix = summarize(c, s).prefix_hamming;
    const double log_a = std::log(static_cast<double>(a));
    LogSum sum;
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t k = 0; k <= n - i; ++k) {
            const auto middle = n - i - k;
            const auto d = prefix[n - k] - prefix[i];
            sum.add(-static_cast<double>(i + k) * log_a + mutation_log_weight(middle, d, eps, a));
        }
    }
    const double total = sum.value();
    if (total == kNegInf) return LogProb::impossible();
    return LogProb::from_log(log_trim_pair_count(n) + total);
}

LogProb lp_extend_mutate_trim(std::span<const Symbol> c, std::span<const Symbol> s,
                              std::uint32_t t, double eps, std::size_t a) {
    require_probability(eps, "epsilon");
    return LogProb::from_log(log_extend_mutate_trim(c, s, t, eps, a));
}

LogProb lp_concat2(std::span<const Symbol> c, std::span<const Symbol> s1,
                   std::span<const Symbol> s2, std::uint32_t t, std::size_t a) {
    if (s1.size() != s2.size()) {
        throw Error(ErrorCode::length_mismatch, "concatenated model requires equal seed lengths");
    }
    const auto bound = s1.size() + t;
    LogSum sum;
    for (std::size_t l = 0; l <= c.size(); ++l) {
        if (l > bound || c.size() - l > bound) continue;
        auto head = lp_suffix_extend_trim_suffix(c.first(l), s1, t, a);
        if (head.is_impossible()) continue;
        auto tail = lp_suffix_extend_trim_suffix(c.subspan(l), s2, t, a);
        sum.add((head * tail).log());
    }
    return LogProb::from_log(sum.value());
}

LogProb lp_vdj(std::span<const Symbol> c, std::span<const Symbol> v, std::span<const Symbol> d,
               std::span<const Symbol> j, std::uint32_t t, double eps, std::size_t a) {
    require_probability(eps, "epsilon");
    if (c.size() > v.size() + d.size() + 2 * std::size_t{t} + j.size()) {
        return LogProb::impossible();
    }
    const double log_v = -std::log(static_cast<double>(v.size() + 1));
    const double log_j = -std::log(static_cast<double>(j.size() + 1));
    LogSum sum;
    std::size_t dv = 0;
    for (std::size_t i = 0; i <= std::min(v.size(), c.size()); ++i) {
        if (i > 0) dv += c[i - 1] != v[i - 1];
        const double p1 = log_v + mutation_log_weight(i, dv, eps, a);
        if (p1 == kNegInf) continue;
        const auto rest = c.size() - i;
        std::size_t dj = 0;
        for (std::size_t k = 0; k <= std::min(rest, j.size()); ++k) {
            // suffix_k(c) against suffix_k(j), grown one symbol to the left
            if (k > 0) dj += c[c.size() - k] != j[j.size() - k];
            const double p3 = log_j + mutation_log_weight(k, dj, eps, a);
            if (p3 == kNegInf) continue;
            const double p2 = log_extend_mutate_trim(c.subspan(i, rest - k), d, t, eps, a);
            sum.add(p1 + p2 + p3);
        }
    }
    return LogProb::from_log(sum.value());
}

namespace {

double log_mean(const LogSum& sum, std::size_t count) {
    const double v = sum.value();
    return v == kNegInf ? v : v - std::log(static_cast<double>(count));
}

}  // namespace

LogProb lp_vdj_multi(std::span<const Symbol> c, std::span<const SymbolString> v_set,
                     std::span<const SymbolString> d_set, std::span<const SymbolString> j_set,
                     std::uint32_t t, double eps, std::size_t a) {
    if (v_set.empty() || d_set.empty() || j_set.empty()) {
        throw Error(ErrorCode::arity_mismatch, "VDJ seed-sets must be non-empty");
    }
    LogSum sum;
    for (const auto& v : v_set) {
        for (const auto& d : d_set) {
            for (const auto& j : j_set) sum.add(lp_vdj(c, v, d, j, t, eps, a).log());
        }
    }
    return LogProb::from_log(log_mean(sum, v_set.size() * d_set.size() * j_set.size()));
}

namespace {

LogProb lp_single(std::span<const Symbol> c, std::span<const Symbol> s, const ModelSpec& model,
                  std::size_t a) {
    const auto& p = model.params;
    switch (model.kind) {
        case ModelKind::trim_suffix_and_extend:
            if (c.size() != s.size()) return LogProb::impossible();
            return lp_trim_suffix_and_extend(c, s, a);
        case ModelKind::suffix_extend_trim_suffix:
            return lp_suffix_extend_trim_suffix(c, s, *p.t, a);
        case ModelKind::suffix_extend_mutate_trim_suffix:
            return lp_suffix_extend_mutate_trim_suffix(c, s, *p.t, *p.epsilon, a);
        case ModelKind::trim_and_extend:
            if (c.size() != s.size()) return LogProb::impossible();
            return lp_trim_and_extend(c, s, a);
        case ModelKind::mutate_trim_and_extend:
            if (c.size() != s.size()) return LogProb::impossible();
            return lp_mutate_trim_and_extend(c, s, *p.epsilon, a);
        case ModelKind::extend_mutate_trim:
            return lp_extend_mutate_trim(c, s, *p.t, *p.epsilon, a);
        case ModelKind::deletion:
            return lp_deletion(c, s, *p.q);
        case ModelKind::concat2:
        case ModelKind::vdj:
            break;
    }
    throw Error(ErrorCode::incompatible,
                "model " + std::string(model_name(model.kind)) + " is not a single-seed model");
}

}  // namespace

LogProb lp_multiseed(std::span<const Symbol> c, std::span<const SymbolString> seed_set,
                     const ModelSpec& model, std::size_t a) {
    if (seed_set.empty()) throw Error(ErrorCode::arity_mismatch, "seed-set must be non-empty");
    model.validate();
    LogSum sum;
    for (const auto& s : seed_set) sum.add(lp_single(c, s, model, a).log());
    return LogProb::from_log(log_mean(sum, seed_set.size()));
}

boost::multiprecision::cpp_int subsequence_count(std::span<const Symbol> s,
                                                 std::span<const Symbol> c) {
    using boost::multiprecision::cpp_int;
    if (c.size() > s.size()) return 0;
    // ways[j] = number of embeddings of c[0..j) into the prefix of s seen so far
    std::vector<cpp_int> ways(c.size() + 1, 0);
    ways[0] = 1;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = std::min(c.size(), i + 1); j >= 1; --j) {
            if (s[i] == c[j - 1]) ways[j] += ways[j - 1];
        }
    }
    return ways[c.size()];
}

double log_subsequence_count(std::span<const Symbol> s, std::span<const Symbol> c) {
    if (c.size() > s.size()) return kNegInf;
    // Counts never exceed 2^|s|; doubles hold them up to |s| ~ 1000.
    if (s.size() <= 1000) {
        std::vector<double> ways(c.size() + 1, 0.0);
        ways[0] = 1.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            for (std::size_t j = std::min(c.size(), i + 1); j >= 1; --j) {
                if (s[i] == c[j - 1]) ways[j] += ways[j - 1];
            }
        }
        return std::log(ways[c.size()]);
    }
    std::vector<double> ways(c.size() + 1, kNegInf);
    ways[0] = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = std::min(c.size(), i + 1); j >= 1; --j) {
            if (s[i] != c[j - 1] || ways[j - 1] == kNegInf) continue;
            const double hi = std::max(ways[j], ways[j - 1]);
            const double lo = std::min(ways[j], ways[j - 1]);
            ways[j] = lo == kNegInf ? hi : hi + std::log1p(std::exp(lo - hi));
        }
    }
    return ways[c.size()];
}

LogProb lp_deletion(std::span<const Symbol> c, std::span<const Symbol> s, double q) {
    if (!(q >= 0.0 && q < 1.0)) throw Error(ErrorCode::invalid_argument, "q must lie in [0,1)");
    const double log_n = log_subsequence_count(s, c);
    if (log_n == kNegInf) return LogProb::impossible();
    const auto deleted = s.size() - c.size();
    double v = log_n + static_cast<double>(c.size()) * std::log1p(-q);
    if (deleted > 0) {
        if (q == 0.0) return LogProb::impossible();
        v += static_cast<double>(deleted) * std::log(q);
    }
    return LogProb::from_log(v);
}

LogProb lp_trace(std::span<const Symbol> c, const Seeds& seeds, const ModelSpec& model,
                 std::size_t a) {
    check_seeds(model, seeds);
    const auto& p = model.params;
    switch (model.kind) {
        case ModelKind::concat2: {
            LogSum sum;
            for (const auto& s1 : seeds.slots[0]) {
                for (const auto& s2 : seeds.slots[1]) sum.add(lp_concat2(c, s1, s2, *p.t, a).log());
            }
            return LogProb::from_log(log_mean(sum, seeds.slots[0].size() * seeds.slots[1].size()));
        }
        case ModelKind::vdj:
            if (!model.is_multi_seed()) {
                return lp_vdj(c, seeds.slots[0][0], seeds.slots[1][0], seeds.slots[2][0], *p.t,
                              *p.epsilon, a);
            }
            return lp_vdj_multi(c, seeds.slots[0], seeds.slots[1], seeds.slots[2], *p.t,
                                *p.epsilon, a);
        default:
            if (seeds.slots[0].size() == 1) return lp_single(c, seeds.slots[0][0], model, a);
            return lp_multiseed(c, seeds.slots[0], model, a);
    }
}

LogProb lp_trace_set(std::span<const SymbolString> traces, const Seeds& seeds,
                     const ModelSpec& model, std::size_t a) {
    check_seeds(model, seeds);
    std::map<SymbolString, std::size_t> distinct;
    for (const auto& c : traces) ++distinct[c];
    double total = 0.0;
    for (const auto& [c, count] : distinct) {
        auto lp = lp_trace(c, seeds, model, a);
        if (lp.is_impossible()) return LogProb::impossible();
        total += static_cast<double>(count) * lp.log();
    }
    return LogProb::from_log(total);
}

}  // namespace tracekit
