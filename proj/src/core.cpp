#include "tracekit/core.hpp"

#include <algorithm>
#include <cmath>

namespace tracekit {

Alphabet::Alphabet(std::string_view symbols) : chars_(symbols) {
    std::fill(std::begin(lut_), std::end(lut_), std::int16_t{-1});
    if (chars_.size() < 2) {
        throw Error(ErrorCode::invalid_argument, "alphabet needs at least two symbols");
    }
    if (chars_.size() > 255) {
        throw Error(ErrorCode::invalid_argument, "alphabet has more than 255 symbols");
    }
    for (std::size_t i = 0; i < chars_.size(); ++i) {
        auto slot = static_cast<unsigned char>(chars_[i]);
        if (lut_[slot] >= 0) {
            throw Error(ErrorCode::invalid_argument,
                        std::string("alphabet repeats symbol '") + chars_[i] + "'");
        }
        lut_[slot] = static_cast<std::int16_t>(i);
    }
}

std::optional<Symbol> Alphabet::index_of(char c) const noexcept {
    auto v = lut_[static_cast<unsigned char>(c)];
    if (v < 0) return std::nullopt;
    return static_cast<Symbol>(v);
}

SymbolString SymbolString::substr(std::size_t pos, std::size_t len) const {
    if (pos > data_.size()) {
        throw Error(ErrorCode::invalid_argument, "substring start past end");
    }
    len = std::min(len, data_.size() - pos);
    return SymbolString(std::vector<Symbol>(data_.begin() + static_cast<std::ptrdiff_t>(pos),
                                            data_.begin() + static_cast<std::ptrdiff_t>(pos + len)));
}

SymbolString concat(const SymbolString& a, const SymbolString& b) {
    SymbolString out;
    out.reserve(a.size() + b.size());
    out.append(a.view());
    out.append(b.view());
    return out;
}

SymbolString encode(const Alphabet& alphabet, std::string_view text) {
    std::vector<Symbol> out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        auto s = alphabet.index_of(text[i]);
        if (!s) {
            throw Error(ErrorCode::illegal_symbol,
                        "illegal symbol '" + std::string(1, text[i]) + "' at column " +
                            std::to_string(i) + " (alphabet " + alphabet.chars() + ")");
        }
        out.push_back(*s);
    }
    return SymbolString(std::move(out));
}

std::string decode(const Alphabet& alphabet, const SymbolString& s) {
    std::string out;
    out.reserve(s.size());
    for (Symbol x : s) out.push_back(alphabet.to_char(x));
    return out;
}

std::size_t hamming(std::span<const Symbol> a, std::span<const Symbol> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::length_mismatch, "hamming distance of unequal-length strings");
    }
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

std::size_t longest_common_prefix(std::span<const Symbol> a, std::span<const Symbol> b) {
    auto n = std::min(a.size(), b.size());
    std::size_t m = 0;
    while (m < n && a[m] == b[m]) ++m;
    return m;
}

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_(master_seed), id_(stream_id) {
    state_ = mix64(mix64(master_seed + kGamma) ^ mix64(stream_id * kGamma + 0x632be59bd9b4e019ULL));
}

RandomStream RandomStream::derive(std::uint64_t child_id) const {
    // The child's master folds in the whole ancestry so sibling subtrees
    // never collide.
    return RandomStream(mix64(master_ ^ mix64(id_ + 0x2545f4914f6cdd1dULL)), child_id);
}

std::uint64_t RandomStream::next() {
    state_ += kGamma;
    return mix64(state_);
}

std::uint64_t RandomStream::uniform_below(std::uint64_t bound) {
    if (bound == 0) throw Error(ErrorCode::invalid_argument, "uniform_below(0)");
    auto x = next();
    auto m = static_cast<unsigned __int128>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            x = next();
            m = static_cast<unsigned __int128>(x) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double RandomStream::uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

SymbolString trim(const SymbolString& s, std::size_t prefix, std::size_t suffix) {
    if (prefix > s.size() || suffix > s.size() - prefix) {
        throw Error(ErrorCode::invalid_trim, "invalid trim: prefix " + std::to_string(prefix) +
                                                 " + suffix " + std::to_string(suffix) +
                                                 " exceeds length " + std::to_string(s.size()));
    }
    return s.substr(prefix, s.size() - prefix - suffix);
}

SymbolString sample_uniform(std::size_t length, std::size_t alphabet_size, RandomStream& rng) {
    std::vector<Symbol> out(length);
    for (auto& x : out) x = static_cast<Symbol>(rng.uniform_below(alphabet_size));
    return SymbolString(std::move(out));
}

SymbolString sample_random_leq_t(std::uint32_t t, std::size_t alphabet_size, RandomStream& rng) {
    auto len = rng.uniform_below(std::uint64_t{t} + 1);
    return sample_uniform(len, alphabet_size, rng);
}

SymbolString mutate(const SymbolString& s, double epsilon, std::size_t alphabet_size,
                    RandomStream& rng) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "mutation probability outside [0,1]");
    }
    SymbolString out = s;
    for (auto& x : out) {
        if (rng.bernoulli(epsilon)) {
            // Draw among the other |A|-1 symbols: skip over the current one.
            auto r = static_cast<Symbol>(rng.uniform_below(alphabet_size - 1));
            x = r >= x ? static_cast<Symbol>(r + 1) : r;
        }
    }
    return out;
}

}  // namespace tracekit
