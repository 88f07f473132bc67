#pragma once
// Alphabets, symbol strings, deterministic random streams and the primitive
// string operations (Trim, Mutate, Random<=t) every channel is built from.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tracekit {

enum class ErrorCode {
    invalid_argument,
    invalid_trim,
    length_mismatch,
    arity_mismatch,
    illegal_symbol,
    parse_error,
    count_mismatch,
    unsupported_version,
    budget_exceeded,
    incompatible,
    io_error,
};

// Every failure raised by the library carries a code so callers (the CLI in
// particular) can map it to an exit status without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

using Symbol = std::uint8_t;

/// Ordered set of distinct characters. Symbol i is the i-th character; the
/// order drives every lexicographic tie-break in the library.
class Alphabet {
public:
    explicit Alphabet(std::string_view symbols);

    static Alphabet dna() { return Alphabet("ACGT"); }
    static Alphabet binary() { return Alphabet("01"); }

    std::size_t size() const noexcept { return chars_.size(); }
    char to_char(Symbol s) const { return chars_.at(s); }
    std::optional<Symbol> index_of(char c) const noexcept;
    const std::string& chars() const noexcept { return chars_; }

    bool operator==(const Alphabet& other) const noexcept { return chars_ == other.chars_; }

private:
    std::string chars_;
    std::int16_t lut_[256];
};

/// A string over an alphabet, stored as symbol ranks. Comparison is
/// lexicographic in alphabet order.
class SymbolString {
public:
    SymbolString() = default;
    explicit SymbolString(std::vector<Symbol> symbols) : data_(std::move(symbols)) {}
    SymbolString(std::initializer_list<Symbol> symbols) : data_(symbols) {}

    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    Symbol operator[](std::size_t i) const { return data_[i]; }
    Symbol& operator[](std::size_t i) { return data_[i]; }

    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }
    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }

    std::span<const Symbol> view() const noexcept { return data_; }
    operator std::span<const Symbol>() const noexcept { return data_; }
    const std::vector<Symbol>& symbols() const noexcept { return data_; }

    SymbolString substr(std::size_t pos, std::size_t len) const;
    void push_back(Symbol s) { data_.push_back(s); }
    void append(std::span<const Symbol> s) { data_.insert(data_.end(), s.begin(), s.end()); }
    void reserve(std::size_t n) { data_.reserve(n); }

    friend bool operator==(const SymbolString&, const SymbolString&) = default;
    friend std::strong_ordering operator<=>(const SymbolString& a, const SymbolString& b) {
        return a.data_ <=> b.data_;
    }

private:
    std::vector<Symbol> data_;
};

SymbolString concat(const SymbolString& a, const SymbolString& b);

/// Parses text into symbols; throws illegal_symbol naming the offending
/// column (0-based) when a character is outside the alphabet.
SymbolString encode(const Alphabet& alphabet, std::string_view text);
std::string decode(const Alphabet& alphabet, const SymbolString& s);

std::size_t hamming(std::span<const Symbol> a, std::span<const Symbol> b);
std::size_t longest_common_prefix(std::span<const Symbol> a, std::span<const Symbol> b);

/// Deterministic random stream identified by (master seed, stream id).
/// Child streams are derived by id, so a trial or a trace always draws the
/// same numbers no matter which thread runs it or in which order.
/// The generator is SplitMix64; bounded integers use Lemire's multiply-shift
/// rejection method so draws are identical on every platform.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t master_seed, std::uint64_t stream_id = 0);

    std::uint64_t master_seed() const noexcept { return master_; }
    std::uint64_t stream_id() const noexcept { return id_; }

    /// Independent child stream. Derivation is a pure function of this
    /// stream's identity, never of how many numbers were already drawn.
    RandomStream derive(std::uint64_t child_id) const;

    std::uint64_t next();
    result_type operator()() { return next(); }
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    /// Uniform on [0, bound). bound must be positive.
    std::uint64_t uniform_below(std::uint64_t bound);
    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();
    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::uint64_t master_;
    std::uint64_t id_;
    std::uint64_t state_;
};

struct ModelParams {
    std::optional<std::uint32_t> t;    // maximum extension length
    std::optional<double> epsilon;     // per-symbol mutation probability
    std::optional<double> q;           // per-symbol deletion probability

    bool operator==(const ModelParams&) const = default;
};

/// Removes a prefix of length `prefix` and a suffix of length `suffix`.
SymbolString trim(const SymbolString& s, std::size_t prefix, std::size_t suffix);

/// Random string r^l with l uniform on [0, t] and i.i.d. uniform symbols.
SymbolString sample_random_leq_t(std::uint32_t t, std::size_t alphabet_size, RandomStream& rng);

/// Uniform random string of exactly `length` symbols.
SymbolString sample_uniform(std::size_t length, std::size_t alphabet_size, RandomStream& rng);

/// Each position is replaced with probability epsilon by one of the other
/// |A|-1 symbols, chosen uniformly.
SymbolString mutate(const SymbolString& s, double epsilon, std::size_t alphabet_size,
                    RandomStream& rng);

}  // namespace tracekit
