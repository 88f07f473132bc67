#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tracekit/core.hpp"
#include "tracekit/likelihood.hpp"

namespace testing_support {

inline tracekit::SymbolString dna(const std::string& text) {
    return tracekit::encode(tracekit::Alphabet::dna(), text);
}

inline tracekit::SymbolString bin(const std::string& text) {
    return tracekit::encode(tracekit::Alphabet::binary(), text);
}

inline double prob(tracekit::LogProb lp) { return std::exp(lp.log()); }

// Every string over `a` symbols of exactly `len` symbols, in lexicographic order.
inline std::vector<tracekit::SymbolString> all_strings(std::size_t len, std::size_t a) {
    std::vector<tracekit::SymbolString> out{tracekit::SymbolString{}};
    for (std::size_t i = 0; i < len; ++i) {
        std::vector<tracekit::SymbolString> next;
        for (const auto& s : out) {
            for (std::size_t x = 0; x < a; ++x) {
                auto longer = s;
                longer.push_back(static_cast<tracekit::Symbol>(x));
                next.push_back(std::move(longer));
            }
        }
        out = std::move(next);
    }
    return out;
}

// Every string of length 0..max_len.
inline std::vector<tracekit::SymbolString> strings_up_to(std::size_t max_len, std::size_t a) {
    std::vector<tracekit::SymbolString> out;
    for (std::size_t len = 0; len <= max_len; ++len) {
        for (auto& s : all_strings(len, a)) out.push_back(std::move(s));
    }
    return out;
}

}  // namespace testing_support
