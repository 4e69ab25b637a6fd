#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>

#include "wan/utf8.hpp"

namespace wan {
namespace detail {

struct DecompIndex {
    char32_t cp;
    uint32_t offset;
    uint32_t length;
};

struct CombiningClass {
    char32_t cp;
    uint8_t klass;
};

struct ComposePair {
    char32_t first;
    char32_t second;
    char32_t composed;
};

#include "wan/unicode_tables.inc"

inline constexpr char32_t kHangulSBase = 0xAC00;
inline constexpr char32_t kHangulLBase = 0x1100;
inline constexpr char32_t kHangulVBase = 0x1161;
inline constexpr char32_t kHangulTBase = 0x11A7;
inline constexpr int kHangulLCount = 19;
inline constexpr int kHangulVCount = 21;
inline constexpr int kHangulTCount = 28;
inline constexpr int kHangulNCount = kHangulVCount * kHangulTCount;
inline constexpr int kHangulSCount = kHangulLCount * kHangulNCount;

inline uint8_t combining_class(char32_t cp) {
    const auto* begin = std::begin(kCombiningClasses);
    const auto* end = std::end(kCombiningClasses);
    const auto* it = std::lower_bound(begin, end, cp,
        [](const CombiningClass& e, char32_t v) { return e.cp < v; });
    return (it != end && it->cp == cp) ? it->klass : 0;
}

inline const DecompIndex* find_decomposition(char32_t cp) {
    const auto* begin = std::begin(kDecompIndex);
    const auto* end = std::end(kDecompIndex);
    const auto* it = std::lower_bound(begin, end, cp,
        [](const DecompIndex& e, char32_t v) { return e.cp < v; });
    return (it != end && it->cp == cp) ? it : nullptr;
}

inline char32_t compose_pair(char32_t a, char32_t b) {
    // Hangul LV and LVT composition is algorithmic.
    if (a >= kHangulLBase && a < kHangulLBase + kHangulLCount &&
        b >= kHangulVBase && b < kHangulVBase + kHangulVCount) {
        const char32_t l = a - kHangulLBase;
        const char32_t v = b - kHangulVBase;
        return kHangulSBase + (l * kHangulVCount + v) * kHangulTCount;
    }
    if (a >= kHangulSBase && a < kHangulSBase + kHangulSCount &&
        (a - kHangulSBase) % kHangulTCount == 0 &&
        b > kHangulTBase && b < kHangulTBase + kHangulTCount) {
        return a + (b - kHangulTBase);
    }
    const auto* begin = std::begin(kComposePairs);
    const auto* end = std::end(kComposePairs);
    const auto* it = std::lower_bound(begin, end, std::pair<char32_t, char32_t>(a, b),
        [](const ComposePair& e, const std::pair<char32_t, char32_t>& v) {
            return e.first != v.first ? e.first < v.first : e.second < v.second;
        });
    return (it != end && it->first == a && it->second == b) ? it->composed : 0;
}

inline void append_decomposed(std::u32string& out, char32_t cp) {
    if (cp >= kHangulSBase && cp < kHangulSBase + kHangulSCount) {
        const char32_t s = cp - kHangulSBase;
        out.push_back(kHangulLBase + s / kHangulNCount);
        out.push_back(kHangulVBase + (s % kHangulNCount) / kHangulTCount);
        const char32_t t = s % kHangulTCount;
        if (t != 0) out.push_back(kHangulTBase + t);
        return;
    }
    if (const DecompIndex* d = find_decomposition(cp)) {
        for (uint32_t i = 0; i < d->length; ++i)
            out.push_back(kDecompData[d->offset + i]);
        return;
    }
    out.push_back(cp);
}

// Canonical ordering: stable sort of nonzero-class runs by combining class.
inline void canonical_order(std::u32string& s) {
    size_t i = 0;
    while (i < s.size()) {
        if (combining_class(s[i]) == 0) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < s.size() && combining_class(s[j]) != 0) ++j;
        std::stable_sort(s.begin() + i, s.begin() + j,
            [](char32_t a, char32_t b) { return combining_class(a) < combining_class(b); });
        i = j;
    }
}

inline void compose_in_place(std::u32string& s) {
    if (s.empty()) return;
    std::u32string out;
    out.reserve(s.size());
    long starter = -1;   // index of the last starter in out
    int last_class = -1; // class of the last kept character after it; -1 = none
    for (char32_t cp : s) {
        const int klass = combining_class(cp);
        // Unblocked iff cp directly follows the starter or the previously
        // kept mark has a strictly smaller combining class.
        if (starter >= 0 && last_class < klass) {
            if (char32_t c = compose_pair(out[starter], cp)) {
                out[starter] = c;
                continue;
            }
        }
        if (klass == 0) {
            starter = static_cast<long>(out.size());
            last_class = -1;
        } else {
            last_class = klass;
        }
        out.push_back(cp);
    }
    s.swap(out);
}

} // namespace detail

// Canonical composition (NFC) over a decoded code point sequence.
inline std::u32string nfc(std::u32string_view input) {
    std::u32string decomposed;
    decomposed.reserve(input.size());
    for (char32_t cp : input) detail::append_decomposed(decomposed, cp);
    detail::canonical_order(decomposed);
    detail::compose_in_place(decomposed);
    return decomposed;
}

inline std::string nfc_utf8(std::string_view bytes) {
    return encode_utf8(nfc(decode_utf8(bytes)));
}

} // namespace wan
