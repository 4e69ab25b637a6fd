#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "wan/corpus.hpp"
#include "wan/errors.hpp"
#include "wan/utf8.hpp"

namespace wan {

enum class TokenKind : uint8_t { Word, Punctuation, SentenceTerminator };

struct Token {
    std::string surface;
    TokenKind kind = TokenKind::Word;

    bool operator==(const Token&) const = default;
};

// The "text as read": an ordered token sequence with cyclic indexing, so a
// growth realization may start anywhere and wrap around the end.
struct TokenStream {
    std::vector<Token> tokens;

    size_t total_len() const { return tokens.size(); }
    const Token& cyclic(size_t i) const { return tokens[i % tokens.size()]; }
};

// Surface emitted for the synthetic newline terminator. U+23CE is printable
// and survives the no-whitespace token invariant.
inline constexpr char32_t kNewlineMark = U'⏎';

struct PunctuationInventory {
    std::unordered_set<char32_t> terminators;
    std::unordered_set<char32_t> other_marks;
    std::unordered_set<char32_t> excluded;
    bool newline_terminates = true;

    bool is_terminator(char32_t cp) const { return terminators.count(cp) != 0; }
    bool is_mark(char32_t cp) const {
        return terminators.count(cp) || other_marks.count(cp) || excluded.count(cp);
    }
};

// Validates pairwise disjointness. The newline mark is folded into the
// terminator set so the synthetic token classifies like any other terminator.
inline PunctuationInventory make_inventory(std::u32string_view terminators,
                                           std::u32string_view other_marks,
                                           std::u32string_view excluded,
                                           bool newline_terminates = true) {
    PunctuationInventory inv;
    inv.newline_terminates = newline_terminates;
    for (char32_t cp : terminators) inv.terminators.insert(cp);
    if (newline_terminates) inv.terminators.insert(kNewlineMark);
    for (char32_t cp : other_marks) {
        if (inv.terminators.count(cp))
            throw ConfigError("mark in both terminators and other_marks");
        inv.other_marks.insert(cp);
    }
    for (char32_t cp : excluded) {
        if (inv.terminators.count(cp) || inv.other_marks.count(cp))
            throw ConfigError("excluded mark overlaps kept marks");
        inv.excluded.insert(cp);
    }
    return inv;
}

// Fullwidth stop, exclamation and question marks, ellipsis, semicolon.
// Paired brackets and hyphen-like dashes are dropped from the stream.
inline PunctuationInventory chinese_inventory() {
    return make_inventory(U"。！？…；",
                          U"，、：“”‘’",
                          U"【】（）—–-－"
                          U"〈〉「」《》");
}

inline PunctuationInventory western_inventory() {
    return make_inventory(U".!?…;", U",:\"'()—", U"");
}

inline PunctuationInventory default_inventory(Language language) {
    return language == Language::Chinese ? chinese_inventory() : western_inventory();
}

// Splits raw text into word-sized chunks. Output chunks, concatenated and
// ignoring whitespace, must reproduce the input's non-whitespace characters.
class SegmenterInterface {
public:
    virtual ~SegmenterInterface() = default;
    virtual std::vector<std::u32string> segment(std::u32string_view raw) const = 0;
};

inline bool is_space(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\v' ||
           cp == U'\f' || cp == U' ' || cp == U'　';
}

class WhitespaceSegmenter final : public SegmenterInterface {
public:
    std::vector<std::u32string> segment(std::u32string_view raw) const override {
        std::vector<std::u32string> out;
        std::u32string cur;
        for (char32_t cp : raw) {
            if (is_space(cp)) {
                if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
            } else {
                cur.push_back(cp);
            }
        }
        if (!cur.empty()) out.push_back(std::move(cur));
        return out;
    }
};

// Greedy longest-match dictionary segmenter for fixtures and small corpora.
// Characters not covered by any dictionary entry come out as single-character
// chunks, which is where punctuation marks naturally end up.
class GreedyDictSegmenter final : public SegmenterInterface {
public:
    explicit GreedyDictSegmenter(const std::vector<std::string>& words_utf8) {
        for (const auto& w : words_utf8) {
            std::u32string cps = decode_utf8(w);
            if (cps.size() < 2) continue;  // single characters match by fallback
            max_len_ = std::max(max_len_, cps.size());
            dict_.insert(std::move(cps));
        }
    }

    std::vector<std::u32string> segment(std::u32string_view raw) const override {
        std::vector<std::u32string> out;
        size_t i = 0;
        while (i < raw.size()) {
            if (is_space(raw[i])) {
                ++i;
                continue;
            }
            size_t best = 1;
            const size_t cap = std::min(max_len_, raw.size() - i);
            for (size_t len = cap; len >= 2; --len) {
                if (dict_.count(std::u32string(raw.substr(i, len)))) {
                    best = len;
                    break;
                }
            }
            out.emplace_back(raw.substr(i, best));
            i += best;
        }
        return out;
    }

private:
    struct U32Hash {
        size_t operator()(const std::u32string& s) const {
            size_t h = 1469598103934665603ull;
            for (char32_t c : s) h = (h ^ static_cast<size_t>(c)) * 1099511628211ull;
            return h;
        }
    };
    std::unordered_set<std::u32string, U32Hash> dict_;
    size_t max_len_ = 1;
};

namespace detail {

inline char32_t lower_latin(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 32;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;  // Latin-1 capitals
    return cp;
}

inline void emit_classified(std::vector<Token>& out, std::u32string_view chunk,
                            const PunctuationInventory& inv, bool lowercase) {
    if (chunk.empty()) return;
    // Single inventory mark.
    if (chunk.size() == 1 && inv.is_mark(chunk[0])) {
        const char32_t cp = chunk[0];
        if (inv.excluded.count(cp)) return;
        Token tok;
        tok.surface = encode_utf8(std::u32string_view(&cp, 1));
        tok.kind = inv.is_terminator(cp) ? TokenKind::SentenceTerminator
                                         : TokenKind::Punctuation;
        out.push_back(std::move(tok));
        return;
    }
    // Detach marks from the edges, keep word-internal ones (don't, i.e.).
    size_t lo = 0, hi = chunk.size();
    while (lo < hi && inv.is_mark(chunk[lo])) ++lo;
    while (hi > lo && inv.is_mark(chunk[hi - 1])) --hi;
    for (size_t i = 0; i < lo; ++i)
        emit_classified(out, chunk.substr(i, 1), inv, lowercase);
    if (lo < hi) {
        std::u32string word(chunk.substr(lo, hi - lo));
        if (lowercase)
            for (char32_t& cp : word) cp = lower_latin(cp);
        out.push_back(Token{encode_utf8(word), TokenKind::Word});
    }
    for (size_t i = hi; i < chunk.size(); ++i)
        emit_classified(out, chunk.substr(i, 1), inv, lowercase);
}

inline std::u32string strip_spaces(std::u32string_view s) {
    std::u32string out;
    out.reserve(s.size());
    for (char32_t cp : s)
        if (!is_space(cp)) out.push_back(cp);
    return out;
}

} // namespace detail

// Converts a normalized document into a token stream. Kept marks become
// their own tokens, excluded marks vanish, words keep their surface form
// (lowercased outside Chinese). A newline acts as a sentence terminator
// only when the stream is not already terminated at that point.
inline TokenStream tokenize(const TextDocument& doc, const PunctuationInventory& inv,
                            const SegmenterInterface* segmenter = nullptr) {
    static const WhitespaceSegmenter whitespace_segmenter;
    const SegmenterInterface* seg = segmenter;
    if (seg == nullptr) {
        if (doc.language == Language::Chinese)
            throw SegmentationError(
                "Chinese text needs a segmenter or pre-segmented input: " + doc.id);
        seg = &whitespace_segmenter;
    }
    const bool lowercase = doc.language != Language::Chinese;

    TokenStream stream;
    const std::u32string text = decode_utf8(doc.raw);
    const std::string newline_surface =
        encode_utf8(std::u32string_view(&kNewlineMark, 1));

    size_t line_start = 0;
    for (size_t i = 0; i <= text.size(); ++i) {
        const bool at_end = i == text.size();
        if (!at_end && text[i] != U'\n') continue;
        const std::u32string_view line(text.data() + line_start, i - line_start);
        line_start = i + 1;

        if (!line.empty()) {
            std::vector<std::u32string> chunks = seg->segment(line);
            std::u32string joined;
            for (const auto& c : chunks) joined += detail::strip_spaces(c);
            if (joined != detail::strip_spaces(line))
                throw SegmentationError("segmenter does not reconstruct its input");
            for (const auto& chunk : chunks)
                detail::emit_classified(stream.tokens, chunk, inv, lowercase);
        }
        if (!at_end && inv.newline_terminates && !stream.tokens.empty() &&
            stream.tokens.back().kind != TokenKind::SentenceTerminator) {
            stream.tokens.push_back(Token{newline_surface, TokenKind::SentenceTerminator});
        }
    }
    return stream;
}

// Word-only view of a stream: punctuation vanishes and the words close ranks,
// so words separated by a mark count as adjacent downstream.
inline TokenStream strip_punctuation(const TokenStream& stream) {
    TokenStream out;
    out.tokens.reserve(stream.tokens.size());
    for (const Token& tok : stream.tokens)
        if (tok.kind == TokenKind::Word) out.tokens.push_back(tok);
    if (out.tokens.empty())
        throw EmptyStreamError("stream has no word tokens");
    return out;
}

inline std::map<std::string, uint64_t> punctuation_census(const TokenStream& stream) {
    std::map<std::string, uint64_t> counts;
    for (const Token& tok : stream.tokens)
        if (tok.kind != TokenKind::Word) ++counts[tok.surface];
    return counts;
}

inline double frequency_ratio(uint64_t a, uint64_t b) {
    return static_cast<double>(a) / static_cast<double>(b);
}

} // namespace wan
