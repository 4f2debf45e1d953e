#include "lexidepth/unicode.hpp"

#include <algorithm>
#include <cstdint>
#include <iterator>

#include "lexidepth/errors.hpp"

namespace lexidepth::unicode {

namespace {

struct CombiningClassEntry {
    char32_t cp;
    std::uint8_t ccc;
};

struct DecompositionEntry {
    char32_t cp;
    std::uint32_t offset;
    std::uint32_t length;
};

struct CompositionEntry {
    std::uint64_t key;  // (first << 21) | second
    char32_t composed;
};

struct CaseFoldEntry {
    char32_t cp;
    char32_t lower;
};

#include "unicode_tables.inc"

// Hangul syllable composition constants (UAX #15 §3.12)
constexpr char32_t kSBase = 0xAC00;
constexpr char32_t kLBase = 0x1100;
constexpr char32_t kVBase = 0x1161;
constexpr char32_t kTBase = 0x11A7;
constexpr int kLCount = 19, kVCount = 21, kTCount = 28;
constexpr int kNCount = kVCount * kTCount;
constexpr int kSCount = kLCount * kNCount;

std::uint8_t combining_class(char32_t cp) {
    auto it = std::lower_bound(std::begin(kCombiningClasses), std::end(kCombiningClasses), cp,
                               [](const CombiningClassEntry& e, char32_t v) { return e.cp < v; });
    if (it != std::end(kCombiningClasses) && it->cp == cp) return it->ccc;
    return 0;
}

const DecompositionEntry* find_decomposition(char32_t cp) {
    auto it = std::lower_bound(std::begin(kDecompositions), std::end(kDecompositions), cp,
                               [](const DecompositionEntry& e, char32_t v) { return e.cp < v; });
    if (it != std::end(kDecompositions) && it->cp == cp) return &*it;
    return nullptr;
}

char32_t find_composition(char32_t a, char32_t b) {
    if (a >= kLBase && a < kLBase + kLCount && b >= kVBase && b < kVBase + kVCount)
        return kSBase + ((a - kLBase) * kVCount + (b - kVBase)) * kTCount;
    if (a >= kSBase && a < kSBase + kSCount && (a - kSBase) % kTCount == 0 &&
        b > kTBase && b < kTBase + kTCount)
        return a + (b - kTBase);
    const std::uint64_t key = (static_cast<std::uint64_t>(a) << 21) | b;
    auto it = std::lower_bound(std::begin(kCompositions), std::end(kCompositions), key,
                               [](const CompositionEntry& e, std::uint64_t v) { return e.key < v; });
    if (it != std::end(kCompositions) && it->key == key) return it->composed;
    return 0;
}

void append_nfd(char32_t cp, std::u32string& out) {
    if (cp >= kSBase && cp < kSBase + kSCount) {
        const int idx = static_cast<int>(cp - kSBase);
        out.push_back(kLBase + idx / kNCount);
        out.push_back(kVBase + (idx % kNCount) / kTCount);
        if (idx % kTCount != 0) out.push_back(kTBase + idx % kTCount);
        return;
    }
    if (const DecompositionEntry* e = find_decomposition(cp)) {
        for (std::uint32_t i = 0; i < e->length; ++i)
            out.push_back(kDecompositionPool[e->offset + i]);
        return;
    }
    out.push_back(cp);
}

// Canonical ordering: stable sort of maximal nonzero-ccc runs.
void canonical_order(std::u32string& s) {
    std::size_t i = 0;
    while (i < s.size()) {
        if (combining_class(s[i]) == 0) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < s.size() && combining_class(s[j]) != 0) ++j;
        std::stable_sort(s.begin() + static_cast<std::ptrdiff_t>(i),
                         s.begin() + static_cast<std::ptrdiff_t>(j),
                         [](char32_t a, char32_t b) { return combining_class(a) < combining_class(b); });
        i = j;
    }
}

}  // namespace

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const auto b0 = static_cast<unsigned char>(s[i]);
        char32_t cp;
        std::size_t len;
        if (b0 < 0x80) {
            cp = b0;
            len = 1;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F;
            len = 2;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F;
            len = 3;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07;
            len = 4;
        } else {
            throw InvalidEncoding("invalid UTF-8 lead byte");
        }
        if (i + len > s.size()) throw InvalidEncoding("truncated UTF-8 sequence");
        for (std::size_t k = 1; k < len; ++k) {
            const auto b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80) throw InvalidEncoding("invalid UTF-8 continuation byte");
            cp = (cp << 6) | (b & 0x3F);
        }
        constexpr char32_t kMinForLen[] = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMinForLen[len]) throw InvalidEncoding("overlong UTF-8 encoding");
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
            throw InvalidEncoding("UTF-8 sequence decodes outside scalar range");
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(std::u32string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t cp : s) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

std::u32string nfc(std::u32string_view s) {
    std::u32string nfd;
    nfd.reserve(s.size());
    for (char32_t cp : s) append_nfd(cp, nfd);
    canonical_order(nfd);

    // Canonical composition over the NFD sequence. A mark composes with the
    // last starter unless blocked by an intervening character of equal or
    // higher combining class; everything between the starter and the current
    // character is a nonzero-ccc mark, so checking the previous character
    // suffices.
    std::u32string out;
    out.reserve(nfd.size());
    std::ptrdiff_t last_starter = -1;
    for (char32_t cp : nfd) {
        const std::uint8_t ccc = combining_class(cp);
        const auto ls = static_cast<std::size_t>(last_starter);
        if (last_starter >= 0 && (ls == out.size() - 1 || combining_class(out.back()) < ccc)) {
            if (char32_t comp = find_composition(out[ls], cp)) {
                out[ls] = comp;
                continue;
            }
        }
        if (ccc == 0) last_starter = static_cast<std::ptrdiff_t>(out.size());
        out.push_back(cp);
    }
    return out;
}

std::u32string to_lower(std::u32string_view s) {
    std::u32string out(s);
    for (char32_t& cp : out) {
        auto it = std::lower_bound(std::begin(kSimpleLowercase), std::end(kSimpleLowercase), cp,
                                   [](const CaseFoldEntry& e, char32_t v) { return e.cp < v; });
        if (it != std::end(kSimpleLowercase) && it->cp == cp) cp = it->lower;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
    };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace lexidepth::unicode
