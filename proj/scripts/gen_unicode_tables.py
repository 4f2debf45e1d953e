#!/usr/bin/env python3
"""Regenerates src/unicode_tables.inc from Python's unicodedata.

The tables drive NFC normalization and simple case folding in
src/unicode.cpp. Hangul syllables (U+AC00..U+D7A3) are excluded from
the decomposition and composition tables; they are handled
algorithmically at runtime.

Usage: python3 scripts/gen_unicode_tables.py > src/unicode_tables.inc
"""

import sys
import unicodedata

HANGUL_FIRST = 0xAC00
HANGUL_LAST = 0xD7A3


def is_hangul_syllable(cp):
    return HANGUL_FIRST <= cp <= HANGUL_LAST


def main(out):
    ccc = []            # (cp, combining class)
    decomp = []         # (cp, [full canonical decomposition])
    comp = []           # (first, second, composed)
    lower = []          # (cp, simple lowercase)

    for cp in range(0x110000):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        ch = chr(cp)
        cls = unicodedata.combining(ch)
        if cls:
            ccc.append((cp, cls))
        if not is_hangul_syllable(cp):
            nfd = unicodedata.normalize("NFD", ch)
            if nfd != ch:
                decomp.append((cp, [ord(c) for c in nfd]))
            d = unicodedata.decomposition(ch)
            if d and not d.startswith("<"):
                parts = [int(x, 16) for x in d.split()]
                if len(parts) == 2:
                    a, b = parts
                    # A pair is a primary composite iff NFC recombines it.
                    if unicodedata.normalize("NFC", chr(a) + chr(b)) == ch:
                        comp.append((a, b, cp))
        lo = ch.lower()
        if len(lo) == 1 and lo != ch:
            lower.append((cp, ord(lo)))

    comp.sort(key=lambda t: (t[0] << 21) | t[1])

    pool = []
    decomp_index = []
    for cp, seq in decomp:
        decomp_index.append((cp, len(pool), len(seq)))
        pool.extend(seq)

    w = out.write
    w("// Generated by scripts/gen_unicode_tables.py -- do not edit.\n")
    w("// Unicode data version: %s\n\n" % unicodedata.unidata_version)

    w("inline constexpr CombiningClassEntry kCombiningClasses[] = {\n")
    for cp, cls in ccc:
        w("    {0x%X, %d},\n" % (cp, cls))
    w("};\n\n")

    w("inline constexpr DecompositionEntry kDecompositions[] = {\n")
    for cp, off, n in decomp_index:
        w("    {0x%X, %d, %d},\n" % (cp, off, n))
    w("};\n\n")

    w("inline constexpr char32_t kDecompositionPool[] = {\n")
    for i in range(0, len(pool), 12):
        w("    %s,\n" % ", ".join("0x%X" % c for c in pool[i:i + 12]))
    w("};\n\n")

    w("inline constexpr CompositionEntry kCompositions[] = {\n")
    for a, b, c in comp:
        w("    {0x%XULL, 0x%X},  // %04X %04X -> %04X\n"
          % ((a << 21) | b, c, a, b, c))
    w("};\n\n")

    w("inline constexpr CaseFoldEntry kSimpleLowercase[] = {\n")
    for cp, lo in lower:
        w("    {0x%X, 0x%X},\n" % (cp, lo))
    w("};\n")


if __name__ == "__main__":
    main(sys.stdout)
