#!/usr/bin/env python3
"""Generate include/wan/unicode_tables.inc from Python's unicodedata.

Emits three sorted tables used by the NFC normalizer in unicode_norm.hpp:
  - fully flattened canonical decompositions (Hangul excluded, handled
    algorithmically at runtime),
  - nonzero canonical combining classes,
  - primary composition pairs (derived through unicodedata.normalize so
    that composition exclusions are honored without shipping the UCD
    exclusion list).

Run from the repository root:
    python3 scripts/gen_unicode_tables.py > include/wan/unicode_tables.inc
"""

import sys
import unicodedata

HANGUL_S_BASE = 0xAC00
HANGUL_S_COUNT = 11172
MAX_CP = 0x110000


def canonical_decomposition(cp):
    if HANGUL_S_BASE <= cp < HANGUL_S_BASE + HANGUL_S_COUNT:
        return None
    raw = unicodedata.decomposition(chr(cp))
    if not raw or raw.startswith("<"):
        return None
    return [int(tok, 16) for tok in raw.split()]


def flatten(cp, memo):
    if cp in memo:
        return memo[cp]
    parts = canonical_decomposition(cp)
    if parts is None:
        memo[cp] = [cp]
        return memo[cp]
    out = []
    for part in parts:
        out.extend(flatten(part, memo))
    memo[cp] = out
    return out


def main():
    memo = {}
    decomp = {}  # cp -> flattened sequence
    raw_pairs = {}  # cp -> (a, b) raw pair decomposition
    for cp in range(MAX_CP):
        parts = canonical_decomposition(cp)
        if parts is None:
            continue
        decomp[cp] = flatten(cp, memo)
        if len(parts) == 2:
            raw_pairs[cp] = (parts[0], parts[1])

    compose = {}
    for cp, (a, b) in sorted(raw_pairs.items()):
        if unicodedata.normalize("NFC", chr(a) + chr(b)) == chr(cp):
            compose[(a, b)] = cp

    ccc = {}
    for cp in range(MAX_CP):
        klass = unicodedata.combining(chr(cp))
        if klass:
            ccc[cp] = klass

    flat = []
    index = []
    for cp in sorted(decomp):
        seq = decomp[cp]
        index.append((cp, len(flat), len(seq)))
        flat.extend(seq)

    out = sys.stdout
    out.write("// Generated by scripts/gen_unicode_tables.py (unicodedata "
              f"{unicodedata.unidata_version}). Do not edit.\n\n")

    out.write(f"inline constexpr DecompIndex kDecompIndex[{len(index)}] = {{\n")
    for cp, off, length in index:
        out.write(f"    {{0x{cp:X}, {off}, {length}}},\n")
    out.write("};\n\n")

    out.write(f"inline constexpr char32_t kDecompData[{len(flat)}] = {{\n")
    for i in range(0, len(flat), 8):
        row = ", ".join(f"0x{v:X}" for v in flat[i:i + 8])
        out.write(f"    {row},\n")
    out.write("};\n\n")

    ccc_items = sorted(ccc.items())
    out.write(f"inline constexpr CombiningClass kCombiningClasses[{len(ccc_items)}] = {{\n")
    for cp, klass in ccc_items:
        out.write(f"    {{0x{cp:X}, {klass}}},\n")
    out.write("};\n\n")

    pairs = sorted(compose.items())
    out.write(f"inline constexpr ComposePair kComposePairs[{len(pairs)}] = {{\n")
    for (a, b), c in pairs:
        out.write(f"    {{0x{a:X}, 0x{b:X}, 0x{c:X}}},\n")
    out.write("};\n")


if __name__ == "__main__":
    main()
