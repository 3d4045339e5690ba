#!/usr/bin/env python3
"""Generates src/unicode_tables.inc from the running interpreter's unicodedata.

The tokenizer mirrors the reference BERT pipeline, which is written in Python,
so every table is derived from CPython's own view of Unicode: general
categories, canonical decompositions and combining classes, the composition
pairs that survive NFC, str.lower() mappings, str.isspace(), and the
cased / case-ignorable sets used by str.lower() for the final-sigma rule.

Usage: python3 scripts/gen_unicode_tables.py > src/unicode_tables.inc
"""

import sys
import unicodedata

MAX_CP = 0x10FFFF

CONTROL = 1
SPACE_SEPARATOR = 2
PUNCTUATION = 4
NONSPACING_MARK = 8
PY_SPACE = 16
CASED = 32
CASE_IGNORABLE = 64

CAPITAL_SIGMA = "Σ"
FINAL_SIGMA = "ς"


def is_surrogate(cp):
    return 0xD800 <= cp <= 0xDFFF


def sigma_probe(text):
    """Lowercases text and returns the character produced for the sigma at index 1."""
    return text.lower()[1]


def case_flags(cp):
    # CPython does not expose Cased / Case_Ignorable, but str.lower() consults
    # both when it handles U+03A3. Probe it directly:
    #   "AΣx"  -> final iff x is case-ignorable, or x is not cased
    #   "AΣxA" -> final iff x is not case-ignorable and not cased
    if is_surrogate(cp):
        return 0
    ch = chr(cp)
    trailing_end = sigma_probe("A" + CAPITAL_SIGMA + ch) == FINAL_SIGMA
    trailing_cased = sigma_probe("A" + CAPITAL_SIGMA + ch + "A") == FINAL_SIGMA
    flags = 0
    if trailing_end and not trailing_cased:
        flags |= CASE_IGNORABLE
    elif not trailing_end:
        flags |= CASED
    # Cased-ness of a case-ignorable character is never consulted, but the
    # backward scan still needs it for ordinary letters; the probe above
    # already covers those.
    return flags


def flags_for(cp):
    if is_surrogate(cp):
        return CONTROL
    ch = chr(cp)
    cat = unicodedata.category(ch)
    flags = 0
    if cat.startswith("C"):
        flags |= CONTROL
    if cat == "Zs":
        flags |= SPACE_SEPARATOR
    if cat.startswith("P"):
        flags |= PUNCTUATION
    if cat == "Mn":
        flags |= NONSPACING_MARK
    if ch.isspace():
        flags |= PY_SPACE
    flags |= case_flags(cp)
    return flags


def ranges(values):
    """Run-length encodes a list indexed by code point into (first, last, value)."""
    out = []
    start = 0
    for cp in range(1, len(values) + 1):
        if cp == len(values) or values[cp] != values[start]:
            out.append((start, cp - 1, values[start]))
            start = cp
    return out


def main():
    flags = [flags_for(cp) for cp in range(MAX_CP + 1)]
    ccc = [0 if is_surrogate(cp) else unicodedata.combining(chr(cp)) for cp in range(MAX_CP + 1)]

    decompositions = []
    compositions = []
    for cp in range(MAX_CP + 1):
        if is_surrogate(cp):
            continue
        raw = unicodedata.decomposition(chr(cp))
        if not raw or raw.startswith("<"):
            continue
        parts = [int(p, 16) for p in raw.split()]
        decompositions.append((cp, parts))
        if len(parts) == 2 and unicodedata.normalize("NFC", chr(cp)) == chr(cp):
            # Only pairs that NFC actually recomposes; this drops the
            # composition exclusions and non-starter decompositions.
            compositions.append((parts[0], parts[1], cp))

    lowers = []
    for cp in range(MAX_CP + 1):
        if is_surrogate(cp) or cp == 0x03A3:
            continue
        low = chr(cp).lower()
        if low != chr(cp):
            lowers.append((cp, [ord(c) for c in low]))

    w = sys.stdout.write
    w("// Generated by scripts/gen_unicode_tables.py. Do not edit.\n")
    w(f"// Unicode {unicodedata.unidata_version}\n\n")
    w(f'inline constexpr char kUnicodeVersion[] = "{unicodedata.unidata_version}";\n\n')

    w("inline constexpr PropertyRange kPropertyRanges[] = {\n")
    for first, last, value in ranges(flags):
        w(f"    {{0x{first:X}, 0x{last:X}, {value}}},\n")
    w("};\n\n")

    w("inline constexpr CombiningClassRange kCombiningClassRanges[] = {\n")
    for first, last, value in ranges(ccc):
        if value:
            w(f"    {{0x{first:X}, 0x{last:X}, {value}}},\n")
    w("};\n\n")

    pool = []
    w("inline constexpr Mapping kDecompositions[] = {\n")
    for cp, parts in decompositions:
        w(f"    {{0x{cp:X}, {len(pool)}, {len(parts)}}},\n")
        pool.extend(parts)
    w("};\n\n")
    w("inline constexpr char32_t kDecompositionPool[] = {\n")
    for i in range(0, len(pool), 8):
        w("    " + ", ".join(f"0x{c:X}" for c in pool[i:i + 8]) + ",\n")
    w("};\n\n")

    compositions.sort()
    w("inline constexpr Composition kCompositions[] = {\n")
    for first, second, cp in compositions:
        w(f"    {{0x{first:X}, 0x{second:X}, 0x{cp:X}}},\n")
    w("};\n\n")

    pool = []
    w("inline constexpr Mapping kLowercase[] = {\n")
    for cp, parts in lowers:
        w(f"    {{0x{cp:X}, {len(pool)}, {len(parts)}}},\n")
        pool.extend(parts)
    w("};\n\n")
    w("inline constexpr char32_t kLowercasePool[] = {\n")
    for i in range(0, len(pool), 8):
        w("    " + ", ".join(f"0x{c:X}" for c in pool[i:i + 8]) + ",\n")
    w("};\n")


if __name__ == "__main__":
    main()
