#!/usr/bin/env python3
"""Compares `lexiport tokenize` with the Python reference tokenizer, live.

Exits 77 (skip) when transformers is not importable.
"""

import argparse
import pathlib
import subprocess
import sys


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--cli", required=True)
    ap.add_argument("--data", required=True)
    args = ap.parse_args()
    try:
        from transformers import BertTokenizerLegacy
    except Exception as exc:  # noqa: BLE001 - any import failure means skip
        print(f"skip: reference tokenizer unavailable ({exc})")
        return 77

    data = pathlib.Path(args.data)
    vocab = data / "bert-base-uncased-vocab.txt"
    ref = BertTokenizerLegacy(str(vocab), do_lower_case=True)
    corpora = [data / "multilingual_corpus.txt", data / "spanish_corpus.txt"]
    mismatches = 0
    total = 0
    for corpus in corpora:
        lines = corpus.read_bytes().decode("utf-8").split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        out = subprocess.run([args.cli, "tokenize", "--vocab", str(vocab), "--input", str(corpus)],
                             check=True, capture_output=True).stdout.decode("utf-8").split("\n")[:-1]
        if len(out) != len(lines):
            print(f"{corpus.name}: {len(out)} output lines for {len(lines)} input lines")
            return 1
        for i, (line, got) in enumerate(zip(lines, out)):
            want = " ".join(ref.tokenize(line))
            total += 1
            if got != want:
                mismatches += 1
                if mismatches <= 5:
                    print(f"{corpus.name}:{i + 1}\n  got:  {got}\n  want: {want}")
    print(f"{total} lines, {mismatches} mismatches")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
