#!/usr/bin/env python3
"""Regenerate data/lexicons/sentiment.tsv and background.tsv.

sentiment.tsv comes from the VADER lexicon (MIT): alphabetic entries only,
mean valence rescaled from [-4, 4] to [-1, 1].

background.tsv comes from wordfreq's small English list (CC BY-SA 4.0):
the most frequent words as counts per billion tokens. Read either through
the installed package or straight from a wordfreq wheel's cBpack file.
"""

import argparse
import gzip
import re
import zipfile
from pathlib import Path

WORD = re.compile(r"^[a-z]+(?:['-][a-z]+)*$")
TOTAL = 1_000_000_000


def sentiment(vader_lexicon: Path) -> list[tuple[str, float]]:
    rows = {}
    for line in vader_lexicon.read_text(encoding="utf-8").splitlines():
        fields = line.split("\t")
        if len(fields) < 2:
            continue
        token = fields[0].strip().lower()
        if WORD.match(token):
            rows[token] = round(float(fields[1]) / 4.0, 4)
    return sorted(rows.items())


def frequencies_from_wheel(wheel: Path) -> list[tuple[str, float]]:
    import msgpack

    with zipfile.ZipFile(wheel) as z:
        packed = gzip.decompress(z.read("wordfreq/data/small_en.msgpack.gz"))
    header, *bins = msgpack.unpackb(packed, raw=False)
    if header.get("format") != "cB":
        raise SystemExit(f"unexpected wordfreq format {header!r}")
    # bin i holds the words whose frequency rounds to -i centibels
    return [(w, 10.0 ** (-i / 100.0)) for i, words in enumerate(bins) for w in words]


def frequencies_from_package(n: int) -> list[tuple[str, float]]:
    import wordfreq

    return [(w, wordfreq.word_frequency(w, "en")) for w in wordfreq.top_n_list("en", n)]


def background(freqs: list[tuple[str, float]], n: int) -> list[tuple[str, int]]:
    seen = {}
    for word, f in freqs:
        word = word.lower()
        if WORD.match(word) and word not in seen:
            seen[word] = max(1, round(f * TOTAL))
        if len(seen) == n:
            break
    return sorted(seen.items(), key=lambda kv: (-kv[1], kv[0]))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vader", type=Path, help="vader_lexicon.txt")
    ap.add_argument("--wordfreq-wheel", type=Path, help="wordfreq wheel (used when the package is not installed)")
    ap.add_argument("--words", type=int, default=50_000)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "lexicons")
    args = ap.parse_args()

    if args.vader:
        rows = sentiment(args.vader)
        with open(args.out / "sentiment.tsv", "w", encoding="utf-8") as f:
            f.writelines(f"{t}\t{s:g}\n" for t, s in rows)
        print(f"sentiment.tsv: {len(rows)} entries")

    if args.wordfreq_wheel:
        freqs = frequencies_from_wheel(args.wordfreq_wheel)
    else:
        try:
            freqs = frequencies_from_package(args.words * 2)
        except ImportError:
            freqs = None
    if freqs:
        rows = background(freqs, args.words)
        with open(args.out / "background.tsv", "w", encoding="utf-8") as f:
            f.write(f"#total\t{TOTAL}\n")
            f.writelines(f"{w}\t{c}\n" for w, c in rows)
        print(f"background.tsv: {len(rows)} entries")


if __name__ == "__main__":
    main()
