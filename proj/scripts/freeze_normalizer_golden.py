#!/usr/bin/env python3
"""Freeze the normalizer golden file.

Runs the candidate cases through the open-source Whisper English text
normalizer (the transformers implementation, empty spelling mapping) and
writes tests/golden/normalizer_cases.tsv. The shipped C++ normalizer
implements a documented subset of that behavior; every case here must
produce identical output under both. Cases that exercise features outside
the subset (number-word rewriting, title expansion, possessive 's) do not
belong in this list.
"""

import sys
from pathlib import Path

from transformers.models.whisper.english_normalizer import EnglishTextNormalizer

CASES = [
    # case folding + punctuation
    "Hello, World!",
    "THE DOG BARKED.",
    "What?!",
    "yes; no: maybe",
    "stop... wait",
    "a*b*c",
    "quote \"this\" please",
    "semi-colon; here",
    # whitespace
    "  multiple   spaces ",
    "big    gap",
    "trailing space ",
    " leading space",
    # bracketed / parenthesized annotations
    "(laughs) that is funny",
    "the cat [noise] sat",
    "so <unk> it goes",
    "hello (overlapping speech) there",
    "[silence]",
    "end of line (trails off",
    # contractions
    "I'm OK — don't worry.",
    "don't do that",
    "we're going home",
    "it's a big one",
    "that's not mine",
    "you've seen it",
    "she'll be there",
    "he'd rather not",
    "won't can't let's go",
    "they're isn't aren't",
    "wasn't weren't hasn't",
    "I'll say what's next",
    "y'all gonna wanna play",
    "gotta ma'am",
    # fillers
    "um I uh want to play",
    "hmm let me think",
    "mm mhm yes",
    "mmm that is good",
    "uh-huh sure",
    # hyphens and dashes
    "well-known story",
    "\u201cquoted\u201d words",
    "wait – stop",
    # realistic conversational turns
    "Do you like playing with your friends?",
    "I want to go outside and play!",
    "And then the bear, he ran away.",
    "why did you do that",
    "Tell me about your school.",
    "the plants need water and sunlight",
    "I have 3 cats at home",
    "dogs' tails wag",
    # degenerate
    "",
    "(laughs)",
]


def main() -> int:
    norm = EnglishTextNormalizer({})
    out_path = Path(__file__).resolve().parent.parent / "tests" / "golden" / "normalizer_cases.tsv"
    out_path.parent.mkdir(parents=True, exist_ok=True)
    lines = [
        "# Golden cases for the text normalizer.",
        "# Frozen against the open-source Whisper EnglishTextNormalizer",
        "# (transformers implementation, empty spelling mapping).",
        "# Format: input<TAB>expected. Do not edit by hand; regenerate with",
        "# scripts/freeze_normalizer_golden.py.",
    ]
    for case in CASES:
        if "\t" in case or "\n" in case:
            print(f"case contains tab/newline, unsupported: {case!r}", file=sys.stderr)
            return 1
        lines.append(f"{case}\t{norm(case)}")
    out_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(CASES)} cases to {out_path}")
    for case in CASES:
        print(f"  {case!r} -> {norm(case)!r}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
