"""Tokenisation, stopword removal, suffix stripping and term vectors.

The lexical side of block similarity: sentences are tokenised on
non-alphanumeric runs, stopwords dropped, survivors stemmed with Porter's
suffix-stripping algorithm (the 1980 rule set, no later extensions), and
counted into sparse term vectors compared by cosine.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from importlib import resources
from pathlib import Path

TermVector = dict[str, int]

_TOKEN = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase tokens split on maximal runs of non-alphanumerics."""
    return _TOKEN.findall(text.lower())


# ---------------------------------------------------------------------------
# Porter stemmer
# ---------------------------------------------------------------------------

_VOWELS = "aeiou"


def _is_cons(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return True if i == 0 else not _is_cons(word, i - 1)
    return True


def _measure(stem: str) -> int:
    # Number of VC sequences in the [C](VC)^m[V] decomposition.
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        if _is_cons(stem, i):
            if prev_vowel:
                m += 1
            prev_vowel = False
        else:
            prev_vowel = True
    return m


def _has_vowel(stem: str) -> bool:
    return any(not _is_cons(stem, i) for i in range(len(stem)))


def _ends_double_cons(stem: str) -> bool:
    return (
        len(stem) >= 2
        and stem[-1] == stem[-2]
        and _is_cons(stem, len(stem) - 1)
    )


def _ends_cvc(stem: str) -> bool:
    # Final consonant-vowel-consonant, last consonant not w, x or y.
    if len(stem) < 3:
        return False
    return (
        _is_cons(stem, len(stem) - 3)
        and not _is_cons(stem, len(stem) - 2)
        and _is_cons(stem, len(stem) - 1)
        and stem[-1] not in "wxy"
    )


def _longest_rule(word: str, rules):
    # Rules are (suffix, replacement, min_m) pre-sorted longest suffix
    # first; only the longest matching suffix is ever considered.
    for suffix, replacement, min_m in rules:
        if word.endswith(suffix):
            stem = word[: len(word) - len(suffix)]
            if _measure(stem) > min_m:
                return stem + replacement
            return word
    return word


_STEP2 = sorted(
    [
        ("ational", "ate", 0), ("tional", "tion", 0), ("enci", "ence", 0),
        ("anci", "ance", 0), ("izer", "ize", 0), ("abli", "able", 0),
        ("alli", "al", 0), ("entli", "ent", 0), ("eli", "e", 0),
        ("ousli", "ous", 0), ("ization", "ize", 0), ("ation", "ate", 0),
        ("ator", "ate", 0), ("alism", "al", 0), ("iveness", "ive", 0),
        ("fulness", "ful", 0), ("ousness", "ous", 0), ("aliti", "al", 0),
        ("iviti", "ive", 0), ("biliti", "ble", 0),
    ],
    key=lambda r: -len(r[0]),
)

_STEP3 = sorted(
    [
        ("icate", "ic", 0), ("ative", "", 0), ("alize", "al", 0),
        ("iciti", "ic", 0), ("ical", "ic", 0), ("ful", "", 0),
        ("ness", "", 0),
    ],
    key=lambda r: -len(r[0]),
)

_STEP4 = sorted(
    [
        ("al", "", 1), ("ance", "", 1), ("ence", "", 1), ("er", "", 1),
        ("ic", "", 1), ("able", "", 1), ("ible", "", 1), ("ant", "", 1),
        ("ement", "", 1), ("ment", "", 1), ("ent", "", 1), ("ion", "", 1),
        ("ou", "", 1), ("ism", "", 1), ("ate", "", 1), ("iti", "", 1),
        ("ous", "", 1), ("ive", "", 1), ("ize", "", 1),
    ],
    key=lambda r: -len(r[0]),
)


def porter_stem(word: str) -> str:
    """Stem one lowercase word with the original Porter rule set."""
    w = word

    # Step 1a
    if w.endswith("sses"):
        w = w[:-2]
    elif w.endswith("ies"):
        w = w[:-2]
    elif w.endswith("ss"):
        pass
    elif w.endswith("s"):
        w = w[:-1]

    # Step 1b
    if w.endswith("eed"):
        if _measure(w[:-3]) > 0:
            w = w[:-1]
    else:
        stripped = None
        if w.endswith("ed") and _has_vowel(w[:-2]):
            stripped = w[:-2]
        elif w.endswith("ing") and _has_vowel(w[:-3]):
            stripped = w[:-3]
        if stripped is not None:
            w = stripped
            if w.endswith(("at", "bl", "iz")):
                w += "e"
            elif _ends_double_cons(w) and w[-1] not in "lsz":
                w = w[:-1]
            elif _measure(w) == 1 and _ends_cvc(w):
                w += "e"

    # Step 1c
    if w.endswith("y") and _has_vowel(w[:-1]):
        w = w[:-1] + "i"

    w = _longest_rule(w, _STEP2)
    w = _longest_rule(w, _STEP3)

    # Step 4; the "ion" deletion additionally needs a stem ending s or t.
    for suffix, _replacement, min_m in _STEP4:
        if w.endswith(suffix):
            stem = w[: len(w) - len(suffix)]
            if _measure(stem) > min_m and (suffix != "ion" or stem.endswith(("s", "t"))):
                w = stem
            break

    # Step 5a
    if w.endswith("e"):
        stem = w[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            w = stem

    # Step 5b
    if _measure(w) > 1 and _ends_double_cons(w) and w.endswith("l"):
        w = w[:-1]

    return w


# ---------------------------------------------------------------------------
# Stopwords and term vectors
# ---------------------------------------------------------------------------


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: one lowercase word per line, '#' comments."""
    words = set()
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            words.add(line)
    return frozenset(words)


def default_stopwords() -> frozenset[str]:
    """The bundled default English stopword list."""
    text = resources.files("taxoseg.data").joinpath("stopwords.txt").read_text("utf-8")
    words = set()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            words.add(line)
    return frozenset(words)


def build_term_vector(tokens: list[str], stopwords: frozenset[str]) -> TermVector:
    """Drop stopwords, stem the rest, count occurrences."""
    counts: Counter[str] = Counter(
        porter_stem(tok) for tok in tokens if tok not in stopwords
    )
    counts.pop("", None)  # the bare token "s" stems to nothing
    return dict(counts)


def add_term_vectors(a: TermVector, b: TermVector) -> TermVector:
    """Element-wise sum of two sparse count vectors."""
    out = dict(a)
    for term, n in b.items():
        out[term] = out.get(term, 0) + n
    return out


def cosine(v: TermVector, w: TermVector) -> float:
    """Cosine of the angle between two count vectors; 0 if either is empty.

    Counts are non-negative, so the result lies in [0, 1]. Empty vectors
    (stopword-only text) compare as 0 rather than raising: the clustering
    loop has to stay total over real corpora.
    """
    if not v or not w:
        return 0.0
    if len(w) < len(v):
        v, w = w, v
    # Accumulate in sorted term order so the result is exactly symmetric.
    dot = 0
    for term in sorted(v):
        m = w.get(term)
        if m is not None:
            dot += v[term] * m
    if dot == 0:
        return 0.0
    norm_v = math.sqrt(sum(n * n for n in v.values()))
    norm_w = math.sqrt(sum(n * n for n in w.values()))
    return dot / (norm_v * norm_w)
