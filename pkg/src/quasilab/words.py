"""Metallic-mean substitution words: generation, rotation codings, twin occurrences,
and empirical linear-recurrence constants.

The substitution a -> a^s b, b -> a (s >= 1) generates the metallic-mean family of
sequences; s = 1 is the golden mean (Fibonacci) case, s = 2 the silver mean, s = 3
the bronze mean.  Words are plain ASCII strings over the alphabet {a, b}.  The n-th
iterate on "a" is written C(n) below, with the convention C(0) = "a", so that
lengths obey L(n+1) = s*L(n) + L(n-1) with L(0) = 1, L(1) = s + 1.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError

ALPHABET = ("a", "b")

#: Default cap on constructed word lengths; iterates grow exponentially in n.
DEFAULT_WORD_CAP = 10**6


def _check_s(s: int) -> None:
    if not isinstance(s, (int, np.integer)) or s < 1:
        raise ValueError(f"substitution parameter s must be a positive integer, got {s!r}")


def substitute(word: str, s: int) -> str:
    """Apply the substitution a -> a^s b, b -> a to every letter of ``word``."""
    _check_s(s)
    image_a = "a" * s + "b"
    out = []
    for ch in word:
        if ch == "a":
            out.append(image_a)
        elif ch == "b":
            out.append("a")
        else:
            raise ValueError(f"letter {ch!r} is not in the alphabet {{a, b}}")
    return "".join(out)


def word_length(s: int, n: int) -> int:
    """Length of the n-th substitution iterate, via L(n+1) = s*L(n) + L(n-1)."""
    _check_s(s)
    if n < 0:
        raise ValueError("iteration index must be nonnegative")
    prev, cur = 1, 1  # L(-1) = |"b"| = 1, L(0) = 1
    for _ in range(n):
        prev, cur = cur, s * cur + prev
    return cur


def iterate(s: int, n: int, max_len: int = DEFAULT_WORD_CAP) -> str:
    """The n-th iterate C(n) of the substitution on "a".

    Built through the concatenation rule C(n+1) = C(n)^s C(n-1), which is also the
    identity the test suite checks letter by letter.  Raises ResourceLimitError if
    the result would exceed ``max_len`` letters.
    """
    total = word_length(s, n)
    if total > max_len:
        raise ResourceLimitError(
            f"iterate({s}, {n}) has {total} letters, exceeding the cap of {max_len}"
        )
    prev, cur = "b", "a"
    for _ in range(n):
        prev, cur = cur, cur * s + prev
    return cur


def prefix(s: int, length: int, max_len: int = DEFAULT_WORD_CAP) -> str:
    """First ``length`` letters of the one-sided metallic-mean sequence u_s."""
    _check_s(s)
    if length < 0:
        raise ValueError("prefix length must be nonnegative")
    if length > max_len:
        raise ResourceLimitError(f"prefix of {length} letters exceeds the cap of {max_len}")
    prev, cur = "b", "a"
    while len(cur) < length:
        prev, cur = cur, cur * s + prev
    return cur[:length]


def metallic_alpha(s: int) -> float:
    """Frequency (s + 2 - sqrt(s^2 + 4)) / (2s) of the letter b in u_s.

    Continued-fraction expansion [0; 1+s, s, s, ...].
    """
    _check_s(s)
    return float((s + 2 - math.sqrt(s * s + 4)) / (2 * s))


def metallic_alpha_star(s: int) -> float:
    """The companion frequency [0; s, s, s, ...] = (sqrt(s^2 + 4) - s) / 2.

    Coding the rotation by this number swaps the roles of the two letters; for
    s = 1 the swapped sequence coincides with the golden-mean sequence on the
    exchanged alphabet, so the two conventions found in the literature agree up
    to relabelling.
    """
    _check_s(s)
    return float((math.sqrt(s * s + 4) - s) / 2)


def _alpha_longdouble(s: int) -> np.longdouble:
    s_ld = np.longdouble(s)
    return (s_ld + 2 - np.sqrt(s_ld * s_ld + 4)) / (2 * s_ld)


def rotation_sequence(s, beta, indices, *, alpha=None) -> str:
    """Sturmian coding of the circle rotation with the metallic-mean frequency.

    The letter at index n is b exactly when n*alpha + beta mod 1 falls in the
    half-open window [1 - alpha, 1); the majority letter a sits on the complement
    [0, 1 - alpha).  With beta = 0 and indices 1..L(n) this reproduces the
    substitution iterate ``iterate(s, n)`` exactly.  (The window carries the
    minority letter: the frequency of b in u_s is alpha.)

    Arithmetic runs in extended precision (80-bit on x86) and alpha is irrational,
    so the membership test never sits exactly on the window boundary for the index
    ranges supported here; no epsilon is applied.  ``alpha`` may be overridden,
    e.g. with :func:`metallic_alpha_star`, to generate the letter-swapped coding.

    ``indices`` is any iterable of integers (typically ``range(1, N + 1)``).
    """
    _check_s(s)
    al = _alpha_longdouble(s) if alpha is None else np.longdouble(alpha)
    be = np.longdouble(beta)
    n = np.asarray(list(indices), dtype=np.int64)
    frac = np.mod(n * al + be, np.longdouble(1.0))
    in_window = frac >= np.longdouble(1.0) - al
    return "".join("b" if w else "a" for w in in_window)


# ---------------------------------------------------------------------------
# twins


@dataclass(frozen=True)
class TwinReport:
    """Two disjoint occurrences of a word at an offset of prescribed parity.

    Positions are 1-based starts; ``offset = pos2 - pos1`` and its parity matches
    ``parity``.  Occurrences may be adjacent but never overlap.
    """

    parity: str
    pos1: int
    pos2: int
    offset: int

    def to_json(self) -> dict:
        return {"parity": self.parity, "pos1": self.pos1, "pos2": self.pos2, "offset": self.offset}

    def check(self, y: str, x: str) -> bool:
        """Re-validate this report against the words it was derived from."""
        m = len(y)
        if self.offset != self.pos2 - self.pos1 or self.offset < m:
            return False
        if self.offset % 2 != (1 if self.parity == "odd" else 0):
            return False
        a, b = self.pos1 - 1, self.pos2 - 1
        return x[a : a + m] == y and x[b : b + m] == y


def occurrences(y: str, x: str) -> list[int]:
    """All (possibly overlapping) 1-based start positions of ``y`` inside ``x``."""
    if not y:
        raise ValueError("the searched word must be nonempty")
    starts = []
    i = x.find(y)
    while i != -1:
        starts.append(i + 1)
        i = x.find(y, i + 1)
    return starts


def find_twin(y: str, x: str, parity: str) -> TwinReport | None:
    """Search exhaustively for a pair of disjoint occurrences of ``y`` in ``x``.

    The two start positions must differ by an odd (resp. even) amount of at least
    ``len(y)``, so the occurrences are disjoint though possibly adjacent.  Returns
    the witness with the smallest first position (then smallest second), or None.
    """
    if parity not in ("odd", "even"):
        raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")
    starts = occurrences(y, x)
    by_parity = ([p for p in starts if p % 2 == 0], [p for p in starts if p % 2 == 1])
    m = len(y)
    want_opposite = parity == "odd"
    for p in starts:
        cls = by_parity[(p % 2) ^ 1] if want_opposite else by_parity[p % 2]
        i = bisect_left(cls, p + m)
        if i < len(cls):
            return TwinReport(parity, p, cls[i], cls[i] - p)
    return None


def twin_witness(s: int, k: int, max_len: int = DEFAULT_WORD_CAP) -> str:
    """A short word in which the iterate C(k) occurs twice at odd offset.

    When |C(k)| is odd the witness is C(k)C(k); otherwise (which forces s odd, so
    |C(k-1)| is odd) it is C(k)C(k-1)C(k).  Either way the witness is a factor of
    C(k+3) and no longer than 3|C(k)|.
    """
    _check_s(s)
    if k < 1:
        raise ValueError("twin witnesses are defined for k >= 1")
    lk = word_length(s, k)
    if lk % 2 == 1:
        total = 2 * lk
    else:
        total = 2 * lk + word_length(s, k - 1)
    if total > max_len:
        raise ResourceLimitError(f"twin witness needs {total} letters, cap is {max_len}")
    ck = iterate(s, k, max_len=max_len)
    if lk % 2 == 1:
        return ck + ck
    return ck + iterate(s, k - 1, max_len=max_len) + ck


def parity_pattern(s: int, n_max: int) -> list[int]:
    """Lengths of C(0), ..., C(n_max - 1) reduced mod 2.

    All ones when s is even; the period-3 pattern 1, 0, 1 repeated when s is odd.
    """
    _check_s(s)
    if n_max < 1:
        raise ValueError("need at least one iterate")
    prev, cur = 1, 1
    out = []
    for _ in range(n_max):
        out.append(cur % 2)
        prev, cur = cur, (s * cur + prev) % 2
    return out


# ---------------------------------------------------------------------------
# empirical linear-recurrence constants


@dataclass(frozen=True)
class RecurrenceEstimate:
    """Empirical windowed-recurrence constant of a metallic-mean prefix.

    ``constant`` is the smallest K such that, inside the examined prefix, every
    factor of length l occurs in every window of length ceil(K * l), for all
    l up to the requested maximum.  ``window_by_length`` records the minimal
    window per factor length.
    """

    constant: float
    prefix_length: int
    window_by_length: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        return {
            "constant": self.constant,
            "prefix_length": self.prefix_length,
            "window_by_length": [list(t) for t in self.window_by_length],
        }


def _min_window(text: str, factor: str) -> int:
    """Smallest W such that every length-W window of ``text`` contains ``factor``."""
    m = len(text)
    ell = len(factor)
    starts = occurrences(factor, text)
    w = max(starts[0] + ell - 1, m - starts[-1] + 1)
    for i in range(1, len(starts)):
        w = max(w, starts[i] - starts[i - 1] + ell - 1)
    return w


def recurrence_constant_estimate(
    s: int, max_len: int, prefix_len: int | None = None, word_cap: int = DEFAULT_WORD_CAP
) -> RecurrenceEstimate:
    """Estimate the linear-recurrence constant of u_s by exhaustive window scan.

    Always >= 1 (a factor must fit inside its window).  The estimate is computed
    on a finite prefix and includes its boundary windows, so it is an empirical
    quantity, not a proof about the infinite sequence.
    """
    _check_s(s)
    if max_len < 1:
        raise ValueError("max_len must be positive")
    if prefix_len is None:
        prefix_len = max(4096, 64 * max_len)
    if prefix_len > word_cap:
        raise ResourceLimitError(f"prefix of {prefix_len} letters exceeds the cap of {word_cap}")
    text = prefix(s, prefix_len, max_len=word_cap)
    table = []
    best = 1.0
    for ell in range(1, max_len + 1):
        factors = sorted({text[i : i + ell] for i in range(len(text) - ell + 1)})
        w = max(_min_window(text, f) for f in factors)
        table.append((ell, w))
        best = max(best, w / ell)
    return RecurrenceEstimate(best, len(text), tuple(table))


def twin_constant_bound(s: int, recurrence_constant: float) -> float:
    """Upper bound 3(s+1)K^2 for the odd-twin recurrence constant.

    If every factor pair with K|y| < |x| forces y to occur in x, then whenever
    3(s+1)K^2 |y| < |x| the word y occurs twice in x at odd offset.
    """
    _check_s(s)
    return 3.0 * (s + 1) * recurrence_constant**2
