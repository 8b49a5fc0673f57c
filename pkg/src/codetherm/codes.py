"""Block codes over a finite digit alphabet, with exact parameter arithmetic.

A word is a tuple of integer digits in [0, q).  A code is a nonempty set of
distinct equal-length words over such an alphabet; arbitrary alphabets are
assumed to have been mapped to digits at ingestion (any bijection preserves
every parameter).  Parameters follow the usual [n, k, d]_q naming: n is the
word length, k = log_q(#C) the real information length, [k] its integer
part, d the minimum pairwise Hamming distance (defined only when #C >= 2).

Rates k/n are irrational in general, so ordering decisions never go through
floats: they are carried out on big integers via cross powers, packaged in
:class:`LogRatio`.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product as _product
from typing import Iterable, Mapping

from .errors import PreconditionError

Word = tuple[int, ...]

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    i = 2
    while i * i <= q:
        if q % i == 0:
            return False
        i += 1
    return True


class LogRatio:
    """The exact value log_q(arg) / scale for integers arg >= 1, scale >= 1.

    Comparisons between two values with the same base q reduce to comparing
    arg1**scale2 with arg2**scale1, and comparison against a nonnegative
    rational p/r reduces to comparing arg**r with q**(p*scale).  Both are
    big-integer tests, exact for any magnitude.
    """

    __slots__ = ("q", "arg", "scale")

    def __init__(self, q: int, arg: int, scale: int):
        if q < 2 or arg < 1 or scale < 1:
            raise ValueError("LogRatio needs q >= 2, arg >= 1, scale >= 1")
        self.q = q
        self.arg = arg
        self.scale = scale

    def __repr__(self) -> str:
        return f"LogRatio(log_{self.q}({self.arg})/{self.scale})"

    def __float__(self) -> float:
        return math.log(self.arg) / (self.scale * math.log(self.q))

    def _cross(self, other) -> tuple[int, int]:
        if isinstance(other, LogRatio):
            if other.q != self.q:
                raise ValueError("cannot compare LogRatio values with different bases")
            return self.arg ** other.scale, other.arg ** self.scale
        frac = Fraction(other)
        if frac < 0:
            # log values here are always >= 0
            return 1, 0
        return self.arg ** frac.denominator, self.q ** (frac.numerator * self.scale)

    def __eq__(self, other) -> bool:
        try:
            a, b = self._cross(other)
        except TypeError:
            return NotImplemented
        return a == b

    def __lt__(self, other) -> bool:
        a, b = self._cross(other)
        return a < b

    def __le__(self, other) -> bool:
        a, b = self._cross(other)
        return a <= b

    def __gt__(self, other) -> bool:
        a, b = self._cross(other)
        return a > b

    def __ge__(self, other) -> bool:
        a, b = self._cross(other)
        return a >= b

    __hash__ = None  # exact equality classes are not cheaply canonical


@dataclass(frozen=True)
class Code:
    """An [n, k, d]_q block code: distinct words of equal length n over digits < q."""

    q: int
    n: int
    words: tuple[Word, ...]

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("alphabet size q must be >= 2")
        if self.n < 1:
            raise ValueError("word length n must be >= 1")
        if not self.words:
            raise ValueError("a code must contain at least one word")
        if list(self.words) != sorted(set(self.words)):
            raise ValueError("words must be sorted and distinct; use Code.from_words")
        for w in self.words:
            if len(w) != self.n:
                raise ValueError(f"word {w} does not have length {self.n}")
            if any(not (0 <= a < self.q) for a in w):
                raise ValueError(f"word {w} has digits outside [0, {self.q})")

    @classmethod
    def from_words(cls, q: int, words: Iterable[Word], n: int | None = None) -> "Code":
        ws = sorted({tuple(w) for w in words})
        if not ws:
            raise ValueError("a code must contain at least one word")
        return cls(q, len(ws[0]) if n is None else n, tuple(ws))

    def __repr__(self) -> str:
        return f"Code(q={self.q}, n={self.n}, size={len(self.words)})"

    @property
    def size(self) -> int:
        return len(self.words)

    @cached_property
    def word_set(self) -> frozenset[Word]:
        return frozenset(self.words)

    @cached_property
    def d(self) -> int | None:
        """Minimum pairwise Hamming distance; None for a singleton code."""
        if self.size < 2:
            return None
        return min_distance(self)

    @cached_property
    def k_floor(self) -> int:
        k, p = 0, 1
        while p * self.q <= self.size:
            p *= self.q
            k += 1
        return k

    @property
    def k_real(self) -> float:
        return math.log(self.size) / math.log(self.q)

    @property
    def rate(self) -> LogRatio:
        """Exact transmission rate k/n = log_q(size)/n."""
        return LogRatio(self.q, self.size, self.n)

    @property
    def delta(self) -> Fraction | None:
        return None if self.d is None else Fraction(self.d, self.n)


def hamming_distance(a: Word, b: Word) -> int:
    """Number of positions at which two equal-length words differ."""
    if len(a) != len(b):
        raise PreconditionError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(x != y for x, y in zip(a, b))


def min_distance(code: Code) -> int:
    """Exhaustive O(#C^2 n) minimum distance over unordered distinct pairs."""
    if code.size < 2:
        raise PreconditionError("minimum distance needs at least two words")
    ws = code.words
    best = code.n
    for i in range(len(ws)):
        wi = ws[i]
        for j in range(i + 1, len(ws)):
            dist = hamming_distance(wi, ws[j])
            if dist < best:
                best = dist
                if best == 1:
                    return 1
    return best


@dataclass(frozen=True)
class CodeParams:
    n: int
    size: int
    k_real: float
    k_floor: int
    d: int | None
    R: float
    delta: Fraction | None


def code_params(code: Code) -> CodeParams:
    """Full parameter record; d and delta are None for singleton codes."""
    d = code.d
    return CodeParams(
        n=code.n,
        size=code.size,
        k_real=code.k_real,
        k_floor=code.k_floor,
        d=d,
        R=code.k_real / code.n,
        delta=None if d is None else Fraction(d, code.n),
    )


def compare_rates(c1: Code, c2: Code) -> int:
    """-1, 0, or +1 comparing k1/n1 with k2/n2 by big-integer cross powers."""
    if c1.q != c2.q:
        raise ValueError("rate comparison requires a common alphabet size")
    a = c1.size ** c2.n
    b = c2.size ** c1.n
    return (a > b) - (a < b)


def satisfies_singleton(code: Code) -> bool:
    """Exact big-integer check of k_real <= n - d + 1, i.e. #C <= q**(n-d+1)."""
    if code.d is None:
        return True
    return code.size <= code.q ** (code.n - code.d + 1)


@dataclass(frozen=True)
class GeneratorMatrix:
    """Full-rank k x n matrix over a prime field F_q, rows spanning a linear code."""

    q: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not is_prime(self.q):
            raise PreconditionError(f"q={self.q} is not prime; linear codes need a prime field")
        if not self.rows:
            raise ValueError("generator matrix needs at least one row")
        n = len(self.rows[0])
        for r in self.rows:
            if len(r) != n:
                raise ValueError("generator rows must have equal length")
            if any(not (0 <= a < self.q) for a in r):
                raise ValueError("generator entries must be reduced mod q")
        if _rank_mod_q(self.rows, self.q) != len(self.rows):
            raise PreconditionError("generator rows are linearly dependent over F_q")

    @property
    def k_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0])


def _rank_mod_q(rows: Iterable[tuple[int, ...]], q: int) -> int:
    mat = [list(r) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col] % q != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = pow(mat[rank][col], q - 2, q)
        mat[rank] = [(x * inv) % q for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] % q != 0:
                c = mat[r][col] % q
                mat[r] = [(x - c * p) % q for x, p in zip(mat[r], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def make_linear_code(g: GeneratorMatrix) -> Code:
    """Enumerate the row space of g: exactly q**k codewords."""
    q, k, n = g.q, g.k_rows, g.n_cols
    words = []
    for coeffs in _product(range(q), repeat=k):
        w = [0] * n
        for c, row in zip(coeffs, g.rows):
            if c:
                w = [(x + c * y) % q for x, y in zip(w, row)]
        words.append(tuple(w))
    code = Code.from_words(q, words)
    if code.size != q ** k:
        raise AssertionError("row space enumeration lost words; rows were dependent")
    return code


def make_reed_solomon(q: int, k: int) -> Code:
    """Evaluation code of all polynomials of degree < k at every point of F_q.

    Parameters are [q, k, q - k + 1]_q; the minimum distance meets the
    Singleton bound with equality.
    """
    if not is_prime(q):
        raise PreconditionError(f"q={q} is not prime")
    if not (1 <= k <= q):
        raise PreconditionError(f"k={k} out of range 1..{q}")
    words = []
    for coeffs in _product(range(q), repeat=k):
        word = []
        for x in range(q):
            acc, xp = 0, 1
            for c in coeffs:
                acc = (acc + c * xp) % q
                xp = (xp * x) % q
            word.append(acc)
        words.append(tuple(word))
    return Code.from_words(q, words)


def random_code(q: int, n: int, size: int, seed: int) -> Code:
    """Uniformly sampled distinct words; deterministic for a given seed."""
    total = q ** n
    if not (1 <= size <= total):
        raise PreconditionError(f"size {size} out of range 1..q^n={total}")
    rng = random.Random(seed)
    if size == total:
        idxs: Iterable[int] = range(total)
    else:
        idxs = rng.sample(range(total), size)
    return Code.from_words(q, (_int_to_word(i, q, n) for i in idxs), n)


def _int_to_word(value: int, q: int, n: int) -> Word:
    digits = []
    for _ in range(n):
        value, r = divmod(value, q)
        digits.append(r)
    return tuple(reversed(digits))


def word_to_str(w: Word) -> str:
    return "".join(_DIGITS[a] for a in w)


def word_from_str(s: str, q: int) -> Word:
    w = tuple(_DIGITS.index(ch) for ch in s.lower())
    if any(a >= q for a in w):
        raise ValueError(f"digit out of range for q={q} in {s!r}")
    return w


def code_to_json(code: Code) -> dict:
    if code.q > len(_DIGITS):
        raise ValueError(f"JSON serialization supports q <= {len(_DIGITS)}")
    return {"q": code.q, "n": code.n, "words": [word_to_str(w) for w in code.words]}


def code_from_json(data: Mapping) -> Code:
    q, n = int(data["q"]), int(data["n"])
    words = [word_from_str(s, q) for s in data["words"]]
    if any(len(w) != n for w in words):
        raise ValueError("word length inconsistent with declared n")
    return Code.from_words(q, words, n)


def save_code(code: Code, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(code_to_json(code), fh, sort_keys=True)
        fh.write("\n")


def load_code(path: str) -> Code:
    with open(path, "r", encoding="utf-8") as fh:
        return code_from_json(json.load(fh))
