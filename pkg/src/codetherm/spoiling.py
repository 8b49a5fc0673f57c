"""The three spoiling operations and their numeric parameter contracts.

Spoiling worsens a code in controlled steps.  With positions counted from 1:

* Insert(i, f) lengthens every word by writing the digit f(x) at position i;
  a constant f keeps parameters [n+1, k, d].
* Delete(i) projects words onto the remaining coordinates, merging images
  that collide (set semantics).  If every minimum-distance pair agrees at
  position i the distance is kept, otherwise it drops by one.
* Restrict(a, i) keeps the words carrying digit a at position i.  The digit
  classes at any position partition the code, so the largest class always
  has at least #C / q words.

numeric_spoil packages the three parameter moves used to sweep out lower
cones: kind I gives [n+1, k, d], kind II gives [n-1, k, d-1] (it needs
d >= 2, otherwise the projection would merge a closest pair), and kind III
gives [n-1, k', d] with q**([k]-1) <= #C' < #C, by restricting to a largest
digit class, deleting the now-constant coordinate, and repairing the
distance with further kind II / kind I passes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .codes import Code, Word
from .errors import PreconditionError
from .plane import CodePoint, code_point


@dataclass(frozen=True, eq=False)
class Insert:
    """Insert the digit f(x) at position pos (1..n+1) into every word x."""

    pos: int
    f: int | Mapping[Word, int] | Callable[[Word], int]


@dataclass(frozen=True, eq=False)
class Delete:
    """Delete position pos (1..n) from every word; colliding images merge."""

    pos: int


@dataclass(frozen=True, eq=False)
class Restrict:
    """Keep the words whose digit at position pos equals digit."""

    digit: int
    pos: int


SpoilOp = Insert | Delete | Restrict


def _letter_for(code: Code, f, word: Word) -> int:
    if isinstance(f, int):
        a = f
    elif callable(f):
        a = f(word)
    else:
        try:
            a = f[word]
        except KeyError:
            raise PreconditionError(f"insertion table does not cover word {word}")
    if not (0 <= a < code.q):
        raise PreconditionError(f"inserted digit {a} outside [0, {code.q})")
    return a


def apply_spoiling(code: Code, op: SpoilOp) -> Code:
    """Apply one spoiling operation, returning a new code."""
    if isinstance(op, Insert):
        if not (1 <= op.pos <= code.n + 1):
            raise PreconditionError(f"insert position {op.pos} outside 1..{code.n + 1}")
        i = op.pos - 1
        words = [w[:i] + (_letter_for(code, op.f, w),) + w[i:] for w in code.words]
        return Code.from_words(code.q, words, code.n + 1)
    if isinstance(op, Delete):
        if not (1 <= op.pos <= code.n):
            raise PreconditionError(f"delete position {op.pos} outside 1..{code.n}")
        if code.n == 1:
            raise PreconditionError("cannot delete the only coordinate")
        i = op.pos - 1
        return Code.from_words(code.q, (w[:i] + w[i + 1:] for w in code.words), code.n - 1)
    if isinstance(op, Restrict):
        if not (1 <= op.pos <= code.n):
            raise PreconditionError(f"restrict position {op.pos} outside 1..{code.n}")
        if not (0 <= op.digit < code.q):
            raise PreconditionError(f"restrict digit {op.digit} outside [0, {code.q})")
        i = op.pos - 1
        kept = [w for w in code.words if w[i] == op.digit]
        if not kept:
            raise PreconditionError(
                f"no word carries digit {op.digit} at position {op.pos}")
        return Code.from_words(code.q, kept, code.n)
    raise TypeError(f"unknown spoiling operation {op!r}")


def letter_class_sizes(code: Code, pos: int) -> dict[int, int]:
    """Sizes of the digit classes at a position; they always sum to #C."""
    if not (1 <= pos <= code.n):
        raise PreconditionError(f"position {pos} outside 1..{code.n}")
    sizes: dict[int, int] = {}
    for w in code.words:
        sizes[w[pos - 1]] = sizes.get(w[pos - 1], 0) + 1
    return sizes


def _min_pairs(code: Code):
    d = code.d
    ws = code.words
    for i in range(len(ws)):
        for j in range(i + 1, len(ws)):
            if sum(x != y for x, y in zip(ws[i], ws[j])) == d:
                yield ws[i], ws[j]


def kind_ii_coordinate(code: Code) -> int:
    """Smallest position at which some minimum-distance pair differs."""
    if code.size < 2:
        raise PreconditionError("needs at least two words")
    best = None
    for x, y in _min_pairs(code):
        i = next(k for k in range(code.n) if x[k] != y[k]) + 1
        if best is None or i < best:
            best = i
            if best == 1:
                break
    return best


def delete_branch(code: Code, pos: int) -> str:
    """Which parameter branch a Delete at pos fires.

    "distance-kept" when every minimum-distance pair agrees at pos (the
    projection keeps d); "distance-dropped" otherwise (d drops by one,
    provided no closest pair collides).
    """
    if code.size < 2:
        raise PreconditionError("needs at least two words")
    if not (1 <= pos <= code.n):
        raise PreconditionError(f"position {pos} outside 1..{code.n}")
    i = pos - 1
    for x, y in _min_pairs(code):
        if x[i] != y[i]:
            return "distance-dropped"
    return "distance-kept"


def _strip_injective_distance_preserving(code: Code) -> Code:
    """Greedy maximal projection that keeps the code injective with the same d.

    Deletes coordinates one at a time while both the word count and the
    minimum distance survive; at most n trials, each trial scanning the
    remaining positions once.
    """
    cur = code
    for _ in range(code.n):
        if cur.n <= 2:
            break
        stripped = None
        for pos in range(1, cur.n + 1):
            cand = apply_spoiling(cur, Delete(pos))
            if cand.size == cur.size and cand.d == cur.d:
                stripped = cand
                break
        if stripped is None:
            break
        cur = stripped
    return cur


def numeric_spoil(code: Code, kind: str) -> Code:
    """One numeric spoiling step of kind "I", "II", or "III".

    I:   [n, k, d] -> [n+1, k, d]          (always applicable)
    II:  [n, k, d] -> [n-1, k, d-1]        (needs n > 1, #C >= 2, d >= 2)
    III: [n, k, d] -> [n-1, k', d]         (needs n > 1, #C > q), with
         q**([k]-1) <= #C' < #C.

    All choices are deterministic: kind I inserts the constant digit 0 at
    position 1; kind II deletes the smallest coordinate where a closest
    pair differs; kind III restricts at the smallest non-constant position,
    picking the smallest digit among the largest classes.
    """
    if kind == "I":
        return apply_spoiling(code, Insert(1, 0))
    if kind == "II":
        if code.n <= 1 or code.size < 2:
            raise PreconditionError("kind II needs n > 1 and at least two words")
        if code.d < 2:
            raise PreconditionError(
                "kind II needs d >= 2: with d = 1 the projection would merge a closest pair")
        return apply_spoiling(code, Delete(kind_ii_coordinate(code)))
    if kind == "III":
        if code.n <= 1 or code.size <= code.q:
            raise PreconditionError("kind III needs n > 1 and #C > q (k > 1)")
        target_n, target_d = code.n - 1, code.d
        cur = _strip_injective_distance_preserving(code)
        pos = next(p for p in range(1, cur.n + 1) if len(letter_class_sizes(cur, p)) >= 2)
        sizes = letter_class_sizes(cur, pos)
        biggest = max(sizes.values())
        digit = min(a for a, s in sizes.items() if s == biggest)
        cur = apply_spoiling(cur, Restrict(digit, pos))
        cur = apply_spoiling(cur, Delete(pos))
        while cur.d is not None and cur.d > target_d:
            cur = numeric_spoil(cur, "II")
        while cur.n < target_n:
            cur = apply_spoiling(cur, Insert(1, 0))
        return cur
    raise ValueError(f"unknown spoiling kind {kind!r}; expected 'I', 'II' or 'III'")


def spoil_descendants(code: Code, steps: int) -> frozenset[CodePoint]:
    """Code points of everything reachable by at most `steps` numeric spoils.

    Points use the rational coordinates ([k]/n, d/n) and are deduplicated
    exactly; spoiling branches whose preconditions fail are skipped.
    """
    if steps < 0:
        raise PreconditionError("steps must be >= 0")
    if code.size < 2:
        raise PreconditionError("descendant points need a code with two or more words")
    seen_codes = {(code.q, code.words)}
    frontier = [code]
    points = {code_point(code)}
    for _ in range(steps):
        nxt = []
        for c in frontier:
            for kind in ("I", "II", "III"):
                try:
                    child = numeric_spoil(c, kind)
                except PreconditionError:
                    continue
                key = (child.q, child.words)
                if key in seen_codes:
                    continue
                seen_codes.add(key)
                nxt.append(child)
                points.add(code_point(child))
        frontier = nxt
        if not frontier:
            break
    return frozenset(points)


def is_linear(code: Code) -> bool:
    """True when the word set is closed under coordinatewise subtraction mod q."""
    ws = code.word_set
    for x in ws:
        for y in ws:
            if tuple((a - b) % code.q for a, b in zip(x, y)) not in ws:
                return False
    return True
