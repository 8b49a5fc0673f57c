"""Self-similar fractal dimensions attached to a code.

Stacking infinitely many codewords as rows of an (infinity x n) digit
matrix and reading columns as base-q expansions embeds a code C into the
unit n-cube as a self-similar set built from #C boxes of side 1/q per
level.  Every dimension formula here therefore reduces to counting:

* the full set has dimension log_q(#C) / n = k/n,
* a coordinate subspace pi fixing n-l positions carries the set of rows
  staying in pi, of dimension l/n,
* their intersection counts the codewords matching pi's fixed digits.

No point of any fractal is ever materialized; operations work on counts,
and exactness is preserved through :class:`LogRatio` cross-power tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .codes import Code, LogRatio
from .errors import ConvergenceError, PreconditionError


@dataclass(frozen=True)
class CoordinateSubspace:
    """An l-dimensional coordinate subspace of the n-cube.

    fixed maps positions (1-based) to the digit each fixed coordinate must
    carry; the remaining l = n - len(fixed) coordinates are free.
    """

    n: int
    fixed: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ambient length n must be >= 1")
        positions = [p for p, _ in self.fixed]
        if len(set(positions)) != len(positions):
            raise ValueError("fixed positions must be distinct")
        for p, a in self.fixed:
            if not (1 <= p <= self.n):
                raise ValueError(f"fixed position {p} outside 1..{self.n}")
            if a < 0:
                raise ValueError("fixed digits must be nonnegative")
        if list(self.fixed) != sorted(self.fixed):
            raise ValueError("fixed pairs must be sorted; use CoordinateSubspace.make")

    @classmethod
    def make(cls, n: int, fixed: Mapping[int, int]) -> "CoordinateSubspace":
        return cls(n, tuple(sorted(fixed.items())))

    @classmethod
    def whole_space(cls, n: int) -> "CoordinateSubspace":
        return cls(n, ())

    @property
    def ell(self) -> int:
        return self.n - len(self.fixed)


def subspace_count(code: Code, pi: CoordinateSubspace) -> int:
    """Number of codewords whose fixed coordinates match pi."""
    if pi.n != code.n:
        raise PreconditionError(f"subspace ambient length {pi.n} != code length {code.n}")
    for _, a in pi.fixed:
        if a >= code.q:
            raise PreconditionError(f"fixed digit {a} outside [0, {code.q})")
    return sum(all(w[p - 1] == a for p, a in pi.fixed) for w in code.words)


@dataclass(frozen=True)
class FractalDimensions:
    """Dimension report for a (code, subspace) pair.

    dim_sc_cap_pi and dim_sc_cap_spi are None when the intersection is
    empty; a single matching codeword gives the value 0.0 (a point), which
    is deliberately distinct from emptiness.
    """

    dim_sc: float
    dim_spi: float
    dim_sc_cap_pi: float | None
    dim_sc_cap_spi: float | None


def fractal_dimensions(code: Code, pi: CoordinateSubspace) -> FractalDimensions:
    """All four dimensions attached to a code and a coordinate subspace.

    dim_sc = k/n, dim_spi = l/n, dim_sc_cap_pi = log_q(count)/l and
    dim_sc_cap_spi = log_q(count)/n, where count is the number of
    codewords matching pi.  The two intersection dimensions share their
    numerator, so dim_sc_cap_pi * l == dim_sc_cap_spi * n.
    """
    count = subspace_count(code, pi)
    if pi.ell == 0:
        raise PreconditionError("the /l dimension needs a subspace with l >= 1")
    logq = math.log(code.q)
    dim_sc = math.log(code.size) / (code.n * logq)
    dim_spi = pi.ell / pi.n
    if count == 0:
        return FractalDimensions(dim_sc, dim_spi, None, None)
    num = math.log(count) / logq
    return FractalDimensions(dim_sc, dim_spi, num / pi.ell, num / code.n)


def subspace_cells(code: Code, positions: Sequence[int]) -> dict[tuple[int, ...], int]:
    """Occupied cells of the scan at a fixed-position set.

    Groups codewords by their digits at the given (1-based) positions and
    returns assignment -> count; assignments with count 0 are simply
    absent.  Fixing `positions` to any occupied assignment defines a
    subspace meeting the code in exactly that many words.
    """
    idx = [p - 1 for p in positions]
    cells: dict[tuple[int, ...], int] = {}
    for w in code.words:
        key = tuple(w[i] for i in idx)
        cells[key] = cells.get(key, 0) + 1
    return cells


def threshold_scan(code: Code) -> dict[int, int]:
    """max over subspaces pi with l free coordinates of #(C intersect pi), per l.

    Implemented by grouping codewords over every set of n-l fixed
    positions, never enumerating digit assignments.  The minimum distance
    is the exact threshold: the maximum is 1 below it and at least 2 from
    it on, which is verified before returning.
    """
    if code.size < 2:
        raise PreconditionError("threshold scan needs at least two words")
    out: dict[int, int] = {}
    for ell in range(code.n + 1):
        best = 0
        for subset in combinations(range(1, code.n + 1), code.n - ell):
            best = max(best, max(subspace_cells(code, subset).values()))
        out[ell] = best
    d = code.d
    for ell, m in out.items():
        if ell < d and m > 1:
            raise AssertionError(f"threshold violated: l={ell} < d={d} but max={m}")
        if ell >= d and m < 2:
            raise AssertionError(f"threshold violated: l={ell} >= d={d} but max={m}")
    return out


def box_count(code: Code, depth: int) -> int:
    """Number of side-q**-depth boxes meeting the code fractal: (#C)**depth."""
    if depth < 1:
        raise PreconditionError("depth must be >= 1")
    return code.size ** depth


def box_count_estimate(code: Code, depth: int) -> LogRatio:
    """log_q(box count) / (depth * n) as an exact LogRatio.

    Self-similarity makes the estimate depth-independent and equal to the
    rate k/n; the equality is exact under cross-power comparison.
    """
    return LogRatio(code.q, box_count(code, depth), depth * code.n)


def similarity_dimension(weights: Iterable[float], tol: float = 1e-12,
                         max_iter: int = 200) -> float:
    """The s >= 0 solving sum_i w_i**s = 1 for contraction ratios w_i in (0,1).

    The map s -> sum w**s is strictly decreasing, so bisection applies; a
    single weight gives s = 0.  For uniform weights q**-n repeated q**k
    times the solution is k/n, the box dimension of the associated fractal.
    """
    ws = list(weights)
    if not ws:
        raise PreconditionError("at least one weight is required")
    if any(not (0 < w < 1) for w in ws):
        raise PreconditionError("weights must lie strictly between 0 and 1")
    if len(ws) == 1:
        return 0.0

    def f(s: float) -> float:
        return sum(w ** s for w in ws) - 1.0

    lo, hi = 0.0, 1.0
    grow = 0
    while f(hi) > 0:
        hi *= 2.0
        grow += 1
        if grow > 200:
            raise ConvergenceError("no bracket: weights do not define a dimension")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    s = 0.5 * (lo + hi)
    if abs(f(s)) > tol:
        raise ConvergenceError(f"bisection residual {f(s):.3e} above {tol:.1e}")
    return s
