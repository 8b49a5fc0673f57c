"""Partition functions, equilibrium state values, and critical temperatures.

A code C with #C = q**k and word length n drives a quantum statistical
system whose Hamiltonian weighs a concatenation of m codewords by the sum
of per-letter energies lambda_a (uniformly n*log q).  Its partition
function is the geometric series

    Z_C(beta) = sum_m q**((R - beta) * n * m) = 1 / (1 - q**((R-beta)n)),

convergent exactly for beta > R = k/n and with a simple pole at beta = R,
the critical inverse temperature.  The equilibrium state at any beta is
diagonal on pairs of concatenations, with value q**(-beta*n*m) on a pair of
equal words of length m; the normalization sum_a q**(-beta*n) = 1 holds
only at the critical point, where the state values coincide with the
self-similar measure of the code fractal.

The same machinery runs over families of codes (one letter set per member)
and over tensor products of systems, whose partition function is the
product of the factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .codes import Code, Word, compare_rates
from .errors import ConvergenceError, PreconditionError
from .fractal import CoordinateSubspace, subspace_count

# Classification guard: exponents this close to the pole count as divergent,
# so that beta computed as k/n in floats lands on the divergent side.
_POLE_GUARD = 1e-12


@dataclass(frozen=True, eq=False)
class Weights:
    """Positive energies lambda_a per letter, defining a time evolution."""

    lam: Mapping[Word, float]

    def __post_init__(self):
        if not self.lam:
            raise PreconditionError("weights must be nonempty")
        if any(v <= 0 for v in self.lam.values()):
            raise PreconditionError("all energies must be positive")

    @classmethod
    def uniform(cls, code: Code) -> "Weights":
        lam = code.n * math.log(code.q)
        return cls({w: lam for w in code.words})

    @classmethod
    def family_union(cls, family: "CodeFamily") -> "Weights":
        """lambda_a = n_r * log q for the smallest family member containing a."""
        lam: dict[Word, float] = {}
        for member in family.codes:
            for w in member.words:
                lam.setdefault(w, member.n * math.log(member.q))
        return cls(lam)


def critical_beta(w: Weights, tol: float = 1e-12, max_iter: int = 200) -> float:
    """The unique beta with sum_a exp(-beta * lambda_a) = 1.

    The sum is strictly decreasing in beta; a single weight degenerates to
    beta = 0.  Bisection brackets [0, B] with B doubled until the sum drops
    below 1.
    """
    lams = list(w.lam.values())
    if len(lams) == 1:
        return 0.0

    def total(beta: float) -> float:
        return sum(math.exp(-beta * lam) for lam in lams)

    hi = 1.0
    grow = 0
    while total(hi) > 1.0:
        hi *= 2.0
        grow += 1
        if grow > 200:
            raise ConvergenceError("critical temperature bracket did not close")
    lo = 0.0
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if total(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    beta = 0.5 * (lo + hi)
    if abs(total(beta) - 1.0) > tol:
        raise ConvergenceError(f"critical beta residual above {tol:.1e}")
    return beta


@dataclass(frozen=True)
class PartitionValue:
    """A partition function evaluation; value None means the series diverges."""

    beta: float
    value: float | None
    terms_used: int | None = None
    closed_form_used: bool = True
    tail_bound: float | None = None

    @property
    def divergent(self) -> bool:
        return self.value is None


def _log_ratio_exponent(code: Code, beta: float) -> float:
    """(R - beta) * n * log q, the log of the geometric ratio."""
    return math.log(code.size) - beta * code.n * math.log(code.q)


def partition_function(code: Code, beta: float, mode: str = "closed",
                       terms: int = 200) -> PartitionValue:
    """Z_C(beta) in closed form or as a truncated series with a tail bound.

    Closed mode returns 1/(1 - q**((R-beta)n)) for beta > R and a divergent
    value otherwise; betas within ~1e-12 of the pole in log scale are
    classified divergent so the float boundary lands on the honest side.
    Series mode always returns the partial sum of `terms`+1 terms and, when
    the ratio is below one, the geometric bound on the discarded tail.
    """
    if beta <= 0:
        raise PreconditionError("beta must be positive")
    e = _log_ratio_exponent(code, beta)
    if mode == "closed":
        if e >= -_POLE_GUARD:
            return PartitionValue(beta, None)
        return PartitionValue(beta, 1.0 / (1.0 - math.exp(e)))
    if mode == "series":
        x = math.exp(e)
        total, power = 0.0, 1.0
        for _ in range(terms + 1):
            total += power
            power *= x
        tail = power / (1.0 - x) if x < 1.0 else None
        return PartitionValue(beta, total, terms_used=terms,
                              closed_form_used=False, tail_bound=tail)
    raise ValueError(f"unknown mode {mode!r}; expected 'closed' or 'series'")


def kms_state_value(code: Code, beta: float, w: Sequence[Word],
                    w_prime: Sequence[Word]) -> float:
    """Equilibrium state value on a pair of codeword concatenations.

    Zero off the diagonal; on a diagonal pair of length m the value is
    q**(-beta*n*m), which at beta = R equals q**(-k*m), the self-similar
    measure of the depth-m cylinder.
    """
    for word in (*w, *w_prime):
        if tuple(word) not in code.word_set:
            raise PreconditionError(f"letter {word} is not a codeword")
    if tuple(map(tuple, w)) != tuple(map(tuple, w_prime)):
        return 0.0
    m = len(w)
    return math.exp(-beta * code.n * m * math.log(code.q))


@dataclass(frozen=True)
class ProjectionReport:
    """State value and normalized trace of a coordinate-subspace projection.

    phi_value = vn_dim = #(C intersect pi) / #C exactly; the dimension
    checks reconstruct the intersection fractal dimensions and are None for
    an empty intersection.
    """

    phi_value: Fraction
    vn_dim: Fraction
    dim_check_pi: float | None
    dim_check_spi: float | None


def projection_state_and_vn_dim(code: Code, pi: CoordinateSubspace) -> ProjectionReport:
    """Trace of the projection onto pi-compatible letters, with dimension checks.

    The normalized trace is q**-k * #(C intersect pi); feeding it back
    through (k + log_q(trace)) / l and / n reproduces the intersection
    dimensions computed by the fractal module.
    """
    count = subspace_count(code, pi)
    vn = Fraction(count, code.size)
    if count == 0:
        return ProjectionReport(vn, vn, None, None)
    logq = math.log(code.q)
    k_real = math.log(code.size) / logq
    num = k_real + math.log(count / code.size) / logq  # equals log_q(count)
    dim_pi = num / pi.ell if pi.ell > 0 else None
    return ProjectionReport(vn, vn, dim_pi, num / code.n)


def product_partition(systems: Sequence[tuple[Code, float]]) -> float | None:
    """Partition function of a tensor product: the product of closed forms.

    Returns None (divergent) as soon as any factor diverges, i.e. any
    beta_j <= R_j.
    """
    if not systems:
        raise PreconditionError("product of an empty system list")
    total = 1.0
    for code, beta in systems:
        z = partition_function(code, beta)
        if z.divergent:
            return None
        total *= z.value
    return total


def product_grid(codes: Sequence[Code], beta_axes: Sequence[Sequence[float]],
                 ) -> Iterator[tuple[tuple[float, ...], float | None]]:
    """Scan the N-variable partition function over a grid, cell by cell."""
    if len(codes) != len(beta_axes):
        raise PreconditionError("one beta axis per code is required")

    def rec(prefix: tuple[float, ...], idx: int) -> Iterator[tuple[tuple[float, ...], float | None]]:
        if idx == len(codes):
            yield prefix, product_partition(list(zip(codes, prefix)))
            return
        for beta in beta_axes[idx]:
            yield from rec(prefix + (beta,), idx + 1)

    yield from rec((), 0)


@dataclass(frozen=True, eq=False)
class CodeFamily:
    """An ordered family of codes over one alphabet, e.g. approximating a limit point."""

    codes: tuple[Code, ...]

    def __post_init__(self):
        if not self.codes:
            raise PreconditionError("a family needs at least one code")
        q = self.codes[0].q
        if any(c.q != q for c in self.codes):
            raise PreconditionError("family members must share the alphabet size")

    @property
    def q(self) -> int:
        return self.codes[0].q

    @cached_property
    def rate_monotone(self) -> bool:
        """k_r / n_r nondecreasing, decided by exact cross-power comparison."""
        return all(compare_rates(a, b) <= 0 for a, b in zip(self.codes, self.codes[1:]))

    @cached_property
    def delta_monotone(self) -> bool:
        """d_r / n_r nondecreasing, exact rational comparison."""
        deltas = [c.delta for c in self.codes]
        if any(d is None for d in deltas):
            raise PreconditionError("every member needs a defined minimum distance")
        return all(a <= b for a, b in zip(deltas, deltas[1:]))

    @cached_property
    def sup_rate(self) -> float:
        return max(c.k_real / c.n for c in self.codes)


@dataclass(frozen=True)
class FamilyZeta:
    """Partial sum of the family zeta function with a convergence verdict.

    classification is "convergent" when a geometric majorant with ratio
    below one certifies the tail (then tail_bound is that majorant's tail),
    "divergent" when the terms grow, and "unclassified" otherwise.
    """

    beta: float
    partial_sum: float
    terms_used: int
    classification: str
    tail_bound: float | None = None


def family_zeta(family: CodeFamily, beta: float, terms: int) -> FamilyZeta:
    """sum_{r <= terms} q**(k_r - beta * n_r) over the family, classified.

    With R_hat = sup k_r/n_r and strictly increasing lengths, the term
    ratio is bounded by q**((R_hat - beta) * min length gap); below one it
    certifies convergence of the full series.
    """
    if terms < 1:
        raise PreconditionError("at least one term is required")
    members = family.codes[:terms]
    logq = math.log(family.q)
    ts = [math.exp(math.log(c.size) - beta * c.n * logq) for c in members]
    total = sum(ts)
    r_hat = family.sup_rate
    gaps = [b.n - a.n for a, b in zip(family.codes, family.codes[1:])]
    classification = "unclassified"
    tail = None
    if gaps and min(gaps) > 0:
        ratio = math.exp((r_hat - beta) * min(gaps) * logq)
        if ratio < 1.0:
            classification = "convergent"
            tail = ts[-1] * ratio / (1.0 - ratio)
        elif len(ts) >= 2 and ts[-1] > ts[0]:
            classification = "divergent"
    elif len(ts) >= 2 and ts[-1] > ts[0]:
        classification = "divergent"
    return FamilyZeta(beta, total, len(members), classification, tail)


@dataclass(frozen=True)
class LambdaReport:
    """Letter-sum Lambda(beta) and the geometric value 1/(1 - Lambda) when finite."""

    lam_sum: float
    z_value: float | None


def lambda_series(w: Weights, beta: float) -> LambdaReport:
    """Lambda(beta) = sum_a exp(-beta * lambda_a) and its geometric resummation.

    Lambda equals 1 exactly at the critical beta of the weight system; the
    resummed value is reported only while Lambda < 1.
    """
    lam = sum(math.exp(-beta * v) for v in w.lam.values())
    z = 1.0 / (1.0 - lam) if lam < 1.0 - _POLE_GUARD else None
    return LambdaReport(lam, z)


@dataclass(frozen=True)
class LanguageReport:
    """Word-count profile of the language of codeword concatenations.

    structure[N] counts words of total digit length N (q**(k*m) when N is
    m blocks, else 0); g_value is the generating function at the requested
    argument (None outside the radius q**-R); entropy is the rate k/n.
    """

    structure: Mapping[int, int]
    g_value: float | None
    entropy: float
    radius: float


def language_generating(code: Code, t: float | None = None, beta: float | None = None,
                        max_length: int | None = None) -> LanguageReport:
    """Structure counts, generating-function value, and entropy of the language.

    The generating function sums size**m * t**(n*m), i.e. 1/(1 - size*t**n)
    inside the radius; at t = q**-beta it coincides with the partition
    function, which the caller can select by passing beta instead of t.
    """
    if (t is None) == (beta is None):
        raise PreconditionError("pass exactly one of t or beta")
    if beta is not None:
        t = math.exp(-beta * math.log(code.q))
    cap = 3 * code.n if max_length is None else max_length
    structure = {}
    for total_len in range(1, cap + 1):
        if total_len % code.n == 0:
            structure[total_len] = code.size ** (total_len // code.n)
        else:
            structure[total_len] = 0
    entropy = code.k_real / code.n
    radius = math.exp(-entropy * math.log(code.q))
    g = None
    if t == 0:
        g = 1.0
    else:
        e = math.log(code.size) + code.n * math.log(abs(t))
        if e < -_POLE_GUARD:
            g = 1.0 / (1.0 - code.size * t ** code.n)
    return LanguageReport(structure, g, entropy, radius)
