"""Cylinder measures and semi-measures over codeword sequences.

All objects here assign nonnegative masses to finite words w = w_1...w_m
whose letters are codewords.  A *measure* satisfies the two exact
identities mu(w) = sum_a mu(wa) and sum_{|w|=j} mu(w) = 1 per layer; a
*semi-measure* only the inequalities mu(w) >= sum_a mu(wa), mu(empty) <= 1.

Constructions provided:

* products of a potential W along a word (the Keane condition
  sum_a W(ax) = 1 makes the products a measure; a merely subnormalized
  potential yields a semi-measure),
* pushforwards of the uniform base measure under a monotone block map
  (multiplicative on concatenations; encoders and nearest-codeword
  decoders are the canonical examples),
* finite mixtures with coefficient sum at most one,
* normalized depth-1 products over one member of a code family,
* Markov-type measures from the positive left eigenvector of a depth-2
  weight matrix, found by power iteration.

Renormalization: a strict semi-measure on letters can be raised to the
temperature where its letter masses sum to one; the resulting exponents
define a Keane potential again.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _product
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .codes import Code, Word
from .errors import ConvergenceError, PreconditionError
from .thermo import CodeFamily, Weights, critical_beta

Letter = Word
WordSeq = tuple[Letter, ...]

_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CylinderAssignment:
    """Masses for every word of length <= depth over a fixed letter set.

    values maps words (tuples of letters, including the empty word) to
    nonnegative numbers; exact Fractions are kept wherever a construction
    allows it.
    """

    letters: tuple[Letter, ...]
    depth: int
    values: Mapping[WordSeq, float | Fraction]

    def __post_init__(self):
        if self.depth < 1:
            raise PreconditionError("depth must be >= 1")
        if not self.letters:
            raise PreconditionError("letter set must be nonempty")
        if () not in self.values:
            raise ValueError("the empty word must carry the total mass")

    def value(self, w: WordSeq):
        return self.values[tuple(map(tuple, w))]

    def layer(self, j: int) -> dict[WordSeq, float | Fraction]:
        return {w: v for w, v in self.values.items() if len(w) == j}

    def layer_mass(self, j: int):
        return sum(self.layer(j).values())


def _all_words(letters: Sequence[Letter], depth: int):
    yield ()
    for m in range(1, depth + 1):
        yield from _product(letters, repeat=m)


@dataclass(frozen=True, eq=False)
class Potential:
    """A depth-1 or depth-2 potential W at inverse temperature beta.

    Depth 1: W(x) = exp(-beta * lam1[x_1]) depends on the first letter.
    Depth 2: W(x) = exp(-beta * lam2[(x_1, x_2)]) depends on the first two.
    The Keane condition asks sum_a W(a x) = 1 for every tail x, i.e. unit
    letter sums (depth 1) or unit column sums of the weight matrix
    W(a, b) = exp(-beta * lam2[(a, b)]) for every previous letter b.
    """

    letters: tuple[Letter, ...]
    beta: float
    lam1: Mapping[Letter, float] | None = None
    lam2: Mapping[tuple[Letter, Letter], float] | None = None

    def __post_init__(self):
        if (self.lam1 is None) == (self.lam2 is None):
            raise ValueError("exactly one of lam1, lam2 must be given")
        if not self.letters:
            raise PreconditionError("letter set must be nonempty")
        if self.lam1 is not None and set(self.lam1) != set(self.letters):
            raise ValueError("lam1 must cover exactly the letter set")
        if self.lam2 is not None:
            need = {(a, b) for a in self.letters for b in self.letters}
            if set(self.lam2) != need:
                raise ValueError("lam2 must cover every ordered letter pair")

    @property
    def depth(self) -> int:
        return 1 if self.lam1 is not None else 2

    def w1(self, a: Letter) -> float:
        return math.exp(-self.beta * self.lam1[a])

    def w2(self, a: Letter, b: Letter) -> float:
        """Weight of prepending a when the previous first letter is b."""
        return math.exp(-self.beta * self.lam2[(a, b)])

    def is_keane(self, tol: float = _TOL) -> bool:
        if self.depth == 1:
            return abs(sum(self.w1(a) for a in self.letters) - 1.0) <= tol
        return all(
            abs(sum(self.w2(a, b) for a in self.letters) - 1.0) <= tol
            for b in self.letters
        )

    @classmethod
    def depth1(cls, lam: Mapping[Letter, float], beta: float) -> "Potential":
        return cls(tuple(sorted(lam)), beta, lam1=dict(lam))

    @classmethod
    def depth2(cls, lam: Mapping[tuple[Letter, Letter], float], beta: float) -> "Potential":
        letters = tuple(sorted({a for a, _ in lam}))
        return cls(letters, beta, lam2=dict(lam))

    @classmethod
    def uniform(cls, code: Code, beta: float | None = None) -> "Potential":
        """lambda_a = n log q for every codeword; beta defaults to the rate k/n.

        At the default beta the letter weights are exactly 1/#C, so the
        Keane condition holds and the products recover the self-similar
        cylinder masses q**(-k m).
        """
        if beta is None:
            beta = code.k_real / code.n
        lam = code.n * math.log(code.q)
        return cls(tuple(code.words), beta, lam1={w: lam for w in code.words})

    @classmethod
    def from_letter_masses(cls, masses: Mapping[Letter, float], beta: float = 1.0) -> "Potential":
        """Potential with W(a) = masses[a]**beta, via lambda_a = -log masses[a]."""
        if any(not (0 < v < 1) for v in masses.values()):
            raise PreconditionError("letter masses must lie strictly between 0 and 1")
        return cls.depth1({a: -math.log(v) for a, v in masses.items()}, beta)

    @classmethod
    def from_matrix(cls, letters: Sequence[Letter], matrix: np.ndarray,
                    beta: float = 1.0) -> "Potential":
        """Depth-2 potential with W(a, b) = matrix[i, j] for letters[i], letters[j]."""
        letters = tuple(letters)
        mat = np.asarray(matrix, dtype=float)
        if mat.shape != (len(letters), len(letters)):
            raise PreconditionError("matrix shape must match the letter count")
        if np.any(mat <= 0):
            raise PreconditionError("matrix entries must be strictly positive")
        lam = {
            (a, b): -math.log(mat[i, j]) / beta
            for i, a in enumerate(letters)
            for j, b in enumerate(letters)
        }
        return cls(letters, beta, lam2=lam)


def radon_nikodym_constant(code: Code) -> Fraction:
    """Derivative of the self-similar measure under prepending one letter: q**-k."""
    return Fraction(1, code.size)


def cylinder_products(pot: Potential, x0: Sequence[Letter] | None,
                      depth: int) -> CylinderAssignment:
    """Raw potential products mu(w_1..w_j) = W(w_1 x0) W(w_2 w_1 x0) ... .

    No normalization is assumed: for a Keane potential this is a measure,
    for a subnormalized one a semi-measure.  Only the first seed letter of
    x0 ever enters, and only for depth-2 potentials.
    """
    if depth < 1:
        raise PreconditionError("depth must be >= 1")
    values: dict[WordSeq, float | Fraction] = {(): 1.0}
    if pot.depth == 1:
        letter_w = {a: pot.w1(a) for a in pot.letters}
        for w in _all_words(pot.letters, depth):
            if w:
                prod = 1.0
                for a in w:
                    prod *= letter_w[a]
                values[w] = prod
    else:
        if not x0:
            raise PreconditionError("a depth-2 potential needs a seed word x0")
        seed = tuple(x0[0])
        if seed not in set(pot.letters):
            raise PreconditionError("seed letter must belong to the letter set")
        for w in _all_words(pot.letters, depth):
            if w:
                prod = pot.w2(w[0], seed)
                for prev, cur in zip(w, w[1:]):
                    prod *= pot.w2(cur, prev)
                values[w] = prod
    return CylinderAssignment(tuple(pot.letters), depth, values)


def measure_from_potential(pot: Potential, x0: Sequence[Letter] | None,
                           depth: int) -> CylinderAssignment:
    """Cylinder measure of a Keane potential; every layer has total mass one."""
    if not pot.is_keane():
        raise PreconditionError("potential does not satisfy the Keane condition")
    return cylinder_products(pot, x0, depth)


def check_semimeasure(mu: CylinderAssignment, tol: float = _TOL) -> str:
    """Classify an assignment as "measure", "semimeasure", or "neither".

    A measure has mu(w) = sum_a mu(wa) at every internal word and total
    mass one; a semi-measure allows mass to leak (>=) and total mass at
    most one.
    """
    mass = float(mu.values[()])
    exact = abs(mass - 1.0) <= tol
    sub = mass <= 1.0 + tol
    for m in range(mu.depth):
        for w, v in mu.layer(m).items():
            children = sum(float(mu.values[w + (a,)]) for a in mu.letters)
            v = float(v)
            if abs(v - children) > tol * max(1.0, abs(v)):
                exact = False
            if children > v + tol * max(1.0, abs(v)):
                sub = False
    if exact and sub:
        return "measure"
    if sub:
        return "semimeasure"
    return "neither"


@dataclass(frozen=True, eq=False)
class MonotoneMap:
    """A block map extended multiplicatively to concatenations.

    table sends source blocks (words of length block_len over a source
    alphabet of size source_q) to target letters; unmapped blocks carry no
    mass.  letters fixes the target letter set, so letters without
    preimages are kept with mass zero.
    """

    source_q: int
    block_len: int
    table: Mapping[Word, Letter]
    letters: tuple[Letter, ...]

    def __post_init__(self):
        if self.source_q < 2 or self.block_len < 1:
            raise PreconditionError("need source_q >= 2 and block_len >= 1")
        lset = set(self.letters)
        for block, letter in self.table.items():
            if len(block) != self.block_len:
                raise ValueError(f"block {block} does not have length {self.block_len}")
            if any(not (0 <= a < self.source_q) for a in block):
                raise ValueError(f"block {block} has digits outside the source alphabet")
            if letter not in lset:
                raise ValueError(f"target letter {letter} outside the letter set")

    @classmethod
    def encoder(cls, code: Code) -> "MonotoneMap":
        """Bijection from the q**[k] source blocks onto a code with #C = q**[k]."""
        b = code.k_floor
        if code.size != code.q ** b or b < 1:
            raise PreconditionError("encoder needs #C to be a positive power of q")
        blocks = sorted(_product(range(code.q), repeat=b))
        return cls(code.q, b, dict(zip(blocks, code.words)), tuple(code.words))

    @classmethod
    def decoder(cls, code: Code, budget: int = 10 ** 6) -> "MonotoneMap":
        """Nearest-codeword map on all length-n source words.

        Ties go to the lexicographically smallest codeword.  For a perfect
        code the cells partition the cube evenly and the pushforward
        coincides with the encoder's.
        """
        total = code.q ** code.n
        if total > budget:
            raise PreconditionError(f"decoder table would need {total} entries")
        table = {}
        for block in _product(range(code.q), repeat=code.n):
            best = min(code.words,
                       key=lambda w: (sum(x != y for x, y in zip(block, w)), w))
            table[block] = best
        return cls(code.q, code.n, table, tuple(code.words))

    def letter_masses(self) -> dict[Letter, Fraction]:
        """Pushforward mass of each letter: #preimage / q**block_len, exact."""
        counts = {a: 0 for a in self.letters}
        for _, letter in self.table.items():
            counts[letter] += 1
        denom = self.source_q ** self.block_len
        return {a: Fraction(c, denom) for a, c in counts.items()}


def pushforward_semimeasure(f: MonotoneMap, depth: int) -> CylinderAssignment:
    """Pushforward of the uniform base measure under a monotone map.

    mu(u_1...u_j) is the product of the letter masses #f^-1(u_i)/q**b, so
    multiplicativity mu(uv) = mu(u)mu(v) holds exactly (values are kept as
    Fractions).  A partial table leaves a mass deficit and the result is a
    strict semi-measure.
    """
    if depth < 1:
        raise PreconditionError("depth must be >= 1")
    p = f.letter_masses()
    values: dict[WordSeq, float | Fraction] = {(): Fraction(1)}
    for w in _all_words(f.letters, depth):
        if w:
            prod = Fraction(1)
            for a in w:
                prod *= p[a]
            values[w] = prod
    return CylinderAssignment(tuple(f.letters), depth, values)


def mixture_semimeasure(components: Sequence[CylinderAssignment],
                        alphas: Sequence[float | Fraction]) -> CylinderAssignment:
    """Pointwise combination sum_i alpha_i mu_i with positive alphas, sum <= 1."""
    if not components:
        raise PreconditionError("at least one component is required")
    if len(alphas) != len(components):
        raise PreconditionError("one coefficient per component is required")
    if any(a <= 0 for a in alphas):
        raise PreconditionError("coefficients must be positive")
    if sum(alphas) > 1 + _TOL:
        raise PreconditionError("coefficients must sum to at most one")
    first = components[0]
    for c in components[1:]:
        if c.letters != first.letters or c.depth != first.depth:
            raise PreconditionError("components must share letter set and depth")
    exact = all(isinstance(a, (Fraction, int)) for a in alphas) and all(
        all(isinstance(v, (Fraction, int)) for v in c.values.values()) for c in components
    )
    conv = (lambda x: x) if exact else float
    values = {
        w: sum(conv(a) * conv(c.values[w]) for a, c in zip(alphas, components))
        for w in first.values
    }
    return CylinderAssignment(first.letters, first.depth, values)


def critical_beta_semimeasure(mu_letters: Mapping[Letter, float],
                              tol: float = _TOL) -> float:
    """The beta_c in (0, 1] with sum_a mu(a)**beta_c = 1.

    mu must be a strict-or-equal letter semi-measure: values in (0, 1) with
    sum at most one.  Raising to the power beta_c renormalizes the letters
    into a Keane system; when the masses already sum to one, beta_c = 1.
    A single letter degenerates to beta_c = 0.
    """
    if not mu_letters:
        raise PreconditionError("at least one letter is required")
    vals = list(mu_letters.values())
    if any(not (0 < v < 1) for v in vals):
        raise PreconditionError("letter masses must lie strictly between 0 and 1")
    if sum(vals) > 1 + tol:
        raise PreconditionError("letter masses must sum to at most one")
    if len(vals) == 1:
        return 0.0
    if abs(sum(vals) - 1.0) <= tol:
        return 1.0
    beta = critical_beta(Weights({a: -math.log(v) for a, v in mu_letters.items()}), tol=tol)
    if beta > 1 + tol:
        raise ConvergenceError("critical beta escaped (0, 1]")
    return min(beta, 1.0)


def ruelle_apply(pot: Potential, f: Mapping[WordSeq, float]) -> dict[WordSeq, float]:
    """One transfer-operator step (Rf)(x) = sum_a W(ax) f(ax) on cylinder functions.

    f must be constant on cylinders of one fixed depth m >= 1 (keys are the
    length-m words); the result is constant on cylinders of depth m-1 for a
    depth-1 potential and max(m-1, 1) for a depth-2 potential.  A Keane
    potential fixes the constant function 1; a subnormalized one rescales
    it by its letter sum, exposing the leading eigenvalue.
    """
    if not f:
        raise PreconditionError("empty cylinder function")
    lengths = {len(w) for w in f}
    if len(lengths) != 1:
        raise PreconditionError("cylinder function keys must share one depth")
    m = lengths.pop()
    if m < 1:
        raise PreconditionError("depth-0 input: nothing to sum over")
    out_depth = m - 1 if pot.depth == 1 else max(m - 1, 1)
    out: dict[WordSeq, float] = {}
    for w in _product(pot.letters, repeat=out_depth):
        total = 0.0
        for a in pot.letters:
            key = ((a,) + w)[:m]
            weight = pot.w1(a) if pot.depth == 1 else pot.w2(a, w[0] if w else key[1])
            total += weight * f[key]
        out[w] = total
    return out


def induced_multifractal_uniform(family: CodeFamily, r: int,
                                 weights: Mapping[Letter, float], beta: float,
                                 depth: int = 4) -> CylinderAssignment:
    """Normalized depth-1 products on family member r.

    mu(w_1..w_m) = Z_r**-m * prod_j exp(-beta * lambda_{w_j}) with
    Z_r = sum over the member's letters; always a probability measure.
    """
    member = family.codes[r]
    missing = [w for w in member.words if w not in weights]
    if missing:
        raise PreconditionError(f"weights missing for {len(missing)} letters")
    wvals = {a: math.exp(-beta * weights[a]) for a in member.words}
    z = sum(wvals.values())
    if z <= 0:
        raise PreconditionError("letter sum must be positive")
    pot = Potential.depth1({a: -math.log(wvals[a] / z) for a in member.words}, 1.0)
    return cylinder_products(pot, None, depth)


def perron_frobenius(matrix: np.ndarray, tol: float = 1e-12,
                     max_iter: int = 10 ** 4) -> tuple[float, np.ndarray]:
    """Spectral radius and positive left eigenvector of a positive matrix.

    Power iteration on the transpose, L1-normalized; returns (rho, f) with
    sum(f) = 1, f > 0 and max-norm residual |M^T f - rho f| below tol.
    Non-convergence raises, never returns silently.
    """
    mat = np.asarray(matrix, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise PreconditionError("a square matrix is required")
    if np.any(mat <= 0):
        raise PreconditionError("all entries must be strictly positive")
    mt = mat.T
    f = np.full(mat.shape[0], 1.0 / mat.shape[0])
    rho = 0.0
    for _ in range(max_iter):
        nxt = mt @ f
        rho = float(nxt.sum())
        nxt /= rho
        if float(np.max(np.abs(mt @ nxt - rho * nxt))) < tol:
            f = nxt
            break
        f = nxt
    else:
        raise ConvergenceError(f"power iteration residual above {tol:.1e} "
                               f"after {max_iter} iterations")
    if np.any(f <= 0):
        raise ConvergenceError("eigenvector lost positivity")
    return rho, f


def induced_multifractal_pf(code: Code, pot: Potential, x0: Letter,
                            depth: int = 4, tol: float = 1e-12) -> CylinderAssignment:
    """Markov-type measure from the eigenvector of a depth-2 weight matrix.

    With W(a, b) the prepending weights, f the positive left eigenvector
    (sum_a W(a,b) f_a = rho f_b) and rho the spectral radius,

        mu(w_1..w_m) = W(w_m, w_{m-1}) ... W(w_1, x0) * f(w_m) / (rho**m f(x0)),

    a probability measure on cylinders over the code's words.
    """
    if pot.depth != 2:
        raise PreconditionError("a depth-2 potential is required")
    letters = tuple(code.words)
    if tuple(pot.letters) != letters:
        raise PreconditionError("potential letters must be the code's words")
    x0 = tuple(x0)
    if x0 not in code.word_set:
        raise PreconditionError("x0 must be a codeword")
    size = len(letters)
    mat = np.array([[pot.w2(a, b) for b in letters] for a in letters])
    rho, fvec = perron_frobenius(mat, tol=tol)
    fmap = {a: float(fvec[i]) for i, a in enumerate(letters)}
    values: dict[WordSeq, float | Fraction] = {(): 1.0}
    for w in _all_words(letters, depth):
        if w:
            prod = pot.w2(w[0], x0)
            for prev, cur in zip(w, w[1:]):
                prod *= pot.w2(cur, prev)
            values[w] = prod * fmap[w[-1]] / (rho ** len(w) * fmap[x0])
    return CylinderAssignment(letters, depth, values)
