"""Exact geometry of code points in the (R, delta) unit square.

Every code yields a point P = (R, delta) with R = [k]/n by default (the
integer-part convention keeps coordinates rational) and delta = d/n.  The
plane is drawn with delta horizontal and R vertical.  Through any point P
two lines are drawn: one through the corner (R=1, delta=0) and one through
the corner (R=0, delta=1).  They cut the square into four controlling
cones; the lower cone of P is the region on the origin side of both lines,
boundary segments included.  Points reachable from P by spoiling fill its
lower cone in the limit, so the upper boundary of a union of lower cones is
an empirical inner approximation to the asymptotic bound.

All side tests are exact rational cross products; floats appear only when
an SVG is emitted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .codes import Code
from .errors import PreconditionError

# Corners of the square, in (delta, R) coordinates.
_C_LEFT = (Fraction(0), Fraction(1))   # the point R=1, delta=0
_C_RIGHT = (Fraction(1), Fraction(0))  # the point R=0, delta=1


@dataclass(frozen=True)
class CodePoint:
    """A point (R, delta) of the unit square with exact rational coordinates."""

    R: Fraction
    delta: Fraction
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "R", Fraction(self.R))
        object.__setattr__(self, "delta", Fraction(self.delta))
        if not (0 <= self.R <= 1):
            raise ValueError(f"R={self.R} outside [0, 1]")
        if not (0 < self.delta <= 1):
            raise ValueError(f"delta={self.delta} outside (0, 1]")

    @property
    def xy(self) -> tuple[Fraction, Fraction]:
        """(delta, R) pair: delta is the horizontal coordinate."""
        return (self.delta, self.R)


def code_point(code: Code, use_floor: bool = True) -> CodePoint:
    """The plane point of a code, tagged with its parameter triple.

    With use_floor (the default) R is the rational [k]/n; otherwise the real
    rate k/n is rounded into a Fraction, which is only meant for display.
    """
    if code.d is None:
        raise PreconditionError("a singleton code has no relative distance")
    if use_floor:
        r = Fraction(code.k_floor, code.n)
    else:
        r = Fraction(code.k_real / code.n).limit_denominator(10 ** 12)
    tag = f"[{code.n}:{code.k_floor}:{code.d}]_{code.q}"  # colon-separated: tags travel in CSV
    return CodePoint(r, Fraction(code.d, code.n), tag)


def in_domain(p: CodePoint) -> bool:
    """True when the point lies strictly below the anti-diagonal R + delta = 1."""
    return p.R + p.delta < 1


def _cross(ax, ay, bx, by, qx, qy) -> Fraction:
    return (bx - ax) * (qy - ay) - (by - ay) * (qx - ax)


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def _line_test(p: tuple[Fraction, Fraction], corner: tuple[Fraction, Fraction],
               qxy: tuple[Fraction, Fraction]) -> int:
    """+1 if q is strictly on the origin side of line(p, corner), 0 on it, -1 beyond.

    When the line passes through the origin the test degenerates to segment
    membership: only points on the line count as inside.
    """
    px, py = p
    cx, cy = corner
    s_q = _sign(_cross(px, py, cx, cy, qxy[0], qxy[1]))
    s_o = _sign(_cross(px, py, cx, cy, Fraction(0), Fraction(0)))
    if s_o == 0:
        return 0 if s_q == 0 else -1
    return s_q * s_o


def _cone_signs(p: CodePoint, q: CodePoint) -> tuple[int, int]:
    """Origin-side signs of q against the two cone lines of p.

    The first component refers to the line through p and (R=1, delta=0),
    the second to the line through p and (R=0, delta=1).  A corner point p
    has a degenerate cone containing only itself.
    """
    pxy, qxy = p.xy, q.xy
    if pxy == _C_LEFT or pxy == _C_RIGHT:
        return (0, 0) if qxy == pxy else (-1, -1)
    return (_line_test(pxy, _C_LEFT, qxy), _line_test(pxy, _C_RIGHT, qxy))


def _absorbs(p: CodePoint, q: CodePoint) -> bool:
    """Unchecked lower-cone membership, defined for any p in the square."""
    a, b = _cone_signs(p, q)
    return a >= 0 and b >= 0


def lower_cone_contains(p: CodePoint, q: CodePoint) -> bool:
    """True iff q lies in the closed lower cone of p; p must satisfy R + delta < 1."""
    if not in_domain(p):
        raise PreconditionError(f"cone apex {p.xy} outside the domain R + delta < 1")
    return _absorbs(p, q)


def cone_partition(p: CodePoint, q: CodePoint) -> frozenset[str]:
    """Classify q against the four cones of an interior apex p.

    Returns the set of cones whose closure contains q; the set has more
    than one element exactly when q sits on a boundary segment.
    """
    if not (p.R > 0 and p.delta > 0 and in_domain(p)):
        raise PreconditionError(f"cone apex {p.xy} is not interior to the domain")
    a, b = _cone_signs(p, q)
    out = set()
    if a >= 0 and b >= 0:
        out.add("lower")
    if a <= 0 and b <= 0:
        out.add("upper")
    if a >= 0 and b <= 0:
        out.add("left")
    if a <= 0 and b >= 0:
        out.add("right")
    return frozenset(out)


@dataclass(frozen=True)
class Envelope:
    """Surviving vertices of a union of lower cones, delta increasing, R decreasing."""

    vertices: tuple[CodePoint, ...]

    def __post_init__(self):
        vs = self.vertices
        if not vs:
            raise ValueError("an envelope needs at least one vertex")
        for a, b in zip(vs, vs[1:]):
            if not (a.delta < b.delta and a.R > b.R):
                raise ValueError("envelope vertices must be strictly monotone")


def empirical_envelope(points: Iterable[CodePoint]) -> Envelope:
    """Upper boundary of the union of lower cones of the given points.

    A point inside another point's lower cone is discarded; the survivors,
    ordered by delta, are the vertices.  The joining boundary arcs are
    produced by :func:`envelope_polyline`.
    """
    pts = sorted(set(points), key=lambda p: p.xy)
    if not pts:
        raise PreconditionError("envelope of an empty point set")
    survivors = [
        p for p in pts
        if not any(q is not p and q.xy != p.xy and _absorbs(q, p) for q in pts)
    ]
    survivors.sort(key=lambda p: p.delta)
    return Envelope(tuple(survivors))


def _cone_lines(p: CodePoint):
    """The two cone lines of a non-corner p as (slope, intercept) in (x=delta, y=R).

    The first passes through the corner (R=1, delta=0), the second through
    (R=0, delta=1); both exist because code points always have delta > 0.
    """
    x, y = p.xy
    if (x, y) in (_C_LEFT, _C_RIGHT):
        raise ValueError("corner points have degenerate cones")
    left = ((y - 1) / x, Fraction(1))
    m = (0 - y) / (1 - x)
    right = (m, y - m * x)
    return left, right


def _boundary_height(p: CodePoint, x: Fraction) -> Fraction | None:
    """Height of the lower-cone boundary of p above delta = x, or None for corners."""
    if p.xy in (_C_LEFT, _C_RIGHT):
        return None
    left, right = _cone_lines(p)
    ml, bl = left
    mr, br = right
    return min(ml * x + bl, mr * x + br)


def envelope_height(env: Envelope, delta: Fraction) -> Fraction:
    """Exact height of the envelope curve above a given delta.

    Negative values mean the cone union does not reach that column.  Corner
    vertices contribute only their own point.
    """
    x = Fraction(delta)
    best = None
    for p in env.vertices:
        h = _boundary_height(p, x)
        if h is None:
            h = p.R if x == p.delta else None
        if h is not None and (best is None or h > best):
            best = h
    if best is None:
        raise PreconditionError("envelope height undefined for this point set")
    return best


def envelope_polyline(env: Envelope) -> list[tuple[Fraction, Fraction]]:
    """Piecewise-linear boundary through the vertices, as exact (delta, R) pairs.

    Between consecutive vertices the curve follows the outgoing cone ray of
    the left vertex down to its crossing with the incoming ray of the right
    vertex; the first and last rays are extended to the square's edge.
    """
    vs = env.vertices

    def eval_line(line, x):
        m, b = line
        return m * x + b

    def out_line(p):
        if p.xy == _C_RIGHT:
            return None
        left, right = _cone_lines(p)
        # active (lower) line just right of p: compare values at x = 1
        return left if eval_line(left, Fraction(1)) <= eval_line(right, Fraction(1)) else right

    def in_line(p):
        if p.xy == _C_RIGHT:
            return (Fraction(0), Fraction(0))  # bottom edge
        left, right = _cone_lines(p)
        return left if eval_line(left, Fraction(0)) <= eval_line(right, Fraction(0)) else right

    pts: list[tuple[Fraction, Fraction]] = []
    first = vs[0]
    line0 = in_line(first)
    if line0 is not None and first.delta > 0:
        y0 = eval_line(line0, Fraction(0))
        pts.append((Fraction(0), min(y0, Fraction(1))))
    pts.append(first.xy)
    for a, b in zip(vs, vs[1:]):
        la, lb = out_line(a), in_line(b)
        ma, ba = la
        mb, bb = lb
        if ma == mb:
            pts.append(b.xy)
            continue
        x = (bb - ba) / (ma - mb)
        pts.append((x, eval_line(la, x)))
        pts.append(b.xy)
    last = vs[-1]
    line1 = out_line(last)
    if line1 is not None:
        m, b = line1
        if m != 0:
            x_int = -b / m
            if x_int <= 1:
                pts.append((x_int, Fraction(0)))
            else:
                pts.append((Fraction(1), eval_line(line1, Fraction(1))))
        else:
            pts.append((Fraction(1), b))
    return pts


def classical_bounds(q: int, delta: Fraction) -> tuple[Fraction, Fraction]:
    """(singleton_R, plotkin_R) overlay lines at a given delta, clamped below at 0.

    singleton_R = 1 - delta + 1/(q+1) is the line carrying the classical
    maximum-distance-separable family; plotkin_R = 1 - delta - delta/(q-1)
    is an upper bound for the asymptotic rate function, which vanishes for
    delta >= (q-1)/q.
    """
    if q < 2:
        raise ValueError("q must be >= 2")
    delta = Fraction(delta)
    if not (0 <= delta <= 1):
        raise PreconditionError("delta outside [0, 1]")
    singleton = Fraction(1) - delta + Fraction(1, q + 1)
    plotkin = Fraction(1) - delta - delta / (q - 1)
    zero = Fraction(0)
    return (max(singleton, zero), max(plotkin, zero))


def multiplicity_probe(code: Code, a_max: int, budget: int = 2000,
                       known_codes: Sequence[Code] = ()) -> list[int]:
    """Scaling factors a <= a_max for which an [a*n, a*[k], a*d]_q witness was found.

    Each reported a carries an oracle-verified witness: either the code
    itself (a = 1), an a-fold repetition when [k] = 0, or a code spoiled
    down from one of known_codes with dominating parameters.  A missing a
    means "not found within budget", never "nonexistent".
    """
    from .spoiling import numeric_spoil, apply_spoiling, Insert

    if code.d is None:
        raise PreconditionError("probe needs a code with a defined minimum distance")
    if a_max < 1:
        raise PreconditionError("a_max must be >= 1")
    n, k0, d0, q = code.n, code.k_floor, code.d, code.q
    found: set[int] = set()
    ops_left = budget

    def verified(c: Code, a: int) -> bool:
        return c.n == a * n and c.k_floor == a * k0 and c.d == a * d0

    for a in range(1, a_max + 1):
        if a == 1:
            found.add(1)
            continue
        if k0 == 0:
            rep = Code.from_words(q, (w * a for w in code.words))
            if verified(rep, a):
                found.add(a)
                continue
        target_n, target_k, target_d = a * n, a * k0, a * d0
        for start in known_codes:
            if start.q != q or start.d is None:
                continue
            cur = start
            ok = True
            try:
                while cur.d is not None and cur.d > target_d and ops_left > 0:
                    cur = numeric_spoil(cur, "II")
                    ops_left -= 1
                while cur.k_floor > target_k and ops_left > 0:
                    cur = numeric_spoil(cur, "III")
                    ops_left -= 1
                while cur.n < target_n and ops_left > 0:
                    cur = apply_spoiling(cur, Insert(1, 0))
                    ops_left -= 1
            except PreconditionError:
                ok = False
            if ok and verified(cur, a):
                found.add(a)
                break
        if ops_left <= 0:
            break
    return sorted(found)


# ---------------------------------------------------------------------------
# SVG emission: the only place where exact rationals become floats.

def _fmt(x: float) -> str:
    return f"{x:.6g}"


def render_plane_svg(points: Sequence[CodePoint], q: int,
                     envelope: Envelope | None = None,
                     size: int = 640, margin: int = 48,
                     header: str = "") -> str:
    """Deterministic SVG of a point cloud with classical overlay lines.

    delta runs horizontally, R vertically (upward).  The singleton and
    plotkin overlay lines for the given q are always drawn; an envelope's
    polyline is drawn when supplied.
    """
    plot = size - 2 * margin

    def sx(x: Fraction | float) -> float:
        return margin + float(x) * plot

    def sy(y: Fraction | float) -> float:
        return margin + (1.0 - float(y)) * plot

    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    if header:
        out.append(f"<!-- {header} -->")
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">'
    )
    out.append(f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>')
    # axes with quarter ticks
    out.append(
        f'<line x1="{_fmt(sx(0))}" y1="{_fmt(sy(0))}" x2="{_fmt(sx(1))}" y2="{_fmt(sy(0))}" '
        'stroke="black" stroke-width="1"/>'
    )
    out.append(
        f'<line x1="{_fmt(sx(0))}" y1="{_fmt(sy(0))}" x2="{_fmt(sx(0))}" y2="{_fmt(sy(1))}" '
        'stroke="black" stroke-width="1"/>'
    )
    for i in range(5):
        t = i / 4
        out.append(f'<text x="{_fmt(sx(t))}" y="{_fmt(sy(0) + 18)}" font-size="11" '
                   f'text-anchor="middle">{t:g}</text>')
        out.append(f'<text x="{_fmt(sx(0) - 8)}" y="{_fmt(sy(t) + 4)}" font-size="11" '
                   f'text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{_fmt(sx(0.5))}" y="{_fmt(sy(0) + 36)}" font-size="12" '
               'text-anchor="middle">delta</text>')
    out.append(f'<text x="{_fmt(sx(0) - 32)}" y="{_fmt(sy(0.5))}" font-size="12" '
               'text-anchor="middle">R</text>')

    # overlay lines, clipped to the square
    sing0, _ = classical_bounds(q, Fraction(1, q + 1))
    out.append(
        f'<line x1="{_fmt(sx(Fraction(1, q + 1)))}" y1="{_fmt(sy(1))}" '
        f'x2="{_fmt(sx(1))}" y2="{_fmt(sy(Fraction(1, q + 1)))}" '
        'stroke="#888888" stroke-width="1" stroke-dasharray="6 3"/>'
    )
    out.append(
        f'<line x1="{_fmt(sx(0))}" y1="{_fmt(sy(1))}" '
        f'x2="{_fmt(sx(Fraction(q - 1, q)))}" y2="{_fmt(sy(0))}" '
        'stroke="#bb4444" stroke-width="1" stroke-dasharray="3 3"/>'
    )

    if envelope is not None:
        coords = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in envelope_polyline(envelope))
        out.append(f'<polyline points="{coords}" fill="none" stroke="#2255cc" stroke-width="1.5"/>')

    for p in sorted(points, key=lambda p: p.xy):
        out.append(f'<circle cx="{_fmt(sx(p.delta))}" cy="{_fmt(sy(p.R))}" r="2.5" '
                   'fill="#222222" fill-opacity="0.7"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
