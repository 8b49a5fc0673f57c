"""Command-line front end: reproducible experiments with CSV/JSON/SVG artifacts.

Every run is deterministic: a fixed config yields byte-identical output,
and every artifact starts with a header carrying the tool version and a
hash of the resolved config.  Exit codes: 0 success, 2 input error, 3
precondition failure, 4 numeric non-convergence.  Errors are reported as a
single JSON record on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import random
import sys
from fractions import Fraction

from . import __version__
from .codes import Code, code_from_json, code_params, random_code, make_reed_solomon, word_to_str
from .errors import ConvergenceError, PreconditionError
from .fractal import CoordinateSubspace, box_count_estimate, fractal_dimensions, threshold_scan
from .measures import Potential, measure_from_potential
from .plane import CodePoint, Envelope, code_point, empirical_envelope, render_plane_svg
from .spoiling import spoil_descendants
from .thermo import (CodeFamily, LambdaReport, Weights, family_zeta, lambda_series,
                     language_generating, partition_function, product_grid)

_OUTPUT_KEYS = {"out", "out_csv", "out_svg"}


def _config_hash(args: argparse.Namespace) -> str:
    payload = {k: v for k, v in sorted(vars(args).items())
               if k not in _OUTPUT_KEYS and not callable(v)}
    blob = json.dumps(payload, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _header(args: argparse.Namespace) -> str:
    return f"codetherm {__version__} config={_config_hash(args)}"


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit_json(payload: dict, args: argparse.Namespace, path: str | None) -> None:
    payload = {"meta": {"tool": f"codetherm {__version__}", "config": _config_hash(args)},
               **payload}
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", path)


def _load_code(path: str) -> Code:
    with open(path, "r", encoding="utf-8") as fh:
        return code_from_json(json.load(fh))


def _fmt_float(x: float) -> str:
    return f"{x:.15g}"


def _beta_grid(start: float, stop: float, step: float) -> list[float]:
    if step <= 0 or stop < start:
        raise PreconditionError("need step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 0.5)) + 1
    return [start + i * step for i in range(count)]


def _point_csv_rows(codes: list[Code]) -> list[str]:
    rows = []
    for c in codes:
        p = code_point(c)
        rows.append(",".join([
            str(c.n), str(c.size), str(c.d), str(c.q),
            str(p.R.numerator), str(p.R.denominator),
            str(p.delta.numerator), str(p.delta.denominator),
            p.provenance,
        ]))
    return rows


# ---------------------------------------------------------------------------
# subcommands

def _cmd_params(args) -> int:
    code = _load_code(args.code)
    p = code_params(code)
    payload = {
        "n": p.n, "size": p.size, "q": code.q,
        "k_real": p.k_real, "k_floor": p.k_floor,
        "d": p.d,
        "R": p.R,
        "R_floor": f"{p.k_floor}/{p.n}",
        "delta": None if p.delta is None else f"{p.delta.numerator}/{p.delta.denominator}",
        "singleton_ok": code.size <= code.q ** (code.n - (p.d or 1) + 1),
    }
    _emit_json(payload, args, args.out)
    return 0


def _cmd_spoil(args) -> int:
    code = _load_code(args.code)
    points = sorted(spoil_descendants(code, args.steps), key=lambda p: (p.delta, p.R))
    lines = [f"# {_header(args)}", "R_num,R_den,delta_num,delta_den,tag"]
    for p in points:
        lines.append(",".join([str(p.R.numerator), str(p.R.denominator),
                               str(p.delta.numerator), str(p.delta.denominator),
                               p.provenance]))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_cloud(args) -> int:
    codes: list[Code] = []
    if args.kind == "random":
        if args.seed is None:
            raise PreconditionError("random clouds need --seed")
        rng = random.Random(args.seed)
        for _ in range(args.count):
            n = rng.randint(2, args.n_max)
            size = rng.randint(2, min(args.q ** n, args.max_size))
            codes.append(random_code(args.q, n, size, rng.randrange(2 ** 30)))
    elif args.kind == "rs":
        codes = [make_reed_solomon(args.q, k) for k in range(1, args.q + 1)]
    else:
        raise PreconditionError(f"unknown cloud kind {args.kind!r}")
    lines = [f"# {_header(args)}", "n,size,d,q,R_num,R_den,delta_num,delta_den,tag"]
    lines += _point_csv_rows(codes)
    _emit("\n".join(lines) + "\n", args.out_csv)
    if args.out_svg:
        pts = [code_point(c) for c in codes]
        _emit(render_plane_svg(pts, args.q, header=_header(args)), args.out_svg)
    return 0


def _read_points_csv(path: str) -> list[CodePoint]:
    points = []
    with open(path, "r", encoding="utf-8") as fh:
        rows = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    if not rows:
        return []
    head = rows[0].split(",")
    try:
        idx = {name: head.index(name) for name in
               ("R_num", "R_den", "delta_num", "delta_den")}
    except ValueError:
        raise ValueError("point CSV must have R_num,R_den,delta_num,delta_den columns")
    tag_idx = head.index("tag") if "tag" in head else None
    for row in rows[1:]:
        cells = row.split(",")
        points.append(CodePoint(
            Fraction(int(cells[idx["R_num"]]), int(cells[idx["R_den"]])),
            Fraction(int(cells[idx["delta_num"]]), int(cells[idx["delta_den"]])),
            cells[tag_idx] if tag_idx is not None else "",
        ))
    return points


def _cmd_bound(args) -> int:
    points = _read_points_csv(args.points)
    if not points:
        raise PreconditionError("no points in input; cannot build an envelope")
    env = empirical_envelope(points)
    lines = [f"# {_header(args)}", "R_num,R_den,delta_num,delta_den,tag"]
    for p in env.vertices:
        lines.append(",".join([str(p.R.numerator), str(p.R.denominator),
                               str(p.delta.numerator), str(p.delta.denominator),
                               p.provenance]))
    _emit("\n".join(lines) + "\n", args.out_csv)
    if args.out_svg:
        _emit(render_plane_svg(points, args.q, envelope=env, header=_header(args)),
              args.out_svg)
    return 0


def _cmd_fractal(args) -> int:
    code = _load_code(args.code)
    scan = threshold_scan(code)
    whole = CoordinateSubspace.whole_space(code.n)
    dims = fractal_dimensions(code, whole)
    estimates = {str(m): float(box_count_estimate(code, m)) for m in range(1, args.max_depth + 1)}
    payload = {
        "n": code.n, "q": code.q, "size": code.size, "d": code.d,
        "dim_sc": dims.dim_sc,
        "threshold": {str(ell): cnt for ell, cnt in scan.items()},
        "box_count_estimates": estimates,
    }
    _emit_json(payload, args, args.out)
    return 0


def _cmd_partition(args) -> int:
    code = _load_code(args.code)
    lines = [f"# {_header(args)}", "beta,value_or_DIV"]
    for beta in _beta_grid(args.beta_start, args.beta_stop, args.beta_step):
        z = partition_function(code, beta)
        lines.append(f"{_fmt_float(beta)},{'DIV' if z.divergent else _fmt_float(z.value)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_phases(args) -> int:
    codes = [_load_code(p) for p in args.codes]
    grid = _beta_grid(args.beta_start, args.beta_stop, args.beta_step)
    lines = [f"# {_header(args)}"]
    if args.family:
        family = CodeFamily(tuple(codes))
        weights = Weights.family_union(family)
        lines.append("beta,lambda,value_or_DIV")
        for beta in grid:
            rep: LambdaReport = lambda_series(weights, beta)
            z = "DIV" if rep.z_value is None else _fmt_float(rep.z_value)
            lines.append(f"{_fmt_float(beta)},{_fmt_float(rep.lam_sum)},{z}")
    else:
        heads = [f"beta_{j + 1}" for j in range(len(codes))]
        lines.append(",".join(heads) + ",value_or_DIV")
        for betas, value in product_grid(codes, [grid] * len(codes)):
            cells = [_fmt_float(b) for b in betas]
            cells.append("DIV" if value is None else _fmt_float(value))
            lines.append(",".join(cells))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _word_key(w) -> str:
    return "|".join(word_to_str(letter) for letter in w)


def _cmd_measure(args) -> int:
    with open(args.spec, "r", encoding="utf-8") as fh:
        spec = json.load(fh)
    code = code_from_json(spec["code"])
    kind = spec.get("kind", "uniform")
    if kind == "uniform":
        pot = Potential.uniform(code, spec.get("beta"))
        x0 = None
    elif kind == "depth1":
        lam = {tuple(_parse_word(k, code.q)): float(v) for k, v in spec["lambda"].items()}
        pot = Potential.depth1(lam, float(spec["beta"]))
        x0 = None
    elif kind == "depth2":
        lam = {}
        for key, v in spec["lambda"].items():
            a, b = key.split("|")
            lam[(_parse_word(a, code.q), _parse_word(b, code.q))] = float(v)
        pot = Potential.depth2(lam, float(spec["beta"]))
        x0 = [_parse_word(s, code.q) for s in spec["x0"]]
    else:
        raise ValueError(f"unknown potential kind {kind!r}")
    mu = measure_from_potential(pot, x0, args.depth)
    if args.exact:
        if kind != "uniform":
            raise PreconditionError("--exact is only available for uniform potentials")
        size = code.size
        values = {_word_key(w): f"1/{size ** len(w)}" for w in mu.values}
    else:
        values = {_word_key(w): float(v) for w, v in mu.values.items()}
    payload = {"depth": mu.depth, "letters": [word_to_str(a) for a in mu.letters],
               "values": values}
    _emit_json(payload, args, args.out)
    return 0


def _parse_word(s: str, q: int):
    from .codes import word_from_str
    return word_from_str(s, q)


def _cmd_entropy(args) -> int:
    code = _load_code(args.code)
    rep = language_generating(code, t=args.t, beta=args.beta if args.t is None else None,
                              max_length=args.max_length)
    payload = {
        "entropy": rep.entropy,
        "radius": rep.radius,
        "g_value": "DIV" if rep.g_value is None else rep.g_value,
        "structure": {str(k): v for k, v in rep.structure.items()},
    }
    _emit_json(payload, args, args.out)
    return 0


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="codetherm",
                                 description="code parameter geometry and thermodynamics")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("params", help="parameter report for a code file")
    p.add_argument("code")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_params)

    p = sub.add_parser("spoil", help="descendant point set by repeated numeric spoiling")
    p.add_argument("code")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_spoil)

    p = sub.add_parser("cloud", help="point cloud of a random or structured family")
    p.add_argument("--kind", choices=["random", "rs"], default="random")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-size", type=int, default=64)
    p.add_argument("--seed", type=int)
    p.add_argument("--out-csv")
    p.add_argument("--out-svg")
    p.set_defaults(func=_cmd_cloud)

    p = sub.add_parser("bound", help="empirical lower-cone envelope of a point CSV")
    p.add_argument("points")
    p.add_argument("--q", type=int, default=2, help="alphabet size for overlay lines")
    p.add_argument("--out-csv")
    p.add_argument("--out-svg")
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("fractal", help="dimension and threshold report for a code")
    p.add_argument("code")
    p.add_argument("--max-depth", type=int, default=6)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_fractal)

    p = sub.add_parser("partition", help="partition function over a beta grid")
    p.add_argument("code")
    p.add_argument("--beta-start", type=float, required=True)
    p.add_argument("--beta-stop", type=float, required=True)
    p.add_argument("--beta-step", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_partition)

    p = sub.add_parser("phases", help="phase scan of a product system or a family")
    p.add_argument("codes", nargs="+")
    p.add_argument("--family", action="store_true",
                   help="treat the codes as one family instead of a tensor product")
    p.add_argument("--beta-start", type=float, required=True)
    p.add_argument("--beta-stop", type=float, required=True)
    p.add_argument("--beta-step", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_phases)

    p = sub.add_parser("measure", help="cylinder assignment of a potential spec")
    p.add_argument("spec")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_measure)

    p = sub.add_parser("entropy", help="language structure report for a code")
    p.add_argument("code")
    p.add_argument("--t", type=float)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--max-length", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_entropy)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PreconditionError as exc:
        _report_error("precondition", exc)
        return 3
    except ConvergenceError as exc:
        _report_error("convergence", exc)
        return 4
    except (ValueError, KeyError, OSError) as exc:
        _report_error("input", exc)
        return 2


def _report_error(kind: str, exc: Exception) -> None:
    record = {"error": type(exc).__name__, "kind": kind, "message": str(exc)}
    sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
