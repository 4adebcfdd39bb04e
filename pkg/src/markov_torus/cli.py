"""Command-line front end: construction, verifiers, coding, and figures.

Commands: analyze | construct | verify | encode | decode | periodic |
multmap | render.  Reports print as text by default and as schema-versioned
JSON under ``--json``; ``--svg PATH`` writes the universal-cover figure.

Exit status is 0 exactly when everything requested passed, 1 on a failed
verification or an unusable request (inadmissible word, capped depth), and
2 when the input matrix is rejected as non-hyperbolic or non-unimodular.

Word-enumeration commands cap their depth (default 8); the environment
variable ``MARKOV_TORUS_MAX_DEPTH`` overrides the cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .coding import BoundaryAmbiguity, CodingContext, SymbolicWord
from .construct import MarkovConstruction, build_markov_construction, count_intersections
from .exact import QuadReal
from .multmap import ExpansionAmbiguity, MultiplicationSystem
from .partition import (
    EigenRect,
    InvariantError,
    TorusPartition,
    refinement_cells_depth,
    verify_areas,
    verify_boundary_alignment,
    verify_generator_decay,
    verify_nfold_range,
    verify_translate_disjoint,
)
from .render import (
    SCHEMA_VERSION,
    analyze_report,
    construction_report,
    matrix_json,
    quad_json,
    render_construction_svg,
)
from .sft import count_periodic
from .torus import (
    Mat2Z,
    NotAutomorphismError,
    NotHyperbolicError,
    count_periodic_points,
    hyperbolic_check,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_REJECT = 2

DEFAULT_ENUM_CAP = 8
ENUM_CAP_ENV = "MARKOV_TORUS_MAX_DEPTH"

# commands whose work grows with the word tree, hence fall under the cap
_ENUMERATING_COMMANDS = frozenset({"verify", "render"})


class CliError(Exception):
    """A request that cannot be served; message is printed, exit status 1."""


def enumeration_cap() -> int:
    raw = os.environ.get(ENUM_CAP_ENV)
    if raw is None:
        return DEFAULT_ENUM_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise CliError(f"{ENUM_CAP_ENV} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise CliError(f"{ENUM_CAP_ENV} must be >= 1, got {cap}")
    return cap


@dataclass(frozen=True)
class RunConfig:
    """One parsed invocation; depth bounds are validated on construction."""

    command: str
    matrix: Mat2Z | None = None
    depth: int | None = None
    json_out: bool = False
    svg_path: str | None = None
    point: tuple[Fraction, ...] | None = None
    word: str | None = None
    max_words: int = 8
    base: int = 2
    inject_break: bool = False
    enum_cap: int = DEFAULT_ENUM_CAP

    def __post_init__(self):
        if self.depth is not None and self.depth < 0:
            raise CliError("--depth must be >= 0")
        if self.max_words < 1:
            raise CliError("--max-words must be >= 1")
        if (self.command in _ENUMERATING_COMMANDS and self.depth is not None
                and self.depth > self.enum_cap):
            raise CliError(
                f"--depth {self.depth} exceeds the enumeration cap "
                f"{self.enum_cap}; set {ENUM_CAP_ENV} to raise it"
            )


# -- parsing helpers -----------------------------------------------------------


def parse_matrix(text: str) -> Mat2Z:
    parts = text.replace(",", " ").split()
    if len(parts) != 4:
        raise CliError(f'--matrix needs four integers "a b c d", got {text!r}')
    try:
        a, b, c, d = (int(p) for p in parts)
    except ValueError as exc:
        raise CliError(f"--matrix entries must be integers: {exc}") from exc
    return Mat2Z(a, b, c, d)


def parse_rationals(text: str, count: int) -> tuple[Fraction, ...]:
    parts = text.split()
    if len(parts) != count:
        raise CliError(
            f'--point needs {count} rational number(s) like "1/3", got {text!r}'
        )
    try:
        return tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"--point has a bad rational: {exc}") from exc


def parse_digits(text: str, base: int) -> tuple[int, ...]:
    try:
        digits = tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise CliError(f'--word for multmap must look like "1,0,1": {exc}') from exc
    if not digits:
        raise CliError("--word must contain at least one digit")
    for d in digits:
        if not 0 <= d < base:
            raise CliError(f"digit {d} out of range for base {base}")
    return digits


def _fraction_json(x: Fraction) -> dict:
    return {"exact": str(x), "decimal": f"{float(x):.12f}"}


def _emit(payload: dict, lines: Sequence[str], as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


# -- commands ------------------------------------------------------------------


def cmd_analyze(cfg: RunConfig) -> int:
    try:
        eig = hyperbolic_check(cfg.matrix)
    except (NotAutomorphismError, NotHyperbolicError) as exc:
        payload = {
            "schema": SCHEMA_VERSION,
            "matrix": matrix_json(cfg.matrix),
            "hyperbolic": False,
            "reason": str(exc),
        }
        _emit(payload, [f"rejected: {exc}"], cfg.json_out)
        return EXIT_REJECT
    rep = analyze_report(cfg.matrix, eig)
    cf = rep["slope_continued_fraction"]
    lines = [
        f"matrix {rep['matrix']}: hyperbolic, det {rep['determinant']}, "
        f"trace {rep['trace']}, discriminant {rep['discriminant']}",
        f"lambda = {rep['lambda']['exact']} ~ {rep['lambda']['decimal']}",
        f"mu     = {rep['mu']['exact']} ~ {rep['mu']['decimal']}",
        f"expanding slope   = {rep['slope_lambda']['exact']} "
        f"~ {rep['slope_lambda']['decimal']}",
        f"contracting slope = {rep['slope_mu']['exact']} "
        f"~ {rep['slope_mu']['decimal']}",
        f"expansive constant |mu|/8 ~ {rep['expansive_constant']['decimal']}",
        f"expanding-slope continued fraction: preperiod {list(cf['preperiod'])}, "
        f"period {list(cf['period'])} repeating",
        f"sign case {rep['case']}"
        + (" (contracting slide required)" if rep["case"].endswith("MINUS") else ""),
    ]
    _emit(rep, lines, cfg.json_out)
    return EXIT_OK


def _construction_lines(rep: dict) -> list[str]:
    lines = [
        f"matrix {rep['matrix']} = epsilon * C^-1 P C with epsilon "
        f"{rep['epsilon']}, C {rep['C']}, P {rep['P']}",
        f"sign case {rep['case']}, contracting slide rho = "
        f"{rep['rho']['exact']} ~ {rep['rho']['decimal']}",
        f"two-cell multiplicity graph {rep['graph_2node']['entries']} on "
        f"labels {rep['graph_2node']['labels']}",
        f"refined partition: {rep['graph_Nstar']['size']} cells",
    ]
    for cell in rep["cells"]:
        first = cell["corners"][0]
        lines.append(
            f"  {cell['label']:<10} corner ({first['x']['decimal']}, "
            f"{first['y']['decimal']})"
        )
    lines.append("corner points:")
    for point in rep["corner_points"]:
        lines.append(
            f"  {point['name']:<6} ({point['x']['decimal']}, "
            f"{point['y']['decimal']})"
        )
    for name, ok in rep["verifier_results"].items():
        lines.append(f"check {name}: {'pass' if ok else 'FAIL'}")
    return lines


def cmd_construct(cfg: RunConfig) -> int:
    construction = build_markov_construction(cfg.matrix)
    rep = construction_report(construction)
    lines = _construction_lines(rep)
    if cfg.svg_path:
        svg = render_construction_svg(construction)
        with open(cfg.svg_path, "w", encoding="utf-8") as handle:
            handle.write(svg)
        lines.append(f"figure written to {cfg.svg_path}")
    _emit(rep, lines, cfg.json_out)
    return EXIT_OK


def _break_partition(part: TorusPartition) -> TorusPartition:
    """Negative control: shrink the first cell so area/boundary checks fail."""
    first = part.boxes[0]
    dent = first.u_dim * Fraction(1, 64)
    boxes = (EigenRect(first.u_lo, first.u_hi - dent, first.w_lo, first.w_hi),
             ) + part.boxes[1:]
    return TorusPartition(part.frame, part.acting, part.lam_act, part.mu_act,
                          boxes, part.labels)


def _run_checks(construction: MarkovConstruction, depth: int, cap: int,
                inject_break: bool) -> list[dict]:
    base_part = construction.base.partition
    refined = construction.refined
    if inject_break:
        base_part = _break_partition(base_part)
        refined = _break_partition(refined)
    model = construction.model
    checks: list[dict] = []

    def record(name: str, run: Callable[[], tuple[bool, str]]) -> None:
        try:
            ok, detail = run()
        except (InvariantError, ValueError) as exc:
            ok, detail = False, f"verifier aborted: {exc}"
        checks.append({"name": name, "ok": ok, "detail": detail})

    def counts() -> tuple[bool, str]:
        graph = count_intersections(construction.base)
        expected = [[model.a, model.b], [model.c, model.d]]
        total = model.a + model.b + model.c + model.d
        got = [list(r) for r in graph.matrix]
        ok = got == expected and refined.n == total
        return ok, (f"intersection counts {got} vs model entries "
                    f"{expected}; N* {refined.n} vs {total}")

    record("counts", counts)

    def areas_of(part: TorusPartition, tag: str) -> None:
        def run() -> tuple[bool, str]:
            total = verify_areas(part)
            return (total - 1).sign() == 0, f"total area {total.exact_str()}"
        record(tag, run)

    areas_of(base_part, "areas_base")
    areas_of(refined, "areas_refined")
    for extra_depth in range(2, min(depth, cap) + 1):
        def run_depth(k: int = extra_depth) -> tuple[bool, str]:
            cells = refinement_cells_depth(base_part, k)
            total = QuadReal(0)
            for cell in cells:
                total = total + cell.rect.area(base_part.frame)
            return (total - 1).sign() == 0, (
                f"{len(cells)} cells, total area {total.exact_str()}")
        record(f"areas_depth_{extra_depth}", run_depth)

    def disjoint() -> tuple[bool, str]:
        bad = verify_translate_disjoint(base_part)
        return not bad, f"{len(bad)} overlap witness(es)" + (
            f", first {bad[0]}" if bad else "")

    record("interiors_disjoint", disjoint)

    def boundaries_of(part: TorusPartition, tag: str) -> None:
        def run() -> tuple[bool, str]:
            witnesses = verify_boundary_alignment(part)
            if witnesses:
                w = witnesses[0]
                return False, (f"{len(witnesses)} witness(es), first {w.kind} "
                               f"of cell {w.cell} uncovered")
            return True, "image boundaries covered exactly"
        record(tag, run)

    boundaries_of(base_part, "boundaries_base")
    boundaries_of(refined, "boundaries_refined")

    def nfold_of(part: TorusPartition, tag: str) -> None:
        def run() -> tuple[bool, str]:
            top = max(3, min(depth, cap))
            reports = verify_nfold_range(part, 3, top)
            bad = {n: r.failures for n, r in reports.items() if r.failures}
            words = sum(r.words_checked for r in reports.values())
            if bad:
                n = min(bad)
                return False, f"{words} words; first empty cylinder {bad[n][0]}"
            return True, f"lengths 3..{top}, {words} admissible words nonempty"
        record(tag, run)

    nfold_of(base_part, "nfold_base")
    nfold_of(refined, "nfold_refined")

    def decay() -> tuple[bool, str]:
        rows = verify_generator_decay(refined, depth)
        bad = [row for row in rows if not row.ok]
        if bad:
            return False, (f"depth {bad[0].depth}: measured^2 "
                           f"{bad[0].measured_sq.decimal()} > bound^2 "
                           f"{bad[0].bound_sq.decimal()}")
        last = rows[-1]
        return True, (f"depths 0..{depth}, final measured diameter "
                      f"{last.measured:.6g} within bound")

    record("generator_decay", decay)
    return checks


def cmd_verify(cfg: RunConfig) -> int:
    construction = build_markov_construction(cfg.matrix)
    depth = cfg.depth if cfg.depth is not None else 4
    checks = _run_checks(construction, depth, cfg.enum_cap, cfg.inject_break)
    all_ok = all(c["ok"] for c in checks)
    payload = {
        "schema": SCHEMA_VERSION,
        "matrix": matrix_json(cfg.matrix),
        "depth": depth,
        "checks": checks,
        "all_ok": all_ok,
    }
    lines = [
        f"{c['name']:<18} {'PASS' if c['ok'] else 'FAIL'}  {c['detail']}"
        for c in checks
    ]
    lines.append(f"verdict: {'all checks passed' if all_ok else 'FAILURES above'}")
    _emit(payload, lines, cfg.json_out)
    return EXIT_OK if all_ok else EXIT_FAIL


def cmd_encode(cfg: RunConfig) -> int:
    if cfg.point is None:
        raise CliError('encode needs --point "p/q r/s"')
    ctx = CodingContext.from_matrix(cfg.matrix)
    depth = cfg.depth if cfg.depth is not None else 8
    result = ctx.encode(cfg.point, depth)
    preimages = ctx.preimage_report(cfg.point, depth, max_words=cfg.max_words)
    payload = {
        "schema": SCHEMA_VERSION,
        "matrix": matrix_json(cfg.matrix),
        "point": [str(c) for c in cfg.point],
        "depth": depth,
        "preimages": {
            "count": preimages.count,
            "words": [str(w) for w in preimages.words],
            "truncated": preimages.truncated,
        },
    }
    labels = ctx.construction.refined.labels
    if isinstance(result, BoundaryAmbiguity):
        payload["ambiguous"] = True
        payload["time"] = result.time
        payload["candidates"] = list(result.candidates)
        lines = [
            f"no canonical itinerary: iterate {result.time} lies on a cell "
            f"boundary between {[labels[i] for i in result.candidates]}",
        ]
    else:
        payload["ambiguous"] = False
        payload["word"] = str(result)
        payload["labels"] = [labels[s] for s in result.symbols]
        lines = [f"word {result}",
                 "cells " + " ".join(labels[s] for s in result.symbols)]
    lines.append(
        f"codings of the point over this window: {preimages.count}"
        + (" (list truncated)" if preimages.truncated else ""))
    for word in preimages.words:
        lines.append(f"  {word}")
    _emit(payload, lines, cfg.json_out)
    return EXIT_OK


def cmd_decode(cfg: RunConfig) -> int:
    if cfg.word is None:
        raise CliError('decode needs --word "i,j,k@-1"')
    try:
        word = SymbolicWord.parse(cfg.word)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    ctx = CodingContext.from_matrix(cfg.matrix)
    try:
        res = ctx.decode(word)
    except ValueError as exc:
        raise CliError(f"word {word} is not admissible: {exc}") from exc
    payload = {
        "schema": SCHEMA_VERSION,
        "matrix": matrix_json(cfg.matrix),
        "word": str(word),
        "center": {"x": quad_json(res.center[0]), "y": quad_json(res.center[1])},
        "diam_sq": quad_json(res.diam_sq),
        "diam": f"{res.diam:.12e}",
        "diameter_bound_sq": quad_json(res.diameter_bound_sq),
        "diameter_bound": f"{res.diameter_bound:.12e}",
    }
    lines = [
        f"cylinder of {word}: nonempty, connected",
        f"center ~ ({res.center[0].decimal()}, {res.center[1].decimal()}) "
        "on the model torus",
        f"diameter {res.diam:.6e} <= bound {res.diameter_bound:.6e}",
    ]
    if cfg.point is not None:
        inside = res.contains(ctx.to_model(cfg.point))
        payload["contains_point"] = inside
        lines.append(
            f"point ({cfg.point[0]}, {cfg.point[1]}) is "
            + ("inside (closed cylinder)" if inside else "outside"))
    _emit(payload, lines, cfg.json_out)
    return EXIT_OK


def cmd_periodic(cfg: RunConfig) -> int:
    construction = build_markov_construction(cfg.matrix)
    top = cfg.depth if cfg.depth is not None else 6
    if top < 1:
        raise CliError("--depth must be >= 1 for periodic counts")
    rows = []
    for n in range(1, top + 1):
        rows.append({
            "n": n,
            "torus": count_periodic_points(cfg.matrix, n),
            "sft_2node": count_periodic(construction.graph, n),
            "sft_refined": count_periodic(construction.refined_graph, n),
        })
    payload = {
        "schema": SCHEMA_VERSION,
        "matrix": matrix_json(cfg.matrix),
        "rows": rows,
    }
    lines = ["  n  torus |det(A^n-I)|  2-node SFT  refined SFT"]
    for row in rows:
        lines.append(f"{row['n']:>3}  {row['torus']:>19}  {row['sft_2node']:>10}  "
                     f"{row['sft_refined']:>11}")
    _emit(payload, lines, cfg.json_out)
    return EXIT_OK


def cmd_multmap(cfg: RunConfig) -> int:
    if (cfg.point is None) == (cfg.word is None):
        raise CliError('multmap needs exactly one of --point "p/q" or --word "1,0,1"')
    try:
        system = MultiplicationSystem(cfg.base)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    depth = cfg.depth if cfg.depth is not None else 24
    payload: dict = {"schema": SCHEMA_VERSION, "base": cfg.base}
    if cfg.point is not None:
        x = cfg.point[0] % 1
        payload["point"] = str(x)
        result = system.encode(x, depth)
        if isinstance(result, ExpansionAmbiguity):
            payload["ambiguous"] = True
            payload["time"] = result.time
            payload["hits"] = str(result.point)
            payload["expansions"] = [list(w) for w in result.expansions]
            lines = [
                f"{x} is a base-{cfg.base} rational: iterate {result.time} "
                f"hits the endpoint {result.point}; both expansions:",
            ]
            for w in result.expansions:
                lines.append("  " + ",".join(str(d) for d in w))
        else:
            payload["ambiguous"] = False
            payload["digits"] = list(result)
            payload["partial_sum"] = _fraction_json(system.digit_value(result))
            lines = [
                "digits " + ",".join(str(d) for d in result),
                f"partial sum {payload['partial_sum']['exact']} "
                f"~ {payload['partial_sum']['decimal']}",
            ]
    else:
        digits = parse_digits(cfg.word, cfg.base)
        lo, hi = system.decode(digits)
        payload["digits"] = list(digits)
        payload["value"] = _fraction_json(lo)
        payload["width"] = str(hi - lo)
        payload["interval"] = [str(lo), str(hi)]
        lines = [
            f"partial sum {lo} ~ {float(lo):.12f}",
            f"cylinder interval [{lo}, {hi}], width {hi - lo}",
        ]
    _emit(payload, lines, cfg.json_out)
    return EXIT_OK


def cmd_render(cfg: RunConfig) -> int:
    construction = build_markov_construction(cfg.matrix)
    depth = cfg.depth if cfg.depth is not None else 1
    svg = render_construction_svg(construction, depth)
    if cfg.svg_path:
        with open(cfg.svg_path, "w", encoding="utf-8") as handle:
            handle.write(svg)
        print(f"figure written to {cfg.svg_path}")
    else:
        sys.stdout.write(svg)
    return EXIT_OK


_HANDLERS: dict[str, Callable[[RunConfig], int]] = {
    "analyze": cmd_analyze,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "periodic": cmd_periodic,
    "multmap": cmd_multmap,
    "render": cmd_render,
}


# -- argument plumbing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="markov-torus",
        description="Markov partitions for hyperbolic toral automorphisms, "
                    "in exact arithmetic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, *, matrix: bool = True,
            depth: str | None = None, point: bool = False, word: bool = False,
            svg: bool = False, base: bool = False, max_words: bool = False,
            inject: bool = False) -> None:
        cmd = sub.add_parser(name, help=help_text)
        if matrix:
            cmd.add_argument("--matrix", required=True, metavar='"a b c d"',
                             help="integer matrix entries, row-major")
        if depth is not None:
            cmd.add_argument("--depth", type=int, default=None, help=depth)
        if point:
            cmd.add_argument("--point", metavar='"p/q r/s"',
                             help="rational point, space-separated coordinates")
        if word:
            cmd.add_argument("--word", metavar='"i,j,k@-1"',
                             help="symbolic word, digits comma-separated, "
                                  "optional @offset")
        if svg:
            cmd.add_argument("--svg", dest="svg_path", metavar="PATH",
                             help="write the universal-cover figure here")
        if base:
            cmd.add_argument("--base", type=int, default=2,
                             help="multiplication-map base n (default 2)")
        if max_words:
            cmd.add_argument("--max-words", type=int, default=8,
                             help="cap on listed codings (default 8)")
        if inject:
            cmd.add_argument("--inject-break", action="store_true",
                             help="negative control: dent one cell so the "
                                  "verifiers must fail")
        cmd.add_argument("--json", dest="json_out", action="store_true",
                         help="machine-readable report")

    add("analyze", "spectral data, slopes, continued fraction, verdict")
    add("construct", "build the partition and report every piece", svg=True)
    add("verify", "run the verifier matrix against the construction",
        depth="refinement/decay depth (default 4)", inject=True)
    add("encode", "itinerary of a rational point through the cells",
        depth="window half-width (default 8)", point=True, max_words=True)
    add("decode", "exact cylinder set of a symbolic word",
        word=True, point=True)
    add("periodic", "periodic-point counts, torus versus shift",
        depth="largest period (default 6)")
    add("multmap", "base-n circle-map baseline: encode or decode",
        matrix=False, depth="digit depth (default 24)", point=True, word=True,
        base=True)
    add("render", "write the universal-cover SVG figure",
        depth="refinement depth to draw (default 1)", svg=True)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    matrix = parse_matrix(args.matrix) if getattr(args, "matrix", None) else None
    point = None
    if getattr(args, "point", None):
        count = 1 if args.command == "multmap" else 2
        point = parse_rationals(args.point, count)
    return RunConfig(
        command=args.command,
        matrix=matrix,
        depth=getattr(args, "depth", None),
        json_out=getattr(args, "json_out", False),
        svg_path=getattr(args, "svg_path", None),
        point=point,
        word=getattr(args, "word", None),
        max_words=getattr(args, "max_words", 8),
        base=getattr(args, "base", 2),
        inject_break=getattr(args, "inject_break", False),
        enum_cap=enumeration_cap(),
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return _HANDLERS[cfg.command](cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (NotAutomorphismError, NotHyperbolicError) as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECT
    except BrokenPipeError:
        # the consumer closed the pipe (e.g. | head); suppress the noise
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":  # pragma: no cover - exercised via __main__
    sys.exit(main())
