"""End-to-end construction of the two-cell Markov partition of a hyperbolic
torus automorphism.

The pipeline has three stages, each exact and each re-verified after the
fact:

1. ``conjugate_nonnegative`` -- find a unimodular change of basis taking the
   defining matrix to ``epsilon * model`` with ``model`` entrywise
   nonnegative and oriented so its expanding slope lies in (0, 1).  The
   change of basis is an automorphism of the torus, so every later result
   transports back to the original matrix.
2. ``build_base_partition`` -- in the eigenframe of the model matrix, two
   open parallelograms whose closures tile the torus.  When the contracting
   eigenvalue of the acting matrix is negative the cells are slid along the
   contracting line by an exact amount ``rho`` chosen so the contracting
   boundary still maps into itself.
3. ``build_markov_construction`` -- the refinement of the partition by its
   image, whose cells are in bijection with the edges of the transition
   graph; the geometric transition multiplicities are asserted to equal the
   model matrix itself, via two independent counting methods.

Independent count: ``count_intersections`` counts integer translates of the
coordinate axes crossed by each image strip (shifted by the slide vector),
which never inspects cell intersections, yet must reproduce the matrix.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .exact import QuadReal, cf_expand
from .partition import (
    EigenRect,
    InvariantError,
    RefinementCell,
    TorusPartition,
    refine,
    transition_graph,
    verify_areas,
)
from .sft import TransitionGraph
from .torus import EigenFrame, Mat2Z, hyperbolic_check

_E = Mat2Z.swap()


# -- stage 1: reduction to a nonnegative model ---------------------------------


@dataclass(frozen=True)
class ConjugationResult:
    """Unimodular reduction ``conjugator @ original @ conjugator^-1 ==
    epsilon * model`` with ``model`` nonnegative and oriented (expanding
    slope strictly between 0 and 1)."""

    original: Mat2Z
    conjugator: Mat2Z
    model: Mat2Z
    epsilon: int
    swapped: bool  # an axis swap was composed in to orient the slope

    def verify(self) -> None:
        """Re-check every defining property, exactly."""
        if abs(self.conjugator.det()) != 1:
            raise InvariantError("conjugator is not unimodular")
        lhs = self.conjugator @ self.original @ self.conjugator.inverse()
        rhs = self.model if self.epsilon == 1 else -self.model
        if lhs != rhs:
            raise InvariantError("conjugation identity fails")
        if not self.model.is_nonnegative():
            raise InvariantError("model matrix has a negative entry")
        eig = hyperbolic_check(self.model)
        if eig.slope_lam.sign() <= 0 or (eig.slope_lam - 1).sign() >= 0:
            raise InvariantError("model expanding slope is not in (0, 1)")
        # forced for an oriented nonnegative hyperbolic matrix
        if self.model.a < 1 or self.model.b < 1 or self.model.c < 1:
            raise InvariantError("model matrix is not irreducible")


def _cf_term_products(terms: Sequence[int]) -> Iterator[Mat2Z]:
    fwd = Mat2Z.identity()
    for t in terms:
        fwd = fwd @ Mat2Z(0, 1, 1, t)
    rev = Mat2Z.identity()
    for t in reversed(terms):
        rev = rev @ Mat2Z(0, 1, 1, t)
    yield fwd
    yield rev
    yield fwd.inverse()
    yield rev.inverse()


def _candidate_conjugators(eig) -> Iterator[Mat2Z]:
    """Unimodular candidates, deterministic order: identity first, then
    products of continued-fraction steps of the expanding slope, then bases
    made of consecutive convergents and their intermediate fractions.

    Every candidate is screened exactly by the caller, so this only needs to
    be rich enough to contain one basis in which the matrix acts with a sign
    times nonnegative entries; bases straddling the expanding line close to
    it always include one.
    """
    yield Mat2Z.identity()
    cf = cf_expand(eig.slope_lam)
    depth = len(cf.preperiod) + 3 * max(1, len(cf.period)) + 8
    terms = cf.terms(depth)
    for j in (0, 1, 2):
        yield from _cf_term_products(
            list(cf.preperiod) + list(cf.period) * j
        )
    convs = cf.convergents(depth)
    rows = [(q, p) for p, q in convs]  # lattice vectors near the expanding line
    pairs = [(rows[k], rows[k + 1]) for k in range(len(rows) - 1)]
    for k in range(len(rows) - 2):
        a = terms[k + 2]
        base, step = rows[k], rows[k + 1]
        for j in range(1, min(a, 48)):
            mid = (base[0] + j * step[0], base[1] + j * step[1])
            pairs.append((step, mid))
    for u, v in pairs:
        nu = (-u[0], -u[1])
        nv = (-v[0], -v[1])
        for a_row, b_row in ((u, v), (v, u), (nu, v), (u, nv), (nv, u), (v, nu)):
            yield Mat2Z.from_rows((a_row, b_row))


def conjugate_nonnegative(matrix: Mat2Z) -> ConjugationResult:
    """Reduce a hyperbolic matrix to ``epsilon * model`` by a unimodular
    conjugation, with ``model`` nonnegative and its expanding slope in
    (0, 1).  Raises ``NotHyperbolicError``/``NotAutomorphismError`` for bad
    input and ``InvariantError`` if no candidate basis works (which the
    eventual periodicity of the slope's continued fraction rules out)."""
    eig = hyperbolic_check(matrix)
    seen: set[Mat2Z] = set()
    for cand in _candidate_conjugators(eig):
        if cand in seen or abs(cand.det()) != 1:
            continue
        seen.add(cand)
        conj = cand @ matrix @ cand.inverse()
        if conj.is_nonnegative():
            epsilon, model = 1, conj
        elif (-conj).is_nonnegative():
            epsilon, model = -1, -conj
        else:
            continue
        return _orient(matrix, cand, model, epsilon)
    raise InvariantError(
        f"no nonnegative conjugate found for {matrix} among {len(seen)} bases"
    )


def _orient(matrix: Mat2Z, conjugator: Mat2Z, model: Mat2Z, epsilon: int
            ) -> ConjugationResult:
    eig = hyperbolic_check(model)
    swapped = False
    if (eig.slope_lam - 1).sign() > 0:
        conjugator = _E @ conjugator
        model = _E @ model @ _E
        swapped = True
    result = ConjugationResult(matrix, conjugator, model, epsilon, swapped)
    result.verify()
    return result


# -- stage 2: the two-cell partition ----------------------------------------------


class SignCase(enum.Enum):
    """Signs of the acting matrix's (expanding, contracting) eigenvalues.

    The geometry only branches on the contracting sign: a negative
    contracting eigenvalue reverses the contracting boundary segment, and the
    partition must be slid along the contracting line to compensate.
    """

    PLUS_PLUS = (1, 1)
    PLUS_MINUS = (1, -1)
    MINUS_PLUS = (-1, 1)
    MINUS_MINUS = (-1, -1)

    @classmethod
    def of(cls, lam_act: QuadReal, mu_act: QuadReal) -> "SignCase":
        return cls((lam_act.sign(), mu_act.sign()))

    @property
    def translated(self) -> bool:
        return self.value[1] < 0


@dataclass(frozen=True)
class CornerPoint:
    """A named vertex of the construction, in frame and plane coordinates."""

    name: str
    u: QuadReal
    w: QuadReal
    x: QuadReal
    y: QuadReal


@dataclass(frozen=True)
class BaseConstruction:
    """The two-cell partition together with its defining data."""

    partition: TorusPartition
    sign_case: SignCase
    rho: QuadReal  # contracting slide; zero unless sign_case.translated
    corners: tuple[CornerPoint, ...]

    def corner(self, name: str) -> CornerPoint:
        for point in self.corners:
            if point.name == name:
                return point
        raise KeyError(name)


_CORNER_NAMES = (
    "o", "o'", "o''", "o'''",
    "a", "a'", "a''", "a'''",
    "b", "b'", "b''",
    "c", "c'", "c_bar",
    "d_bar", "d'", "d_star",
)


def _corner_points(frame: EigenFrame, t: QuadReal) -> tuple[CornerPoint, ...]:
    """The labelled vertices of the construction.

    The ``o`` family are the unit-square lattice points.  The rest are
    intersections of eigen-directions through lattice points, all slid by
    ``t`` along the contracting direction (``t`` is zero in the untranslated
    cases, where the ``a`` family coincides with the ``o`` family).
    """
    zero = QuadReal(0)
    u10, w10, u01, w01 = frame.u10, frame.w10, frame.u01, frame.w01
    u11, w11 = u10 + u01, w10 + w01
    spots = {
        "o": (zero, zero), "o'": (u10, w10), "o''": (u11, w11), "o'''": (u01, w01),
        "a": (zero, t), "a'": (u10, w10 + t),
        "a''": (u11, w11 + t), "a'''": (u01, w01 + t),
        "b": (zero, t - w10), "b'": (u10, t), "b''": (u11, w01 + t),
        "c": (zero, w01 + t), "c'": (u10, w11 + t), "c_bar": (-u01, t),
        "d_bar": (zero, w01 - w10 + t), "d'": (u10, w01 + t),
        "d_star": (u10 - u01, t),
    }
    points = []
    for name in _CORNER_NAMES:
        u, w = spots[name]
        x, y = frame.to_plane(u, w)
        points.append(CornerPoint(name, u, w, x, y))
    return tuple(points)


def build_base_partition(model: Mat2Z, epsilon: int) -> BaseConstruction:
    """The two-cell partition for the map defined by ``epsilon * model``.

    ``model`` must be nonnegative, hyperbolic and oriented (expanding slope
    in (0, 1)).  Cell I is the open parallelogram with frame box
    (0, u10) x (w01, 0), cell II is (u10, u11) x (w01, w11); when the acting
    contracting eigenvalue is negative both are slid by ``rho`` along the
    contracting direction, ``rho`` being pinned by requiring the image of
    the contracting boundary segment to end exactly at the slid origin."""
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    if not model.is_nonnegative():
        raise ValueError(f"model matrix {model} has a negative entry")
    eig = hyperbolic_check(model)
    if eig.slope_lam.sign() <= 0 or (eig.slope_lam - 1).sign() >= 0:
        raise ValueError("model expanding slope must lie strictly in (0, 1)")
    frame = EigenFrame.from_eigen(eig)
    acting = model if epsilon == 1 else -model

    zero = QuadReal(0)
    u10, w10, u01, w01 = frame.u10, frame.w10, frame.u01, frame.w01
    u11, w11 = u10 + u01, w10 + w01
    for value, positive in ((u10, True), (w10, True), (u01, True),
                            (w01, False), (w11, False)):
        if (value.sign() > 0) != positive:
            raise InvariantError("frame coordinate signs violate orientation")

    lam_act = eig.lam * epsilon
    mu_act = eig.mu * epsilon
    sign_case = SignCase.of(lam_act, mu_act)
    if sign_case.translated:
        rho = (w01 - w10) * mu_act / (1 - mu_act)
        # the slide exists strictly above the expanding line ...
        if rho.sign() <= 0:
            raise InvariantError("contracting slide must be positive")
        # ... and cannot pass the first contracting lattice level: otherwise
        # a lattice point would sit between parallel eigen-lines closer than
        # the contraction allows.
        if (rho - w10).sign() > 0:
            raise InvariantError("contracting slide escapes the unit cell")
        # defining property of the slide: the slid point d_bar maps exactly
        # onto the slid origin a (both on the contracting line u = 0)
        if mu_act * (w01 - w10 + rho) != rho:
            raise InvariantError("slide does not fix the contracting boundary")
    else:
        rho = zero

    box1 = EigenRect(zero, u10, w01 + rho, rho)
    box2 = EigenRect(u10, u11, w01 + rho, w11 + rho)
    part = TorusPartition.build(frame, acting, (box1, box2), ("I", "II"))
    total = verify_areas(part)
    if total != 1:
        raise InvariantError(f"cell areas sum to {total}, not 1")
    return BaseConstruction(part, sign_case, rho, _corner_points(frame, rho))


# -- independent transition count ---------------------------------------------------


def _strict_integers_between(lo: QuadReal, hi: QuadReal, shift: QuadReal
                             ) -> tuple[int, int]:
    """Integer range [k_min, k_max] with lo < k + shift < hi (empty when
    k_min > k_max)."""
    k_min = (lo - shift).floor() + 1
    k_max = -((-(hi - shift)).floor()) - 1
    return k_min, k_max


def count_intersections(base: BaseConstruction) -> TransitionGraph:
    """Transition multiplicities counted by axis crossings, no intersections.

    The image of cell i is a long strip along the expanding line.  Crossing a
    vertical lattice line (slid by the slide vector) hands the strip to the
    next translate of cell I, crossing a horizontal one to the next translate
    of cell II; so the number of slid vertical (resp. horizontal) integer
    lines meeting the open strip is the (i, I) (resp. (i, II)) transition
    multiplicity.  Crossings are also asserted to stay in the half-family
    dictated by the sign of the expanding eigenvalue."""
    part = base.partition
    frame = part.frame
    lam_sign = part.lam_act.sign()
    vm = frame.eig.v_mu
    xi = base.rho * vm[0]
    eta = base.rho * vm[1]
    rows = []
    for i, box in enumerate(part.boxes):
        strip = part.phi_box(box)
        corners = strip.corners_plane(frame)
        xs = [pt[0] for pt in corners]
        ys = [pt[1] for pt in corners]
        x_min, x_max = _strict_integers_between(min(xs), max(xs), xi)
        y_min, y_max = _strict_integers_between(min(ys), max(ys), eta)
        x_count = max(0, x_max - x_min + 1)
        y_count = max(0, y_max - y_min + 1)
        if lam_sign > 0:
            family_ok = (x_count == 0 or x_min >= 0) and (y_count == 0 or y_min >= 1)
        else:
            family_ok = (x_count == 0 or x_max <= -1) and (y_count == 0 or y_max <= 0)
        if not family_ok:
            raise InvariantError(
                f"strip {i} crosses lattice lines outside the expected family: "
                f"x in [{x_min}, {x_max}], y in [{y_min}, {y_max}]"
            )
        rows.append([x_count, y_count])
    return TransitionGraph(rows)


# -- stage 3: refinement and cross-checks ------------------------------------------


@dataclass(frozen=True)
class MarkovConstruction:
    """Everything the construction produces, cross-checked on creation."""

    original: Mat2Z
    conjugation: ConjugationResult
    base: BaseConstruction
    cells: tuple[RefinementCell, ...]
    refined: TorusPartition
    graph: TransitionGraph          # two-cell multiplicities == model matrix
    refined_graph: TransitionGraph  # 0/1 graph on refinement cells
    refined_geometry_checked: bool  # composition rule re-derived geometrically

    @property
    def model(self) -> Mat2Z:
        return self.conjugation.model

    @property
    def acting(self) -> Mat2Z:
        return self.base.partition.acting


def composition_graph(cells: Sequence[RefinementCell]) -> TransitionGraph:
    """The purely combinatorial transition rule on refinement cells: cell k
    (a component of phi R_i meet R_j) can precede cell l exactly when l's
    image cell index equals k's containing cell index."""
    rows = [
        [1 if cells[k].symbols[1] == cells[l].symbols[0] else 0
         for l in range(len(cells))]
        for k in range(len(cells))
    ]
    return TransitionGraph(rows)


_GEOMETRY_RECHECK_LIMIT = 64  # refined cell count up to which the O(n^2)
                              # geometric re-derivation of the rule graph runs


def build_markov_construction(matrix: Mat2Z) -> MarkovConstruction:
    """Run the full pipeline for ``matrix`` and cross-check every stage.

    Raises ``NotAutomorphismError``/``NotHyperbolicError`` on bad input and
    ``InvariantError`` if any internal consistency check fails."""
    conj = conjugate_nonnegative(matrix)
    base = build_base_partition(conj.model, conj.epsilon)
    part = base.partition

    graph = transition_graph(part)
    if graph.matrix != conj.model.rows():
        raise InvariantError(
            f"geometric transition multiplicities {graph.matrix} differ from "
            f"the model matrix {conj.model}"
        )
    counted = count_intersections(base)
    if counted.matrix != graph.matrix:
        raise InvariantError(
            f"axis-crossing counts {counted.matrix} differ from component "
            f"counts {graph.matrix}"
        )

    cells = tuple(refine(part))
    expected = sum(sum(row) for row in conj.model.rows())
    if len(cells) != expected:
        raise InvariantError(
            f"refinement has {len(cells)} cells, expected {expected}"
        )
    refined = TorusPartition.build(
        part.frame, part.acting,
        (cell.rect for cell in cells),
        _cell_labels(part, cells),
    )
    refined_graph = composition_graph(cells)
    recheck = len(cells) <= _GEOMETRY_RECHECK_LIMIT
    if recheck and transition_graph(refined).matrix != refined_graph.matrix:
        raise InvariantError(
            "geometric refined transitions differ from the composition rule"
        )
    return MarkovConstruction(matrix, conj, base, cells, refined, graph,
                              refined_graph, recheck)


def _cell_labels(part: TorusPartition, cells: Sequence[RefinementCell]
                 ) -> list[str]:
    """Stable labels: the word of each cell plus its index among same-word
    components (components are already ordered by contracting coordinate)."""
    totals: dict[tuple[int, ...], int] = {}
    for cell in cells:
        totals[cell.symbols] = totals.get(cell.symbols, 0) + 1
    seen: dict[tuple[int, ...], int] = {}
    labels = []
    for cell in cells:
        rank = seen.get(cell.symbols, 0)
        seen[cell.symbols] = rank + 1
        i, j = cell.symbols
        word = f"{part.labels[i]},{part.labels[j]}@{cell.offset}"
        labels.append(f"{word}#{rank}" if totals[cell.symbols] > 1 else word)
    return labels
