"""Symbolic coding of orbits against the refinement cells.

``encode`` turns a rational point into its itinerary word, ``decode`` turns a
word back into the exact cylinder box it names (with center and diameter
bound), and ``preimage_report`` counts every admissible word whose closed
cylinder contains a point.  All arithmetic is exact; itineraries are computed
on the conjugated model torus, where the partition boxes live, and points are
carried across by the (unimodular, hence exact) conjugation.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .construct import MarkovConstruction, build_markov_construction
from .exact import QuadReal
from .partition import (
    BoundaryHit,
    CellHit,
    EigenRect,
    InvariantError,
    TorusPartition,
    advance_strips,
    closed_translate_meets,
    cylinder_components,
    lattice_in_frame_box,
    locate,
    partition_diam_sq,
)
from .torus import EigenFrame, Mat2Z

__all__ = [
    "BoundaryAmbiguity",
    "SymbolicWord",
    "DecodeResult",
    "PreimageReport",
    "CodingContext",
    "torus_dist_sq",
]


def _mod1(value):
    """Reduce an exact coordinate (Fraction or QuadReal) into [0, 1)."""
    if isinstance(value, QuadReal):
        return value - value.floor()
    return value % 1


def _point_mod1(point):
    x, y = point
    return (_mod1(x), _mod1(y))


def _rect_contains_torus(frame: EigenFrame, rect: EigenRect, point,
                         closed: bool = True) -> bool:
    """Exact membership of a torus point in a frame box, testing every
    lattice representative that could land inside."""
    pu, pw = frame.to_frame(point)
    for q in lattice_in_frame_box(
        frame,
        rect.u_lo - pu, rect.u_hi - pu, rect.w_lo - pw, rect.w_hi - pw,
    ):
        qu, qw = frame.lattice_frame(*q)
        if rect.contains_frame(pu + qu, pw + qw, closed=closed):
            return True
    return False


@dataclass(frozen=True)
class BoundaryAmbiguity:
    """Returned by :meth:`CodingContext.encode` when an orbit point lands on
    a cell boundary, so the itinerary is not unique.  ``time`` is the first
    such iterate, ``point`` the exact model-torus point there, and
    ``candidates`` the indices of every cell whose closure contains it.
    Ambiguity is a value, not an error: boundary points genuinely carry
    several histories."""

    time: int
    point: tuple
    candidates: tuple[int, ...]

    def __str__(self) -> str:
        return (
            f"iterate {self.time} lies on the boundary of cells "
            f"{','.join(str(c) for c in self.candidates)}"
        )


_WORD_RE = re.compile(
    r"^\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*(?:@\s*(-?\d+)\s*)?$"
)


@dataclass(frozen=True)
class SymbolicWord:
    """A finite word of cell indices; ``symbols[k]`` constrains iterate
    ``offset + k``."""

    symbols: tuple[int, ...]
    offset: int = 0

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("empty word")

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def times(self) -> range:
        return range(self.offset, self.offset + len(self.symbols))

    def __str__(self) -> str:
        return ",".join(str(s) for s in self.symbols) + f"@{self.offset}"

    @classmethod
    def parse(cls, text: str) -> "SymbolicWord":
        m = _WORD_RE.match(text)
        if m is None:
            raise ValueError(
                f"cannot parse word {text!r}; expected e.g. '0,2,1@-1'"
            )
        symbols = tuple(int(s) for s in m.group(1).split(","))
        offset = int(m.group(2)) if m.group(2) is not None else 0
        return cls(symbols, offset)


@dataclass(frozen=True)
class DecodeResult:
    """The exact cylinder set named by a word.

    ``anchored`` is the plane representative of the cylinder as seen at the
    word's first time (a sub-box of the first symbol's cell); ``rect`` is the
    time-zero representative, i.e. the set of points whose iterate at
    ``word.offset + k`` lies in cell ``word.symbols[k]`` for every k.
    ``center`` is the exact plane center of ``rect`` reduced into [0, 1)^2.

    ``diameter_bound_sq`` is the squared a-priori bound
    d(partition)^2 * mu^(2 * min(forward depth, backward depth)); the exact
    squared diameter ``diam_sq`` never exceeds it (checked on construction).
    The bound itself is kept squared because the diameter is a square root
    that generally leaves the quadratic field.
    """

    word: SymbolicWord
    frame: EigenFrame
    anchored: EigenRect
    rect: EigenRect
    center: tuple[QuadReal, QuadReal]
    diam_sq: QuadReal
    diameter_bound_sq: QuadReal

    @property
    def diam(self) -> float:
        return math.sqrt(float(self.diam_sq))

    @property
    def diameter_bound(self) -> float:
        return math.sqrt(float(self.diameter_bound_sq))

    def contains(self, point, closed: bool = True) -> bool:
        """Exact membership of a model-torus point in the cylinder."""
        return _rect_contains_torus(self.frame, self.rect, point, closed=closed)


@dataclass(frozen=True)
class PreimageReport:
    """Admissible words of a fixed window whose closed cylinders contain a
    point.  ``count`` is exact; ``words`` lists them unless there are more
    than the enumeration cap, in which case ``truncated`` is set."""

    depth: int
    count: int
    words: tuple[SymbolicWord, ...]
    truncated: bool


@dataclass(frozen=True)
class CodingContext:
    """Encode/decode against the refinement cells of one construction."""

    construction: MarkovConstruction

    @classmethod
    def from_matrix(cls, matrix: Mat2Z) -> "CodingContext":
        return cls(build_markov_construction(matrix))

    @property
    def part(self) -> TorusPartition:
        return self.construction.refined

    @property
    def frame(self) -> EigenFrame:
        return self.part.frame

    @property
    def n_cells(self) -> int:
        return self.part.n

    # -- conjugation transport ---------------------------------------------

    def to_model(self, point) -> tuple:
        """Carry a point of the input matrix's torus to the model torus."""
        inv = self.construction.conjugation.conjugator.inverse()
        return _point_mod1(inv.act(point))

    def from_model(self, point) -> tuple:
        """Carry a model-torus point back to the input matrix's torus."""
        return _point_mod1(self.construction.conjugation.conjugator.act(point))

    # -- orbits ---------------------------------------------------------------

    def model_orbit(self, point_model, lo: int, hi: int) -> dict:
        """Exact iterates of the model map for times lo..hi inclusive."""
        if lo > hi:
            raise ValueError("empty time window")
        acting = self.part.acting
        backward = acting.inverse()
        orbit = {0: _point_mod1(point_model)}
        y = orbit[0]
        for k in range(1, hi + 1):
            y = _point_mod1(acting.act(y))
            orbit[k] = y
        y = orbit[0]
        for k in range(-1, lo - 1, -1):
            y = _point_mod1(backward.act(y))
            orbit[k] = y
        return {k: orbit[k] for k in range(lo, hi + 1)}

    def _closure_cells(self, y) -> tuple[int, ...]:
        """Cells whose closure contains the model-torus point ``y``."""
        hit = locate(self.part, y)
        if isinstance(hit, CellHit):
            return (hit.index,)
        return tuple(sorted({h.index for h in hit.candidates}))

    # -- encoding ------------------------------------------------------------

    def encode(self, point, depth: int) -> SymbolicWord | BoundaryAmbiguity:
        """Itinerary of ``point`` (input-matrix torus) for iterates
        -depth..depth, or a :class:`BoundaryAmbiguity` describing the first
        iterate that lies on a cell boundary (no single word is canonical
        there)."""
        if depth < 0:
            raise ValueError("depth must be >= 0")
        orbit = self.model_orbit(self.to_model(point), -depth, depth)
        symbols = []
        for k in range(-depth, depth + 1):
            hit = locate(self.part, orbit[k])
            if isinstance(hit, BoundaryHit):
                return BoundaryAmbiguity(
                    k, orbit[k], tuple(sorted({h.index for h in hit.candidates}))
                )
            symbols.append(hit.index)
        word = SymbolicWord(tuple(symbols), -depth)
        matrix = self.construction.refined_graph.matrix
        for a, b in zip(symbols, symbols[1:]):
            if matrix[a][b] == 0:
                raise InvariantError(
                    f"itinerary {word} uses a non-edge {a}->{b}"
                )
        return word

    # -- decoding ------------------------------------------------------------

    def decode(self, word: SymbolicWord) -> DecodeResult:
        """Exact cylinder box named by ``word``.

        Raises ``ValueError`` if the word leaves the symbol range or its
        cylinder is empty (the word is not admissible)."""
        for s in word.symbols:
            if not 0 <= s < self.part.n:
                raise ValueError(f"symbol {s} out of range 0..{self.part.n - 1}")
        pieces = cylinder_components(self.part, word.symbols)
        if not pieces:
            raise ValueError(f"word {word} names an empty cylinder")
        if len(pieces) > 1:
            raise InvariantError(
                f"cylinder of {word} is not connected on the refinement"
            )
        anchored = pieces[0]
        shift = -word.offset  # move the first constrained time to time zero
        rect = anchored.scaled(
            self.part.lam_act ** shift, self.part.mu_act ** shift
        )
        cu = (rect.u_lo + rect.u_hi) / 2
        cw = (rect.w_lo + rect.w_hi) / 2
        cx, cy = self.frame.to_plane(cu, cw)
        diam_sq = rect.diam_sq(self.frame)
        # a-priori decay bound from the shallower side of the window; for any
        # admissible word the mixed endpoint dimensions are dominated by the
        # dimensions of an actual cell, so the bound holds exactly
        half_depth = min(word.offset + len(word) - 1, -word.offset)
        bound_sq = partition_diam_sq(self.part) * (
            self.part.mu_act ** 2
        ) ** half_depth
        if (bound_sq - diam_sq).sign() < 0:
            raise InvariantError(
                f"cylinder of {word} exceeds its decay bound"
            )
        return DecodeResult(
            word=word,
            frame=self.frame,
            anchored=anchored,
            rect=rect,
            center=(_mod1(cx), _mod1(cy)),
            diam_sq=diam_sq,
            diameter_bound_sq=bound_sq,
        )

    # -- preimage structure of the factor map ---------------------------------

    def preimage_report(self, point, depth: int, max_words: int = 8
                        ) -> PreimageReport:
        """All admissible words for the window -depth..depth that code
        ``point`` (input-matrix torus): the point lies in the closure of the
        word's (connected, nonempty) cylinder.

        Membership is tested geometrically against the partial cylinder at
        every step, not per-iterate against cell closures: the latter would
        let different times pick different lattice representatives and
        overcount.  For a point whose orbit window avoids all cell boundaries
        the answer is the single itinerary; on boundaries several words code
        the point."""
        if depth < 0:
            raise ValueError("depth must be >= 0")
        orbit = self.model_orbit(self.to_model(point), -depth, depth)
        times = list(range(-depth, depth + 1))
        part = self.part
        found: list[SymbolicWord] = []

        def extend(prefix: list[int], piece: EigenRect, pos: int):
            # piece: the phi^(pos-1)-advanced partial cylinder, anchored in
            # the box of prefix[-1]; the orbit point at times[pos-1] lies in
            # its closure.
            if pos == len(times):
                found.append(SymbolicWord(tuple(prefix), -depth))
                return
            y = orbit[times[pos]]
            for j in self._closure_cells(y):
                comps = advance_strips(part, [piece], prefix[-1], j)
                if not comps:
                    continue
                if len(comps) > 1:
                    raise InvariantError(
                        "cylinder split into several components on the refinement"
                    )
                if _rect_contains_torus(self.frame, comps[0], y, closed=True):
                    extend(prefix + [j], comps[0], pos + 1)

        start = orbit[times[0]]
        for i in self._closure_cells(start):
            extend([i], part.boxes[i], 1)
        count = len(found)
        truncated = count > max_words
        return PreimageReport(
            depth, count, tuple() if truncated else tuple(found), truncated
        )

    def has_diamond(self, first: SymbolicWord, second: SymbolicWord) -> bool:
        """Whether two words exhibit the diamond pattern: they agree at some
        earlier and some later index, disagree strictly in between, and their
        cylinder closures meet on the torus (so at finite depth they could
        code a common point along two symbol routes)."""
        if first.offset != second.offset or len(first) != len(second):
            raise ValueError("words must share offset and length")
        agree = [i for i, (a, b) in enumerate(zip(first.symbols, second.symbols))
                 if a == b]
        if not agree:
            return False
        k, m = agree[0], agree[-1]
        if not any(first.symbols[l] != second.symbols[l] for l in range(k + 1, m)):
            return False
        r1 = self.decode(first).rect
        r2 = self.decode(second).rect
        return bool(closed_translate_meets(self.frame, r1, r2))

    # -- resolution depth -----------------------------------------------------

    def resolving_depth(self) -> int:
        """Smallest half-window depth at which every cylinder's diameter drops
        below half the expansive constant, so a window of that depth pins the
        coded point to within the constant."""
        half_const = self.frame.eig.expansive_constant / 2
        target = half_const * half_const
        d_sq = partition_diam_sq(self.part)
        mu_sq = self.part.mu_act ** 2
        bound = d_sq
        depth = 0
        while bound >= target:
            bound = bound * mu_sq
            depth += 1
            if depth > 4096:
                raise InvariantError("diameter bound failed to contract")
        return depth


def torus_dist_sq(a, b) -> QuadReal:
    """Exact squared distance between two plane points on the torus (minimum
    over lattice translates, which separates per coordinate)."""

    def coord(da) -> QuadReal:
        if not isinstance(da, QuadReal):
            da = QuadReal(Fraction(da))
        near = (da + Fraction(1, 2)).floor()
        return min(
            (da - shift) ** 2 for shift in (near - 1, near, near + 1)
        )

    return coord(a[0] - b[0]) + coord(a[1] - b[1])
