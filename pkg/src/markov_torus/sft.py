"""Shifts of finite type presented by non-negative integer transition matrices.

A :class:`TransitionGraph` on nodes ``0..n-1`` carries entry ``a[i][j]`` =
number of edges i -> j.  Counting functions are exact integer arithmetic;
only the numeric Perron radius uses floating point (numpy), with the exact
characteristic polynomial available alongside it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

Matrix = tuple[tuple[int, ...], ...]


def _as_matrix(rows) -> Matrix:
    mat = tuple(tuple(int(x) for x in row) for row in rows)
    n = len(mat)
    if n == 0 or any(len(row) != n for row in mat):
        raise ValueError("transition matrix must be square and non-empty")
    if any(x < 0 for row in mat for x in row):
        raise ValueError("transition multiplicities must be non-negative")
    return mat


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _mat_pow(a: Matrix, e: int) -> Matrix:
    n = len(a)
    result = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    base = a
    while e:
        if e & 1:
            result = _mat_mul(result, base)
        base = _mat_mul(base, base)
        e >>= 1
    return result


@dataclass(frozen=True)
class PerronData:
    """Exact characteristic polynomial plus a numeric spectral radius.

    ``char_poly`` lists integer coefficients of det(xI - A) from the leading
    power down to the constant term.  ``spectral_radius`` comes from numpy's
    eigenvalue solver and is reliable to about 1e-12 for the small matrices
    this package produces.
    """

    char_poly: tuple[int, ...]
    spectral_radius: float


@dataclass(frozen=True)
class TransitionGraph:
    """Directed multigraph on ``0..n-1`` given by its multiplicity matrix."""

    matrix: Matrix

    def __init__(self, rows):
        object.__setattr__(self, "matrix", _as_matrix(rows))

    @property
    def n(self) -> int:
        return len(self.matrix)

    def is_zero_one(self) -> bool:
        return all(x <= 1 for row in self.matrix for x in row)

    def power(self, e: int) -> Matrix:
        return _mat_pow(self.matrix, e)

    def edges(self) -> list[tuple[int, int]]:
        """Edges with multiplicity, one pair per parallel edge."""
        return [
            (i, j)
            for i, row in enumerate(self.matrix)
            for j, mult in enumerate(row)
            for _ in range(mult)
        ]

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.matrix)


def count_blocks(graph: TransitionGraph, n: int) -> int:
    """Number of admissible n-blocks: the node count for n = 1, otherwise the
    number of paths with n - 1 edges (sum of entries of A^(n-1))."""
    if n < 1:
        raise ValueError("block length must be >= 1")
    if n == 1:
        return graph.n
    power = graph.power(n - 1)
    return sum(sum(row) for row in power)


def count_periodic(graph: TransitionGraph, n: int) -> int:
    """Number of points of period dividing n (closed paths): trace(A^n)."""
    if n < 1:
        raise ValueError("period must be >= 1")
    power = graph.power(n)
    return sum(power[i][i] for i in range(graph.n))


def higher_block_graph(graph: TransitionGraph) -> tuple[TransitionGraph, list[tuple[int, int]]]:
    """2-block presentation: nodes are admissible 2-blocks (edges of the input),
    with (i,j) -> (k,l) whenever j == k.

    Requires a 0/1 matrix, since 2-blocks over a multigraph are not determined
    by node pairs.  Returns the new graph and the node list in order.
    """
    if not graph.is_zero_one():
        raise ValueError("higher-block presentation needs a 0/1 transition matrix")
    blocks = [
        (i, j)
        for i in range(graph.n)
        for j in range(graph.n)
        if graph.matrix[i][j]
    ]
    index = {b: k for k, b in enumerate(blocks)}
    m = len(blocks)
    rows = [[0] * m for _ in range(m)]
    for (i, j), k in index.items():
        for (j2, l), k2 in index.items():
            if j == j2:
                rows[k][k2] = 1
    return TransitionGraph(rows), blocks


def is_irreducible(graph: TransitionGraph) -> bool:
    """Every ordered node pair is joined by a path (strong connectivity)."""
    n = graph.n
    adj = [[j for j in range(n) if graph.matrix[i][j]] for i in range(n)]
    radj = [[i for i in range(n) if graph.matrix[i][j]] for j in range(n)]

    def reaches_all(start: int, nbrs) -> bool:
        stack = list(nbrs[start])
        visited = set()
        while stack:
            v = stack.pop()
            if v in visited:
                continue
            visited.add(v)
            stack.extend(nbrs[v])
        return visited == set(range(n))

    return reaches_all(0, adj) and reaches_all(0, radj) if n > 1 else graph.matrix[0][0] > 0


def prune_to_recurrent(graph: TransitionGraph) -> tuple[TransitionGraph, list[int]]:
    """Drop nodes that cannot lie on a bi-infinite path (no in- or no out-edges,
    iterated to a fixed point).  Returns the pruned graph and the surviving
    original node indices.  Raises if nothing recurrent remains."""
    keep = list(range(graph.n))
    mat = [list(row) for row in graph.matrix]
    changed = True
    while changed:
        changed = False
        for k in range(len(keep) - 1, -1, -1):
            out_deg = sum(mat[k])
            in_deg = sum(row[k] for row in mat)
            if out_deg == 0 or in_deg == 0:
                del keep[k]
                mat = [row[:k] + row[k + 1:] for i, row in enumerate(mat) if i != k]
                changed = True
    if not keep:
        raise ValueError("no recurrent part: every node is transient")
    return TransitionGraph(mat), keep


def char_poly(graph: TransitionGraph) -> tuple[int, ...]:
    """Integer coefficients of det(xI - A), leading coefficient first,
    via the Faddeev-LeVerrier recursion run over exact rationals."""
    n = graph.n
    a = [[Fraction(x) for x in row] for row in graph.matrix]
    m = [[Fraction(0)] * n for _ in range(n)]
    coeffs = [Fraction(1)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        m = [
            [sum(a[i][t] * m[t][j] for t in range(n)) + (coeffs[-1] if i == j else 0)
             for j in range(n)]
            for i in range(n)
        ]
        trace_am = sum(sum(a[i][t] * m[t][i] for t in range(n)) for i in range(n))
        coeffs.append(-trace_am / k)
    out = []
    for c in coeffs:
        assert c.denominator == 1
        out.append(int(c))
    return tuple(out)


def perron_data(graph: TransitionGraph) -> PerronData:
    poly = char_poly(graph)
    eigs = np.linalg.eigvals(np.array(graph.matrix, dtype=float))
    radius = float(max(abs(e) for e in eigs))
    return PerronData(char_poly=poly, spectral_radius=radius)


def to_dot(graph: TransitionGraph, labels: list[str] | None = None) -> str:
    """Deterministic DOT text; parallel edges collapse to a multiplicity label."""
    if labels is None:
        labels = [str(i) for i in range(graph.n)]
    if len(labels) != graph.n:
        raise ValueError("need one label per node")
    lines = ["digraph shift {", "  rankdir=LR;"]
    for i, lab in enumerate(labels):
        lines.append(f'  n{i} [label="{lab}"];')
    for i in range(graph.n):
        for j in range(graph.n):
            mult = graph.matrix[i][j]
            if mult == 1:
                lines.append(f"  n{i} -> n{j};")
            elif mult > 1:
                lines.append(f'  n{i} -> n{j} [label="{mult}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
