"""Coxeter diagrams of hyperbolic polytopes and their exact Gram matrices.

Diagram file format (UTF-8, line oriented, `#` starts a comment):

    n <dimension>
    facets <count>
    edge <i> <j> <label>

where the label is one of `3`, `4`, `5`, `6`, `inf`, or `dashed <surd>`.
An absent edge means the two hyperplanes are orthogonal.  A label m stands
for dihedral angle pi/m, `inf` for parallel hyperplanes, and `dashed w` for
diverging hyperplanes at Gram entry -w (the printed weight is the magnitude
of the Gram entry).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp

from .errors import BadWeight, DiagramSyntaxError, NotLorentzian, UnsupportedLabel
from .surd import MultiSurd, parse_surd

# Exact cosines of pi/m for the supported finite labels.
_COS = {
    3: MultiSurd(Fraction(1, 2)),
    4: MultiSurd.sqrt(2, Fraction(1, 2)),
    5: MultiSurd({1: Fraction(1, 4), 5: Fraction(1, 4)}),
    6: MultiSurd.sqrt(3, Fraction(1, 2)),
}


@dataclass(frozen=True)
class Finite:
    m: int


@dataclass(frozen=True)
class Infinity:
    pass


@dataclass(frozen=True)
class Dashed:
    weight: MultiSurd


EdgeLabel = Union[Finite, Infinity, Dashed]


@dataclass(frozen=True)
class CoxeterDiagram:
    """Facet-adjacency data: dimension, facet count, labelled edges."""

    dimension: int
    facets: int
    edges: dict[tuple[int, int], EdgeLabel]

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError("dimension must be at least 2")
        if self.facets < self.dimension + 1:
            raise ValueError("need at least dimension + 1 facets")
        for (i, j) in self.edges:
            if not (0 <= i < j < self.facets):
                raise ValueError(f"bad edge indices ({i}, {j})")

    def relabeled(self, perm: list[int]) -> "CoxeterDiagram":
        """Diagram with facet i renamed to perm[i]."""
        edges = {}
        for (i, j), lab in self.edges.items():
            a, b = perm[i], perm[j]
            edges[(min(a, b), max(a, b))] = lab
        return CoxeterDiagram(self.dimension, self.facets, edges)


class GramMatrix:
    """Symmetric matrix of exact Minkowski products of unit facet normals."""

    def __init__(self, dimension: int, entries: list[list[MultiSurd]]):
        self.dimension = dimension
        self.entries = entries
        self.size = len(entries)

    def __getitem__(self, ij: tuple[int, int]) -> MultiSurd:
        return self.entries[ij[0]][ij[1]]

    def submatrix(self, idx: list[int]) -> list[list[MultiSurd]]:
        return [[self.entries[i][j] for j in idx] for i in idx]

    def evaluate(self, prec: int = 128) -> mpmath.matrix:
        """High-precision float image of the matrix."""
        with mp.workprec(prec):
            M = mp.matrix(self.size)
            for i in range(self.size):
                for j in range(self.size):
                    M[i, j] = self.entries[i][j].to_mpf(prec)
        return M

    def permuted(self, perm: list[int]) -> "GramMatrix":
        inv = [0] * self.size
        for i, p in enumerate(perm):
            inv[p] = i
        ent = [[self.entries[inv[i]][inv[j]] for j in range(self.size)]
               for i in range(self.size)]
        return GramMatrix(self.dimension, ent)


def parse_diagram(text: str) -> CoxeterDiagram:
    """Parse the line-oriented diagram format; see the module docstring."""
    dim = None
    facets = None
    edges: dict[tuple[int, int], EdgeLabel] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "n":
            dim = _parse_int(parts, 1, lineno, "dimension")
        elif kind == "facets":
            facets = _parse_int(parts, 1, lineno, "facet count")
        elif kind == "edge":
            if dim is None or facets is None:
                raise DiagramSyntaxError(f"line {lineno}: edge before n/facets header")
            if len(parts) < 4:
                raise DiagramSyntaxError(f"line {lineno}: edge needs i, j and a label")
            i = _parse_int(parts, 1, lineno, "facet index")
            j = _parse_int(parts, 2, lineno, "facet index")
            if i == j:
                raise DiagramSyntaxError(f"line {lineno}: self edge {i}")
            if not (0 <= i < facets and 0 <= j < facets):
                raise DiagramSyntaxError(f"line {lineno}: facet index out of range")
            key = (min(i, j), max(i, j))
            if key in edges:
                raise DiagramSyntaxError(f"line {lineno}: duplicate edge {key}")
            edges[key] = _parse_label(parts[3:], lineno)
        else:
            raise DiagramSyntaxError(f"line {lineno}: unknown directive {kind!r}")
    if dim is None or facets is None:
        raise DiagramSyntaxError("missing n or facets header")
    try:
        return CoxeterDiagram(dim, facets, edges)
    except ValueError as exc:
        raise DiagramSyntaxError(str(exc)) from exc


def _parse_int(parts, k, lineno, what):
    try:
        return int(parts[k])
    except (IndexError, ValueError):
        raise DiagramSyntaxError(f"line {lineno}: bad {what}") from None


def _parse_label(parts: list[str], lineno: int) -> EdgeLabel:
    head = parts[0]
    if head == "inf":
        return Infinity()
    if head == "dashed":
        if len(parts) < 2:
            raise DiagramSyntaxError(f"line {lineno}: dashed edge needs a weight")
        try:
            w = parse_surd(" ".join(parts[1:]))
        except (ValueError, ZeroDivisionError) as exc:
            raise BadWeight(f"line {lineno}: {exc}") from exc
        if (w - 1).sign() <= 0:
            raise BadWeight(
                f"line {lineno}: dashed weight must exceed 1 "
                "(weight 1 means parallel hyperplanes; use inf)"
            )
        return Dashed(w)
    try:
        m = int(head)
    except ValueError:
        raise DiagramSyntaxError(f"line {lineno}: unknown edge label {head!r}") from None
    if m not in (3, 4, 5, 6):
        raise UnsupportedLabel(
            f"line {lineno}: finite label {m} not in {{3,4,5,6}}"
            + (" (drop the edge for a right angle)" if m == 2 else "")
        )
    return Finite(m)


def gram_matrix(diagram: CoxeterDiagram) -> GramMatrix:
    """Exact Gram matrix: 1 on the diagonal, -cos(pi/m) / -1 / -w off it."""
    N = diagram.facets
    one = MultiSurd(1)
    zero = MultiSurd(0)
    G = [[one if i == j else zero for j in range(N)] for i in range(N)]
    for (i, j), lab in diagram.edges.items():
        if isinstance(lab, Finite):
            v = -_COS[lab.m]
        elif isinstance(lab, Infinity):
            v = MultiSurd(-1)
        else:
            v = -lab.weight
        G[i][j] = G[j][i] = v
    return GramMatrix(diagram.dimension, G)


def inertia(entries: list[list[MultiSurd]]) -> tuple[int, int, int]:
    """Exact inertia (pos, neg, zero) of a symmetric surd matrix.

    Symmetric elimination over the multi-quadratic field: nonzero diagonal
    pivots contribute their sign; when the whole diagonal vanishes a nonzero
    off-diagonal entry is pivoted as a hyperbolic pair contributing (1, 1);
    the all-zero matrix contributes only to the null part.
    """
    A = {(i, j): entries[i][j] for i in range(len(entries)) for j in range(len(entries))}
    active = list(range(len(entries)))
    pos = neg = zero = 0
    while active:
        pivot = None
        for i in active:
            s = A[(i, i)].sign()
            if s:
                pivot = (i, s)
                break
        if pivot is not None:
            i, s = pivot
            if s > 0:
                pos += 1
            else:
                neg += 1
            active.remove(i)
            inv = A[(i, i)].inverse()
            for u in active:
                if A[(u, i)].is_zero():
                    continue
                factor = A[(u, i)] * inv
                for v in active:
                    A[(u, v)] = A[(u, v)] - factor * A[(i, v)]
            for u in active:
                A[(u, i)] = A[(i, u)] = MultiSurd(0)
            continue
        off = None
        for a_idx, i in enumerate(active):
            for j in active[a_idx + 1:]:
                if not A[(i, j)].is_zero():
                    off = (i, j)
                    break
            if off:
                break
        if off is None:
            zero += len(active)
            break
        i, j = off
        pos += 1
        neg += 1
        active.remove(i)
        active.remove(j)
        # Schur complement of the hyperbolic block [[0, a], [a, 0]]
        a_inv = A[(i, j)].inverse()
        for u in active:
            bi, bj = A[(u, i)], A[(u, j)]
            if bi.is_zero() and bj.is_zero():
                continue
            for v in active:
                A[(u, v)] = A[(u, v)] - (bi * A[(j, v)] + bj * A[(i, v)]) * a_inv
        for u in active:
            A[(u, i)] = A[(i, u)] = A[(u, j)] = A[(j, u)] = MultiSurd(0)
    return pos, neg, zero


def signature(G: GramMatrix) -> tuple[int, int, int]:
    """Exact signature (positive, negative, zero) of the Gram matrix."""
    return inertia(G.entries)


def assert_lorentzian(G: GramMatrix) -> tuple[int, int, int]:
    """Check signature (n, 1, N - n - 1); raise NotLorentzian otherwise."""
    sig = signature(G)
    n, N = G.dimension, G.size
    if sig != (n, 1, N - n - 1):
        raise NotLorentzian(
            f"signature {sig}, expected ({n}, 1, {N - n - 1}) for a "
            f"{n}-dimensional hyperbolic polytope with {N} facets"
        )
    return sig
