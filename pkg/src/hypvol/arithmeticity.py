"""Field of definition and (quasi-)arithmeticity of a reflection group.

The reflection group of a Coxeter polytope embeds in the orthogonal group
of a quadratic form defined over the field K generated by the cyclic
products of doubled Gram entries.  The group is quasi-arithmetic when K is
totally real (automatic for surd entries) and every nontrivial Galois
conjugate of the form is definite, and arithmetic when additionally every
cyclic product is an algebraic integer.  Witnesses for each failed
condition are collected in the report.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .diagram import GramMatrix, inertia
from .errors import DisconnectedGraph, FieldNotQ, RankDeficient, TooLarge
from .surd import MultiSurd, prime_factors, squarefree_decompose

MAX_FACETS_FOR_CYCLES = 12


@dataclass(frozen=True)
class CyclicProduct:
    """Product of doubled Gram entries along a closed walk of facets.

    ``cycle`` lists the distinct vertices; the closing edge back to the
    first vertex is implicit.  A 2-cycle is just a doubled entry squared.
    """

    cycle: tuple[int, ...]
    value: MultiSurd


@dataclass(frozen=True)
class QuadraticFormQ:
    """Rescaled Gram restricted to a maximal-rank facet subset.

    Entries lie in the field of definition; for the polytopes in scope that
    field is Q and the matrix is rational.
    """

    matrix: list[list[MultiSurd]]
    basis_facets: tuple[int, ...]


class Classification(enum.Enum):
    ARITHMETIC = "arithmetic"
    PROPERLY_QUASI_ARITHMETIC = "properly quasi-arithmetic"
    NOT_QUASI_ARITHMETIC = "not quasi-arithmetic"


@dataclass(frozen=True)
class ArithmeticityReport:
    field_generators: frozenset[int]
    delta: int | None
    classification: Classification
    witnesses: tuple[str, ...] = field(default=())

    @property
    def field_is_rational(self) -> bool:
        return not self.field_generators


def nonorthogonality_graph(G: GramMatrix) -> dict[int, list[int]]:
    N = G.size
    adj = {i: [] for i in range(N)}
    for i in range(N):
        for j in range(i + 1, N):
            if not G[i, j].is_zero():
                adj[i].append(j)
                adj[j].append(i)
    return adj


def _check_connected(adj: dict[int, list[int]]) -> None:
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) != len(adj):
        missing = sorted(set(adj) - seen)
        raise DisconnectedGraph(f"facets {missing} are orthogonal to the rest")


def enumerate_cycles(G: GramMatrix) -> list[CyclicProduct]:
    """All simple cycles of the non-orthogonality graph, with their values.

    Exhaustive enumeration; guarded by the facet-count limit because the
    cycle count is exponential.  Length-2 cycles (edge there and back) are
    included, so the output is nonempty for any connected graph.
    """
    N = G.size
    if N > MAX_FACETS_FOR_CYCLES:
        raise TooLarge(f"{N} facets exceeds the cycle enumeration limit "
                       f"{MAX_FACETS_FOR_CYCLES}")
    adj = nonorthogonality_graph(G)
    _check_connected(adj)

    def doubled(i, j):
        return G[i, j] * 2

    out = []
    for i in range(N):
        for j in adj[i]:
            if j > i:
                v = doubled(i, j)
                out.append(CyclicProduct((i, j), v * v))
    # simple cycles of length >= 3, canonical: start at the smallest vertex,
    # orient so the second vertex is smaller than the last
    for start in range(N):
        path = [start]
        on_path = {start}

        def dfs(u):
            for w in adj[u]:
                if w == start and len(path) >= 3:
                    if path[1] < path[-1]:
                        value = MultiSurd(1)
                        for a, b in zip(path, path[1:] + [start]):
                            value = value * doubled(a, b)
                        out.append(CyclicProduct(tuple(path), value))
                elif w > start and w not in on_path:
                    path.append(w)
                    on_path.add(w)
                    dfs(w)
                    path.pop()
                    on_path.remove(w)

        dfs(start)
    out.sort(key=lambda c: (len(c.cycle), c.cycle))
    return out


def field_of_definition(cycles: list[CyclicProduct]) -> frozenset[int]:
    """Squarefree radicands generating the field; empty set means Q."""
    gens: set[int] = set()
    for c in cycles:
        gens |= c.value.radicands()
    return frozenset(gens)


def _spanning_tree(adj: dict[int, list[int]], rng: random.Random | None = None) -> dict[int, int]:
    """Parent map of a spanning tree rooted at facet 0.

    Deterministic BFS in index order by default; a seeded rng shuffles the
    exploration order to exercise tree-choice invariance.
    """
    parent = {0: -1}
    frontier = [0]
    while frontier:
        u = frontier.pop(0 if rng is None else rng.randrange(len(frontier)))
        nbrs = sorted(adj[u])
        if rng is not None:
            rng.shuffle(nbrs)
        for v in nbrs:
            if v not in parent:
                parent[v] = u
                frontier.append(v)
    return parent


def _det(mat: list[list[MultiSurd]]) -> MultiSurd:
    """Determinant by fraction-producing Gaussian elimination, exact."""
    n = len(mat)
    A = [row[:] for row in mat]
    det = MultiSurd(1)
    for c in range(n):
        p = next((r for r in range(c, n) if not A[r][c].is_zero()), None)
        if p is None:
            return MultiSurd(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det = det * A[c][c]
        inv = A[c][c].inverse()
        for r in range(c + 1, n):
            if A[r][c].is_zero():
                continue
            f = A[r][c] * inv
            for k in range(c, n):
                A[r][k] = A[r][k] - f * A[c][k]
    return det


def rational_form(G: GramMatrix, rng: random.Random | None = None) -> QuadraticFormQ:
    """Rescale normals along a spanning tree so all pairings land in K.

    Scaling factors multiply along tree edges by the doubled Gram entry;
    the rescaled matrix of pairings then has every entry in the field of
    definition (checked exactly).  The returned form is the first
    lexicographic (n+1)-facet principal submatrix with nonzero determinant.
    """
    adj = nonorthogonality_graph(G)
    _check_connected(adj)
    parent = _spanning_tree(adj, rng)
    lam: dict[int, MultiSurd] = {0: MultiSurd(1)}

    def scale(v):
        if v not in lam:
            u = parent[v]
            lam[v] = scale(u) * (G[u, v] * 2)
        return lam[v]

    N = G.size
    for v in range(N):
        scale(v)
    F = [[lam[i] * lam[j] * G[i, j] for j in range(N)] for i in range(N)]

    gens = field_of_definition(enumerate_cycles(G))
    for i in range(N):
        for j in range(N):
            for r in F[i][j].radicands():
                if not _field_contains(r, gens):
                    raise RankDeficient(
                        f"rescaled entry ({i},{j}) leaves the field of definition"
                    )

    n = G.dimension
    for subset in combinations(range(N), n + 1):
        sub = [[F[i][j] for j in subset] for i in subset]
        if not _det(sub).is_zero():
            return QuadraticFormQ(sub, subset)
    raise RankDeficient("no nonsingular principal submatrix of size n+1; "
                        "inconsistent with a Lorentzian Gram matrix")


def _field_contains(radicand: int, gens: frozenset[int]) -> bool:
    """Is sqrt(radicand) in the multiquadratic field generated by gens?

    Square classes form a GF(2) vector space with primes as coordinates;
    membership is a span test on prime-support masks.
    """
    primes = sorted({p for r in set(gens) | {radicand} for p in prime_factors(r)})
    index = {p: i for i, p in enumerate(primes)}

    def mask(r):
        m = 0
        for p in prime_factors(r):
            m |= 1 << index[p]
        return m

    basis: dict[int, int] = {}  # leading bit -> vector

    def reduce(v):
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                return v
            v ^= basis[top]
        return 0

    for r in sorted(gens):
        v = reduce(mask(r))
        if v:
            basis[v.bit_length() - 1] = v
    return reduce(mask(radicand)) == 0


def squarefree_class(x: Fraction) -> int:
    """Signed squarefree representative of x modulo nonzero squares."""
    if x == 0:
        raise ValueError("zero has no square class")
    v = x.numerator * x.denominator
    sign = 1 if v > 0 else -1
    s, _ = squarefree_decompose(abs(v))
    return sign * s


def discriminant_delta(F: QuadraticFormQ, n: int) -> int:
    """Signed squarefree class of (-1)^((n+1)/2) * det(F) for odd n.

    Only defined over Q: a nonuniform lattice in dimension above 3 forces
    the field of definition to be the rationals.
    """
    if n % 2 == 0:
        raise ValueError("delta is defined for odd dimension only")
    d = _det(F.matrix)
    if not d.is_rational():
        raise FieldNotQ("discriminant class requires a rational form")
    m = (n + 1) // 2
    return squarefree_class(Fraction((-1) ** m) * d.as_rational())


def _is_algebraic_integer(x: MultiSurd) -> bool:
    """Check integrality via the characteristic polynomial of the conjugates.

    The monic product of (X - conjugate) over all prime sign patterns has
    rational coefficients; x is an algebraic integer iff they are integers.
    """
    if x.is_rational():
        return x.as_rational().denominator == 1
    primes = sorted({p for r in x.radicands() for p in prime_factors(r)})
    conjugates = []
    for mask in range(1 << len(primes)):
        neg = frozenset(p for i, p in enumerate(primes) if mask >> i & 1)
        conjugates.append(x.conjugate_by_primes(neg))
    # poly coefficients in MultiSurd arithmetic, constant term first
    poly = [MultiSurd(1)]
    for c in conjugates:
        nxt = [MultiSurd(0)] * (len(poly) + 1)
        for k, a in enumerate(poly):
            nxt[k] = nxt[k] - a * c
            nxt[k + 1] = nxt[k + 1] + a
        poly = nxt
    for a in poly:
        if not a.is_rational() or a.as_rational().denominator != 1:
            return False
    return True


def _field_automorphism_signs(gens: frozenset[int]) -> list[dict[int, int]]:
    """Nontrivial automorphisms of the multiquadratic field, as sign maps.

    Each automorphism is represented by the sign it gives every radicand in
    the square-class group generated by ``gens``; duplicates arising from
    prime patterns acting identically on the group are removed.
    """
    if not gens:
        return []
    primes = sorted({p for g in gens for p in prime_factors(g)})
    seen = set()
    out = []
    for mask in range(1, 1 << len(primes)):
        neg = frozenset(p for i, p in enumerate(primes) if mask >> i & 1)
        action = {}
        for g in sorted(gens):
            parity = sum(1 for p in neg if g % p == 0)
            action[g] = -1 if parity % 2 else 1
        key = tuple(sorted(action.items()))
        if all(v == 1 for v in action.values()) or key in seen:
            continue
        seen.add(key)
        out.append({"primes": neg, "action": action})
    return out


def classify(G: GramMatrix) -> ArithmeticityReport:
    """Arithmeticity classification of the reflection group of G.

    Quasi-arithmetic iff the field of definition is totally real (always
    true here, radicands are positive) and every nontrivial conjugate of
    the rescaled form is definite; arithmetic iff additionally every cyclic
    product is an algebraic integer.
    """
    cycles = enumerate_cycles(G)
    gens = field_of_definition(cycles)
    witnesses: list[str] = []

    quasi = True
    automorphisms = _field_automorphism_signs(gens)
    form = rational_form(G) if automorphisms else None
    for aut in automorphisms:
        conj = [[e.conjugate_by_primes(aut["primes"]) for e in row] for row in form.matrix]
        pos, neg, zero = inertia(conj)
        size = len(conj)
        if not (zero == 0 and (pos == size or neg == size)):
            quasi = False
            flips = sorted(g for g, s in aut["action"].items() if s < 0)
            witnesses.append(
                f"conjugate flipping sqrt of {flips} has signature "
                f"({pos},{neg},{zero}), not definite"
            )

    integral = True
    for c in cycles:
        if not _is_algebraic_integer(c.value):
            integral = False
            witnesses.append(f"cycle {c.cycle} has non-integral value {c.value}")

    if not quasi:
        cls = Classification.NOT_QUASI_ARITHMETIC
    elif integral:
        cls = Classification.ARITHMETIC
    else:
        cls = Classification.PROPERLY_QUASI_ARITHMETIC

    delta = None
    if not gens and G.dimension % 2 == 1:
        delta = discriminant_delta(rational_form(G), G.dimension)

    return ArithmeticityReport(
        field_generators=gens,
        delta=delta,
        classification=cls,
        witnesses=tuple(witnesses),
    )
