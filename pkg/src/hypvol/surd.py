"""Exact arithmetic in the ring of rational combinations of square roots.

Elements are finite sums sum_D c_D * sqrt(D) with rational coefficients c_D
and squarefree positive integer radicands D (D = 1 is the rational part).
This ring is closed under multiplication because
sqrt(D1)*sqrt(D2) = g*sqrt(D1*D2/g^2) with g = gcd(D1, D2), and it is in
fact a field (every nonzero element is invertible via its Galois conjugates).

Sign determination is exact: the canonical form makes the zero test
syntactic, and nonzero values are separated from zero by interval
evaluation with escalating precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import mpmath
from mpmath import mp

from .errors import PrecisionExhausted

DEFAULT_PREC = 128
MAX_PREC = 4096

_Rat = int | Fraction


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write n = s * f**2 with s squarefree; return (s, f).  Requires n > 0."""
    if n <= 0:
        raise ValueError("radicand must be positive")
    s, f = 1, 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            f *= d ** (e // 2)
            if e % 2:
                s *= d
        d += 1 if d == 2 else 2
    return s * n, f


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n > 0 by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class SurdMonomial:
    """A single term coeff * sqrt(radicand), radicand squarefree and >= 1."""

    coeff: Fraction
    radicand: int

    def __post_init__(self):
        s, f = squarefree_decompose(self.radicand)
        if f != 1:
            raise ValueError(f"radicand {self.radicand} is not squarefree")


@dataclass(frozen=True)
class Interval:
    """Closed enclosure [lo, hi] of a real value, endpoints are mpf."""

    lo: mpmath.mpf
    hi: mpmath.mpf

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    @property
    def width(self) -> mpmath.mpf:
        return self.hi - self.lo


class MultiSurd:
    """Canonical element of the multi-quadratic ring, immutable.

    The term map never stores zero coefficients and every radicand is
    squarefree, so equality of canonical forms is equality of values and
    the zero test is just emptiness of the map.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, _Rat] | _Rat = 0):
        if isinstance(terms, (int, Fraction)):
            terms = {1: terms}
        clean: dict[int, Fraction] = {}
        for rad, coeff in terms.items():
            c = Fraction(coeff)
            if c == 0:
                continue
            s, f = squarefree_decompose(rad)
            clean[s] = clean.get(s, Fraction(0)) + c * f
            if clean[s] == 0:
                del clean[s]
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def rational(cls, p: _Rat, q: int = 1) -> "MultiSurd":
        return cls({1: Fraction(p, q)})

    @classmethod
    def sqrt(cls, d: int, coeff: _Rat = 1) -> "MultiSurd":
        """coeff * sqrt(d) for a positive integer d (d need not be squarefree)."""
        return cls({d: Fraction(coeff)})

    @classmethod
    def from_monomials(cls, monomials: Iterable[SurdMonomial]) -> "MultiSurd":
        acc: dict[int, Fraction] = {}
        for m in monomials:
            acc[m.radicand] = acc.get(m.radicand, Fraction(0)) + m.coeff
        return cls(acc)

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def radicands(self) -> frozenset[int]:
        """Squarefree radicands with nonzero coefficient, excluding 1."""
        return frozenset(r for r in self._terms if r != 1)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self.radicands()

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self._terms.get(1, Fraction(0))

    def coefficient(self, radicand: int) -> Fraction:
        s, f = squarefree_decompose(radicand)
        return self._terms.get(s, Fraction(0)) / f if f != 1 else self._terms.get(s, Fraction(0))

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "MultiSurd":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc = dict(self._terms)
        for r, c in other._terms.items():
            acc[r] = acc.get(r, Fraction(0)) + c
        return MultiSurd(acc)

    __radd__ = __add__

    def __neg__(self) -> "MultiSurd":
        return MultiSurd({r: -c for r, c in self._terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "MultiSurd":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc: dict[int, Fraction] = {}
        for r1, c1 in self._terms.items():
            for r2, c2 in other._terms.items():
                g = math.gcd(r1, r2)
                rad = (r1 // g) * (r2 // g)
                acc[rad] = acc.get(rad, Fraction(0)) + c1 * c2 * g
        return MultiSurd(acc)

    __rmul__ = __mul__

    def inverse(self) -> "MultiSurd":
        """Multiplicative inverse via the product of Galois conjugates."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero surd")
        if self.is_rational():
            return MultiSurd(1 / self.as_rational())
        primes = sorted({p for r in self.radicands() for p in prime_factors(r)})
        numer = MultiSurd(1)
        for mask in range(1, 1 << len(primes)):
            neg = frozenset(p for i, p in enumerate(primes) if mask >> i & 1)
            numer = numer * self.conjugate_by_primes(neg)
        norm = (self * numer).as_rational()
        return numer * MultiSurd(1 / norm)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "MultiSurd":
        if k < 0:
            return self.inverse() ** (-k)
        out = MultiSurd(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- conjugation -------------------------------------------------------

    def conjugate_by_primes(self, neg_primes: frozenset[int]) -> "MultiSurd":
        """Apply the character sending sqrt(p) to -sqrt(p) for p in neg_primes.

        This is always a ring automorphism: the sign of sqrt(D) is the
        parity of the flipped primes dividing D.
        """
        out = {}
        for r, c in self._terms.items():
            parity = sum(1 for p in neg_primes if r % p == 0)
            out[r] = -c if parity % 2 else c
        return MultiSurd(out)

    # -- numeric evaluation ------------------------------------------------

    def to_interval(self, prec: int = DEFAULT_PREC) -> Interval:
        """Rigorous enclosure of the value at the given binary precision."""
        iv = mpmath.iv
        saved = iv.prec
        try:
            iv.prec = prec
            total = iv.mpf(0)
            for r, c in sorted(self._terms.items()):
                t = iv.mpf(c.numerator) / iv.mpf(c.denominator)
                if r != 1:
                    t = t * iv.sqrt(r)
                total = total + t
            lo, hi = total._mpi_
        finally:
            iv.prec = saved
        return Interval(mpmath.make_mpf(lo), mpmath.make_mpf(hi))

    def to_mpf(self, prec: int = DEFAULT_PREC) -> mpmath.mpf:
        """Floating approximation, accurate to roughly the working precision."""
        with mp.workprec(prec + 16):
            total = mp.mpf(0)
            for r, c in sorted(self._terms.items()):
                t = mp.mpf(c.numerator) / mp.mpf(c.denominator)
                if r != 1:
                    t = t * mp.sqrt(r)
                total += t
            total = +total
        return total

    def __float__(self) -> float:
        return float(self.to_mpf(64))

    # -- comparisons -------------------------------------------------------

    def sign(self, start_prec: int = DEFAULT_PREC, max_prec: int = MAX_PREC) -> int:
        """Exact sign in {-1, 0, +1}.

        Zero is decided symbolically (empty canonical term map).  Otherwise
        the value is nonzero, since square roots of distinct squarefree
        integers are linearly independent over Q, and interval evaluation
        at some escalating precision separates it from zero.
        """
        if self.is_zero():
            return 0
        if self.is_rational():
            return 1 if self.as_rational() > 0 else -1
        prec = start_prec
        while prec <= max_prec:
            box = self.to_interval(prec)
            if box.lo > 0:
                return 1
            if box.hi < 0:
                return -1
            prec *= 2
        raise PrecisionExhausted(f"sign of {self} undecided at {max_prec} bits")

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __repr__(self):
        if self.is_zero():
            return "MultiSurd(0)"
        parts = []
        for r, c in sorted(self._terms.items()):
            if r == 1:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"sqrt({r})")
            else:
                parts.append(f"{c}*sqrt({r})")
        return " + ".join(parts).replace("+ -", "- ")


def _coerce(x):
    if isinstance(x, MultiSurd):
        return x
    if isinstance(x, (int, Fraction)):
        return MultiSurd(x)
    return NotImplemented


ZERO = MultiSurd(0)
ONE = MultiSurd(1)


def sign(x: MultiSurd) -> int:
    """Exact sign of a MultiSurd; module-level convenience wrapper."""
    return x.sign()


def mul(a: MultiSurd, b: MultiSurd) -> MultiSurd:
    return a * b


def galois_conjugate(x: MultiSurd, flips: Iterable[int]) -> MultiSurd:
    """Image of x under the field automorphism negating sqrt(D) for D in flips.

    The flip set induces a character on square classes: signs are solved at
    the level of primes (deterministically, unflipped primes default to +1),
    so the map is always a ring homomorphism and an involution.  Radicands
    of x that share primes with the flip set transform consistently; a flip
    set that no character realizes (e.g. {2, 3, 6}) raises ValueError.
    """
    flip_rads = []
    for d in flips:
        s, _ = squarefree_decompose(d)
        if s != 1:
            flip_rads.append(s)
    if not flip_rads:
        return x
    primes = sorted({p for r in flip_rads for p in prime_factors(r)})
    index = {p: i for i, p in enumerate(primes)}
    # GF(2) system: sum of prime signs over p | D must be odd for each flip.
    rows = []
    for r in flip_rads:
        vec = 0
        for p in prime_factors(r):
            vec |= 1 << index[p]
        rows.append((vec, 1))
    solution = _solve_gf2(rows, len(primes))
    if solution is None:
        raise ValueError(f"flip set {sorted(set(flips))} is not induced by any automorphism")
    neg = frozenset(p for p, i in index.items() if solution >> i & 1)
    return x.conjugate_by_primes(neg)


def _solve_gf2(rows: list[tuple[int, int]], nvars: int) -> int | None:
    """Solve a GF(2) linear system given as (bitmask, rhs) rows.

    Returns one solution as a bitmask (free variables set to 0), or None.
    Pivot rows are keyed by their leading bit, so reduction always clears
    the current leading bit and terminates.
    """
    pivots: dict[int, tuple[int, int]] = {}
    for vec, rhs in rows:
        while vec:
            col = vec.bit_length() - 1
            if col not in pivots:
                pivots[col] = (vec, rhs)
                break
            pvec, prhs = pivots[col]
            vec ^= pvec
            rhs ^= prhs
        else:
            if rhs:
                return None
    sol = 0
    for col in sorted(pivots):  # ascending: lower bits of each row are resolved
        vec, rhs = pivots[col]
        acc = rhs
        low = vec & ((1 << col) - 1)
        while low:
            j = low.bit_length() - 1
            acc ^= sol >> j & 1
            low ^= 1 << j
        if acc:
            sol |= 1 << col
    return sol


# -- literal syntax ---------------------------------------------------------

def parse_surd(text: str) -> MultiSurd:
    """Parse a surd literal: `p/q`, `sqrt(D)`, `p/q*sqrt(D)`, and sums.

    Examples: ``sqrt(26)/4``, ``1/4 + 1/4*sqrt(5)``, ``3 - 2*sqrt(2)``.
    """
    tokens = _tokenize(text)
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def take():
        tok = peek()
        pos[0] += 1
        return tok

    def factor() -> MultiSurd:
        tok = take()
        if tok is None:
            raise ValueError(f"unexpected end of surd literal {text!r}")
        if tok == "(":
            v = expr()
            if take() != ")":
                raise ValueError(f"unbalanced parentheses in {text!r}")
            return v
        if tok == "sqrt":
            if take() != "(":
                raise ValueError(f"sqrt needs parentheses in {text!r}")
            arg = take()
            if not isinstance(arg, int) or arg <= 0:
                raise ValueError(f"sqrt argument must be a positive integer in {text!r}")
            if take() != ")":
                raise ValueError(f"unbalanced parentheses in {text!r}")
            return MultiSurd.sqrt(arg)
        if isinstance(tok, int):
            return MultiSurd(tok)
        raise ValueError(f"unexpected token {tok!r} in {text!r}")

    def term() -> MultiSurd:
        v = factor()
        while peek() in ("*", "/"):
            op = take()
            rhs = factor()
            v = v * rhs if op == "*" else v / rhs
        return v

    def expr() -> MultiSurd:
        sgn = 1
        while peek() in ("+", "-"):
            if take() == "-":
                sgn = -sgn
        v = term() * MultiSurd(sgn)
        while peek() in ("+", "-"):
            op = take()
            v = v + term() * MultiSurd(-1 if op == "-" else 1)
        return v

    value = expr()
    if pos[0] != len(tokens):
        raise ValueError(f"trailing tokens in surd literal {text!r}")
    return value


def _tokenize(text: str):
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(int(text[i:j]))
            i = j
        elif text.startswith("sqrt", i):
            out.append("sqrt")
            i += 4
        elif ch in "+-*/()":
            out.append(ch)
            i += 1
        else:
            raise ValueError(f"bad character {ch!r} in surd literal {text!r}")
    return out
