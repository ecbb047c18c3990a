"""Normally ordered elements of the Weyl algebra over Q."""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .exactlin import format_rat, rat

Monomial = tuple[tuple[int, ...], tuple[int, ...]]  # (x exponents, d exponents)


class WeylPoly:
    """Sum of ``c * x^a d^b`` with all x's to the left of all d's."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Monomial, Fraction] | None = None):
        self.n = n
        self.terms = {m: rat(c) for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, n: int, c) -> "WeylPoly":
        return cls(n, {((0,) * n, (0,) * n): rat(c)})

    @classmethod
    def x(cls, n: int, i: int) -> "WeylPoly":
        e = tuple(1 if k == i else 0 for k in range(n))
        return cls(n, {(e, (0,) * n): Fraction(1)})

    @classmethod
    def d(cls, n: int, i: int) -> "WeylPoly":
        e = tuple(1 if k == i else 0 for k in range(n))
        return cls(n, {((0,) * n, e): Fraction(1)})

    @classmethod
    def linear(cls, n: int, xs: Sequence = (), ds: Sequence = (), c=0) -> "WeylPoly":
        """``sum xs[i] x_i + sum ds[i] d_i + c``."""
        out = cls.const(n, c)
        for i, a in enumerate(xs):
            if a:
                out = out + cls.x(n, i).scale(a)
        for i, a in enumerate(ds):
            if a:
                out = out + cls.d(n, i).scale(a)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = WeylPoly.const(self.n, other)
        return isinstance(other, WeylPoly) and self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: "WeylPoly") -> "WeylPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return WeylPoly(self.n, out)

    def __neg__(self) -> "WeylPoly":
        return self.scale(-1)

    def __sub__(self, other: "WeylPoly") -> "WeylPoly":
        return self + (-other)

    def scale(self, c) -> "WeylPoly":
        c = rat(c)
        return WeylPoly(self.n, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other: "WeylPoly") -> "WeylPoly":
        if self.n != other.n:
            raise ValueError("Weyl algebras of different rank")
        out: dict[Monomial, Fraction] = {}
        for (a, b), c1 in self.terms.items():
            for (c, d), c2 in other.terms.items():
                for (xe, de), k in _reorder(b, c):
                    key = (tuple(p + q for p, q in zip(a, xe)), tuple(p + q for p, q in zip(de, d)))
                    out[key] = out.get(key, Fraction(0)) + c1 * c2 * k
        return WeylPoly(self.n, out)

    def order(self) -> int:
        """Operator order (total degree in d); -1 for zero."""
        return max((sum(b) for _, b in self.terms), default=-1)

    def degree(self) -> int:
        return max((sum(a) + sum(b) for a, b in self.terms), default=-1)

    def adjoint(self) -> "WeylPoly":
        """Anti-involution fixing x_i and sending d_i to -d_i."""
        out = WeylPoly(self.n)
        for (a, b), c in self.terms.items():
            sign = -1 if sum(b) % 2 else 1
            # (x^a d^b)^* = (-d)^b x^a
            dpart = WeylPoly(self.n, {((0,) * self.n, b): Fraction(sign)})
            xpart = WeylPoly(self.n, {(a, (0,) * self.n): c})
            out = out + dpart * xpart
        return out

    def __repr__(self) -> str:
        return f"WeylPoly({self.to_str()})"

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items()):
            mono = [f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(a) if e]
            mono += [f"d{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(b) if e]
            parts.append(format_rat(c) + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(parts)


def _reorder(b: tuple[int, ...], c: tuple[int, ...]) -> Iterable[tuple[tuple[tuple[int, ...], tuple[int, ...]], int]]:
    """``d^b x^c`` in normal order."""
    ranges = [range(min(bi, ci) + 1) for bi, ci in zip(b, c)]
    for ks in product(*ranges):
        coeff = 1
        for bi, ci, k in zip(b, c, ks):
            coeff *= comb(bi, k) * comb(ci, k) * factorial(k)
        yield (tuple(ci - k for ci, k in zip(c, ks)), tuple(bi - k for bi, k in zip(b, ks))), coeff
