"""
Exact polynomial values.

F-polynomials live in the sparse ring ZZ[y1..ym]; cluster variables of the
oracle are Laurent polynomials over ZZ[x1..xn, y1..yn] stored as a numerator
with no monomial x-content and a monomial denominator.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from sympy.polys.domains import ZZ
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing, ring

from foldmatch.exceptions import InexactDivision

Polynomial = PolyElement
GVector = tuple[int, ...]


@lru_cache(maxsize=None)
def y_ring(m: int) -> PolyRing:
    R, *_ = ring([f"y{i}" for i in range(1, m + 1)], ZZ)
    return R


@lru_cache(maxsize=None)
def xy_ring(n: int) -> PolyRing:
    R, *_ = ring([f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)], ZZ)
    return R


def from_terms(m: int, terms: Iterable[tuple[Sequence[int], int]]) -> Polynomial:
    counts: Counter = Counter()
    for exponents, coeff in terms:
        counts[tuple(exponents)] += coeff
    return y_ring(m).from_dict({k: v for k, v in counts.items() if v})


def one(m: int) -> Polynomial:
    return y_ring(m).one


def y_monomial(exponents: Sequence[int]) -> Polynomial:
    return y_ring(len(exponents)).from_dict({tuple(exponents): 1})


def unit(i: int, m: int) -> GVector:
    return tuple(int(j == i) for j in range(1, m + 1))


def zero_vector(m: int) -> GVector:
    return (0,) * m


def add_vectors(*vectors: Sequence[int]) -> GVector:
    return tuple(sum(parts) for parts in zip(*vectors))


def sub_vectors(u: Sequence[int], v: Sequence[int]) -> GVector:
    return tuple(a - b for a, b in zip(u, v))


def _term_key(monom: tuple[int, ...]) -> tuple:
    # total degree, then concentrated monomials first, then reverse lex
    return (sum(monom), -max(monom, default=0), tuple(-e for e in monom))


def _render_monomial(monom: tuple[int, ...]) -> str:
    parts = []
    for i, e in enumerate(monom, start=1):
        if e == 1:
            parts.append(f"y{i}")
        elif e > 1:
            parts.append(f"y{i}^{e}")
    return "*".join(parts)


def canonical_string(p: Polynomial) -> str:
    """
    Terms by total degree, ties broken by the largest single exponent (larger
    first) and then by reverse lexicographic exponent order.

    >>> canonical_string(from_terms(3, [((0, 0, 0), 1), ((1, 0, 1), 1), ((1, 0, 0), 1)]))
    '1 + y1 + y1*y3'
    """
    if not p:
        return "0"
    out = []
    for monom, coeff in sorted(p.items(), key=lambda item: _term_key(item[0])):
        body = _render_monomial(monom)
        magnitude = abs(int(coeff))
        if not body:
            text = str(magnitude)
        elif magnitude == 1:
            text = body
        else:
            text = f"{magnitude}*{body}"
        if not out:
            out.append(text if coeff > 0 else f"-{text}")
        else:
            out.append(f"+ {text}" if coeff > 0 else f"- {text}")
    return " ".join(out)


def render_vector(g: Sequence[int]) -> str:
    return "[" + ",".join(str(v) for v in g) + "]"


def coefficient_sum(p: Polynomial) -> int:
    return int(sum(p.values()))


def top_monomials(p: Polynomial) -> list[tuple[int, ...]]:
    degree = max(sum(m) for m in p.keys())
    return [m for m in p.keys() if sum(m) == degree]


@dataclass(frozen=True)
class LaurentPolynomial:
    """numerator / x^shift with the numerator free of monomial x-content."""
    numerator: PolyElement
    shift: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.shift)

    @classmethod
    def make(cls, numerator: PolyElement, shift: Sequence[int]) -> "LaurentPolynomial":
        n = len(shift)
        R = numerator.ring
        if not numerator:
            return cls(R.zero, (0,) * n)
        lift = [max(0, -s) for s in shift]
        mins = [min(m[i] for m in numerator.keys()) + lift[i] for i in range(n)]
        terms = {}
        for monom, coeff in numerator.items():
            x_part = tuple(monom[i] + lift[i] - mins[i] for i in range(n))
            terms[x_part + tuple(monom[n:])] = coeff
        new_shift = tuple(shift[i] + lift[i] - mins[i] for i in range(n))
        return cls(R.from_dict(terms), new_shift)

    @classmethod
    def variable(cls, k: int, n: int) -> "LaurentPolynomial":
        R = xy_ring(n)
        return cls.make(R.gens[k - 1], (0,) * n)

    @classmethod
    def monomial(cls, x_exponents: Sequence[int], y_exponents: Sequence[int]) -> "LaurentPolynomial":
        n = len(x_exponents)
        R = xy_ring(n)
        positive = tuple(max(0, e) for e in x_exponents)
        shift = tuple(max(0, -e) for e in x_exponents)
        return cls.make(R.from_dict({positive + tuple(y_exponents): 1}), shift)

    def _scaled(self, extra: Sequence[int]) -> PolyElement:
        n = self.rank
        R = self.numerator.ring
        return self.numerator * R.from_dict({tuple(extra) + (0,) * n: 1})

    def __mul__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return LaurentPolynomial.make(
            self.numerator * other.numerator,
            tuple(a + b for a, b in zip(self.shift, other.shift)),
        )

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        if not self.numerator:
            return other
        if not other.numerator:
            return self
        common = tuple(max(a, b) for a, b in zip(self.shift, other.shift))
        left = self._scaled([c - s for c, s in zip(common, self.shift)])
        right = other._scaled([c - s for c, s in zip(common, other.shift)])
        return LaurentPolynomial.make(left + right, common)

    def __pow__(self, power: int) -> "LaurentPolynomial":
        result = LaurentPolynomial.make(self.numerator.ring.one, (0,) * self.rank)
        for _ in range(power):
            result = result * self
        return result

    def exact_divide(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        try:
            quotient = self.numerator.exquo(other.numerator)
        except ExactQuotientFailed as exc:
            raise InexactDivision(f"exchange relation does not divide: {exc}") from exc
        return LaurentPolynomial.make(
            quotient, tuple(a - b for a, b in zip(self.shift, other.shift))
        )

    def specialize_x(self) -> Polynomial:
        """F-polynomial: every x set to 1."""
        n = self.rank
        return from_terms(n, ((monom[n:], coeff) for monom, coeff in self.numerator.items()))

    def terms(self) -> list[tuple[tuple[int, ...], tuple[int, ...], int]]:
        n = self.rank
        return [
            (tuple(m[i] - self.shift[i] for i in range(n)), tuple(m[n:]), int(c))
            for m, c in self.numerator.items()
        ]
