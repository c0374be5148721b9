"""Sparse bivariate polynomials with caller-chosen coefficient arithmetic.

Coefficients are ordinary Python numbers.  All operations use plain
``+``/``*``, so feeding ``fractions.Fraction`` inputs keeps every result
exact while float inputs stay in double precision.
"""

from __future__ import annotations

from typing import Dict, Tuple

Index = Tuple[int, int]


class Poly2:
    """Polynomial in two variables, stored as {(i, j): coefficient}."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Index, object] | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def constant(cls, value) -> "Poly2":
        return cls({(0, 0): value})

    @classmethod
    def affine_x(cls, intercept, slope) -> "Poly2":
        """intercept + slope * x."""
        return cls({(0, 0): intercept, (1, 0): slope})

    @classmethod
    def affine_y(cls, intercept, slope) -> "Poly2":
        """intercept + slope * y."""
        return cls({(0, 0): intercept, (0, 1): slope})

    def coeff(self, i: int, j: int):
        return self.terms.get((i, j), 0)

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=0)

    def __add__(self, other: "Poly2") -> "Poly2":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Poly2(out)

    def __mul__(self, other: "Poly2") -> "Poly2":
        out: Dict[Index, object] = {}
        for (i1, j1), v1 in self.terms.items():
            for (i2, j2), v2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + v1 * v2
        return Poly2(out)

    def scale(self, factor) -> "Poly2":
        return Poly2({k: factor * v for k, v in self.terms.items()})

    def pow(self, exponent: int) -> "Poly2":
        if exponent < 0:
            raise ValueError("negative exponent")
        result = Poly2.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def evaluate(self, x, y):
        total = 0
        for (i, j), v in self.terms.items():
            total = total + v * x**i * y**j
        return total

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly2) and self.terms == other.terms

    def __repr__(self) -> str:
        body = " + ".join(
            f"{v!r}*x^{i}y^{j}" for (i, j), v in sorted(self.terms.items())
        )
        return f"Poly2({body or '0'})"
