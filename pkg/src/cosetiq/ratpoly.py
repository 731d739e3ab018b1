"""Univariate polynomials over Q in the variable t, with Lagrange interpolation."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, Rational):
        return Fraction(c.numerator, c.denominator)
    if isinstance(c, str):
        return Fraction(c)
    # numpy integers
    return Fraction(int(c))


class RatPoly:
    """Coefficients lowest degree first; no trailing zeros (zero polynomial = [])."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> "RatPoly":
        return cls([c])

    @classmethod
    def t(cls) -> "RatPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t):
        t = _frac(t)
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * t + c
        return out

    def _lift(self, other):
        if isinstance(other, RatPoly):
            return other
        if isinstance(other, (int, Rational)) or hasattr(other, "__index__"):
            return RatPoly([other])
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return RatPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return RatPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = RatPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RatPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def to_strings(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]

    @classmethod
    def from_strings(cls, items) -> "RatPoly":
        return cls([Fraction(s) for s in items])

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            sign = "-" if c < 0 else ""
            a = abs(c)
            if mono and a == 1:
                term = sign + mono
            else:
                cs = str(a) if a.denominator == 1 else f"({a})"
                term = sign + (f"{cs}*{mono}" if mono else cs)
            parts.append(term)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"RatPoly({self})"


def lagrange(points) -> RatPoly:
    """The unique polynomial of degree < len(points) through the (x, y) pairs."""
    pts = [(_frac(x), _frac(y)) for x, y in points]
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    out = RatPoly()
    for i, (xi, yi) in enumerate(pts):
        if yi == 0:
            continue
        basis = RatPoly([1])
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * RatPoly([-xj, 1])
                denom *= xi - xj
        out = out + basis * (yi / denom)
    return out


def det_fraction(rows) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    m = [[_frac(x) for x in r] for r in rows]
    k = len(m)
    det = Fraction(1)
    for col in range(k):
        piv = next((r for r in range(col, k) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        p = m[col][col]
        det *= p
        for r in range(col + 1, k):
            f = m[r][col]
            if f:
                f = f / p
                row_c = m[col]
                m[r] = [a - f * b for a, b in zip(m[r], row_c)]
    return det
