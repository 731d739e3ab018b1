"""Small finite fields F_q, q = p^k <= 64, by table lookup.

Element codes are the integers 0..q-1.  For an extension field the code of
``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` is ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}``,
so code 0 is the additive zero and code 1 the multiplicative unit.  The
defining polynomial is the monic irreducible of degree k with the least such
integer code, which makes every table reproducible.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

MAX_Q = 64


def _factor_prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    return (p, k) if r == 1 else None


def _poly_digits(code: int, p: int, k: int) -> list[int]:
    return [(code // p**i) % p for i in range(k)]


def _poly_mulmod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    """Multiply coefficient lists (lowest first) modulo a monic ``modulus``."""
    k = len(modulus) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k + 1):
                prod[d - k + i] = (prod[d - k + i] - c * modulus[i]) % p
    return prod[:k]


def _is_irreducible(modulus: list[int], p: int) -> bool:
    # no monic factor of degree <= k/2; brute force is cheap for p^k <= 64
    k = len(modulus) - 1
    for d in range(1, k // 2 + 1):
        for low in range(p**d):
            divisor = _poly_digits(low, p, d) + [1]
            rem = list(modulus)
            for top in range(k, d - 1, -1):
                c = rem[top]
                if c:
                    for i in range(d + 1):
                        rem[top - d + i] = (rem[top - d + i] - c * divisor[i]) % p
            if not any(rem[:d]):
                return False
    return True


def least_irreducible(p: int, k: int) -> list[int]:
    """Coefficients (lowest first, monic) of the least monic irreducible of degree k."""
    for low in range(p**k):
        modulus = _poly_digits(low, p, k) + [1]
        if modulus[0] == 0 and k > 1:
            continue
        if _is_irreducible(modulus, p):
            return modulus
    raise AssertionError(f"no irreducible polynomial of degree {k} over F_{p}")


class FieldContext:
    """The field F_q with total add/mul/neg/inv tables (numpy uint8, read-only)."""

    def __init__(self, q: int, p: int, k: int, modulus: list[int],
                 add_table: np.ndarray, mul_table: np.ndarray):
        self.q = q
        self.p = p
        self.k = k
        self.modulus = tuple(modulus)
        self.add_table = add_table
        self.mul_table = mul_table
        self.neg_table = np.array([int(np.nonzero(add_table[a] == 0)[0][0]) for a in range(q)],
                                  dtype=np.uint8)
        inv = np.zeros(q, dtype=np.uint8)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul_table[a] == 1)[0][0])
        self.inv_table = inv
        self.sub_table = add_table[:, self.neg_table]
        for t in (self.add_table, self.mul_table, self.neg_table, self.inv_table, self.sub_table):
            t.setflags(write=False)

    @property
    def is_prime(self) -> bool:
        return self.k == 1

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.sub_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_q")
        return int(self.inv_table[a])

    def pow(self, a: int, e: int) -> int:
        r = 1
        for _ in range(e):
            r = self.mul(r, a)
        return r

    def elements(self) -> range:
        return range(self.q)

    def __eq__(self, other):
        return isinstance(other, FieldContext) and other.q == self.q

    def __hash__(self):
        return hash(("F", self.q))

    def __repr__(self):
        return f"FieldContext(q={self.q})"

    def __reduce__(self):
        return (field_new, (self.q,))


@lru_cache(maxsize=None)
def field_new(q: int) -> FieldContext:
    """Build F_q.  Raises ValueError unless q is a prime power <= 64."""
    if not isinstance(q, (int, np.integer)) or isinstance(q, bool):
        raise ValueError(f"field size must be an integer, got {q!r}")
    q = int(q)
    if q > MAX_Q:
        raise ValueError(f"q={q} exceeds the supported maximum {MAX_Q}")
    pk = _factor_prime_power(q)
    if pk is None:
        raise ValueError(f"q={q} is not a prime power")
    p, k = pk
    if k == 1:
        r = np.arange(q)
        add = ((r[:, None] + r[None, :]) % p).astype(np.uint8)
        mul = ((r[:, None] * r[None, :]) % p).astype(np.uint8)
        return FieldContext(q, p, 1, [0, 1], add, mul)
    modulus = least_irreducible(p, k)
    digits = [_poly_digits(c, p, k) for c in range(q)]
    weights = [p**i for i in range(k)]
    add = np.zeros((q, q), dtype=np.uint8)
    mul = np.zeros((q, q), dtype=np.uint8)
    for a in range(q):
        for b in range(q):
            add[a, b] = sum(((x + y) % p) * w for x, y, w in zip(digits[a], digits[b], weights))
            prod = _poly_mulmod(digits[a], digits[b], modulus, p)
            mul[a, b] = sum(c * w for c, w in zip(prod, weights))
    return FieldContext(q, p, k, modulus, add, mul)
