"""Exact arithmetic in Z[zeta_e], the cyclotomic integers of conductor e.

An element is an integer coefficient vector of length phi(e) representing a
residue in Z[x]/(Phi_e(x)), so equality and zero tests are exact. Phi_e is
obtained by exact division of x^e - 1 by the cyclotomic polynomials of the
proper divisors of e.
"""

from __future__ import annotations

from functools import lru_cache


def _trim(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim(out)


def _poly_div_exact(num, den):
    """Divide by a monic polynomial, requiring a zero remainder."""
    num = list(num)
    dn = len(den) - 1
    if len(num) - 1 < dn:
        raise ArithmeticError("degree of numerator below divisor")
    quot = [0] * (len(num) - dn)
    for k in range(len(quot) - 1, -1, -1):
        c = num[k + dn]
        if c:
            quot[k] = c
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return _trim(quot)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(e: int) -> tuple[int, ...]:
    """Coefficients of Phi_e in ascending degree (monic)."""
    if e < 1:
        raise ValueError(f"conductor must be positive, got {e}")
    poly = [-1] + [0] * (e - 1) + [1]
    for d in range(1, e):
        if e % d == 0:
            poly = _poly_div_exact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def euler_phi(e: int) -> int:
    return len(cyclotomic_polynomial(e)) - 1


def _reduce(coeffs, e: int) -> tuple[int, ...]:
    """Reduce an integer polynomial modulo Phi_e; pad to length phi(e)."""
    phi = cyclotomic_polynomial(e)
    deg = len(phi) - 1
    c = list(coeffs)
    for k in range(len(c) - 1, deg - 1, -1):
        lead = c[k]
        if lead:
            base = k - deg
            for j in range(deg):
                c[base + j] -= lead * phi[j]
            c[k] = 0
    del c[deg:]
    if len(c) < deg:
        c.extend([0] * (deg - len(c)))
    return tuple(c)


@lru_cache(maxsize=None)
def zeta_power_coeffs(e: int) -> tuple[tuple[int, ...], ...]:
    """Reduced coefficient vectors of zeta_e^k for k = 0..e-1."""
    return tuple(_reduce([0] * k + [1], e) for k in range(e))


class Cyclotomic:
    """Immutable element of Z[zeta_e]; mixed arithmetic with int is allowed."""

    __slots__ = ("e", "coeffs")

    def __init__(self, e: int, coeffs=()):
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "coeffs", _reduce(coeffs, e))

    def __setattr__(self, name, value):
        raise AttributeError("Cyclotomic is immutable")

    @classmethod
    def integer(cls, e: int, n: int) -> "Cyclotomic":
        return cls(e, (n,))

    @classmethod
    def zeta(cls, e: int, k: int = 1) -> "Cyclotomic":
        """zeta_e^k."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "e", e)
        object.__setattr__(obj, "coeffs", zeta_power_coeffs(e)[k % e])
        return obj

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero

    def _coerce(self, other):
        if isinstance(other, int):
            return Cyclotomic.integer(self.e, other)
        if isinstance(other, Cyclotomic):
            if other.e != self.e:
                raise ValueError(f"conductor mismatch: {self.e} vs {other.e}")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Cyclotomic(self.e, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Cyclotomic(self.e, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Cyclotomic(self.e, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return Cyclotomic(self.e, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Cyclotomic(self.e, _poly_mul(list(self.coeffs), list(other.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined in Z[zeta]")
        result = Cyclotomic.integer(self.e, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == _reduce((other,), self.e)
        if isinstance(other, Cyclotomic):
            return self.e == other.e and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.e, self.coeffs))

    def as_int(self) -> int:
        """The value as a rational integer; raises if it is not one."""
        if any(self.coeffs[1:]):
            raise ValueError(f"not a rational integer: {self}")
        return self.coeffs[0] if self.coeffs else 0

    def divide_exact(self, n: int) -> "Cyclotomic":
        """Divide by a nonzero integer, requiring exact divisibility."""
        if n == 0:
            raise ZeroDivisionError
        if any(c % n for c in self.coeffs):
            raise ValueError(f"{self} is not divisible by {n}")
        return Cyclotomic(self.e, tuple(c // n for c in self.coeffs))

    def raised_to_conductor(self, e2: int) -> "Cyclotomic":
        """Re-express in Z[zeta_e2] via zeta_e = zeta_e2^(e2/e); needs e | e2."""
        if e2 % self.e:
            raise ValueError(f"{self.e} does not divide {e2}")
        step = e2 // self.e
        powers = zeta_power_coeffs(e2)
        phi2 = euler_phi(e2)
        out = [0] * phi2
        for i, c in enumerate(self.coeffs):
            if c:
                row = powers[(i * step) % e2]
                for j in range(phi2):
                    out[j] += c * row[j]
        return Cyclotomic(e2, tuple(out))

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else str(abs(c)) + "*"
                term = f"{mag}z" if i == 1 else f"{mag}z^{i}"
            sign = "-" if c < 0 else ("+" if parts else "")
            parts.append(f"{sign}{term}" if not parts else f" {sign} {term}")
        return "".join(parts)

    def __repr__(self):
        return f"Cyclotomic(e={self.e}, {self})"
