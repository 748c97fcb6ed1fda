"""First-order dual numbers for forward-mode differentiation.

Components may themselves be Dual, which makes second-order (nested)
differentiation work out of the box; the Newton solver relies on this to
push Jacobian tangents through Lagrangian partials. Plain ints/floats are
lifted automatically, so mixed arithmetic is safe as long as previously
created Dual values are re-wrapped at the new seeding level (see
Lagrangian.partials).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import DomainError, NonDifferentiablePoint

Number = Union[float, int, "Dual"]


def primal_value(u: Number) -> float:
    """Innermost float of a possibly nested dual."""
    while isinstance(u, Dual):
        u = u.primal
    return float(u)


def tangent_of(u: Number) -> Number:
    """Top-level tangent; 0 for plain numbers."""
    return u.tangent if isinstance(u, Dual) else 0.0


@dataclass(frozen=True)
class Dual:
    """a + b*eps with eps**2 = 0; a and b may be floats or nested Duals."""

    primal: Number
    tangent: Number = 0.0

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.primal + other.primal, self.tangent + other.tangent)
        return Dual(self.primal + other, self.tangent)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.primal - other.primal, self.tangent - other.tangent)
        return Dual(self.primal - other, self.tangent)

    def __rsub__(self, other):
        return Dual(other - self.primal, -self.tangent)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(
                self.primal * other.primal,
                self.primal * other.tangent + self.tangent * other.primal,
            )
        return Dual(self.primal * other, self.tangent * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            if primal_value(other) == 0.0:
                raise DomainError("division by zero")
            return Dual(
                self.primal / other.primal,
                (self.tangent * other.primal - self.primal * other.tangent)
                / (other.primal * other.primal),
            )
        if primal_value(other) == 0.0:
            raise DomainError("division by zero")
        return Dual(self.primal / other, self.tangent / other)

    def __rtruediv__(self, other):
        if primal_value(self) == 0.0:
            raise DomainError("division by zero")
        return Dual(other / self.primal, -other * self.tangent / (self.primal * self.primal))

    def __neg__(self):
        return Dual(-self.primal, -self.tangent)

    def __pos__(self):
        return self

    def __pow__(self, exponent):
        if isinstance(exponent, Dual):
            # General u**v needs u > 0; realized as exp(v*log(u)).
            if primal_value(self) <= 0.0:
                raise DomainError("power with varying exponent requires a positive base")
            return exp(exponent * log(self))
        return _pow_const(self, float(exponent))

    def __rpow__(self, base):
        if primal_value(base) <= 0.0:
            raise DomainError("power with varying exponent requires a positive base")
        return exp(self * math.log(base))

    def __repr__(self):
        return f"Dual({self.primal!r}, {self.tangent!r})"


def _pow_const(u: Dual, n: float) -> Dual:
    p = primal_value(u)
    if n == 0.0:
        return Dual(u.primal * 0.0 + 1.0, u.tangent * 0.0)
    if p == 0.0:
        if n < 0.0:
            raise DomainError("zero base with negative exponent")
        if n == 1.0:
            return u
        if n < 1.0:
            raise NonDifferentiablePoint(f"power {n} is not differentiable at base 0")
        return Dual(u.primal * 0.0, u.tangent * 0.0)
    if p < 0.0 and n != round(n):
        raise DomainError("negative base with non-integer exponent")
    return Dual(_generic_pow(u.primal, n), n * _generic_pow(u.primal, n - 1.0) * u.tangent)


def _generic_pow(base: Number, n: float):
    if isinstance(base, Dual):
        return _pow_const(base, n)
    return float(base) ** n


def sin(u: Number):
    if isinstance(u, Dual):
        return Dual(sin(u.primal), cos(u.primal) * u.tangent)
    return math.sin(u)


def cos(u: Number):
    if isinstance(u, Dual):
        return Dual(cos(u.primal), -sin(u.primal) * u.tangent)
    return math.cos(u)


def exp(u: Number):
    if isinstance(u, Dual):
        e = exp(u.primal)
        return Dual(e, e * u.tangent)
    return math.exp(u)


def log(u: Number):
    if primal_value(u) <= 0.0:
        raise DomainError("log of a non-positive value")
    if isinstance(u, Dual):
        return Dual(log(u.primal), u.tangent / u.primal)
    return math.log(u)


def sqrt(u: Number):
    p = primal_value(u)
    if p < 0.0:
        raise DomainError("sqrt of a negative value")
    if isinstance(u, Dual):
        if p == 0.0:
            raise NonDifferentiablePoint("sqrt is not differentiable at 0")
        s = sqrt(u.primal)
        return Dual(s, u.tangent / (2.0 * s))
    return math.sqrt(u)


def fabs(u: Number):
    if isinstance(u, Dual):
        p = primal_value(u)
        if p == 0.0:
            if primal_value(tangent_of(u)) != 0.0:
                raise NonDifferentiablePoint("abs is not differentiable at 0")
            return Dual(u.primal * 0.0, u.tangent * 0.0)
        sign = 1.0 if p > 0.0 else -1.0
        return Dual(fabs(u.primal) if isinstance(u.primal, Dual) else abs(u.primal), sign * u.tangent)
    return abs(u)
