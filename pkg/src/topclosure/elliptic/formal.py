"""Formal group logarithm of an elliptic curve in the parameter t = -x/y."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .curve import EllipticCurve

Series = list  # coefficient lists, lowest order first, truncated


def _mul(f: Series, g: Series, n: int) -> Series:
    out = [0] * n
    for i, a in enumerate(f[:n]):
        if a:
            for j, b in enumerate(g[: n - i]):
                out[i + j] += a * b
    return out


def _inv(f: Series, n: int) -> Series:
    """1/f mod t^n for f(0) != 0."""
    inv0 = Fraction(1) / f[0]
    out = [Fraction(0)] * n
    out[0] = inv0
    for k in range(1, n):
        s = sum(f[i] * out[k - i] for i in range(1, min(k, len(f) - 1) + 1))
        out[k] = -s * inv0
    return out


def _deriv(f: Series) -> Series:
    return [i * f[i] for i in range(1, len(f))]


def w_series(curve: EllipticCurve, n: int) -> list[int]:
    """w(t) = -1/y as a power series in t, modulo t^n (integer coefficients).

    Fixed point of w = t^3 + a1 t w + a2 t^2 w + a3 w^2 + a4 t w^2 + a6 w^3; each
    pass fixes at least one more coefficient.
    """
    a1, a2, a3, a4, a6 = curve.coeffs
    w = [0] * n
    for _ in range(n):
        w2 = _mul(w, w, n)
        w3 = _mul(w2, w, n)
        new = [0] * n
        if n > 3:
            new[3] = 1
        for i in range(n):
            acc = a3 * w2[i] + a6 * w3[i]
            if i >= 1:
                acc += a1 * w[i - 1] + a4 * w2[i - 1]
            if i >= 2:
                acc += a2 * w[i - 2]
            new[i] += acc
        if new == w:
            break
        w = new
    return w


@dataclass(frozen=True)
class FormalLogSeries:
    """L(t) = sum_{k=1}^{T} c_k t^k with c_1 = 1."""

    curve: EllipticCurve
    coefficients: tuple[Fraction, ...]  # c_1 .. c_T
    omega_num: tuple[Fraction, ...]     # numerator of omega/dt, to order T
    omega_den: tuple[Fraction, ...]     # denominator of omega/dt, to order T

    @property
    def T(self) -> int:
        return len(self.coefficients)

    def derivative(self) -> list[Fraction]:
        return [k * c for k, c in enumerate(self.coefficients, start=1)]

    def check_identity(self) -> bool:
        """dL/dt * den == num modulo t^T, exactly."""
        n = self.T
        lhs = _mul(self.derivative(), list(self.omega_den), n)
        return [Fraction(v) for v in lhs] == [Fraction(v) for v in self.omega_num[:n]]


@lru_cache(maxsize=64)
def formal_log(curve: EllipticCurve, T: int) -> FormalLogSeries:
    """Formal logarithm to order T, integrating the invariant differential.

    With w = t^3 u(t) and A = 1/u we have x = A/t^2, y = -A/t^3, and
    omega/dt = (-2A + t A') / (-2A + a1 t A + a3 t^3).
    """
    if T < 2:
        raise ValueError("truncation order must be at least 2")
    n = T + 1
    w = w_series(curve, n + 3)
    u = [Fraction(c) for c in w[3 : n + 3]]
    a = _inv(u, n)
    num = [-2 * a[i] + (i * a[i] if i else 0) for i in range(n)]
    den = [-2 * a[i] for i in range(n)]
    for i in range(1, n):
        den[i] += curve.a1 * a[i - 1]
    if n > 3:
        den[3] += curve.a3
    omega = _mul(num, _inv(den, n), n)
    coeffs = tuple(Fraction(omega[k - 1]) / k for k in range(1, T + 1))
    return FormalLogSeries(curve, coeffs, tuple(num[:T]), tuple(den[:T]))
