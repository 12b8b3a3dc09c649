"""p-adic integers known modulo p^N, with honest precision propagation."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..exact.factor import valuation as int_valuation


def _vp(n: int, p: int, cap: int) -> int:
    if n == 0:
        return cap
    return min(int_valuation(n, p), cap)


@dataclass(frozen=True)
class PadicInt:
    """An element of Z_p known modulo p^N, stored as its residue in [0, p^N)."""

    p: int
    N: int
    residue: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be a prime")
        if self.N < 0:
            raise ValueError("precision must be non-negative")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    # -- construction -----------------------------------------------------
    @classmethod
    def from_int(cls, p: int, N: int, n: int) -> "PadicInt":
        return cls(p, N, n)

    @classmethod
    def from_fraction(cls, p: int, N: int, q) -> "PadicInt":
        q = Fraction(q)
        if q.denominator % p == 0:
            raise ValueError(f"{q} is not {p}-integral")
        mod = p**N
        return cls(p, N, q.numerator * pow(q.denominator, -1, mod) if N else 0)

    # -- queries ----------------------------------------------------------
    @property
    def modulus(self) -> int:
        return self.p**self.N

    def valuation(self) -> int:
        """Valuation, capped at N (a residue of 0 only says v >= N)."""
        return _vp(self.residue, self.p, self.N)

    def is_zero(self) -> bool:
        """True when indistinguishable from 0 at this precision."""
        return self.residue == 0

    def is_unit(self) -> bool:
        return self.N > 0 and self.residue % self.p != 0

    def agrees(self, other: "PadicInt") -> bool:
        """Equal modulo the smaller of the two precisions."""
        self._check(other)
        n = min(self.N, other.N)
        m = self.p**n
        return self.residue % m == other.residue % m

    def with_prec(self, N: int) -> "PadicInt":
        if N > self.N:
            raise ValueError("cannot raise precision")
        return PadicInt(self.p, N, self.residue)

    def __int__(self) -> int:
        return self.residue

    # -- ring operations --------------------------------------------------
    def _check(self, other: "PadicInt") -> None:
        if self.p != other.p:
            raise ValueError("mixed primes")

    def _lift(self, other) -> "PadicInt":
        if isinstance(other, PadicInt):
            self._check(other)
            return other
        return PadicInt.from_fraction(self.p, self.N, other)

    def __add__(self, other):
        o = self._lift(other)
        n = min(self.N, o.N)
        return PadicInt(self.p, n, self.residue + o.residue)

    __radd__ = __add__

    def __neg__(self):
        return PadicInt(self.p, self.N, -self.residue)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        # error terms p^N_a * b and a * p^N_b
        n = min(self.N + o.valuation(), o.N + self.valuation())
        return PadicInt(self.p, n, self.residue * o.residue)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = PadicInt(self.p, self.N, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def inverse(self) -> "PadicInt":
        """Unit inverse by Newton iteration x <- x (2 - a x)."""
        if not self.is_unit():
            raise ZeroDivisionError("non-unit has no inverse in Z_p")
        p, a = self.p, self.residue
        x = pow(a % p, -1, p)
        k = 1
        while k < self.N:
            k = min(2 * k, self.N)
            m = p**k
            x = x * (2 - a * x) % m
        return PadicInt(p, self.N, x)

    def shift_down(self, k: int) -> "PadicInt":
        """x / p^k for x divisible by p^k; loses k digits of precision."""
        if k == 0:
            return self
        if self.valuation() < k:
            raise ValueError("not divisible by the requested power of p")
        return PadicInt(self.p, self.N - k, self.residue // self.p**k)

    def __truediv__(self, other):
        o = self._lift(other)
        v = o.valuation()
        if v >= o.N:
            raise ZeroDivisionError("divisor indistinguishable from zero")
        unit = o.shift_down(v)
        return self.shift_down(v) * unit.inverse()

    def __repr__(self) -> str:
        return f"PadicInt({self.residue} mod {self.p}^{self.N})"

    def to_json(self) -> dict:
        return {"p": self.p, "N": self.N, "residue": str(self.residue)}


def teichmuller(a: PadicInt) -> PadicInt:
    """The (p-1)-st root of unity congruent to a unit a, via N iterations of x -> x^p."""
    if not a.is_unit():
        raise ValueError("Teichmuller lift needs a unit")
    m = a.modulus
    x = a.residue
    for _ in range(a.N):
        x = pow(x, a.p, m)
    return PadicInt(a.p, a.N, x)


def _log_one_plus(u: int, v: int, p: int, N: int) -> int:
    """log(1+u) mod p^N for an integer u of valuation v >= 1 (v >= 2 when p = 2)."""
    if u == 0:
        return 0
    # stop at the first k where k v - floor(log_p k) >= N: every later term then vanishes mod p^N
    k, logk, nxt = 1, 0, p
    while k * v - logk < N:
        k += 1
        if k == nxt:
            logk += 1
            nxt *= p
    last = k - 1
    extra = max((int_valuation(i, p) for i in range(1, last + 1)), default=0)
    work = p ** (N + extra)
    total = 0
    power = 1
    for i in range(1, last + 1):
        power = power * u % work
        s = int_valuation(i, p)
        unit = i // p**s
        term = (power // p**s) * pow(unit, -1, work)
        total += term if i % 2 else -term
    return total % p**N


def padic_log_unit(a: PadicInt) -> PadicInt:
    """Iwasawa-normalised log of a unit: log(a) = log(a^(p-1)) / (p-1).

    For p = 2 the log of a^2 (which lies in 1 + 8 Z_2) is halved; the result is
    reported with two fewer bits of precision.
    """
    if not a.is_unit():
        raise ValueError("p-adic log needs a unit")
    p, N = a.p, a.N
    if p == 2:
        b = (a * a).residue
        u = (b - 1) % a.modulus
        val = _vp(u, p, N)
        log_b = _log_one_plus(u, max(val, 3), p, N)
        out_n = max(N - 2, 0)
        return PadicInt(p, out_n, (log_b >> 1) % 2**out_n)
    b = pow(a.residue, p - 1, a.modulus)
    u = (b - 1) % a.modulus
    val = _vp(u, p, N)
    log_b = _log_one_plus(u, max(val, 1), p, N)
    return PadicInt(p, N, log_b * pow(p - 1, -1, a.modulus))


def padic_exp(x: PadicInt) -> PadicInt:
    """exp on p Z_p (4 Z_2 for p = 2), known to the input precision."""
    p, N = x.p, x.N
    v = x.valuation()
    need = 2 if p == 2 else 1
    if v < need:
        raise ValueError("exp converges only for valuation >= 1 (>= 2 when p = 2)")
    if x.is_zero():
        return PadicInt(p, N, 1)
    # v_p(x^k / k!) >= k v - (k - 1)/(p - 1), increasing in k
    k = 1
    while (k * v) * (p - 1) - (k - 1) < N * (p - 1):
        k += 1
    last = k - 1
    extra = sum(int_valuation(i, p) for i in range(1, last + 1))
    work = p ** (N + extra)
    total = 1
    power = 1
    fact_unit, fact_val = 1, 0
    for i in range(1, last + 1):
        power = power * x.residue % work
        s = int_valuation(i, p)
        fact_val += s
        fact_unit = fact_unit * (i // p**s) % work
        total += (power // p**fact_val) * pow(fact_unit, -1, work)
    return PadicInt(p, N, total)
