"""Dense univariate polynomials as coefficient lists, lowest degree first.

Coefficients are ints or Fractions over Q, or ints reduced mod p for the
finite-field helpers (suffix ``_p``).
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .intmat import det_int

Poly = list


def trim(f: Sequence) -> Poly:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def deg(f: Sequence) -> int:
    return len(trim(f)) - 1


def padd(f: Sequence, g: Sequence) -> Poly:
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def psub(f: Sequence, g: Sequence) -> Poly:
    return padd(f, [-c for c in g])


def pmul(f: Sequence, g: Sequence) -> Poly:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return trim(out)


def pdivmod(f: Sequence, g: Sequence) -> tuple[Poly, Poly]:
    """Division over Q."""
    g = trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in trim(f)]
    q = [Fraction(0)] * max(len(r) - len(g) + 1, 0)
    lc = Fraction(g[-1])
    while len(r) >= len(g) and r:
        shift = len(r) - len(g)
        c = r[-1] / lc
        q[shift] = c
        for i, b in enumerate(g):
            r[shift + i] -= c * b
        r = trim(r)
    return trim(q), r


def pmod(f: Sequence, g: Sequence) -> Poly:
    return pdivmod(f, g)[1]


def pgcd(f: Sequence, g: Sequence) -> Poly:
    """Monic gcd over Q."""
    a, b = trim(f), trim(g)
    while b:
        a, b = b, pmod(a, b)
    if not a:
        return []
    lc = Fraction(a[-1])
    return [Fraction(c) / lc for c in a]


def derivative(f: Sequence) -> Poly:
    return trim([i * c for i, c in enumerate(f)][1:])


def peval(f: Sequence, x):
    """Horner evaluation; ``x`` may be any ring element supporting + and *."""
    acc = None
    for c in reversed(list(f)):
        acc = c if acc is None else acc * x + c
    return 0 if acc is None else acc


def primitive_part(f: Sequence) -> list[int]:
    """Clear denominators and content of a rational polynomial."""
    from math import gcd, lcm

    fr = [Fraction(c) for c in trim(f)]
    den = 1
    for c in fr:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in fr]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints] if g else ints
    if ints and ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def squarefree_part(f: Sequence) -> list[int]:
    g = pgcd(f, derivative(f))
    return primitive_part(pdivmod(f, g)[0]) if deg(g) > 0 else primitive_part(f)


def sylvester(f: Sequence[int], g: Sequence[int]) -> list[list[int]]:
    m, n = deg(f), deg(g)
    size = m + n
    rows = []
    for i in range(n):
        row = [0] * size
        for j, c in enumerate(reversed(trim(f))):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for j, c in enumerate(reversed(trim(g))):
            row[i + j] = c
        rows.append(row)
    return rows


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Resultant of two integer polynomials (Sylvester determinant)."""
    if deg(f) < 0 or deg(g) < 0:
        return 0
    if deg(f) == 0 and deg(g) == 0:
        return 1
    return det_int(sylvester(f, g))


def discriminant(f: Sequence[int]) -> int:
    f = trim(f)
    n = deg(f)
    if n < 1:
        raise ValueError("discriminant of a constant")
    if n == 1:
        return 1
    r = resultant(f, derivative(f))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    q, rem = divmod(sign * r, f[-1])
    assert rem == 0
    return q


# --- finite fields ---------------------------------------------------------

def trim_p(f: Sequence[int], p: int) -> list[int]:
    return trim([c % p for c in f])


def mul_p(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    return trim_p(pmul(f, g), p)


def divmod_p(f: Sequence[int], g: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    g = trim_p(g, p)
    if not g:
        raise ZeroDivisionError("division by zero polynomial mod p")
    r = trim_p(f, p)
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(r) - len(g) + 1, 0)
    while len(r) >= len(g) and r:
        shift = len(r) - len(g)
        c = r[-1] * inv % p
        q[shift] = c
        for i, b in enumerate(g):
            r[shift + i] = (r[shift + i] - c * b) % p
        r = trim(r)
    return trim(q), r


def gcd_p(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    a, b = trim_p(f, p), trim_p(g, p)
    while b:
        a, b = b, divmod_p(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def powmod_p(base: Sequence[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    b = divmod_p(base, mod, p)[1]
    while e:
        if e & 1:
            result = divmod_p(mul_p(result, b, p), mod, p)[1]
        b = divmod_p(mul_p(b, b, p), mod, p)[1]
        e >>= 1
    return result


def roots_mod_p(f: Sequence[int], p: int) -> list[int]:
    """All roots of f in F_p by exhaustion (desk-scale primes)."""
    fp = trim_p(f, p)
    return [x for x in range(p) if peval(fp, x) % p == 0]


def distinct_degree_p(f: Sequence[int], p: int) -> list[int]:
    """Multiset of irreducible factor degrees of a squarefree monic f mod p."""
    f = trim_p(f, p)
    inv = pow(f[-1], -1, p)
    f = [c * inv % p for c in f]
    degrees: list[int] = []
    h = [0, 1]
    d = 0
    while deg(f) >= 2 * (d + 1):
        d += 1
        h = powmod_p(h, p, f, p)
        g = gcd_p(f, psub(h, [0, 1]), p)
        k = deg(g)
        if k > 0:
            degrees.extend([d] * (k // d))
            f = divmod_p(f, g, p)[0]
            h = divmod_p(h, f, p)[1]
    if deg(f) > 0:
        degrees.append(deg(f))
    return degrees


def _subset_sums(parts: Sequence[int]) -> set[int]:
    sums = {0}
    for d in parts:
        sums |= {s + d for s in sums}
    return sums


def is_irreducible(f: Sequence[int], primes: Sequence[int] = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73)) -> bool:
    """Irreducibility over Q of a monic integer polynomial.

    Rational roots are ruled out first; then factor-degree patterns mod
    several good primes are intersected. Only when the patterns stay
    compatible with a splitting (e.g. x^4 + 1) is a full factorization used.
    """
    f = trim(f)
    n = deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    if f[0] == 0:
        return False
    c0 = abs(f[0])
    divisors = [d for d in range(1, c0 + 1) if c0 % d == 0] if c0 < 10**6 else None
    if divisors is not None:
        for d in divisors:
            if peval(f, d) == 0 or peval(f, -d) == 0:
                return False
    disc = discriminant(f)
    if disc == 0:
        return False
    possible = set(range(1, n))
    for p in primes:
        if disc % p == 0:
            continue
        possible &= _subset_sums(distinct_degree_p(f, p))
        if not possible:
            return True
    import sympy

    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed(f)), x, domain="ZZ").is_irreducible


_TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*(x(?:\s*(?:\^|\*\*)\s*(\d+))?)?")


def parse_poly(text: str, var: str = "x") -> list[Fraction]:
    """Parse e.g. ``"x^3 - 2"`` or ``"1 + 2*x"`` into coefficients."""
    s = text.replace(" ", "").replace(var, "x")
    if not s:
        raise ValueError("empty polynomial")
    coeffs: dict[int, Fraction] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
        sign = -1 if m.group(1) == "-" else 1
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        e = 0
        if m.group(3):
            e = int(m.group(4)) if m.group(4) else 1
        coeffs[e] = coeffs.get(e, Fraction(0)) + sign * c
        pos = m.end()
        if pos < len(s) and s[pos] not in "+-":
            raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
    n = max(coeffs)
    return trim([coeffs.get(i, Fraction(0)) for i in range(n + 1)])


def format_poly(f: Sequence, var: str = "x") -> str:
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = Fraction(f[i])
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = str(a)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if a == 1 else f"{a}*{mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out
