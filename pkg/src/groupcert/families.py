"""Closed-form orders for the parametrised families that appear in shapes.

Naming follows the Atlas: ``L`` (= PSL), ``U`` (= PSU), ``O+``/``O-`` are the
simple groups; ``SL``, ``GL``, ``PGL``, ``Sp`` are the full matrix groups.
``D`` and ``SD`` take the group order as parameter (``D10`` has order 10).
"""

from __future__ import annotations

import math
import re


def _prod(values) -> int:
    out = 1
    for v in values:
        out *= v
    return out


def order_gl(n: int, q: int) -> int:
    return _prod(q**n - q**i for i in range(n))


def order_sl(n: int, q: int) -> int:
    return order_gl(n, q) // (q - 1)


def order_pgl(n: int, q: int) -> int:
    return order_sl(n, q)


def order_psl(n: int, q: int) -> int:
    return order_sl(n, q) // math.gcd(n, q - 1)


def order_psu(n: int, q: int) -> int:
    full = q ** (n * (n - 1) // 2) * _prod(q**i - (-1) ** i for i in range(2, n + 1))
    return full // math.gcd(n, q + 1)


def order_sp(n: int, q: int) -> int:
    if n % 2:
        raise ValueError("symplectic groups need even dimension")
    m = n // 2
    return q ** (m * m) * _prod(q ** (2 * i) - 1 for i in range(1, m + 1))


def order_psp(n: int, q: int) -> int:
    return order_sp(n, q) // math.gcd(2, q - 1)


def order_omega_plus(n: int, q: int) -> int:
    """Simple group O+_n(q) = P Omega+_n(q), n = 2m even."""
    m = n // 2
    full = q ** (m * (m - 1)) * (q**m - 1) * _prod(q ** (2 * i) - 1 for i in range(1, m))
    return full // math.gcd(4, q**m - 1)


def order_omega_minus(n: int, q: int) -> int:
    m = n // 2
    full = q ** (m * (m - 1)) * (q**m + 1) * _prod(q ** (2 * i) - 1 for i in range(1, m))
    return full // math.gcd(4, q**m + 1)


def order_2e6(q: int) -> int:
    full = q**36 * (q**2 - 1) * (q**5 + 1) * (q**6 - 1) * (q**8 - 1) * (q**9 + 1) * (q**12 - 1)
    return full // math.gcd(3, q + 1)


_FAMILY = re.compile(r"^(L|PSL|SL|GL|PGL|U|PSU|Sp|PSp|S|O)(\d+)([+-]?)\((\d+)\)$")
_DEGREE = re.compile(r"^(A|S|D|SD)(\d+)$")


def family_order(name: str) -> int | None:
    """Order of a family member named in Atlas style, or None if not a family name."""
    m = _DEGREE.match(name)
    if m:
        kind, n = m.group(1), int(m.group(2))
        if kind == "A":
            return math.factorial(n) // 2 if n >= 2 else 1
        if kind == "S":
            return math.factorial(n)
        if kind == "D":
            if n % 2 or n < 2:
                raise ValueError(f"dihedral order must be even: {name}")
            return n
        if n < 16 or n & (n - 1):
            raise ValueError(f"semidihedral order must be a power of 2 >= 16: {name}")
        return n
    m = _FAMILY.match(name)
    if not m:
        return None
    kind, n, sign, q = m.group(1), int(m.group(2)), m.group(3), int(m.group(4))
    if (kind == "O") != bool(sign):
        raise ValueError(f"orthogonal groups need a + or - type: {name}")
    if kind in ("L", "PSL"):
        return order_psl(n, q)
    if kind == "SL":
        return order_sl(n, q)
    if kind == "GL":
        return order_gl(n, q)
    if kind == "PGL":
        return order_pgl(n, q)
    if kind in ("U", "PSU"):
        return order_psu(n, q)
    if kind == "Sp":
        return order_sp(n, q)
    if kind in ("PSp", "S"):
        return order_psp(n, q)
    if sign == "+":
        return order_omega_plus(n, q)
    return order_omega_minus(n, q)
