"""Closed-form bounds on the burning number of fences G_{m,n}, m = c*sqrt(n).

Real-valued formulas use floats; every integer quantity (path counts, the
finite counting bound, the m used for a given c) is computed exactly with
integers or ``Fraction``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import isqrt

SMALL_C_LIMIT = 2 * math.sqrt(2)


def _frac(c) -> Fraction:
    # floats convert exactly (binary value), strings like "3/2" parse
    return c if isinstance(c, Fraction) else Fraction(c)


def rows_for(c, n: int) -> int:
    """floor(c * sqrt(n)), exactly, clamped to at least one row."""
    c = _frac(c)
    if c <= 0:
        raise ValueError("c must be positive")
    return max(1, isqrt(math.floor(c * c * n)))


def fence_c(m: int, n: int) -> float:
    return m / math.sqrt(n)


def _ell_lower_holds(c: Fraction, n: int, k: int) -> bool:
    # (k-1)*sqrt(k n) + 1 <= c*sqrt(n), decided by exact squaring
    if c * c * n < 1:
        return False
    lhs = c * c * n + 1 - (k - 1) ** 2 * k * n  # must be >= 2 c sqrt(n)
    if lhs < 0:
        return False
    return lhs * lhs >= 4 * c * c * n


def ell_lower(c, n: int) -> int | None:
    """Largest k with (k-1)*sqrt(kn) + 1 <= c*sqrt(n); None if no k qualifies."""
    c = _frac(c)
    if n < 1 or c <= 0:
        raise ValueError("need c > 0 and n >= 1")
    if not _ell_lower_holds(c, n, 1):
        return None
    k = 1
    while _ell_lower_holds(c, n, k + 1):
        k += 1
    return k


def ell_lower_rows(m: int, n: int) -> int | None:
    """ell_lower for an integer number of rows m = c*sqrt(n)."""
    if m < 1:
        return None
    k = 1
    while (k * k * (k + 1) * n) <= (m - 1) ** 2:  # k^2 (k+1) n <= (m-1)^2 tests k+1
        k += 1
    return k


def ell_upper(c) -> int:
    """ceil((c/2)^(2/3)) = least k >= 1 with 4 k^3 >= c^2."""
    c = _frac(c)
    if c <= 0:
        raise ValueError("c must be positive")
    k = max(1, math.floor(float(c / 2) ** (2 / 3)) - 1)
    while 4 * k**3 < c * c:
        k += 1
    while k > 1 and 4 * (k - 1) ** 3 >= c * c:
        k -= 1
    return k


def ell_upper_rows(m: int, n: int) -> int:
    """ell_upper for c = m/sqrt(n): least k >= 1 with 4 k^3 n >= m^2."""
    k = max(1, math.floor((m * m / (4 * n)) ** (1 / 3)) - 1)
    while 4 * k**3 * n < m * m:
        k += 1
    while k > 1 and 4 * (k - 1) ** 3 * n >= m * m:
        k -= 1
    return k


def two_path_capacity(m: int, b: int) -> int:
    """Most vertices of the top and bottom rows that b sources can burn.

    A ball of radius t meets the two rows of an m-row grid in at most 2t+1
    vertices when t <= m-2 and at most 4t-2m+4 when t >= m-1. Summed over
    radii 0..b-1 this is b^2 for b <= m-1 and (m-1)^2 + 2b(b-m+1) beyond.
    """
    if m == 1 or b <= m - 1:
        return b * b
    return (m - 1) ** 2 + 2 * b * (b - m + 1)


def finite_two_path_lower_bound(m: int, n: int) -> int:
    """Least b whose two-path capacity reaches the 2n target vertices (n for m = 1)."""
    if m < 1 or n < 1:
        raise ValueError("need m, n >= 1")
    need = n if m == 1 else 2 * n
    b = max(1, isqrt(need - 1))
    while b > 1 and two_path_capacity(m, b - 1) >= need:
        b -= 1
    while two_path_capacity(m, b) < need:
        b += 1
    return b


def small_c_lower_coefficient(c: float) -> float:
    return c / 2 + math.sqrt(1 - c * c / 4)


def small_c_upper_coefficient(c: float, sign: int = -1) -> float:
    """c/2 + sqrt(1 - c^2/16); ``sign=+1`` gives the variant printed with a plus."""
    return c / 2 + math.sqrt(1 + sign * c * c / 16)


def lower_bound(c, n: int) -> tuple[float, str]:
    cf = float(c)
    if cf <= 0:
        raise ValueError("c must be positive")
    if cf < 2:
        return small_c_lower_coefficient(cf) * math.sqrt(n), "c<2 (asymptotic)"
    ell = ell_lower(c, n)
    if ell is None:
        return math.nan, "c>=2 (inapplicable: no k qualifies)"
    return math.sqrt(ell * n), "c>=2"


def large_c_upper(c, n: int) -> float:
    ell = ell_upper(c)
    return 2 * math.sqrt(ell * n) + ell - 1


def upper_bound(c, n: int) -> tuple[float, str]:
    cf = float(c)
    if cf <= 0:
        raise ValueError("c must be positive")
    large = large_c_upper(c, n)
    if cf <= SMALL_C_LIMIT:
        small = small_c_upper_coefficient(cf) * math.sqrt(n)
        if small < large:
            return small, "c<=2sqrt2 (asymptotic)"
    return large, "large-c"


def prior_cartesian(m: int, n: int) -> float:
    return (1.5 * m * n) ** (1 / 3)


def prior_strong(m: int, n: int) -> float:
    return (0.75 * m * n) ** (1 / 3)


@dataclass
class BoundReport:
    n: int
    m: int
    c: float
    lower_value: float
    finite_lower: int
    upper_value: float
    ell_lower: int | None
    ell_upper: int
    lower_branch: str
    upper_branch: str
    asymptotic_lower: bool
    asymptotic_upper: bool
    prior_cartesian: float
    prior_strong: float
    prior_in_regime: bool
    upper_plus_variant: float | None = None  # small-c coefficient read with +c^2/16

    def to_dict(self, digits: int = 4) -> dict:
        out = asdict(self)
        for key, val in out.items():
            if isinstance(val, float) and math.isfinite(val):
                out[key] = round(val, digits)
        return out


def bound_report(c=None, n: int = 1, m: int | None = None) -> BoundReport:
    """Evaluate every bound for a fence given either (c, n) or (m, n).

    With (c, n) the grid uses m = floor(c*sqrt(n)); with (m, n) the reported
    c is m/sqrt(n). Either way the m actually used is in the report.
    """
    if m is None:
        if c is None:
            raise ValueError("give c or m")
        m = rows_for(c, n)
        cval = _frac(c)
    else:
        cval = Fraction(m) / Fraction(math.isqrt(n)) if math.isqrt(n) ** 2 == n else m / math.sqrt(n)
    cf = float(cval)
    lo, lo_branch = lower_bound(cval, n)
    up, up_branch = upper_bound(cval, n)
    return BoundReport(
        n=n,
        m=m,
        c=cf,
        lower_value=lo,
        finite_lower=finite_two_path_lower_bound(m, n),
        upper_value=up,
        ell_lower=ell_lower(cval, n),
        ell_upper=ell_upper(cval),
        lower_branch=lo_branch,
        upper_branch=up_branch,
        asymptotic_lower="asymptotic" in lo_branch,
        asymptotic_upper="asymptotic" in up_branch,
        prior_cartesian=prior_cartesian(m, n),
        prior_strong=prior_strong(m, n),
        prior_in_regime=m * m > n,
        upper_plus_variant=(
            small_c_upper_coefficient(cf, sign=1) * math.sqrt(n) if up_branch.startswith("c<=2sqrt2") else None
        ),
    )
