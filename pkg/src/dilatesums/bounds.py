"""Exact evaluation of all lower/upper size bounds for p*A + q*A.

Constants are arbitrary-precision (the additive constant (pq)^((p+q-3)(p+q)+1)
overflows 64 bits already at p+q = 7) and every comparison is exact: integer
cross-multiplication for the rational family, big integers elsewhere. Nothing
here ever goes through floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .core import DilationPair, IntSet, dilated_sumset_size
from .residues import ResiduePartition, partition

__all__ = [
    "BoundViolationError",
    "PropBound",
    "BoundSet",
    "BoundReport",
    "main_constant",
    "theoretical_bounds",
    "verify_bounds",
]


class BoundViolationError(RuntimeError):
    """A computed sumset undercut a proved lower bound: a critical finding."""


def main_constant(pq: DilationPair) -> int:
    """(pq)^((p+q-3)(p+q)+1), the additive constant of the strongest bound."""
    s = pq.p + pq.q
    return (pq.p * pq.q) ** ((s - 3) * s + 1)


def _fraction_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True)
class PropBound:
    """One member of the inductive bound family m*n/(p+q) - (pq)^(m+1-3(p+q))."""

    m: int
    constant: int
    value: Fraction

    def to_json_dict(self) -> dict:
        return {"m": self.m, "constant": str(self.constant), "value": _fraction_str(self.value)}


@dataclass(frozen=True)
class BoundSet:
    """Every applicable bound for a set of size n under one dilation pair.

    Lower bounds: base (3n-2), q3 (4n-4, pair (1,3) only), fd ((r+s)n - rs,
    needs partition data), the prop family for 3(p+q) <= m <= (p+q)^2, and
    main ((p+q)n minus the main constant). interval_upper ((p+q)n - (p+q-1))
    bounds |p*X + q*X| from above for intervals X only.
    """

    pair: DilationPair
    n: int
    base: int
    q3: int | None
    fd: int | None
    prop: tuple[PropBound, ...]
    main: int
    interval_upper: int

    def to_json_dict(self) -> dict:
        return {
            "base": self.base,
            "q3": self.q3,
            "fd": self.fd,
            "prop": [b.to_json_dict() for b in self.prop],
            "main": str(self.main),
            "interval_upper": self.interval_upper,
        }


def theoretical_bounds(
    pq: DilationPair, n: int, part: ResiduePartition | None = None
) -> BoundSet:
    """Evaluate every bound exactly for sets of size n; fd needs a partition."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    p, q = pq.p, pq.q
    s = p + q
    fd = None
    if part is not None:
        fd = (part.r + part.s) * n - part.r * part.s
    prop = []
    constant = p * q  # C_m at m = 3(p+q) is (pq)^1
    for m in range(3 * s, s * s + 1):
        prop.append(PropBound(m=m, constant=constant, value=Fraction(m * n, s) - constant))
        constant *= p * q
    return BoundSet(
        pair=pq,
        n=n,
        base=3 * n - 2,
        q3=4 * n - 4 if (p, q) == (1, 3) else None,
        fd=fd,
        prop=tuple(prop),
        main=s * n - main_constant(pq),
        interval_upper=s * n - (s - 1),
    )


@dataclass(frozen=True)
class BoundReport:
    """Actual |p*A + q*A| against every applicable bound.

    violations lists the names of failed comparisons and must be empty: any
    entry means a proved inequality broke on a concrete set. Slack is
    actual - bound for lower bounds and interval_upper - actual for the upper
    bound (None when A is not an interval).
    """

    pair: DilationPair
    n: int
    actual: int
    is_interval: bool
    bounds: BoundSet
    violations: tuple[str, ...]

    @cached_property
    def slack(self) -> dict:
        b = self.bounds
        out: dict = {
            "base": self.actual - b.base,
            "q3": None if b.q3 is None else self.actual - b.q3,
            "fd": None if b.fd is None else self.actual - b.fd,
            "prop": {str(e.m): Fraction(self.actual) - e.value for e in b.prop},
            "main": self.actual - b.main,
            "interval_upper": b.interval_upper - self.actual if self.is_interval else None,
        }
        return out

    def to_json_dict(self) -> dict:
        slack = self.slack
        return {
            "pair": {"p": self.pair.p, "q": self.pair.q},
            "n": self.n,
            "actual": self.actual,
            "is_interval": self.is_interval,
            "bounds": self.bounds.to_json_dict(),
            "slack": {
                "base": slack["base"],
                "q3": slack["q3"],
                "fd": slack["fd"],
                "prop": {k: _fraction_str(v) for k, v in slack["prop"].items()},
                "main": str(slack["main"]),
                "interval_upper": slack["interval_upper"],
            },
            "violations": list(self.violations),
        }


def verify_bounds(A: IntSet, pq: DilationPair, backend: str = "auto") -> BoundReport:
    """Compute |p*A + q*A| and compare it exactly against every bound."""
    if not len(A):
        raise ValueError("verify_bounds requires a nonempty set")
    n = len(A)
    part = partition(A, pq)
    bounds = theoretical_bounds(pq, n, part)
    actual = dilated_sumset_size(A, pq, backend)
    s = pq.p + pq.q
    violations = []
    if actual < bounds.base:
        violations.append("base")
    if bounds.q3 is not None and actual < bounds.q3:
        violations.append("q3")
    if bounds.fd is not None and actual < bounds.fd:
        violations.append("fd")
    for entry in bounds.prop:
        # actual >= m*n/s - C  <=>  s*actual >= m*n - s*C, kept in integers
        if s * actual < entry.m * n - s * entry.constant:
            violations.append(f"prop[{entry.m}]")
    if actual < bounds.main:
        violations.append("main")
    is_interval = A.span + 1 == n
    if is_interval and actual > bounds.interval_upper:
        violations.append("interval_upper")
    return BoundReport(
        pair=pq,
        n=n,
        actual=actual,
        is_interval=is_interval,
        bounds=bounds,
        violations=tuple(violations),
    )
