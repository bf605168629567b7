"""Generators for the three explicit extremal families with predicted sizes.

Each generator returns its set together with the closed-form prediction so
callers can cross-check the formula against the generic sumset machinery
instead of trusting it. Intervals are 1-based ({1..n}); the strided and digit
families are zero-based, which is equivalent up to translation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import IntSet, SpanOverflowError, I64_MAX, _pairwise

__all__ = [
    "ConstructionSpec",
    "interval",
    "strided_block",
    "digit_set",
    "digit_sumset_size",
    "default_digit_params",
    "MAX_ELEMENTS",
]

# Refuse to materialize sets larger than this (runaway parameter guard).
MAX_ELEMENTS = 1 << 27


def interval(n: int) -> IntSet:
    """The interval {1, ..., n}."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"interval length must be a positive integer, got {n}")
    if n > MAX_ELEMENTS:
        raise ValueError(f"interval of {n} elements exceeds the size cap {MAX_ELEMENTS}")
    return IntSet.from_array(np.arange(1, n + 1, dtype=np.int64))


def strided_block(q: int, d: int, n: int) -> tuple[IntSet, int]:
    """X = {i + x*q : 0 <= i <= d, 0 <= x < n} and its predicted |X + q*X|.

    The prediction (q+1)|X| - (d+1)(q-d) is exact on the domain 0 <= d < q,
    n >= 1, n + d >= q (consecutive stride blocks of the sumset must overlap
    or abut; for n + d < q the sumset splits into disjoint pieces and the
    formula overcounts, so such parameters are rejected).
    """
    if not (isinstance(q, int) and isinstance(d, int) and isinstance(n, int)):
        raise ValueError("q, d, n must be integers")
    if not (0 <= d < q and n >= 1 and n + d >= q):
        raise ValueError(
            f"need 0 <= d < q, n >= 1, and n + d >= q; got q={q}, d={d}, n={n}"
        )
    if (d + 1) * n > MAX_ELEMENTS:
        raise ValueError(f"strided block of {(d+1)*n} elements exceeds the size cap")
    if q * (n - 1) + d > I64_MAX:
        raise SpanOverflowError("strided block exceeds the 64-bit element range")
    x = np.add.outer(q * np.arange(n, dtype=np.int64), np.arange(d + 1, dtype=np.int64))
    size = (d + 1) * n
    predicted = (q + 1) * size - (d + 1) * (q - d)
    return IntSet.from_array(x.ravel()), predicted


def _digit_validate(q: int, a: int, t: int) -> None:
    if not (isinstance(q, int) and isinstance(a, int) and isinstance(t, int)):
        raise ValueError("q, a, t must be integers")
    if a < 1:
        raise ValueError("digit range must be nonempty: need a >= 1")
    if 2 * a >= q:
        raise ValueError(f"need 2a < q for carry-freeness; got a={a}, q={q}")
    if t < 0:
        raise ValueError(f"need t >= 0, got t={t}")


def _append_digit(q: int, prefix: np.ndarray, digits: np.ndarray) -> np.ndarray:
    """{d + q*x : x in prefix, d in digits}; sorted because 0 <= d < q."""
    return np.add.outer(q * prefix, digits).ravel()


def digit_set(q: int, a: int, t: int) -> tuple[IntSet, int, int]:
    """Base-q digit set {sum a_i q^i : 0 <= a_i < a, 0 <= i <= t}.

    Returns (A, predicted |A| = a^(t+1), predicted |A + q*A| = a^2 (2a-1)^t);
    both predictions are exact whenever 2a < q, which is enforced.
    """
    _digit_validate(q, a, t)
    size = a ** (t + 1)
    if size > MAX_ELEMENTS:
        raise ValueError(f"digit set of {size} elements exceeds the size cap")
    if a > 1 and (a - 1) * (q ** (t + 1) - 1) // (q - 1) > I64_MAX:
        raise SpanOverflowError("digit set exceeds the 64-bit element range")
    digits = np.arange(a, dtype=np.int64)
    A = digits
    for _ in range(t):
        A = _append_digit(q, A, digits)
    predicted_sumset = a * a * (2 * a - 1) ** t
    return IntSet.from_array(A), size, predicted_sumset


def digit_sumset_size(q: int, a: int, t: int) -> int:
    """Exact |A + q*A| for the digit set, without materializing the sumset.

    Uses the carry-free identity S_t = D + q*(D + S_(t-1)) for D = {0..a-1}:
    since every element of D is below q, |D + q*W| = |D| * |W| exactly, so
    only the much smaller inner sets D + S_(t-1) ever need to be computed.
    Feasible far beyond the point where the sumset itself fits in memory.
    """
    _digit_validate(q, a, t)
    if a == 1:
        return 1
    digits = np.arange(a, dtype=np.int64)
    S = _pairwise(digits, q * digits, "auto", size_only=False)  # S_0 = D + q*D
    for _ in range(t - 1):
        inner = _pairwise(digits, S, "auto", size_only=False)
        S = _append_digit(q, inner, digits)
    if t == 0:
        return len(S)
    return a * int(_pairwise(digits, S, "auto", size_only=True))


def default_digit_params(q: int) -> tuple[int, int]:
    """The balanced parameter choice a = isqrt(q), t = floor(log2 sqrt(q)).

    This is the choice that makes the gap (q+1)|A| - |A + q*A| grow faster
    than any polynomial in q. Only valid when 2*isqrt(q) < q (q >= 3, q != 4).
    """
    if not isinstance(q, int) or q < 1:
        raise ValueError("q must be a positive integer")
    a = math.isqrt(q)
    if 2 * a >= q:
        raise ValueError(f"no valid balanced parameters for q={q}: 2*isqrt(q) >= q")
    t = (q.bit_length() - 1) // 2
    return a, t


@dataclass(frozen=True)
class ConstructionSpec:
    """A named construction plus parameters, buildable into a set.

    kind "interval" takes n; "strided_block" takes q, d, n; "digit_set" takes
    q, a, t. build() returns (set, predictions) where predictions maps
    prediction names to exact integers.
    """

    kind: str
    params: dict

    _KINDS = ("interval", "strided_block", "digit_set")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown construction kind {self.kind!r}; expected one of {self._KINDS}")

    def build(self) -> tuple[IntSet, dict[str, int]]:
        if self.kind == "interval":
            X = interval(**self.params)
            return X, {"size": len(X)}
        if self.kind == "strided_block":
            X, predicted = strided_block(**self.params)
            return X, {"size": len(X), "sumset_with_q": predicted}
        X, size, predicted = digit_set(**self.params)
        return X, {"size": size, "sumset_with_q": predicted}
