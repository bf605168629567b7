"""Exhaustive minimization of |p*A + q*A| over canonical n-element sets.

Canonical representatives (min 0, element gcd 1, optionally reflection-deduped)
are generated directly from gap vectors, so each affine-equivalence class is
visited exactly once. Work is sharded by the first gap value; every shard is
searched independently with its own best-so-far, which makes results byte-for-
byte identical whether shards run serially or on a process pool.

A search result is *certified* when the found minimum equals a lower bound
proved for all n-element sets; certification makes the minimum unconditional,
i.e. valid beyond the enumerated span. Anything else is explicitly marked
conditional on the span cap.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .bounds import BoundViolationError, main_constant
from .core import DilationPair, IntSet

__all__ = [
    "SearchResult",
    "enumerate_canonical",
    "min_dilated_sumset",
    "tightness_table",
    "universal_lower_bounds",
    "SEARCH_CSV_HEADER",
]

DEFAULT_WITNESS_CAP = 32


def enumerate_canonical(
    n: int, max_elem: int, use_reflection: bool = False
) -> Iterator[IntSet]:
    """Yield one representative per affine class: min 0, gcd 1, max <= max_elem.

    Sets are emitted in lexicographic order. With use_reflection, a set is
    skipped when its reflection max(A) - A is lexicographically smaller, which
    halves the stream (reflection preserves |p*A + q*A|).
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if max_elem < n - 1:
        raise ValueError(f"no {n}-element canonical sets with max <= {max_elem}")
    if n == 1:
        yield IntSet((0,))
        return

    def rec(prefix: tuple[int, ...], budget: int, k: int) -> Iterator[tuple[int, ...]]:
        if k == 0:
            yield prefix
            return
        for g in range(1, budget - (k - 1) + 1):
            yield from rec(prefix + (g,), budget - g, k - 1)

    for gaps in rec((), max_elem, n - 1):
        if math.gcd(*gaps) != 1:
            continue
        if use_reflection and tuple(reversed(gaps)) < gaps:
            continue
        elems = [0]
        for g in gaps:
            elems.append(elems[-1] + g)
        yield IntSet(tuple(elems))


def universal_lower_bounds(pq: DilationPair, n: int) -> list[tuple[str, int]]:
    """Lower bounds valid for every n-element set, usable as certificates.

    base: 3n - 2.  q3: 4n - 4, proved for the pair (1, 3).  fd_reduced: 4n - 4
    for p >= 2 and n >= 2 — every set reduces (preserving n and the sumset
    size) to a reduced set, a reduced set with p >= 2 occupies at least two
    classes mod p and mod q, and the class-count bound (r+s)n - rs is minimized
    at r = s = 2.  main: (p+q)n minus the main constant.
    """
    cands = [("base", 3 * n - 2)]
    if (pq.p, pq.q) == (1, 3):
        cands.append(("q3", 4 * n - 4))
    if pq.p >= 2 and n >= 2:
        cands.append(("fd_reduced", 4 * n - 4))
    cands.append(("main", (pq.p + pq.q) * n - main_constant(pq)))
    return cands


@dataclass(frozen=True)
class SearchResult:
    pair: DilationPair
    n: int
    max_elem: int
    use_reflection: bool
    minimum: int
    witnesses: tuple[IntSet, ...]
    witnesses_truncated: bool
    certified: bool
    certificate: str | None
    conditional_on_span: bool
    sets_examined: int

    def to_json_dict(self) -> dict:
        return {
            "pair": {"p": self.pair.p, "q": self.pair.q},
            "n": self.n,
            "max_elem": self.max_elem,
            "use_reflection": self.use_reflection,
            "minimum": self.minimum,
            "witnesses": [list(w) for w in self.witnesses],
            "witnesses_truncated": self.witnesses_truncated,
            "certified": self.certified,
            "certificate": self.certificate,
            "conditional_on_span": self.conditional_on_span,
            "sets_examined": self.sets_examined,
        }

    def to_csv_row(self) -> list:
        return [
            self.pair.p,
            self.pair.q,
            self.n,
            self.max_elem,
            self.minimum,
            self.certified,
            self.certificate or "",
            self.conditional_on_span,
            self.sets_examined,
            len(self.witnesses),
            " ".join(str(x) for x in self.witnesses[0]) if self.witnesses else "",
        ]


SEARCH_CSV_HEADER = [
    "p",
    "q",
    "n",
    "max_elem",
    "minimum",
    "certified",
    "certificate",
    "conditional_on_span",
    "sets_examined",
    "witness_count",
    "first_witness",
]


def _search_shard(
    n: int,
    p: int,
    q: int,
    max_elem: int,
    first_gap: int,
    use_reflection: bool,
    prune: bool,
    witness_cap: int,
) -> tuple[int | None, list[tuple[int, ...]], int, bool]:
    """Exhaust all canonical sets whose first gap is first_gap.

    Returns (minimum, witness element tuples, sets examined, witnesses dropped).
    The best-so-far starts fresh here so shard output is independent of any
    other shard, keeping parallel and serial runs identical.
    """
    best: int | None = None
    wits: list[tuple[int, ...]] = []
    dropped = False
    examined = 0

    def record(elems: list[int], size: int) -> None:
        nonlocal best, wits, dropped
        if best is None or size < best:
            best = size
            wits = [tuple(elems)]
            dropped = False
        elif size == best:
            if len(wits) < witness_cap:
                wits.append(tuple(elems))
            else:
                dropped = True

    def dfs(elems: list[int], gaps: tuple[int, ...], sums: set[int], g: int) -> None:
        nonlocal examined
        k = len(elems)
        budget = max_elem - elems[-1]
        hi = budget - (n - k - 1)
        candidates = (
            range(first_gap, first_gap + 1) if k == 1 else range(1, hi + 1)
        )
        for gap in candidates:
            if gap > hi:
                break
            x = elems[-1] + gap
            ngaps = gaps + (gap,)
            if k + 1 == n:
                if math.gcd(g, gap) != 1:
                    continue
                if use_reflection and tuple(reversed(ngaps)) < ngaps:
                    continue
                nsums = set(sums)
                for s in elems:
                    nsums.add(p * s + q * x)
                    nsums.add(p * x + q * s)
                nsums.add((p + q) * x)
                examined += 1
                elems.append(x)
                record(elems, len(nsums))
                elems.pop()
            else:
                nsums = set(sums)
                for s in elems:
                    nsums.add(p * s + q * x)
                    nsums.add(p * x + q * s)
                nsums.add((p + q) * x)
                # every further element adds at least 3 new sums beyond the
                # current maximum, so this subtree cannot beat a strictly
                # smaller best (ties are kept for witness collection)
                if prune and best is not None and len(nsums) + 3 * (n - k - 1) > best:
                    continue
                elems.append(x)
                dfs(elems, ngaps, nsums, math.gcd(g, gap))
                elems.pop()

    dfs([0], (), {0}, 0)
    return best, wits, examined, dropped


def min_dilated_sumset(
    n: int,
    pq: DilationPair,
    max_elem: int,
    use_reflection: bool = True,
    jobs: int = 1,
    prune: bool = True,
    witness_cap: int = DEFAULT_WITNESS_CAP,
) -> SearchResult:
    """Exhaustive minimum of |p*A + q*A| over canonical n-sets within max_elem.

    The result is certified (hence a true global minimum over all n-element
    sets, not just those enumerated) exactly when the minimum matches one of
    the proved universal lower bounds; otherwise it is flagged conditional on
    the span cap. A minimum strictly below a proved bound raises
    BoundViolationError, which would be a critical finding.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if max_elem < n - 1:
        raise ValueError(f"no {n}-element canonical sets with max <= {max_elem}")
    if witness_cap < 1:
        raise ValueError("witness_cap must be at least 1")
    if jobs < 1:
        raise ValueError("jobs must be at least 1")

    if n == 1:
        minimum, shard_results = 1, [(1, [(0,)], 1, False)]
    else:
        first_gaps = list(range(1, max_elem - (n - 2) + 1))
        args = [
            (n, pq.p, pq.q, max_elem, g1, use_reflection, prune, witness_cap)
            for g1 in first_gaps
        ]
        if jobs == 1:
            shard_results = [_search_shard(*a) for a in args]
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                shard_results = list(pool.map(_search_shard, *zip(*args)))
        minimum = min(r[0] for r in shard_results if r[0] is not None)

    witnesses: list[IntSet] = []
    truncated = False
    examined = 0
    for shard_min, shard_wits, shard_examined, shard_dropped in shard_results:
        examined += shard_examined
        if shard_min != minimum:
            continue
        if shard_dropped:
            truncated = True
        for w in shard_wits:
            if len(witnesses) < witness_cap:
                witnesses.append(IntSet(w))
            else:
                truncated = True

    cands = universal_lower_bounds(pq, n)
    best_name, best_bound = max(cands, key=lambda c: c[1])
    for name, value in cands:  # earliest name wins ties
        if value == best_bound:
            best_name = name
            break
    if minimum < best_bound:
        raise BoundViolationError(
            f"search minimum {minimum} undercuts proved bound {best_name}={best_bound} "
            f"for pair {pq}, n={n}"
        )
    certified = minimum == best_bound
    return SearchResult(
        pair=pq,
        n=n,
        max_elem=max_elem,
        use_reflection=use_reflection,
        minimum=minimum,
        witnesses=tuple(witnesses),
        witnesses_truncated=truncated,
        certified=certified,
        certificate=best_name if certified else None,
        conditional_on_span=not certified,
        sets_examined=examined,
    )


def tightness_table(
    pq: DilationPair,
    n_range: Iterable[int] | Sequence[int],
    max_elem: int,
    use_reflection: bool = True,
    jobs: int = 1,
    prune: bool = True,
    witness_cap: int = DEFAULT_WITNESS_CAP,
) -> tuple[SearchResult, ...]:
    """One search result per n, for tabulating how tight the bounds run."""
    return tuple(
        min_dilated_sumset(
            n,
            pq,
            max_elem,
            use_reflection=use_reflection,
            jobs=jobs,
            prune=prune,
            witness_cap=witness_cap,
        )
        for n in n_range
    )
