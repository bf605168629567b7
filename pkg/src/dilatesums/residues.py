"""Residue-class structure of a set relative to a dilation pair.

Splits A into classes modulo p, modulo q, and their intersections modulo pq
(one cell per residue pair via the Chinese remainder theorem), computes the
gcd divisors that drive the span-shrinking reduction A -> (A - c)/d, and
evaluates the two class/cell dichotomies that the bound machinery relies on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .core import DilationPair, IntSet

__all__ = [
    "ResidueClass",
    "Cell",
    "ResiduePartition",
    "ReductionStep",
    "ReductionTrace",
    "DichotomyRecord",
    "DichotomyReport",
    "partition",
    "is_fully_distributed",
    "reduction_divisors",
    "reduce",
    "is_reduced",
    "check_class_dichotomy",
    "check_cell_dichotomy",
]


@dataclass(frozen=True)
class ResidueClass:
    """One residue class of A modulo m: members = residue + m * quotient."""

    modulus: int
    residue: int
    members: IntSet
    quotient: IntSet

    def to_json_dict(self) -> dict:
        return {
            "residue": self.residue,
            "members": list(self.members),
            "quotient": list(self.quotient),
        }


@dataclass(frozen=True)
class Cell:
    """Intersection of a class mod p with a class mod q; a class mod pq.

    members = offset + pq * quotient, where offset is the CRT representative
    in [0, pq) matching p_residue mod p and q_residue mod q. May be empty.
    """

    p_residue: int
    q_residue: int
    offset: int
    members: IntSet
    quotient: IntSet

    def to_json_dict(self) -> dict:
        return {
            "p_residue": self.p_residue,
            "q_residue": self.q_residue,
            "offset": self.offset,
            "members": list(self.members),
            "quotient": list(self.quotient),
        }


@dataclass(frozen=True)
class ResiduePartition:
    """Full decomposition of A modulo p, q, and pq for one dilation pair."""

    pair: DilationPair
    p_classes: tuple[ResidueClass, ...]
    q_classes: tuple[ResidueClass, ...]
    cells: tuple[tuple[Cell, ...], ...]

    @property
    def r(self) -> int:
        return len(self.p_classes)

    @property
    def s(self) -> int:
        return len(self.q_classes)

    def to_json_dict(self) -> dict:
        return {
            "pair": {"p": self.pair.p, "q": self.pair.q},
            "r": self.r,
            "s": self.s,
            "p_classes": [c.to_json_dict() for c in self.p_classes],
            "q_classes": [c.to_json_dict() for c in self.q_classes],
            "cells": [[c.to_json_dict() for c in row] for row in self.cells],
        }


def _classes_mod(A: IntSet, m: int) -> tuple[ResidueClass, ...]:
    buckets: dict[int, list[int]] = {}
    for x in A:
        buckets.setdefault(x % m, []).append(x)
    return tuple(
        ResidueClass(
            modulus=m,
            residue=r,
            members=IntSet(tuple(v)),
            quotient=IntSet(tuple((x - r) // m for x in v)),
        )
        for r, v in sorted(buckets.items())
    )


def partition(A: IntSet, pq: DilationPair) -> ResiduePartition:
    """Split A into classes mod p, mod q, and the r x s grid of cells mod pq."""
    if not len(A):
        raise ValueError("partition requires a nonempty set")
    p, q = pq.p, pq.q
    p_classes = _classes_mod(A, p)
    q_classes = _classes_mod(A, q)
    by_pq: dict[int, list[int]] = {}
    for x in A:
        by_pq.setdefault(x % (p * q), []).append(x)
    # CRT coefficients: crt(a, b) is the unique offset in [0, pq) hitting
    # a mod p and b mod q.
    cp = q * pow(q, -1, p)
    cq = p * pow(p, -1, q)
    rows = []
    for pc in p_classes:
        row = []
        for qc in q_classes:
            offset = (pc.residue * cp + qc.residue * cq) % (p * q)
            members = by_pq.get(offset, [])
            row.append(
                Cell(
                    p_residue=pc.residue,
                    q_residue=qc.residue,
                    offset=offset,
                    members=IntSet(tuple(members)),
                    quotient=IntSet(tuple((x - offset) // (p * q) for x in members)),
                )
            )
        rows.append(tuple(row))
    part = ResiduePartition(pair=pq, p_classes=p_classes, q_classes=q_classes, cells=tuple(rows))
    assert sum(len(c.members) for row in part.cells for c in row) == len(A)
    return part


def is_fully_distributed(A: IntSet | Iterable[int], m: int) -> bool:
    """True iff A meets every residue class modulo m."""
    if m < 1:
        raise ValueError("modulus must be a positive integer")
    seen: set[int] = set()
    for x in A:
        seen.add(x % m)
        if len(seen) == m:
            return True
    return False


def _side_divisors(A: IntSet, m: int) -> dict[int, int]:
    residues = sorted({x % m for x in A})
    out = {}
    for r in residues:
        g = m
        for r2 in residues:
            g = math.gcd(g, r2 - r)
        out[r] = g
    return out


def reduction_divisors(A: IntSet, pq: DilationPair) -> tuple[dict[int, int], dict[int, int]]:
    """Per-residue gcd divisors on each side: ({p-side}, {q-side}).

    The divisor at residue r modulo m is gcd(m, all residue differences);
    exceeding 1 means the shifted set (A - r) has a common factor to divide out.
    """
    if not len(A):
        raise ValueError("reduction_divisors requires a nonempty set")
    return _side_divisors(A, pq.p), _side_divisors(A, pq.q)


@dataclass(frozen=True)
class ReductionStep:
    side: str  # "p-side" or "q-side"
    residue: int
    divisor: int
    span_before: int

    def to_json_dict(self) -> dict:
        return {
            "side": self.side,
            "residue": self.residue,
            "divisor": self.divisor,
            "span_before": self.span_before,
        }


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[ReductionStep, ...]
    final: IntSet

    def to_json_dict(self) -> dict:
        return {
            "steps": [s.to_json_dict() for s in self.steps],
            "final": list(self.final),
        }


def reduce(A: IntSet, pq: DilationPair) -> tuple[IntSet, ReductionTrace]:
    """Repeatedly divide out residue-class structure until is_reduced holds.

    Each step maps A to (A - r)/d for a side divisor d > 1, which preserves
    |p*A + q*A| and strictly shrinks max - min. When several divisors exceed 1
    the q side is tried first, smallest residue first; the trace records the
    order taken. Singletons return ({0}, empty trace) by convention.
    """
    if not len(A):
        raise ValueError("reduce requires a nonempty set")
    if len(A) == 1:
        return IntSet((0,)), ReductionTrace(steps=(), final=IntSet((0,)))
    steps: list[ReductionStep] = []
    current = A
    while True:
        for m, side in ((pq.q, "q-side"), (pq.p, "p-side")):
            divisors = _side_divisors(current, m)
            hit = next(((r, d) for r, d in sorted(divisors.items()) if d > 1), None)
            if hit is not None:
                r, d = hit
                span_before = current.span
                current = IntSet(tuple((x - r) // d for x in current))
                assert current.span < span_before
                steps.append(ReductionStep(side=side, residue=r, divisor=d, span_before=span_before))
                break
        else:
            break
    return current, ReductionTrace(steps=tuple(steps), final=current)


def is_reduced(A: IntSet, pq: DilationPair) -> bool:
    """True iff no side divisor exceeds 1 (singletons count as reduced)."""
    if not len(A):
        raise ValueError("is_reduced requires a nonempty set")
    if len(A) == 1:
        return True
    dp, dq = reduction_divisors(A, pq)
    return all(d == 1 for d in dp.values()) and all(d == 1 for d in dq.values())


# ---------------------------------------------------------------------------
# dichotomies
# ---------------------------------------------------------------------------


def _ss_size(xs: Iterable[int], ys: Iterable[int], cx: int, cy: int) -> int:
    ys = list(ys)
    return len({cx * x + cy * y for x in xs for y in ys})


@dataclass(frozen=True)
class DichotomyRecord:
    """One branch evaluation; satisfied when either branch (or triviality) holds."""

    kind: str  # "class" or "cell"
    form: str  # "p" or "q": which modulus the FD branch uses
    p_residue: int | None
    q_residue: int | None
    trivial: bool
    hypothesis_met: bool
    fd_holds: bool
    inequality_holds: bool
    lhs: int
    rhs: int

    @property
    def satisfied(self) -> bool:
        return self.trivial or not self.hypothesis_met or self.fd_holds or self.inequality_holds

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "form": self.form,
            "p_residue": self.p_residue,
            "q_residue": self.q_residue,
            "trivial": self.trivial,
            "hypothesis_met": self.hypothesis_met,
            "fd_holds": self.fd_holds,
            "inequality_holds": self.inequality_holds,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "satisfied": self.satisfied,
        }


@dataclass(frozen=True)
class DichotomyReport:
    pair: DilationPair
    kind: str  # "class" or "cell"
    reduced_input: bool
    records: tuple[DichotomyRecord, ...]

    @property
    def all_satisfied(self) -> bool:
        return all(rec.satisfied for rec in self.records)

    def to_json_dict(self) -> dict:
        return {
            "pair": {"p": self.pair.p, "q": self.pair.q},
            "kind": self.kind,
            "reduced_input": self.reduced_input,
            "all_satisfied": self.all_satisfied,
            "records": [rec.to_json_dict() for rec in self.records],
        }


def check_class_dichotomy(A: IntSet, pq: DilationPair) -> DichotomyReport:
    """Per residue class: FD quotient, or the class-vs-whole-set size gap.

    For each class Q_j mod q the record checks whether the quotient Q_j' is
    fully distributed mod q, and whether |p*Q_j + q*A| >= |p*Q_j + q*Q_j| +
    min_m |Q_m|; symmetrically for classes mod p with |p*A + q*P_i|. On a
    reduced set with at least two elements, every record has a true branch;
    reduced_input is reported so unreliable runs are identifiable.
    """
    if not len(A):
        raise ValueError("check_class_dichotomy requires a nonempty set")
    p, q = pq.p, pq.q
    part = partition(A, pq)
    records: list[DichotomyRecord] = []
    min_q = min(len(c.members) for c in part.q_classes)
    for qc in part.q_classes:
        records.append(
            DichotomyRecord(
                kind="class",
                form="q",
                p_residue=None,
                q_residue=qc.residue,
                trivial=False,
                hypothesis_met=True,
                fd_holds=is_fully_distributed(qc.quotient, q),
                inequality_holds=(
                    _ss_size(qc.members, A, p, q)
                    >= _ss_size(qc.members, qc.members, p, q) + min_q
                ),
                lhs=_ss_size(qc.members, A, p, q),
                rhs=_ss_size(qc.members, qc.members, p, q) + min_q,
            )
        )
    min_p = min(len(c.members) for c in part.p_classes)
    for pc in part.p_classes:
        records.append(
            DichotomyRecord(
                kind="class",
                form="p",
                p_residue=pc.residue,
                q_residue=None,
                trivial=False,
                hypothesis_met=True,
                fd_holds=is_fully_distributed(pc.quotient, p),
                inequality_holds=(
                    _ss_size(A, pc.members, p, q)
                    >= _ss_size(pc.members, pc.members, p, q) + min_p
                ),
                lhs=_ss_size(A, pc.members, p, q),
                rhs=_ss_size(pc.members, pc.members, p, q) + min_p,
            )
        )
    return DichotomyReport(
        pair=pq, kind="class", reduced_input=is_reduced(A, pq), records=tuple(records)
    )


def check_cell_dichotomy(A: IntSet, pq: DilationPair) -> DichotomyReport:
    """Per cell: FD cell quotient, or the cell-vs-class-product size gap.

    For a cell A_ij with the p-form hypothesis (quotient of P_i fully
    distributed mod p) the record checks whether the cell quotient A_ij' is FD
    mod p, and whether |p*Q_j + q*P_i| >= |p*A_ij + q*A_ij| + |A_ij|; the
    q-form swaps the roles of p and q. Empty cells are trivially satisfied.
    """
    if not len(A):
        raise ValueError("check_cell_dichotomy requires a nonempty set")
    p, q = pq.p, pq.q
    part = partition(A, pq)
    p_fd = {pc.residue: is_fully_distributed(pc.quotient, p) for pc in part.p_classes}
    q_fd = {qc.residue: is_fully_distributed(qc.quotient, q) for qc in part.q_classes}
    p_members = {pc.residue: pc.members for pc in part.p_classes}
    q_members = {qc.residue: qc.members for qc in part.q_classes}
    records: list[DichotomyRecord] = []
    for row in part.cells:
        for cell in row:
            if not len(cell.members):
                records.append(
                    DichotomyRecord(
                        kind="cell",
                        form="both",
                        p_residue=cell.p_residue,
                        q_residue=cell.q_residue,
                        trivial=True,
                        hypothesis_met=False,
                        fd_holds=False,
                        inequality_holds=False,
                        lhs=0,
                        rhs=0,
                    )
                )
                continue
            lhs = _ss_size(q_members[cell.q_residue], p_members[cell.p_residue], p, q)
            rhs = _ss_size(cell.members, cell.members, p, q) + len(cell.members)
            for form, hyp, modulus in (
                ("p", p_fd[cell.p_residue], p),
                ("q", q_fd[cell.q_residue], q),
            ):
                records.append(
                    DichotomyRecord(
                        kind="cell",
                        form=form,
                        p_residue=cell.p_residue,
                        q_residue=cell.q_residue,
                        trivial=False,
                        hypothesis_met=hyp,
                        fd_holds=is_fully_distributed(cell.quotient, modulus),
                        inequality_holds=lhs >= rhs,
                        lhs=lhs,
                        rhs=rhs,
                    )
                )
    return DichotomyReport(
        pair=pq, kind="cell", reduced_input=is_reduced(A, pq), records=tuple(records)
    )
