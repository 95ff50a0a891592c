"""Finite candidate-configuration families for the partitioned form maxima.

The probability simplex is split into b+1 cells: a bulk cell and b tagged
cells.  For the max-value partition a vector is tagged by a coordinate
exceeding 1-eps; for the min-value partition by its minimum coordinate lying
below eps (ties broken toward the earliest strictly-smaller coordinate).  The
four cell-pair maxima of the separation polynomial,

    m1 = sup over bulk x bulk        m2 = sup over bulk x tagged
    m3 = sup over same tag pairs     m4 = sup over distinct tag pairs,

are each attained (or upper bounded) on a finite list of block-structured
configurations: vectors made of constant blocks drawn from {0, eps, 1-eps, 1}
and repeated-value blocks whose common values are affine in at most three
free variables after eliminating one normalization identity per vector.

This module builds those configuration lists.  Optimizing each configuration
is :mod:`hashbound.optimize`'s job.

Conventions used by every family below:

* block multiplicities always sum to b on each side;
* one variable per side is eliminated against the unit-sum identity, so any
  in-box assignment yields vectors summing to 1 exactly (up to float rounding
  of the elimination itself);
* a per-family cap restricts how many zero coordinates a side may carry:
  either exactly a special count (b-2 or b-1, family dependent) or at most
  b-j.  Whether a standalone structural zero counts toward that total is
  ambiguous, so both readings are enumerated and the union kept; extra
  configurations can only raise the computed maximum, which is the safe
  direction for an upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

_FEAS_TOL = 1e-12
_SUM_TOL = 1e-9


class PartitionKind(Enum):
    MAX_VALUE = "max"
    MIN_VALUE = "min"


class CellPair(Enum):
    """Which pair of partition cells a maximum ranges over."""

    BULK_BULK = "m1"
    BULK_TAGGED = "m2"
    TAGGED_SAME = "m3"
    TAGGED_CROSS = "m4"

    @property
    def label(self) -> str:
        return self.value


#: selectors whose published reductions only upper-bound the true supremum
UPPER_BOUND_ONLY = {
    (PartitionKind.MAX_VALUE, CellPair.BULK_TAGGED),
    (PartitionKind.MIN_VALUE, CellPair.TAGGED_SAME),
    (PartitionKind.MIN_VALUE, CellPair.TAGGED_CROSS),
}


@dataclass(frozen=True)
class PartitionSpec:
    """Partition kind plus its threshold eps."""

    kind: PartitionKind
    eps: float

    def validate(self, b: int, j: int) -> None:
        if self.kind is PartitionKind.MAX_VALUE:
            if not 0.0 < self.eps <= 1.0 / (j + 1):
                raise ValueError(
                    f"max-value partition needs 0 < eps <= 1/(j+1)={1.0 / (j + 1):.6g}, "
                    f"got {self.eps!r}"
                )
        else:
            if not 0.0 < self.eps < 1.0 / b:
                raise ValueError(
                    f"min-value partition needs 0 < eps < 1/b={1.0 / b:.6g}, got {self.eps!r}"
                )


@dataclass(frozen=True)
class FreeVar:
    name: str
    lo: float
    hi: float


@dataclass(frozen=True)
class Block:
    """mult coordinates sharing the value const + sum(coef * x[idx]).

    [lo, hi] is the range the value must stay in for the assignment to be a
    point of the family; assignments violating it are masked out, not clipped.
    """

    mult: int
    const: float
    coeffs: tuple[tuple[int, float], ...]
    lo: float
    hi: float

    def value(self, x: np.ndarray) -> np.ndarray:
        out = np.full(x.shape[0], self.const)
        for idx, coef in self.coeffs:
            out += coef * x[:, idx]
        return out


@dataclass(frozen=True)
class Configuration:
    b: int
    j: int
    kind: PartitionKind
    selector: CellPair
    eps: float
    family: str
    discrete: tuple[tuple[str, float], ...]
    blocks_p: tuple[Block, ...]
    blocks_q: tuple[Block, ...]
    free: tuple[FreeVar, ...]

    def __post_init__(self):
        for side, blocks in (("p", self.blocks_p), ("q", self.blocks_q)):
            total = sum(blk.mult for blk in blocks)
            if total != self.b:
                raise ValueError(f"{side}-side multiplicities sum to {total}, not b={self.b}")

    @property
    def dim(self) -> int:
        return len(self.free)

    def assemble(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Substitute assignments X (N, dim) -> (P, Q, feasible mask)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        N = X.shape[0]
        P = np.empty((N, self.b))
        Q = np.empty((N, self.b))
        feas = np.ones(N, dtype=bool)
        for arr, blocks in ((P, self.blocks_p), (Q, self.blocks_q)):
            col = 0
            for blk in blocks:
                val = blk.value(X)
                feas &= (val >= blk.lo - _FEAS_TOL) & (val <= blk.hi + _FEAS_TOL)
                arr[:, col : col + blk.mult] = val[:, None]
                col += blk.mult
        return P, Q, feas

    def point(self, x: Sequence[float]) -> tuple[np.ndarray, np.ndarray, bool]:
        P, Q, feas = self.assemble(np.asarray(x, dtype=float).reshape(1, -1))
        return P[0], Q[0], bool(feas[0])

    def describe(self) -> str:
        parts = [f"{self.family}"] + [f"{k}={v:g}" for k, v in self.discrete]
        return " ".join(parts)


# ---------------------------------------------------------------------------
# side builder
# ---------------------------------------------------------------------------

_CONST = "const"
_VAR = "var"


def _build_config(
    b: int,
    j: int,
    kind: PartitionKind,
    selector: CellPair,
    eps: float,
    family: str,
    discrete: Sequence[tuple[str, float]],
    p_entries: Sequence[tuple[int, tuple]],
    q_entries: Sequence[tuple[int, tuple]],
) -> Configuration | None:
    """Assemble a configuration, eliminating one variable per side.

    Entries are (mult, ("const", c)) or (mult, ("var", name, lo, hi)); zero
    multiplicities are dropped.  Returns None when the family instance is
    infeasible (empty box or inconsistent constants).
    """
    sides = []
    n_free = 0
    free_specs: list[tuple[str, float, float]] = []
    for entries in (p_entries, q_entries):
        entries = [(m, s) for (m, s) in entries if m > 0]
        const_sum = math.fsum(m * s[1] for m, s in entries if s[0] == _CONST)
        unknowns = [(pos, m, s) for pos, (m, s) in enumerate(entries) if s[0] == _VAR]
        residual = 1.0 - const_sum
        if not unknowns:
            if abs(residual) > _SUM_TOL:
                return None
            sides.append((entries, [], None, residual))
            continue
        elim_pos, elim_mult, elim_spec = unknowns[-1]
        frees = unknowns[:-1]
        # tighten each free box against the elimination identity
        boxes = []
        for i, (_, mi, si) in enumerate(frees):
            others = [(mw, sw) for t, (_, mw, sw) in enumerate(frees) if t != i]
            lo_rest = elim_mult * elim_spec[2] + math.fsum(mw * sw[2] for mw, sw in others)
            hi_rest = elim_mult * elim_spec[3] + math.fsum(mw * sw[3] for mw, sw in others)
            lo = max(si[2], (residual - hi_rest) / mi)
            hi = min(si[3], (residual - lo_rest) / mi)
            if lo > hi + _FEAS_TOL:
                return None
            boxes.append((si[1], lo, hi))
        if not frees:
            # eliminated value is fully determined
            val = residual / elim_mult
            if not elim_spec[2] - _FEAS_TOL <= val <= elim_spec[3] + _FEAS_TOL:
                return None
        else:
            # quick emptiness check for the eliminated block
            lo_att = (residual - math.fsum(m * hi for (_, m, s), (_, _, hi) in zip(frees, boxes))) / elim_mult
            hi_att = (residual - math.fsum(m * lo for (_, m, s), (_, lo, _) in zip(frees, boxes))) / elim_mult
            if hi_att < elim_spec[2] - _FEAS_TOL or lo_att > elim_spec[3] + _FEAS_TOL:
                return None
        base = n_free
        free_specs.extend(boxes)
        n_free += len(boxes)
        sides.append((entries, frees, (elim_pos, elim_mult, elim_spec, residual, base), residual))

    def blocks_for(side) -> tuple[Block, ...]:
        entries, frees, elim, residual = side
        out = []
        free_idx = {}
        if elim is not None:
            base = elim[4]
            for off, (pos, _, _) in enumerate(frees):
                free_idx[pos] = base + off
        for pos, (m, s) in enumerate(entries):
            if s[0] == _CONST:
                out.append(Block(m, s[1], (), s[1], s[1]))
            elif elim is not None and pos == elim[0]:
                coeffs = tuple(
                    (free_idx[fp], -fm / elim[1]) for (fp, fm, _) in frees
                )
                out.append(Block(m, elim[3] / elim[1], coeffs, s[2], s[3]))
            else:
                out.append(Block(m, 0.0, ((free_idx[pos], 1.0),), s[2], s[3]))
        return tuple(out)

    blocks_p = blocks_for(sides[0])
    blocks_q = blocks_for(sides[1])
    free = tuple(FreeVar(name, lo, hi) for name, lo, hi in free_specs)
    return Configuration(
        b=b,
        j=j,
        kind=kind,
        selector=selector,
        eps=eps,
        family=family,
        discrete=tuple(discrete),
        blocks_p=blocks_p,
        blocks_q=blocks_q,
        free=free,
    )


def _zeros_ok(count: int, special: int, b: int, j: int) -> bool:
    return count == special or count <= b - j


def _admit(readings: Iterable[int], special: int, b: int, j: int) -> bool:
    return any(_zeros_ok(c, special, b, j) for c in readings)


def _C(c: float) -> tuple:
    return (_CONST, float(c))


def _V(name: str, lo: float, hi: float) -> tuple:
    return (_VAR, name, float(lo), float(hi))


# ---------------------------------------------------------------------------
# family generators
# ---------------------------------------------------------------------------


def _global_max_families(b, j, kind, selector, eps):
    """Unconstrained-maximum families: zero blocks in opposing positions.

    Shape (0^l1, a^l2, c^m ; d^l1, 0^l2, e^m); zero counts b-1 or at most b-j.
    Used for the bulk/tagged selector of the max partition, the cross-tag
    selector of the min partition, and the global shortcut path.
    """
    out = []
    special = b - 1
    for l1 in range(0, b + 1):
        if not _admit((l1,), special, b, j):
            continue
        for l2 in range(0, b + 1 - l1):
            if not _admit((l2,), special, b, j):
                continue
            m = b - l1 - l2
            cfg = _build_config(
                b, j, kind, selector, eps,
                "global/opposed-zeros", (("l1", l1), ("l2", l2)),
                [(l1, _C(0)), (l2, _V("a", 0, 1)), (m, _V("c", 0, 1))],
                [(l1, _V("d", 0, 1)), (l2, _C(0)), (m, _V("e", 0, 1))],
            )
            if cfg is not None:
                out.append(cfg)
    return out


def _max_m1_families(b, j, eps):
    kind, sel = PartitionKind.MAX_VALUE, CellPair.BULK_BULK
    cap = 1.0 - eps
    special = b - 2
    out = []
    for l1 in range(0, b + 1):
        for l2 in range(0, b + 1 - l1):
            # case 1: both sides carry a capped coordinate, opposed zeros next to it
            m = b - l1 - l2 - 2
            if m >= 0 and _admit((l1 + 1, l1), special, b, j) and _admit((l2 + 1, l2), special, b, j):
                cfg = _build_config(
                    b, j, kind, sel, eps,
                    "max-m1/both-capped", (("l1", l1), ("l2", l2)),
                    [(l1, _C(0)), (l2, _V("a", 0, cap)), (m, _V("c", 0, cap)), (1, _C(0)), (1, _C(cap))],
                    [(l1, _V("d", 0, cap)), (l2, _C(0)), (m, _V("e", 0, cap)), (1, _C(cap)), (1, _C(0))],
                )
                if cfg is not None:
                    out.append(cfg)
            # case 2: only q carries a capped coordinate
            m = b - l1 - l2 - 1
            if m >= 0 and _admit((l1 + 1, l1), special, b, j) and _admit((l2,), special, b, j):
                cfg = _build_config(
                    b, j, kind, sel, eps,
                    "max-m1/one-capped", (("l1", l1), ("l2", l2)),
                    [(l1, _C(0)), (l2, _V("a", 0, cap)), (m, _V("c", 0, cap)), (1, _C(0))],
                    [(l1, _V("d", 0, cap)), (l2, _C(0)), (m, _V("e", 0, cap)), (1, _C(cap))],
                )
                if cfg is not None:
                    out.append(cfg)
            # case 3: no capped coordinate on either side
            m = b - l1 - l2
            if _admit((l1,), special, b, j) and _admit((l2,), special, b, j):
                cfg = _build_config(
                    b, j, kind, sel, eps,
                    "max-m1/uncapped", (("l1", l1), ("l2", l2)),
                    [(l1, _C(0)), (l2, _V("a", 0, cap)), (m, _V("c", 0, cap))],
                    [(l1, _V("d", 0, cap)), (l2, _C(0)), (m, _V("e", 0, cap))],
                )
                if cfg is not None:
                    out.append(cfg)
    return out


def _max_m3_families(b, j, eps):
    kind, sel = PartitionKind.MAX_VALUE, CellPair.TAGGED_SAME
    cap = 1.0 - eps
    special = b - 2
    out = []
    for l1 in range(0, b):
        if not _admit((l1,), special, b, j):
            continue
        for l2 in range(0, b - l1):
            if not _admit((l2,), special, b, j):
                continue
            m = b - 1 - l1 - l2
            cfg = _build_config(
                b, j, kind, sel, eps,
                "max-m3/shared-cap", (("l1", l1), ("l2", l2)),
                [(1, _C(cap)), (l1, _C(0)), (l2, _V("a", 0, eps)), (m, _V("c", 0, eps))],
                [(1, _C(cap)), (l1, _V("d", 0, eps)), (l2, _C(0)), (m, _V("e", 0, eps))],
            )
            if cfg is not None:
                out.append(cfg)
    return out


def _max_m4_families(b, j, eps):
    kind, sel = PartitionKind.MAX_VALUE, CellPair.TAGGED_CROSS
    cap = 1.0 - eps
    special = b - 1
    out = []
    # case 1: free cap levels on both sides, no interior zeros
    cfg = _build_config(
        b, j, kind, sel, eps,
        "max-m4/plain", (),
        [(1, _V("g", cap, 1)), (b - 2, _V("a", 0, 1)), (1, _C(0))],
        [(1, _C(0)), (b - 2, _V("d", 0, 1)), (1, _V("z", cap, 1))],
    )
    if cfg is not None:
        out.append(cfg)
    # case 2: zeros in p only; q's cap pinned to an endpoint
    for l1 in range(1, b - 1):
        if not _admit((l1 + 1, l1), special, b, j):
            continue
        m = b - l1 - 2
        for zeta in (cap, 1.0):
            cfg = _build_config(
                b, j, kind, sel, eps,
                "max-m4/p-zeros", (("l1", l1), ("zeta", zeta)),
                [(1, _V("g", cap, 1)), (l1, _C(0)), (m, _V("a", 0, 1)), (1, _C(0))],
                [(1, _C(0)), (l1, _V("d", 0, 1)), (m, _V("e", 0, 1)), (1, _C(zeta))],
            )
            if cfg is not None:
                out.append(cfg)
    # case 3: opposed zeros on both sides; both caps pinned to endpoints
    for l1 in range(1, b - 1):
        if not _admit((l1 + 1, l1), special, b, j):
            continue
        for l2 in range(1, b - 1 - l1):
            if not _admit((l2 + 1, l2), special, b, j):
                continue
            m = b - l1 - l2 - 2
            for gamma in (cap, 1.0):
                for zeta in (cap, 1.0):
                    cfg = _build_config(
                        b, j, kind, sel, eps,
                        "max-m4/opposed-zeros",
                        (("l1", l1), ("l2", l2), ("gamma", gamma), ("zeta", zeta)),
                        [(1, _C(gamma)), (l1, _C(0)), (l2, _V("a", 0, 1)), (m, _V("c", 0, 1)), (1, _C(0))],
                        [(1, _C(0)), (l1, _V("d", 0, 1)), (l2, _C(0)), (m, _V("e", 0, 1)), (1, _C(zeta))],
                    )
                    if cfg is not None:
                        out.append(cfg)
    return out


def _min_m1_families(b, j, eps):
    kind, sel = PartitionKind.MIN_VALUE, CellPair.BULK_BULK
    out = []
    for l1 in range(0, b + 1):
        for l2 in range(0, b + 1 - l1):
            m = b - l1 - l2
            cfg = _build_config(
                b, j, kind, sel, eps,
                "min-m1/floor-blocks", (("l1", l1), ("l2", l2)),
                [(l1, _C(eps)), (l2, _V("a", eps, 1)), (m, _V("c", eps, 1))],
                [(l1, _V("d", eps, 1)), (l2, _C(eps)), (m, _V("e", eps, 1))],
            )
            if cfg is not None:
                out.append(cfg)
    return out


def _min_m2_families(b, j, eps):
    kind, sel = PartitionKind.MIN_VALUE, CellPair.BULK_TAGGED
    special = b - 1
    out = []
    # case 1: p small on the block facing q's raised block
    for l1 in range(1, b + 1):
        m = b - l1
        cfg = _build_config(
            b, j, kind, sel, eps,
            "min-m2/avg-small", (("l1", l1),),
            [(l1, _V("a", 0, eps)), (m, _V("c", 0, 1))],
            [(l1, _V("e", eps, 1)), (m, _C(eps))],
        )
        if cfg is not None:
            out.append(cfg)
    # case 2: p pinned at eps on the lead coordinate
    for l1 in range(0, b):
        m = b - l1 - 1
        cfg = _build_config(
            b, j, kind, sel, eps,
            "min-m2/lead-eps", (("l1", l1),),
            [(1, _C(eps)), (l1, _V("a", 0, 1)), (m, _V("c", 0, 1))],
            [(1, _V("z", eps, 1)), (l1, _V("e", eps, 1)), (m, _C(eps))],
        )
        if cfg is not None:
            out.append(cfg)
    # case 3: p carries zeros
    for l1 in range(1, b + 1):
        if not _admit((l1,), special, b, j):
            continue
        for l2 in range(0, b + 1 - l1):
            m = b - l1 - l2
            cfg = _build_config(
                b, j, kind, sel, eps,
                "min-m2/p-zeros", (("l1", l1), ("l2", l2)),
                [(l1, _C(0)), (l2, _V("a", 0, 1)), (m, _V("c", 0, 1))],
                [(l1, _V("d", eps, 1)), (l2, _V("e", eps, 1)), (m, _C(eps))],
            )
            if cfg is not None:
                out.append(cfg)
    return out


def _min_m3_families(b, j, eps):
    kind, sel = PartitionKind.MIN_VALUE, CellPair.TAGGED_SAME
    special = b - 1
    out = []
    for l1 in range(0, b + 1):
        if not _admit((l1,), special, b, j):
            continue
        for l2 in range(0, b + 1 - l1):
            # case 1: lead coordinates folded into the sub-eps tail blocks
            if b - l1 - l2 >= 1 and _admit((l2,), special, b, j):
                mm = b - l1 - l2
                cfg = _build_config(
                    b, j, kind, sel, eps,
                    "min-m3/folded", (("l1", l1), ("l2", l2)),
                    [(l1, _C(0)), (l2, _V("a", 0, 1)), (mm, _V("c", 0, eps))],
                    [(l1, _V("d", 0, 1)), (l2, _C(0)), (mm, _V("e", 0, eps))],
                )
                if cfg is not None:
                    out.append(cfg)
            # cases 2 and 3: free lead on p, q lead pinned at 0 or eps
            m = b - l1 - l2 - 1
            if m < 0:
                continue
            for q1, tag, zq in ((0.0, "min-m3/q-lead-zero", (l2 + 1, l2)), (eps, "min-m3/q-lead-eps", (l2,))):
                if not _admit(zq, special, b, j):
                    continue
                cfg = _build_config(
                    b, j, kind, sel, eps,
                    tag, (("l1", l1), ("l2", l2), ("q1", q1)),
                    [(1, _V("g", 0, eps)), (l1, _C(0)), (l2, _V("a", 0, 1)), (m, _V("c", 0, 1))],
                    [(1, _C(q1)), (l1, _V("d", 0, 1)), (l2, _C(0)), (m, _V("e", 0, 1))],
                )
                if cfg is not None:
                    out.append(cfg)
    return out


def enumerate_candidates(
    spec: PartitionSpec, which: CellPair, b: int, j: int
) -> list[Configuration]:
    """All candidate configurations for one cell-pair maximum.

    Every admissible (l1, l2) pair subject to nonnegative block sizes and the
    family's zero-count cap, crossed with the discrete endpoint choices where
    the family allows them.  An empty result for a particular family just
    means that family is vacuous at these sizes; getting back an empty *list*
    means every family was vacuous, which callers should treat as an error.
    """
    spec.validate(b, j)
    eps = float(spec.eps)
    if spec.kind is PartitionKind.MAX_VALUE:
        table = {
            CellPair.BULK_BULK: _max_m1_families,
            CellPair.BULK_TAGGED: lambda b, j, e: _global_max_families(
                b, j, PartitionKind.MAX_VALUE, CellPair.BULK_TAGGED, e
            ),
            CellPair.TAGGED_SAME: _max_m3_families,
            CellPair.TAGGED_CROSS: _max_m4_families,
        }
    else:
        table = {
            CellPair.BULK_BULK: _min_m1_families,
            CellPair.BULK_TAGGED: _min_m2_families,
            CellPair.TAGGED_SAME: _min_m3_families,
            CellPair.TAGGED_CROSS: lambda b, j, e: _global_max_families(
                b, j, PartitionKind.MIN_VALUE, CellPair.TAGGED_CROSS, e
            ),
        }
    return table[which](b, j, eps)


def global_candidates(b: int, j: int) -> list[Configuration]:
    """Configurations covering the unconstrained maximum of the polynomial."""
    return _global_max_families(b, j, PartitionKind.MAX_VALUE, CellPair.BULK_TAGGED, 0.0)
