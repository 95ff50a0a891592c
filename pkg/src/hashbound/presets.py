"""Published reference data: per-pair partition presets and literature columns.

Two kinds of entries live here and must not be confused:

* presets: the (j, partition kind, eps) choices under which the partitioned
  bounds are recomputed from scratch by this package;
* literature values: bound columns quoted from the published comparison
  tables (tagged ``literature``), shipped as static reference data because
  their formulas are not part of this package's scope.

All printed numbers follow the upward-rounding convention of the source
tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .configs import PartitionKind, PartitionSpec


@dataclass(frozen=True)
class PartitionPreset:
    b: int
    k: int
    j: int
    kind: PartitionKind
    eps: float
    eps_label: str

    def spec(self) -> PartitionSpec:
        return PartitionSpec(self.kind, self.eps)


def _maxp(b, k, frac: Fraction, label: str) -> PartitionPreset:
    return PartitionPreset(b, k, k - 2, PartitionKind.MAX_VALUE, float(frac), label)


def _minp(b, k, eps: float, label: str) -> PartitionPreset:
    return PartitionPreset(b, k, k - 2, PartitionKind.MIN_VALUE, eps, label)


#: per-(b,k) threshold choices under which the cell-maxima grids are published
PARTITION_PRESETS: dict[tuple[int, int], PartitionPreset] = {
    (7, 7): _maxp(7, 7, Fraction(9, 100), "9/100"),
    (8, 8): _maxp(8, 8, Fraction(3, 25), "3/25"),
    (9, 8): _maxp(9, 8, Fraction(1, 10), "1/10"),
    (10, 9): _maxp(10, 9, Fraction(1, 15), "1/15"),
    (11, 10): _maxp(11, 10, Fraction(1, 11), "1/11"),
    (12, 10): _maxp(12, 10, Fraction(1, 20), "1/20"),
    (13, 11): _maxp(13, 11, Fraction(1, 25), "1/25"),
    (14, 12): _maxp(14, 12, Fraction(1, 13), "1/13"),
    (15, 13): _maxp(15, 13, Fraction(1, 12), "1/12"),
    (5, 5): _minp(5, 5, (4.0 + math.sqrt(5.0)) / 44.0, "(4+sqrt(5))/44"),
    (6, 5): _minp(6, 5, 0.1, "1/10"),
    (6, 6): _minp(6, 6, 0.05, "1/20"),
}

#: published cell-maxima grids at the presets above; second member of each
#: entry tells the test tolerance apart: "abs" rows are printed to six
#: decimals, "rel" rows to two significant figures.
CELL_MAX_TABLES: dict[tuple[int, int], tuple[tuple[float, str], ...]] = {
    (7, 7): ((0.085679, "abs"), (0.092593, "abs"), (0.000006, "abs"), (0.000107, "abs")),
    (8, 8): ((0.038453, "abs"), (0.042840, "abs"), (0.000002, "abs"), (0.000022, "abs")),
    (9, 8): ((0.075870, "abs"), (0.076905, "abs"), (0.000001, "abs"), (0.000015, "abs")),
    (10, 9): ((0.036289, "abs"), (0.037935, "abs"), (3.4e-9, "rel"), (8.5e-8, "rel")),
    (11, 10): ((0.016928, "abs"), (0.018144, "abs"), (1.4e-9, "rel"), (2.7e-8, "rel")),
    (12, 10): ((0.030945, "abs"), (0.031036, "abs"), (2.1e-11, "rel"), (7.0e-9, "rel")),
    (13, 11): ((0.015057, "abs"), (0.015473, "abs"), (7.8e-14, "rel"), (3.5e-12, "rel")),
    (14, 12): ((0.007176, "abs"), (0.007529, "abs"), (1.2e-12, "rel"), (2.6e-11, "rel")),
    (15, 13): ((0.003360, "abs"), (0.003588, "abs"), (1.1e-13, "rel"), (2.3e-12, "rel")),
    (5, 5): ((0.384033, "abs"), (0.389226, "abs"), (0.374759, "abs"), (0.389226, "abs")),
    (6, 5): ((0.555625, "abs"), (0.558467, "abs"), (0.535106, "abs"), (0.558467, "abs")),
    (6, 6): ((0.185185, "abs"), (0.178857, "abs"), (0.140664, "abs"), (0.192000, "abs")),
}

#: published combined form bounds at the presets above
COMBINED_M: dict[tuple[int, int], float] = {
    (7, 7): 0.0861594,
    (8, 8): 0.0388599,
    (9, 8): 0.0758830,
    (10, 9): 0.0363565,
    (11, 10): 0.0170049,
    (12, 10): 0.0309448,
    (13, 11): 0.0150674,
    (14, 12): 0.0071917,
    (15, 13): 0.0033733,
    (5, 5): 0.3873676,
    (6, 5): 0.5567010,
    (6, 6): 5.0 / 27.0,
}


@dataclass(frozen=True)
class Table1Row:
    b: int
    k: int
    ours: str          # published bound from this method (reference for tests)
    shortcut: bool     # True when the published value comes from the global path
    arikan: str        # literature
    gr: str            # literature (Guruswami-Riazanov style column)
    km: str            # recomputable


TABLE1: tuple[Table1Row, ...] = (
    Table1Row(5, 5, "0.16894", False, "0.23560", "0.19079", "0.19200"),
    Table1Row(6, 5, "0.34512", False, "0.44149", "0.43207", "0.44027"),
    Table1Row(6, 6, "0.08475", False, "0.15484", "0.09228", "0.09260"),
    Table1Row(7, 6, "0.19897", True, "0.30554", "0.23524", "0.23765"),
    Table1Row(8, 6, "0.31799", True, "0.44888", "0.40330", "0.41016"),
    Table1Row(9, 6, "0.43237", True, "0.58303", "0.58486", "0.59455"),
    Table1Row(10, 6, "0.53909", True, "0.73304", "0.76977", "0.78170"),
    Table1Row(11, 6, "0.63766", True, "0.87038", "0.95285", "0.96640"),
    Table1Row(12, 6, "0.72848", True, "0.99588", "1.13118", "1.14584"),
    Table1Row(13, 6, "0.81227", True, "1.11084", "1.30322", "1.31855"),
    Table1Row(14, 6, "0.88978", True, "1.21657", "1.46822", "1.48388"),
    Table1Row(7, 7, "0.04090", False, "0.09747", "0.04279", "0.04284"),
    Table1Row(8, 7, "0.10865", True, "0.20340", "0.12134", "0.12189"),
    Table1Row(9, 7, "0.19054", True, "0.31204", "0.22547", "0.22761"),
    Table1Row(10, 7, "0.27741", True, "0.41982", "0.34615", "0.35108"),
    Table1Row(11, 7, "0.36424", True, "0.52472", "0.47856", "0.48538"),
    Table1Row(12, 7, "0.44850", True, "0.65160", "0.61698", "0.62549"),
    Table1Row(13, 7, "0.52902", True, "0.77148", "0.75796", "0.76792"),
    Table1Row(14, 7, "0.60538", True, "0.88384", "0.89915", "0.91027"),
    Table1Row(8, 8, "0.01889", False, "0.05769", "0.01922", "0.01923"),
    Table1Row(9, 8, "0.05616", False, "0.12874", "0.06001", "0.06013"),
    Table1Row(10, 8, "0.10791", True, "0.20754", "0.12048", "0.12096"),
    Table1Row(11, 8, "0.16878", True, "0.29023", "0.19680", "0.19818"),
    Table1Row(12, 8, "0.23451", True, "0.37434", "0.28470", "0.28797"),
    Table1Row(13, 8, "0.30214", True, "0.45827", "0.38245", "0.38694"),
    Table1Row(14, 8, "0.36974", True, "0.56612", "0.48658", "0.49227"),
    Table1Row(10, 9, "0.02773", False, "0.07668", "0.02874", "0.02876"),
    Table1Row(11, 9, "0.05796", True, "0.13098", "0.06197", "0.06208"),
    Table1Row(12, 9, "0.09730", True, "0.19157", "0.10746", "0.10778"),
    Table1Row(13, 9, "0.14332", True, "0.25611", "0.16368", "0.16444"),
    Table1Row(14, 9, "0.19382", True, "0.32294", "0.22865", "0.23033"),
    Table1Row(11, 10, "0.01321", False, "0.04289", "0.01342", "0.01343"),
    Table1Row(12, 10, "0.02978", False, "0.07806", "0.03093", "0.03095"),
    Table1Row(13, 10, "0.05342", True, "0.12009", "0.05674", "0.05681"),
    Table1Row(14, 10, "0.08332", True, "0.16726", "0.09071", "0.09090"),
    Table1Row(13, 11, "0.01476", False, "0.04400", "0.01506", "0.01506"),
    Table1Row(14, 11, "0.02815", True, "0.07141", "0.02915", "0.02916"),
    Table1Row(14, 12, "0.00712", False, "0.02361", "0.00718", "0.00718"),
    Table1Row(15, 13, "0.00335", False, "0.01218", "0.00336", "0.00336"),
)

#: pairs whose published bound comes from the global path; for all of them the
#: unconstrained maximum of the order-(k-2) polynomial sits at uniform vectors
#: (re-verified by the test suite), so the exact closed form applies.
UNIFORM_GLOBAL_MAX_PAIRS: frozenset[tuple[int, int]] = frozenset(
    (row.b, row.k) for row in TABLE1 if row.shortcut
)


@dataclass(frozen=True)
class Table2Row:
    b: int
    k: int
    dvj: str           # recomputable
    costa_dalai: str | None   # literature; None = not computed in the source
    arikan: str        # literature
    gr: str            # literature
    km_extended: str   # literature (parameter range extended beyond [2, k-2])


TABLE2: tuple[Table2Row, ...] = (
    Table2Row(5, 4, "0.57303", "0.66126", "0.61142", "0.74834", "0.73697(0)"),
    Table2Row(6, 4, "0.77709", "0.87963", "0.83904", "1.09604", "1.00000(0)"),
    Table2Row(7, 4, "0.94372", "1.03711", "1.02931", "1.40593", "1.22239(0)"),
    Table2Row(100, 6, "2.81342", None, "3.61848(2)", "4.87959(2)", "4.32193(0)"),
    Table2Row(100, 7, "2.67473", None, "3.41158(2)", "4.47696(2)", "4.05889(0)"),
)


@dataclass(frozen=True)
class Table3Row:
    b: int
    k: int
    gr: str            # literature
    costa_dalai: str   # literature
    arikan: str        # literature
    km: str            # recomputable


TABLE3: tuple[Table3Row, ...] = (
    Table3Row(9, 9, "8.4288e-3", "0.00946", "0.03182", "8.4300e-3"),
    Table3Row(10, 10, "3.6287e-3", "0.00419", "0.01642", "3.6288e-3"),
    Table3Row(11, 11, "1.53895e-3", "0.00181", "0.00803", "1.53897e-3"),
    Table3Row(12, 11, "6.13036e-3", "0.00664", "0.02266", "6.13075e-3"),
    Table3Row(12, 12, "6.44678e-4", "0.00077", "0.00377", "6.44679e-4"),
    Table3Row(13, 12, "2.75350e-3", "0.00305", "0.01143", "2.75355e-3"),
    Table3Row(13, 13, "2.672760e-4", "0.00033", "0.00172", "2.672761e-4"),
    Table3Row(14, 13, "1.218595e-3", "0.00138", "0.00556", "1.218599e-3"),
)
