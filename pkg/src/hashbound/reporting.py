"""Rounding and rendering helpers shared by the CLI and the tests.

Reported bounds are rounded upward (ceiling at the requested decimal place):
a rounded-up upper bound is still an upper bound.  Internal comparisons always
use unrounded values.
"""

from __future__ import annotations

import csv
import io
import json
from decimal import ROUND_CEILING, Decimal


def round_up(x: float, places: int = 5) -> float:
    """Ceiling of x at the given decimal place (exact via Decimal)."""
    q = Decimal(1).scaleb(-places)
    return float(Decimal(x).quantize(q, rounding=ROUND_CEILING))


def round_up_str(x: float, places: int = 5) -> str:
    q = Decimal(1).scaleb(-places)
    return str(Decimal(x).quantize(q, rounding=ROUND_CEILING))


def matches_printed(computed: float, printed: str) -> bool:
    """Does ``computed`` reproduce a printed decimal after upward rounding?

    The printed string fixes the precision: "0.16894" checks the 5th decimal,
    "8.4300e-3" checks the mantissa at 4 decimals, and so on.  The ceiling is
    taken after a relative nudge of 1e-11 so that values which are exact in
    decimal but land one binary ulp above their decimal expansion (0.192,
    0.0036288, ...) do not spill onto the next grid point.
    """
    printed = printed.strip()
    if "e" in printed or "E" in printed:
        mant_s, exp_s = printed.lower().split("e")
        exp = int(exp_s)
        scaled = computed / (10.0 ** exp)
        places = len(mant_s.split(".")[1]) if "." in mant_s else 0
        return float(round_up_str(_nudge(scaled), places)) == float(mant_s)
    places = len(printed.split(".")[1]) if "." in printed else 0
    return float(round_up_str(_nudge(computed), places)) == float(printed)


def _nudge(x: float) -> float:
    return x - abs(x) * 1e-11


def render_text_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def fmt(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    lines = [fmt(headers), fmt(["-" * w for w in widths])]
    lines.extend(fmt(row) for row in rows)
    return "\n".join(lines) + "\n"


def render_csv(headers: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return buf.getvalue()


def render_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
