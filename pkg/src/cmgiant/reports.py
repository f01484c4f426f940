"""Table/figure datasets and their CSV / JSON emitters.

Tables are presented at 4 decimals (rounded half away from zero) purely at
this layer; figure datasets and JSON keep full precision.  Emitted files
are byte-for-byte reproducible for a given configuration.
"""

from __future__ import annotations

import csv
import io
import json
import math
from decimal import ROUND_HALF_UP, Decimal

from .bounds import BoundsReport, Prefix, bounds_report
from .search import MaxGapSearch
from .simulate import SimResult


def round_half_away(x: float, decimals: int = 4) -> float:
    """Round with ties away from zero (the convention used by the tables)."""
    q = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


def fixed4(x: float | None) -> str:
    if x is None:
        return ""
    q = Decimal("0.0001")
    return str(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def csv_text(header: list[str], rows: list[tuple]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


# ----------------------------------------------------------------------
# bound tables


def poisson_positive_prefix(rate: float, L: int) -> Prefix:
    """First L probabilities of a Poisson(rate) conditioned to be positive."""
    scale = 1.0 - math.exp(-rate)
    return Prefix(tuple(
        math.exp(-rate) * rate**d / math.factorial(d) / scale
        for d in range(1, L + 1)
    ))


def table1_inputs() -> list[tuple[Prefix, float]]:
    """The six benchmark (prefix, mu) pairs.

    The first two prefixes are Poisson(2) and Poisson(1.5) conditioned on
    being positive; the CSV displays them rounded, but the bound
    values require the exact probabilities.
    """
    return [
        (poisson_positive_prefix(2.0, 3), 3.0),
        (poisson_positive_prefix(1.5, 2), 3.0),
        (Prefix((0.7, 0.0, 0.0)), 2.0),
        (Prefix((0.7, 0.0, 0.0)), 3.0),
        (Prefix((0.5, 0.25, 0.125)), 2.0),
        (Prefix((0.5, 0.25, 0.125)), 3.0),
    ]


TABLE_HEADER = [
    "prefix", "mu", "L", "p_gt_L", "lower_prop1", "lower_thm_a", "upper_thm_b",
]


def _prefix_cell(prefix: Prefix) -> str:
    return " ".join(fixed4(p) for p in prefix.probs)


def bounds_row(report: BoundsReport) -> tuple:
    return (
        _prefix_cell(report.prefix),
        fixed4(report.mu),
        report.prefix.L,
        fixed4(report.p_gt_L),
        fixed4(report.lower_prop1),
        fixed4(report.lower_thm_a),
        fixed4(report.upper_thm_b),
    )


def table1_dataset() -> tuple[list[str], list[tuple]]:
    rows = [bounds_row(bounds_report(p, mu)) for p, mu in table1_inputs()]
    return TABLE_HEADER, rows


TABLE2_HEADER = ["L", "max_gap", "prefix", "mu", "lower_thm_a", "upper_thm_b"]


def table2_dataset(search: MaxGapSearch) -> tuple[list[str], list[tuple]]:
    rows = []
    for L in sorted(search.per_L):
        r = search.per_L[L]
        if r.best_gap is None:
            rows.append((L, "", "", "", "", ""))
            continue
        rows.append((
            L,
            fixed4(r.best_gap),
            _prefix_cell(r.best_prefix),
            fixed4(r.best_mu),
            fixed4(r.best_lower),
            fixed4(r.best_upper),
        ))
    return TABLE2_HEADER, rows


def grid_result_json(search: MaxGapSearch) -> dict:
    return {
        "per_L": {
            str(L): {
                "L": r.L,
                "mu_grid": list(r.mu_grid),
                "step": r.step,
                "best_gap": r.best_gap,
                "best_prefix": list(r.best_prefix.probs) if r.best_prefix else None,
                "best_mu": r.best_mu,
                "best_lower": r.best_lower,
                "best_upper": r.best_upper,
                "cells_total": r.cells_total,
                "cells_feasible": r.cells_feasible,
                "cells_condition_ok": r.cells_condition_ok,
                "per_mu_max": [[mu, gap] for mu, gap in r.per_mu_max],
            }
            for L, r in search.per_L.items()
        },
        "per_mu": [[mu, gap, L] for mu, gap, L in search.per_mu],
    }


# ----------------------------------------------------------------------
# simulation


def sim_result_csv(result: SimResult) -> tuple[list[str], list[tuple]]:
    header = ["replica", "fraction"]
    rows = [(k, f) for k, f in enumerate(result.fractions)]
    return header, rows
