"""
Closed-form parameters of the recognised families and the static
recognition table (global rows plus the local rows residues are matched
against).
"""

import logging
from dataclasses import dataclass
from typing import Optional

import polars as pl

from app.pydantic_models.family import POLAR_FAMILIES, Family, FamilyLabel
from app.services.algebra import gaussian_binomial
from app.services.errors import TableSignatureClash

logger = logging.getLogger(__name__)

MAX_POLAR_RANK = 8
MAX_GRASSMANN_N = 10
HALF_SPIN_RANGE = range(5, 10)  # D_{4,4} is the hyperbolic polar space of rank 4

SIGNATURE_COLUMNS = ["local_family", "local_n", "dim_low", "dim_high", "diameter"]


def point_count(family: str, n: int, q: int) -> int:
    match family:
        case Family.polar_w | Family.polar_q:
            return (q ** (2 * n) - 1) // (q - 1)
        case Family.polar_qplus:
            return (q**n - 1) * (q ** (n - 1) + 1) // (q - 1)
        case Family.polar_qminus:
            return (q ** (n + 1) + 1) * (q**n - 1) // (q - 1)
        case Family.grassmann:
            return gaussian_binomial(n + 1, 2, q)
        case Family.half_spin:
            total = 1
            for i in range(1, n):
                total *= q**i + 1
            return total
        case Family.e6:
            return (q**12 - 1) * (q**9 - 1) // ((q**4 - 1) * (q - 1))
        case Family.e7:
            return (q**14 - 1) * (q**9 + 1) * (q**5 + 1) // (q - 1)
        case Family.segre:
            return (q + 1) * (q ** (n + 1) - 1) // (q - 1)
    raise ValueError(f"unknown family {family}")


def formula(family: str, n: int) -> str:
    match family:
        case Family.polar_w | Family.polar_q:
            return f"(q^{2 * n}-1)/(q-1)"
        case Family.polar_qplus:
            return f"(q^{n}-1)(q^{n - 1}+1)/(q-1)"
        case Family.polar_qminus:
            return f"(q^{n + 1}+1)(q^{n}-1)/(q-1)"
        case Family.grassmann:
            return f"[{n + 1} choose 2]_q"
        case Family.half_spin:
            return "*".join(f"(q^{i}+1)" for i in range(1, n))
        case Family.e6:
            return "(q^12-1)(q^9-1)/((q^4-1)(q-1))"
        case Family.e7:
            return "(q^14-1)(q^9+1)(q^5+1)/(q-1)"
        case _:
            return f"(q+1)(q^{n + 1}-1)/(q-1)"


def singular_dims(family: str, n: int) -> tuple[int, int]:
    """Projective dimensions of the smallest and largest maximal singular subspaces."""
    if family in POLAR_FAMILIES:
        return n - 1, n - 1
    match family:
        case Family.grassmann:
            return 2, n - 1
        case Family.half_spin:
            return 3, n - 1
        case Family.e6:
            return 4, 5
        case Family.e7:
            return 5, 6
        case _:
            return min(1, n), max(1, n)


def diameter_of(family: str, n: int) -> int:
    match family:
        case Family.half_spin:
            return n // 2
        case Family.e7:
            return 3
        case _:
            return 2


def local_family(family: str, n: int) -> Optional[tuple[Family, int]]:
    """Family of the point residue."""
    if family in POLAR_FAMILIES:
        return Family(family), n - 1
    match family:
        case Family.grassmann:
            return Family.segre, n - 2
        case Family.half_spin:
            return Family.grassmann, n - 1
        case Family.e6:
            return Family.half_spin, 5
        case Family.e7:
            return Family.e6, 6
    return None


@dataclass(frozen=True)
class TableRow:
    family: Family
    n: int
    role: str

    @property
    def local(self) -> Optional[tuple[Family, int]]:
        return local_family(self.family, self.n)

    @property
    def dims(self) -> tuple[int, int]:
        return singular_dims(self.family, self.n)

    @property
    def diameter(self) -> int:
        return diameter_of(self.family, self.n)

    def label(self, q: int) -> FamilyLabel:
        return FamilyLabel(family=self.family, n=self.n, q=q, role=self.role)


def global_rows() -> list[TableRow]:
    rows = [
        TableRow(family, r, "global")
        for family in POLAR_FAMILIES
        for r in range(3, MAX_POLAR_RANK + 1)
    ]
    rows += [TableRow(Family.grassmann, n, "global") for n in range(4, MAX_GRASSMANN_N + 1)]
    rows += [TableRow(Family.half_spin, n, "global") for n in HALF_SPIN_RANGE]
    rows += [TableRow(Family.e6, 6, "global"), TableRow(Family.e7, 7, "global")]
    return rows


def local_rows() -> list[TableRow]:
    """Every family a point residue of a global row can be."""
    rows = [
        TableRow(family, r, "local")
        for family in POLAR_FAMILIES
        for r in range(2, MAX_POLAR_RANK)
    ]
    rows += [TableRow(Family.segre, m, "local") for m in range(2, MAX_GRASSMANN_N - 1)]
    rows += [TableRow(Family.grassmann, n, "local") for n in range(4, max(HALF_SPIN_RANGE))]
    rows += [TableRow(Family.half_spin, 5, "local"), TableRow(Family.e6, 6, "local")]
    return rows


def table_frame(q: int, rows: Optional[list[TableRow]] = None) -> pl.DataFrame:
    """The recognition table for one field order as a polars DataFrame."""
    rows = global_rows() if rows is None else rows
    records = []
    for row in rows:
        local = row.local
        low, high = row.dims
        records.append(
            {
                "family": str(row.family),
                "n": row.n,
                "local_family": str(local[0]) if local else None,
                "local_n": local[1] if local else None,
                "dim_low": low,
                "dim_high": high,
                "diameter": row.diameter,
                "points": str(point_count(row.family, row.n, q)),
                "formula": formula(row.family, row.n),
            }
        )
    return pl.DataFrame(
        records,
        schema={
            "family": pl.Utf8,
            "n": pl.Int64,
            "local_family": pl.Utf8,
            "local_n": pl.Int64,
            "dim_low": pl.Int64,
            "dim_high": pl.Int64,
            "diameter": pl.Int64,
            "points": pl.Utf8,  # exact; E_7,7 overflows Int64
            "formula": pl.Utf8,
        },
    )


def check_table_signatures(q: int) -> None:
    """Global rows must differ in (local family, dimension pair, diameter)."""
    frame = table_frame(q)
    clashes = frame.filter(frame.select(SIGNATURE_COLUMNS).is_duplicated())
    if clashes.height:
        raise TableSignatureClash(
            f"{clashes.height} table rows share a signature for q={q}",
            families=clashes["family"].to_list(),
            q=q,
        )
    logger.debug(f"Recognition table signatures distinct for q={q}")
