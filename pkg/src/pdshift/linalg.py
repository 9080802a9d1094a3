"""
Exact nullspace of a sparse rational matrix.

Rows are dicts ``{column: Fraction}``.  Elimination keeps an echelon basis in
which every stored row has its pivot as its smallest column; an incoming row
is reduced by repeatedly cancelling its smallest column against a stored
pivot, and whatever survives becomes a new pivot row.  Among the candidate
rows the sparsest one is inserted first, which keeps fill-in low for the
two-nonzeros-per-row systems built in :mod:`pdshift.measure`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List

SparseRow = Dict[int, Fraction]


def _reduce(row: SparseRow, pivots: Dict[int, SparseRow]) -> SparseRow:
    row = {c: v for c, v in row.items() if v}
    while row:
        col = min(row)
        pivot = pivots.get(col)
        if pivot is None:
            return row
        factor = row[col]
        for c, v in pivot.items():
            updated = row.get(c, 0) - factor * v
            if updated:
                row[c] = updated
            else:
                row.pop(c, None)
    return row


def nullspace(rows: List[SparseRow], ncols: int) -> List[List[Fraction]]:
    """Basis of ``{x : A x = 0}`` for the sparse matrix ``A`` with the given rows."""
    pivots: Dict[int, SparseRow] = {}
    for row in sorted(rows, key=len):
        reduced = _reduce(row, pivots)
        if not reduced:
            continue
        col = min(reduced)
        lead = reduced[col]
        pivots[col] = {c: v / lead for c, v in reduced.items()}

    free = [c for c in range(ncols) if c not in pivots]
    order = sorted(pivots, reverse=True)
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for col in order:
            x[col] = -sum((v * x[c] for c, v in pivots[col].items() if c != col), Fraction(0))
        basis.append(x)
    return basis
