"""Exact rational linear algebra: dense RREF and an incremental sparse echelon.

The dense RationalMatrix/rref_rank pair is the reference quotient-dimension
engine; RREF output is canonical (unique for a given matrix), with pivot
columns strictly increasing.  ReducedEchelon maintains the same reduced form
incrementally for sparse column streams and optionally tracks provenance
(each echelon vector as a combination of the original columns), which is what
lets the cohomology layer emit explicit coboundary certificates.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

Q = Fraction
SparseVec = Dict[int, Q]


class RationalMatrix:
    """Dense rectangular matrix of exact rationals."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        data = [[Q(x) for x in row] for row in entries]
        if data and any(len(row) != len(data[0]) for row in data):
            raise ValueError("ragged rows")
        self.rows = len(data)
        self.cols = len(data[0]) if data else 0
        self.entries = data

    @classmethod
    def zero(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls([[Q(0)] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        m = cls.zero(n, n)
        for i in range(n):
            m.entries[i][i] = Q(1)
        return m

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            [[self.entries[r][c] for r in range(self.rows)] for c in range(self.cols)]
        )

    def column(self, c: int) -> List[Q]:
        return [self.entries[r][c] for r in range(self.rows)]

    def __eq__(self, other):
        return (
            isinstance(other, RationalMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        body = "; ".join(
            " ".join(str(x) for x in row) for row in self.entries
        )
        return f"RationalMatrix[{self.rows}x{self.cols}: {body}]"


def rref_rank(matrix: RationalMatrix) -> Tuple[int, List[int], RationalMatrix]:
    """Reduced row-echelon form with exact arithmetic.

    Returns (rank, pivot column indices, reduced matrix).  Pivot search scans
    columns left to right, taking the first row with a nonzero entry
    (lowest row, lowest column) -- RREF is unique, so the scan order only
    fixes the elimination path.
    """
    work = [row[:] for row in matrix.entries]
    rows, cols = matrix.rows, matrix.cols
    pivots: List[int] = []
    pivot_row = 0
    for col in range(cols):
        if pivot_row >= rows:
            break
        src = next(
            (r for r in range(pivot_row, rows) if work[r][col]),
            None,
        )
        if src is None:
            continue
        if src != pivot_row:
            work[pivot_row], work[src] = work[src], work[pivot_row]
        lead = work[pivot_row][col]
        if lead != 1:
            work[pivot_row] = [x / lead for x in work[pivot_row]]
        for r in range(rows):
            if r != pivot_row and work[r][col]:
                factor = work[r][col]
                row_r, row_p = work[r], work[pivot_row]
                for c in range(col, cols):
                    if row_p[c]:
                        row_r[c] -= factor * row_p[c]
        pivots.append(col)
        pivot_row += 1
    return len(pivots), pivots, RationalMatrix(work)


def nullspace(matrix: RationalMatrix) -> List[List[Q]]:
    """Canonical kernel basis (one vector per free column, free entry = 1)."""
    rank, pivots, red = rref_rank(matrix)
    pivot_set = set(pivots)
    free = [c for c in range(matrix.cols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = [Q(0)] * matrix.cols
        vec[f] = Q(1)
        for r, p in enumerate(pivots):
            vec[p] = -red.entries[r][f]
        basis.append(vec)
    return basis


def solve(matrix: RationalMatrix, rhs: Sequence) -> Optional[List[Q]]:
    """One exact solution of M x = b (free variables 0), or None."""
    b = [Q(x) for x in rhs]
    if len(b) != matrix.rows:
        raise ValueError("rhs length != row count")
    augmented = RationalMatrix(
        [matrix.entries[r] + [b[r]] for r in range(matrix.rows)]
    )
    rank, pivots, red = rref_rank(augmented)
    if matrix.cols in pivots:
        return None
    x = [Q(0)] * matrix.cols
    for r, p in enumerate(pivots):
        x[p] = red.entries[r][matrix.cols]
    return x


class ReducedEchelon:
    """Incrementally maintained RREF basis of a span of sparse vectors.

    Coordinates are integers; the leading coordinate of a vector is its
    minimum key.  Rows are kept fully reduced: a pivot row has a 1 at its
    lead and zeros at every other pivot lead, so the pivot set equals the
    canonical (order-determined) pivot set of the spanned subspace.
    """

    def __init__(self, track_provenance: bool = False):
        self.pivots: Dict[int, SparseVec] = {}
        self.provenance: Optional[Dict[int, SparseVec]] = (
            {} if track_provenance else None
        )

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(
        self, vec: SparseVec, prov: Optional[SparseVec] = None
    ) -> Tuple[SparseVec, SparseVec]:
        """Fully reduce vec against the pivot rows.

        Returns (residual, combination) where combination maps column ids to
        the coefficients with which original columns were subtracted
        (only tracked when provenance is on).
        """
        out = dict(vec)
        used: SparseVec = dict(prov) if prov else {}
        # Pivot rows carry no other pivot leads, so one pass suffices.
        for lead in [key for key in out if key in self.pivots]:
            factor = out.get(lead)
            if not factor:
                continue
            row = self.pivots[lead]
            for key, val in row.items():
                acc = out.get(key, Q(0)) - factor * val
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
            if self.provenance is not None:
                for cid, val in self.provenance[lead].items():
                    acc = used.get(cid, Q(0)) - factor * val
                    if acc:
                        used[cid] = acc
                    else:
                        used.pop(cid, None)
        return out, used

    def add(self, vec: SparseVec, column_id=None) -> bool:
        """Insert a vector; returns True when it enlarges the span."""
        prov: Optional[SparseVec] = None
        if self.provenance is not None:
            prov = {column_id: Q(1)} if column_id is not None else {}
        residual, combo = self.reduce(vec, prov)
        if not residual:
            return False
        lead = min(residual)
        lead_val = residual[lead]
        row = {k: v / lead_val for k, v in residual.items()}
        row_prov = (
            {k: v / lead_val for k, v in combo.items()}
            if self.provenance is not None
            else None
        )
        # Maintain full reduction: clear the new lead from existing rows.
        for other_lead, other in list(self.pivots.items()):
            factor = other.get(lead)
            if not factor:
                continue
            for key, val in row.items():
                acc = other.get(key, Q(0)) - factor * val
                if acc:
                    other[key] = acc
                else:
                    other.pop(key, None)
            if self.provenance is not None:
                target = self.provenance[other_lead]
                for cid, val in row_prov.items():
                    acc = target.get(cid, Q(0)) - factor * val
                    if acc:
                        target[cid] = acc
                    else:
                        target.pop(cid, None)
        self.pivots[lead] = row
        if self.provenance is not None:
            self.provenance[lead] = row_prov or {}
        return True

    def solve_in_span(self, vec: SparseVec) -> Optional[SparseVec]:
        """Express vec as sum(coeff[cid] * column_cid), or None if outside.

        Requires provenance tracking.
        """
        if self.provenance is None:
            raise ValueError("provenance tracking is off")
        residual, combo = self.reduce(vec)
        if residual:
            return None
        return {cid: -val for cid, val in combo.items()}
