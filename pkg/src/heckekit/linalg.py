"""Exact sparse linear algebra over a coefficient field.

Rows are dicts column -> nonzero entry.  The workhorse is an incremental
reduced row echelon form with exact arithmetic; pivots are the smallest
column index of each inserted row, so runs are deterministic.
"""

from __future__ import annotations

from .fields import Field


def _axpy(target: dict, coeff, source: dict) -> None:
    """target += coeff * source, dropping zeros in place."""
    for c, v in source.items():
        w = target.get(c)
        nv = coeff * v if w is None else w + coeff * v
        if nv == 0:
            target.pop(c, None)
        else:
            target[c] = nv


class Echelon:
    """Incremental reduced row echelon form.

    Invariant: every stored pivot row is normalized (pivot entry 1) and
    contains no other pivot column, so one reduction pass per insert
    suffices and back-substitution is trivial.
    """

    def __init__(self, field: Field, track_rhs: bool = False):
        self.field = field
        self.track_rhs = track_rhs
        self.pivots: dict[int, dict] = {}
        self.rhs: dict[int, object] = {}
        self.inconsistent = False

    def reduce(self, row: dict, b=None):
        row = dict(row)
        if b is None:
            b = self.field.zero
        for c in sorted(c for c in row if c in self.pivots):
            coeff = row.get(c)
            if coeff is None or coeff == 0:
                continue
            _axpy(row, -coeff, self.pivots[c])
            if self.track_rhs:
                b = b - coeff * self.rhs[c]
        return row, b

    def insert(self, row: dict, b=None) -> bool:
        """Insert a row (rhs optional); returns True if the rank grew."""
        row, b = self.reduce(row, b)
        if not row:
            if self.track_rhs and not (b == 0):
                self.inconsistent = True
            return False
        c = min(row)
        inv = self.field.one / row[c]
        row = {k: inv * v for k, v in row.items()}
        if self.track_rhs:
            b = inv * b
        for pc, prow in self.pivots.items():
            coeff = prow.get(c)
            if coeff is not None:
                _axpy(prow, -coeff, row)
                if self.track_rhs:
                    self.rhs[pc] = self.rhs[pc] - coeff * b
        self.pivots[c] = row
        if self.track_rhs:
            self.rhs[c] = b
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def solve(rows: list[dict], rhs: list, ncols: int, field: Field):
    """Solve the sparse system A x = b with free variables set to zero.

    Returns (solution, unique) where solution is a dense list, or
    (None, False) if the system is inconsistent.
    """
    ech = Echelon(field, track_rhs=True)
    for row, b in zip(rows, rhs):
        ech.insert(row, b)
        if ech.inconsistent:
            return None, False
    sol = [field.zero] * ncols
    for c, b in ech.rhs.items():
        if c >= ncols:
            raise ValueError("row references column beyond ncols")
        sol[c] = b
    unique = ech.rank == ncols
    return sol, unique


def rank(rows: list[dict], field: Field) -> int:
    ech = Echelon(field)
    for row in rows:
        ech.insert(row)
    return ech.rank


def nullspace(rows: list[dict], ncols: int, field: Field) -> list[list]:
    """Basis of the right kernel, as dense vectors (deterministic order)."""
    ech = Echelon(field)
    for row in rows:
        ech.insert(row)
    free_cols = [c for c in range(ncols) if c not in ech.pivots]
    basis = []
    for fc in free_cols:
        vec = [field.zero] * ncols
        vec[fc] = field.one
        for pc, prow in ech.pivots.items():
            coeff = prow.get(fc)
            if coeff is not None:
                vec[pc] = -coeff
        basis.append(vec)
    return basis
