"""Exact linear algebra over the rationals.

Matrices are stored sparsely as one ``{col: Fraction}`` dict per row.  The
rank computation runs fraction-free on integer rows; when the compiled
kernel is available it is tried first on 64-bit integers and the pure-Python
big-integer loop takes over on overflow.
"""

from __future__ import annotations

import heapq
import os
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

try:  # pragma: no cover - depends on the build
    if os.environ.get("SULLIVAN_PURE_PYTHON"):
        raise ImportError
    from sullivan._kernels import rank_int64 as _rank_int64
except ImportError:  # pragma: no cover
    _rank_int64 = None

BACKEND = "compiled" if _rank_int64 is not None else "python"

Vector = Sequence[Fraction]


class SparseMatrix:
    """Immutable sparse matrix with rational entries.

    Zero entries are never stored.  ``entries`` maps ``(row, col)`` to a
    nonzero :class:`~fractions.Fraction`.
    """

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, nrows: int, ncols: int, entries=None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.nrows = nrows
        self.ncols = ncols
        rows: list[dict[int, Fraction]] = [{} for _ in range(nrows)]
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i}, {j}) outside {nrows}x{ncols}")
            v = Fraction(v)
            if v:
                rows[i][j] = v
        self._rows = rows

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None) -> SparseMatrix:
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    entries[i, j] = v
        return cls(len(rows), ncols, entries)

    @classmethod
    def from_row_dicts(cls, rows: Sequence[dict], ncols: int) -> SparseMatrix:
        m = cls(0, ncols)
        m.nrows = len(rows)
        clean = []
        for row in rows:
            d = {}
            for j, v in row.items():
                if not 0 <= j < ncols:
                    raise IndexError(f"column {j} outside 0..{ncols - 1}")
                v = Fraction(v)
                if v:
                    d[j] = v
            clean.append(d)
        m._rows = clean
        return m

    @classmethod
    def identity(cls, n: int) -> SparseMatrix:
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @property
    def entries(self) -> dict[tuple[int, int], Fraction]:
        return {(i, j): v for i, row in enumerate(self._rows) for j, v in row.items()}

    def row(self, i: int) -> dict[int, Fraction]:
        return dict(self._rows[i])

    def rows(self) -> list[dict[int, Fraction]]:
        return [dict(r) for r in self._rows]

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for i, row in enumerate(self._rows):
            for j, v in row.items():
                out[i][j] = v
        return out

    def transpose(self) -> SparseMatrix:
        return SparseMatrix(self.ncols, self.nrows, {(j, i): v for (i, j), v in self.entries.items()})

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={sum(map(len, self._rows))})"


# -- rank ---------------------------------------------------------------------


def _integer_row(row: dict[int, Fraction]) -> dict[int, int]:
    den = lcm(*(v.denominator for v in row.values())) if row else 1
    out = {j: int(v * den) for j, v in row.items()}
    g = 0
    for v in out.values():
        g = gcd(g, v)
    if g > 1:
        out = {j: v // g for j, v in out.items()}
    return out


def _pick_pivot(row: dict[int, int]) -> int:
    # smallest bit length, ties to the lowest column
    return min(row, key=lambda j: (abs(row[j]).bit_length(), j))


def rank_integer_rows(rows: Iterable[dict[int, int]]) -> int:
    """Rank of an integer matrix given as sparse row dicts (pure Python).

    Rows are reduced against the existing pivot rows in registration order,
    so each registered pivot row is zero in every earlier pivot column.
    """
    pivot_rows: list[dict[int, int]] = []
    pivot_cols: list[int] = []
    col_to_pivot: dict[int, int] = {}
    for row in rows:
        row = {j: v for j, v in row.items() if v}
        if not row:
            continue
        heap = [col_to_pivot[j] for j in row if j in col_to_pivot]
        heapq.heapify(heap)
        seen = set(heap)
        while heap and row:
            k = heapq.heappop(heap)
            c = pivot_cols[k]
            a = row.get(c)
            if not a:
                continue
            prow = pivot_rows[k]
            p = prow[c]
            g = gcd(p, a)
            mp, ma = p // g, a // g
            if mp != 1:
                row = {j: v * mp for j, v in row.items()}
            for j, v in prow.items():
                nv = row.get(j, 0) - ma * v
                if nv:
                    row[j] = nv
                    if j in col_to_pivot:
                        kk = col_to_pivot[j]
                        if kk not in seen:
                            seen.add(kk)
                            heapq.heappush(heap, kk)
                else:
                    row.pop(j, None)
            if row:
                cg = 0
                for v in row.values():
                    cg = gcd(cg, v)
                    if cg == 1:
                        break
                if cg > 1:
                    row = {j: v // cg for j, v in row.items()}
        if row:
            c = _pick_pivot(row)
            col_to_pivot[c] = len(pivot_rows)
            pivot_rows.append(row)
            pivot_cols.append(c)
    return len(pivot_rows)


def rank(m: SparseMatrix, backend: str | None = None) -> int:
    """Rank over Q by exact elimination.

    ``backend`` is ``"python"``, ``"compiled"`` or ``None`` (best available).
    """
    if backend not in (None, "python", "compiled"):
        raise ValueError(f"unknown backend {backend!r}")
    rows = [_integer_row(r) for r in m._rows if r]
    if not rows:
        return 0
    if backend == "compiled" and _rank_int64 is None:
        raise RuntimeError("compiled kernel is not built")
    if backend != "python" and _rank_int64 is not None:
        try:
            return _rank_int64(rows, m.ncols)
        except OverflowError:
            pass
    return rank_integer_rows(rows)


# -- reduced row echelon form over Q --------------------------------------------


def _rref(rows: list[dict[int, Fraction]], ncols: int, stop_col: int | None = None):
    """Reduced row echelon form.

    Pivots are only chosen in columns ``< stop_col`` (default: all); this is
    what augmented solves need.  Returns ``(pivot_rows, pivot_cols)`` with
    each pivot row normalized to 1 at its pivot column and zero in every
    other pivot column.
    """
    if stop_col is None:
        stop_col = ncols
    pivots: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        row = {j: Fraction(v) for j, v in row.items() if v}
        for c in sorted(set(row) & pivots.keys()):
            a = row.get(c)
            if a:
                for j, v in pivots[c].items():
                    nv = row.get(j, 0) - a * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
        cands = [j for j in row if j < stop_col]
        if not cands:
            continue
        c = min(cands, key=lambda j: (row[j].numerator.bit_length() + row[j].denominator.bit_length(), j))
        inv = 1 / row[c]
        row = {j: v * inv for j, v in row.items()}
        for prow in pivots.values():
            a = prow.get(c)
            if a:
                for j, v in row.items():
                    nv = prow.get(j, 0) - a * v
                    if nv:
                        prow[j] = nv
                    else:
                        prow.pop(j, None)
        pivots[c] = row
    return pivots


def kernel_basis(m: SparseMatrix) -> list[list[Fraction]]:
    """Basis of the right null space ``{x : m x = 0}``."""
    pivots = _rref(m.rows(), m.ncols)
    free = [j for j in range(m.ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for c, prow in pivots.items():
            a = prow.get(f)
            if a:
                v[c] = -a
        basis.append(v)
    return basis


def solve_in_span(vectors: Sequence[Vector], target: Vector) -> list[Fraction] | None:
    """Coefficients ``x`` with ``sum(x[i] * vectors[i]) == target``, or None.

    Free coefficients are set to zero.  The returned combination is checked
    to reproduce ``target`` exactly.
    """
    n = len(target)
    for v in vectors:
        if len(v) != n:
            raise ValueError(f"vector length {len(v)} does not match target length {n}")
    k = len(vectors)
    # one row per coordinate: [v_0[i], ..., v_{k-1}[i] | target[i]]
    rows = []
    for i in range(n):
        row = {j: Fraction(v[i]) for j, v in enumerate(vectors) if v[i]}
        if target[i]:
            row[k] = Fraction(target[i])
        if row:
            rows.append(row)
    pivots = _rref(rows, k + 1, stop_col=k)
    # an inconsistent row has no pivot below k but a nonzero augmented entry
    coeffs = [Fraction(0)] * k
    for c, prow in pivots.items():
        coeffs[c] = prow.get(k, Fraction(0))
    combo = [Fraction(0)] * n
    for x, v in zip(coeffs, vectors):
        if x:
            for i in range(n):
                if v[i]:
                    combo[i] += x * v[i]
    if any(a != Fraction(b) for a, b in zip(combo, target)):
        return None
    return coeffs


class RowSpace:
    """Incrementally grown row space, used to pick complements.

    ``add`` returns True when the vector was independent of everything added
    so far.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._pivots: dict[int, dict[int, Fraction]] = {}

    def _reduce(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        row = dict(vec)
        for c in sorted(set(row) & self._pivots.keys()):
            a = row.get(c)
            if a:
                for j, v in self._pivots[c].items():
                    nv = row.get(j, 0) - a * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
        return row

    def contains(self, vec: dict[int, Fraction]) -> bool:
        return not self._reduce(vec)

    def add(self, vec: dict[int, Fraction]) -> bool:
        row = self._reduce(vec)
        if not row:
            return False
        c = min(row)
        inv = 1 / row[c]
        row = {j: v * inv for j, v in row.items()}
        for prow in self._pivots.values():
            a = prow.get(c)
            if a:
                for j, v in row.items():
                    nv = prow.get(j, 0) - a * v
                    if nv:
                        prow[j] = nv
                    else:
                        prow.pop(j, None)
        self._pivots[c] = row
        return True

    @property
    def dimension(self) -> int:
        return len(self._pivots)


def to_sparse(vec: Vector) -> dict[int, Fraction]:
    return {i: Fraction(v) for i, v in enumerate(vec) if v}
