"""Exact dense matrix algorithms over the supported rings.

Reduced row-echelon form and solving over fields, Hermite and Smith
normal forms over the integers, kernels, canonical column spans, and
the structure of finitely generated abelian cokernels.  Everything is
pure and exact; there is no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DescriptorMismatch, ShapeError, UnsupportedRing
from .rings import Integers, PolyQuotient, RingDescriptor, RingElement


@dataclass(frozen=True)
class RingMatrix:
    """Immutable dense matrix with entries in one ring.

    Entries are stored row-major as raw payloads; the descriptor
    supplies the arithmetic.
    """

    ring: RingDescriptor
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )

    @staticmethod
    def from_rows(ring: RingDescriptor, rows: Sequence[Sequence], cols: Optional[int] = None) -> "RingMatrix":
        rows = [list(r) for r in rows]
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ShapeError("ragged rows")
            if cols is not None and cols != width:
                raise ShapeError(f"declared {cols} columns, rows have {width}")
            cols = width
        elif cols is None:
            cols = 0
        entries = tuple(ring.element(v).value for row in rows for v in row)
        return RingMatrix(ring, len(rows), cols, entries)

    @staticmethod
    def from_columns(ring: RingDescriptor, columns: Sequence[Sequence], rows: Optional[int] = None) -> "RingMatrix":
        columns = [list(c) for c in columns]
        if columns:
            height = len(columns[0])
            if any(len(c) != height for c in columns):
                raise ShapeError("ragged columns")
            rows = height
        elif rows is None:
            rows = 0
        data = [[col[i] for col in columns] for i in range(rows)]
        return RingMatrix.from_rows(ring, data, cols=len(columns))

    @staticmethod
    def zeros(ring: RingDescriptor, rows: int, cols: int) -> "RingMatrix":
        z = ring.zero()
        return RingMatrix(ring, rows, cols, (z,) * (rows * cols))

    @staticmethod
    def identity(ring: RingDescriptor, n: int) -> "RingMatrix":
        z, o = ring.zero(), ring.one()
        entries = tuple(o if i == j else z for i in range(n) for j in range(n))
        return RingMatrix(ring, n, n, entries)

    def entry(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def element(self, i: int, j: int) -> RingElement:
        return RingElement(self.ring, self.entry(i, j))

    def row_list(self, i: int) -> list:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def to_lists(self) -> list[list]:
        return [self.row_list(i) for i in range(self.rows)]

    def to_str_rows(self) -> list[list[str]]:
        fmt = self.ring.format_payload
        return [[fmt(v) for v in self.row_list(i)] for i in range(self.rows)]

    def column(self, j: int) -> "RingMatrix":
        entries = tuple(self.entry(i, j) for i in range(self.rows))
        return RingMatrix(self.ring, self.rows, 1, entries)

    def columns(self) -> list["RingMatrix"]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "RingMatrix":
        entries = tuple(self.entry(i, j) for j in range(self.cols) for i in range(self.rows))
        return RingMatrix(self.ring, self.cols, self.rows, entries)

    def _check_ring(self, other: "RingMatrix") -> None:
        if self.ring != other.ring:
            raise DescriptorMismatch(f"cannot mix {self.ring} with {other.ring}")

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        self._check_ring(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("matrix addition needs equal shapes")
        add = self.ring.add
        entries = tuple(add(a, b) for a, b in zip(self.entries, other.entries))
        return RingMatrix(self.ring, self.rows, self.cols, entries)

    def __sub__(self, other: "RingMatrix") -> "RingMatrix":
        return self + (-other)

    def __neg__(self) -> "RingMatrix":
        neg = self.ring.neg
        return RingMatrix(self.ring, self.rows, self.cols, tuple(neg(a) for a in self.entries))

    def __matmul__(self, other: "RingMatrix") -> "RingMatrix":
        self._check_ring(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ring = self.ring
        add, mul, zero = ring.add, ring.mul, ring.zero()
        out = []
        for i in range(self.rows):
            base = i * self.cols
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    acc = add(acc, mul(self.entries[base + k], other.entries[k * other.cols + j]))
                out.append(acc)
        return RingMatrix(ring, self.rows, other.cols, tuple(out))

    def scale(self, scalar) -> "RingMatrix":
        s = self.ring.element(scalar).value
        mul = self.ring.mul
        return RingMatrix(self.ring, self.rows, self.cols, tuple(mul(s, a) for a in self.entries))

    def hstack(self, other: "RingMatrix") -> "RingMatrix":
        self._check_ring(other)
        if self.rows != other.rows:
            raise ShapeError("hstack needs equal row counts")
        data = [self.row_list(i) + other.row_list(i) for i in range(self.rows)]
        return RingMatrix.from_rows(self.ring, data, cols=self.cols + other.cols)

    def vstack(self, other: "RingMatrix") -> "RingMatrix":
        self._check_ring(other)
        if self.cols != other.cols:
            raise ShapeError("vstack needs equal column counts")
        return RingMatrix(self.ring, self.rows + other.rows, self.cols, self.entries + other.entries)

    def block_diag(self, other: "RingMatrix") -> "RingMatrix":
        self._check_ring(other)
        top = self.hstack(RingMatrix.zeros(self.ring, self.rows, other.cols))
        bottom = RingMatrix.zeros(self.ring, other.rows, self.cols).hstack(other)
        return top.vstack(bottom)

    @property
    def is_zero(self) -> bool:
        z = self.ring.is_zero
        return all(z(a) for a in self.entries)

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(r) for r in self.to_str_rows()) + "]"


@dataclass(frozen=True)
class RrefResult:
    matrix: RingMatrix
    rank: int
    pivots: tuple[int, ...]
    transform: RingMatrix


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V = D with U, V unimodular and diagonal D whose entries
    form a divisibility chain d1 | d2 | ..."""

    U: RingMatrix
    D: RingMatrix
    V: RingMatrix

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        k = min(self.D.rows, self.D.cols)
        return tuple(self.D.entry(i, i) for i in range(k))


@dataclass(frozen=True)
class AbelianGroupStructure:
    """Z^free_rank plus cyclic torsion Z/d1 x ... with d1 | d2 | ..."""

    free_rank: int
    torsion: tuple[int, ...]

    def __post_init__(self):
        if any(d <= 1 for d in self.torsion):
            raise ValueError("torsion entries must exceed 1")

    @property
    def is_free(self) -> bool:
        return not self.torsion

    def direct_sum(self, other: "AbelianGroupStructure") -> "AbelianGroupStructure":
        merged = list(self.torsion) + list(other.torsion)
        if not merged:
            return AbelianGroupStructure(self.free_rank + other.free_rank, ())
        # Canonicalise the combined torsion through the Smith form of a
        # diagonal relations matrix.
        k = len(merged)
        diag = [[merged[i] if i == j else 0 for j in range(k)] for i in range(k)]
        _, d, _ = _snf_int(diag, k, k)
        factors = tuple(d[i][i] for i in range(k) if d[i][i] > 1)
        return AbelianGroupStructure(self.free_rank + other.free_rank, factors)

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def _require_field(m: RingMatrix, what: str) -> None:
    if not m.ring.is_field:
        raise UnsupportedRing(f"{what} needs a field, got {m.ring}")


def _require_integers(m: RingMatrix, what: str) -> None:
    if not isinstance(m.ring, Integers):
        raise UnsupportedRing(f"{what} needs the integers, got {m.ring}")


def rref(m: RingMatrix) -> RrefResult:
    """Reduced row-echelon form with its invertible row transform.

    Returns (R, rank, pivots, T) with T @ m = R.
    """
    _require_field(m, "rref")
    ring = m.ring
    a = m.to_lists()
    t = RingMatrix.identity(ring, m.rows).to_lists()
    piv_row = 0
    pivots: list[int] = []
    for col in range(m.cols):
        sel = None
        for i in range(piv_row, m.rows):
            if not ring.is_zero(a[i][col]):
                sel = i
                break
        if sel is None:
            continue
        a[piv_row], a[sel] = a[sel], a[piv_row]
        t[piv_row], t[sel] = t[sel], t[piv_row]
        inv = ring.try_invert_payload(a[piv_row][col])
        a[piv_row] = [ring.mul(inv, x) for x in a[piv_row]]
        t[piv_row] = [ring.mul(inv, x) for x in t[piv_row]]
        for i in range(m.rows):
            if i == piv_row or ring.is_zero(a[i][col]):
                continue
            f = a[i][col]
            a[i] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(a[i], a[piv_row])]
            t[i] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(t[i], t[piv_row])]
        pivots.append(col)
        piv_row += 1
    return RrefResult(
        RingMatrix.from_rows(ring, a, cols=m.cols),
        len(pivots),
        tuple(pivots),
        RingMatrix.from_rows(ring, t, cols=m.rows),
    )


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with g = s*a + t*b and g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _hnf_int(mat: list[list[int]], nrows: int, ncols: int):
    """Row-style Hermite form: returns (H, U, pivots) with U*mat = H.

    Pivots are positive, entries above each pivot are reduced into
    [0, pivot), and U is unimodular.
    """
    h = [row[:] for row in mat]
    u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    piv_row = 0
    pivots: list[int] = []
    for col in range(ncols):
        sel = None
        for i in range(piv_row, nrows):
            if h[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        h[piv_row], h[sel] = h[sel], h[piv_row]
        u[piv_row], u[sel] = u[sel], u[piv_row]
        for i in range(piv_row + 1, nrows):
            if h[i][col] == 0:
                continue
            a, b = h[piv_row][col], h[i][col]
            g, s, t = _xgcd(a, b)
            p_, q_ = a // g, b // g
            h[piv_row], h[i] = (
                [s * x + t * y for x, y in zip(h[piv_row], h[i])],
                [-q_ * x + p_ * y for x, y in zip(h[piv_row], h[i])],
            )
            u[piv_row], u[i] = (
                [s * x + t * y for x, y in zip(u[piv_row], u[i])],
                [-q_ * x + p_ * y for x, y in zip(u[piv_row], u[i])],
            )
        if h[piv_row][col] < 0:
            h[piv_row] = [-x for x in h[piv_row]]
            u[piv_row] = [-x for x in u[piv_row]]
        piv = h[piv_row][col]
        for i in range(piv_row):
            q = h[i][col] // piv
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[piv_row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[piv_row])]
        pivots.append(col)
        piv_row += 1
    return h, u, pivots


def hnf(m: RingMatrix) -> tuple[RingMatrix, RingMatrix]:
    """Hermite normal form (H, U) of an integer matrix with U @ m = H."""
    _require_integers(m, "hnf")
    h, u, _ = _hnf_int(m.to_lists(), m.rows, m.cols)
    ring = m.ring
    return (
        RingMatrix.from_rows(ring, h, cols=m.cols),
        RingMatrix.from_rows(ring, u, cols=m.rows),
    )


def _snf_int(mat: list[list[int]], nrows: int, ncols: int):
    """Smith form (U, D, V) of an integer matrix, U*mat*V = D.

    The pivot is always a minimal-absolute-value nonzero entry of the
    remaining submatrix, which keeps intermediate growth low.
    """
    a = [row[:] for row in mat]
    u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    v = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    t = 0
    while t < min(nrows, ncols):
        best = None
        where = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    where = (i, j)
        if where is None:
            break
        i0, j0 = where
        if i0 != t:
            a[t], a[i0] = a[i0], a[t]
            u[t], u[i0] = u[i0], u[t]
        if j0 != t:
            for row in a:
                row[t], row[j0] = row[j0], row[t]
            for row in v:
                row[t], row[j0] = row[j0], row[t]
        piv = a[t][t]
        dirty = False
        for i in range(t + 1, nrows):
            if a[i][t] == 0:
                continue
            q = a[i][t] // piv
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                u[i] = [x - q * y for x, y in zip(u[i], u[t])]
            if a[i][t] != 0:
                dirty = True
        for j in range(t + 1, ncols):
            if a[t][j] == 0:
                continue
            q = a[t][j] // piv
            if q:
                for row in a:
                    row[j] -= q * row[t]
                for vrow in v:
                    vrow[j] -= q * vrow[t]
            if a[t][j] != 0:
                dirty = True
        if dirty:
            continue
        offender = None
        for i in range(t + 1, nrows):
            if any(x % piv for x in a[i][t + 1 :]):
                offender = i
                break
        if offender is not None:
            a[t] = [x + y for x, y in zip(a[t], a[offender])]
            u[t] = [x + y for x, y in zip(u[t], u[offender])]
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    d = [[a[i][j] if i == j else 0 for j in range(ncols)] for i in range(nrows)]
    return u, d, v


def snf(m: RingMatrix) -> SmithDecomposition:
    """Smith normal form of an integer matrix."""
    _require_integers(m, "snf")
    u, d, v = _snf_int(m.to_lists(), m.rows, m.cols)
    ring = m.ring
    return SmithDecomposition(
        RingMatrix.from_rows(ring, u, cols=m.rows),
        RingMatrix.from_rows(ring, d, cols=m.cols),
        RingMatrix.from_rows(ring, v, cols=m.cols),
    )


def column_canonical(m: RingMatrix) -> RingMatrix:
    """Canonical generator matrix of the column span.

    Over a field this is the reduced-echelon basis of the column
    space; over the integers the Hermite basis of the column lattice.
    Two generator matrices span the same submodule exactly when their
    canonical forms are equal.
    """
    if isinstance(m.ring, Integers):
        h, _, _ = _hnf_int(m.transpose().to_lists(), m.cols, m.rows)
        basis = [row for row in h if any(row)]
        return RingMatrix.from_rows(m.ring, basis, cols=m.rows).transpose()
    _require_field(m, "column_canonical")
    res = rref(m.transpose())
    basis = [res.matrix.row_list(i) for i in range(res.rank)]
    return RingMatrix.from_rows(m.ring, basis, cols=m.rows).transpose()


def column_space_sum(a: RingMatrix, b: RingMatrix) -> RingMatrix:
    """Canonical generators of col(a) + col(b)."""
    a._check_ring(b)
    if a.rows != b.rows:
        raise ShapeError("summed column spaces need equal ambient rank")
    return column_canonical(a.hstack(b))


def column_rank(m: RingMatrix) -> int:
    """Rank of the column span (lattice rank over the integers)."""
    return column_canonical(m).cols


def membership(v: RingMatrix, g: RingMatrix) -> bool:
    """Whether column v lies in the span of g's columns over the ring."""
    if v.cols != 1:
        raise ShapeError("membership expects a single column")
    if v.rows != g.rows:
        raise ShapeError("ambient ranks differ")
    if v.is_zero:
        return True
    return column_canonical(g) == column_canonical(g.hstack(v))


def solve_right(a: RingMatrix, b: RingMatrix) -> Optional[RingMatrix]:
    """Solve a @ X = b exactly; None when no solution exists.

    Over the integers only integral solutions count, found through the
    Hermite form of the column lattice.
    """
    a._check_ring(b)
    if a.rows != b.rows:
        raise ShapeError("solve_right needs equal row counts")
    if isinstance(a.ring, Integers):
        return _solve_right_int(a, b)
    _require_field(a, "solve_right")
    res = rref(a)
    c = res.transform @ b
    ring = a.ring
    for i in range(res.rank, a.rows):
        if any(not ring.is_zero(c.entry(i, j)) for j in range(b.cols)):
            return None
    x = [[ring.zero() for _ in range(b.cols)] for _ in range(a.cols)]
    for r, pivot_col in enumerate(res.pivots):
        x[pivot_col] = [c.entry(r, j) for j in range(b.cols)]
    return RingMatrix.from_rows(ring, x, cols=b.cols)


def _solve_right_int(a: RingMatrix, b: RingMatrix) -> Optional[RingMatrix]:
    hrow, urow, pivots = _hnf_int(a.transpose().to_lists(), a.cols, a.rows)
    # a @ W = Hcol with W = urow^T, Hcol = hrow^T (column staircase).
    rank = len(pivots)
    cols_x = []
    for j in range(b.cols):
        target = [b.entry(i, j) for i in range(a.rows)]
        y = [0] * a.cols
        for r in range(rank):
            p = pivots[r]
            piv = hrow[r][p]
            if target[p] % piv:
                return None
            q = target[p] // piv
            y[r] = q
            if q:
                target = [x - q * hc for x, hc in zip(target, hrow[r])]
        if any(target):
            return None
        # x = W @ y = urow^T @ y
        col = [sum(urow[r][i] * y[r] for r in range(a.cols)) for i in range(a.cols)]
        cols_x.append(col)
    return RingMatrix.from_columns(a.ring, cols_x, rows=a.cols)


def kernel_basis(m: RingMatrix) -> RingMatrix:
    """Columns spanning ker(m): a basis over a field, a lattice basis
    over the integers.  The zero kernel yields a 0-column matrix."""
    if isinstance(m.ring, Integers):
        hrow, urow, pivots = _hnf_int(m.transpose().to_lists(), m.cols, m.rows)
        rank = len(pivots)
        basis = [urow[i] for i in range(rank, m.cols)]
        return RingMatrix.from_rows(m.ring, basis, cols=m.cols).transpose()
    _require_field(m, "kernel_basis")
    res = rref(m)
    ring = m.ring
    free = [c for c in range(m.cols) if c not in res.pivots]
    cols = []
    for f in free:
        vec = [ring.zero()] * m.cols
        vec[f] = ring.one()
        for r, p in enumerate(res.pivots):
            vec[p] = ring.neg(res.matrix.entry(r, f))
        cols.append(vec)
    return RingMatrix.from_columns(ring, cols, rows=m.cols)


def cokernel_structure(g: RingMatrix, ambient_rank: int) -> AbelianGroupStructure:
    """Structure of Z^ambient_rank / col(g) through the Smith form."""
    _require_integers(g, "cokernel_structure")
    if g.rows != ambient_rank:
        raise ShapeError("generators do not live in the stated ambient module")
    _, d, _ = _snf_int(g.to_lists(), g.rows, g.cols)
    diag = [d[i][i] for i in range(min(g.rows, g.cols))]
    nonzero = [x for x in diag if x != 0]
    return AbelianGroupStructure(
        ambient_rank - len(nonzero),
        tuple(x for x in nonzero if x > 1),
    )


def _det_int(mat: list[list[int]]) -> int:
    # Bareiss fraction-free elimination; divisions are exact.
    n = len(mat)
    if n == 0:
        return 1
    a = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _det_field(m: RingMatrix):
    ring = m.ring
    a = m.to_lists()
    n = m.rows
    det = ring.one()
    for k in range(n):
        sel = next((i for i in range(k, n) if not ring.is_zero(a[i][k])), None)
        if sel is None:
            return ring.zero()
        if sel != k:
            a[k], a[sel] = a[sel], a[k]
            det = ring.neg(det)
        piv = a[k][k]
        det = ring.mul(det, piv)
        inv = ring.try_invert_payload(piv)
        for i in range(k + 1, n):
            f = ring.mul(a[i][k], inv)
            if ring.is_zero(f):
                continue
            a[i] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(a[i], a[k])]
    return det


def _det_expansion(m: RingMatrix):
    # Laplace expansion organised as a subset DP; reduction happens
    # inside every ring multiplication, so it is exact in any
    # commutative ring, zero divisors included.
    ring = m.ring
    n = m.rows
    dp = {0: ring.one()}
    for i in range(n):
        ndp: dict[int, object] = {}
        for mask, val in dp.items():
            if ring.is_zero(val):
                continue
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    continue
                entry = m.entry(i, j)
                if ring.is_zero(entry):
                    continue
                below = bin(mask & (bit - 1)).count("1")
                term = ring.mul(val, entry)
                if (i + below) % 2:
                    term = ring.neg(term)
                nmask = mask | bit
                if nmask in ndp:
                    ndp[nmask] = ring.add(ndp[nmask], term)
                else:
                    ndp[nmask] = term
        dp = ndp
    full = (1 << n) - 1
    return dp.get(full, ring.zero())


def det(m: RingMatrix) -> RingElement:
    """Exact determinant of a square matrix."""
    if m.rows != m.cols:
        raise ShapeError("determinant needs a square matrix")
    ring = m.ring
    if isinstance(ring, Integers):
        return RingElement(ring, _det_int(m.to_lists()))
    if ring.is_field:
        return RingElement(ring, _det_field(m))
    if isinstance(ring, PolyQuotient):
        if m.rows > 12:
            raise ShapeError("expansion determinant limited to 12x12")
        return RingElement(ring, _det_expansion(m))
    raise UnsupportedRing(f"det not implemented over {ring}")


def invert(m: RingMatrix) -> Optional[RingMatrix]:
    """Two-sided inverse over a field, or None if singular."""
    _require_field(m, "invert")
    if m.rows != m.cols:
        raise ShapeError("inverse needs a square matrix")
    res = rref(m)
    if res.rank != m.rows:
        return None
    return res.transform
