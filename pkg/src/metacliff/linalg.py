"""Exact dense linear algebra over the scalar tower, plus a sparse rational
rank routine for the larger intertwining systems.

Everything here is plain Gaussian elimination over a field; no floating
point, no pivoting heuristics beyond "first nonzero".
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import ONE, ZERO, Scalar


class Matrix:
    """Dense matrix with Scalar entries."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [[Scalar.of(x) for x in row] for row in rows]
        if self.rows:
            width = len(self.rows[0])
            if any(len(r) != width for r in self.rows):
                raise ValueError("ragged rows")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n: int, m: int | None = None) -> "Matrix":
        m = n if m is None else m
        return cls([[ZERO] * m for _ in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.rows))

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix([[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "Matrix":
        return Matrix([[-x for x in r] for r in self.rows])

    def scale(self, c) -> "Matrix":
        c = Scalar.of(c)
        return Matrix([[c * x for x in r] for r in self.rows])

    def __mul__(self, other: "Matrix") -> "Matrix":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            out.append(
                [sum((x * y for x, y in zip(row, col) if x and y), ZERO) for col in cols]
            )
        return Matrix(out)

    def transpose(self) -> "Matrix":
        return Matrix([list(col) for col in zip(*self.rows)])

    def trace(self) -> Scalar:
        return sum((self.rows[i][i] for i in range(len(self.rows))), ZERO)

    def is_zero(self) -> bool:
        return all(x.is_zero for r in self.rows for x in r)

    def column_action(self, coeffs: list[Scalar]) -> list[Scalar]:
        """Matrix-vector product, vector given as a coefficient column."""
        return [
            sum((x * c for x, c in zip(row, coeffs) if x and c), ZERO)
            for row in self.rows
        ]

    # -- elimination-based queries ----------------------------------------

    def _echelon(self):
        rows = [list(r) for r in self.rows]
        n, m = self.shape
        pivots = []
        r = 0
        for col in range(m):
            pivot = next((i for i in range(r, n) if rows[i][col]), None)
            if pivot is None:
                continue
            rows[r], rows[pivot] = rows[pivot], rows[r]
            inv = rows[r][col].inverse()
            rows[r] = [x * inv for x in rows[r]]
            for i in range(n):
                if i != r and rows[i][col]:
                    f = rows[i][col]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            pivots.append(col)
            r += 1
            if r == n:
                break
        return rows, pivots

    def rank(self) -> int:
        return len(self._echelon()[1])

    def nullspace(self) -> list[list[Scalar]]:
        """Basis of the right null space, in reduced-echelon column order."""
        rows, pivots = self._echelon()
        n, m = self.shape
        free = [j for j in range(m) if j not in pivots]
        basis = []
        for j in free:
            vec = [ZERO] * m
            vec[j] = ONE
            for r, pc in enumerate(pivots):
                vec[pc] = -rows[r][j]
            basis.append(vec)
        return basis

    def solve(self, rhs: list[Scalar]) -> list[Scalar] | None:
        """One exact solution of self * x = rhs, or None if inconsistent."""
        n, m = self.shape
        aug = Matrix([list(r) + [Scalar.of(v)] for r, v in zip(self.rows, rhs)])
        rows, pivots = aug._echelon()
        if m in pivots:
            return None
        x = [ZERO] * m
        for r, pc in enumerate(pivots):
            x[pc] = rows[r][m]
        return x

    def inverse(self) -> "Matrix":
        n, m = self.shape
        if n != m:
            raise ValueError("not square")
        aug = Matrix([list(r) + list(Matrix.identity(n).rows[i]) for i, r in enumerate(self.rows)])
        rows, pivots = aug._echelon()
        if pivots != list(range(n)):
            raise ValueError("singular matrix")
        return Matrix([r[n:] for r in rows])

    def det(self) -> Scalar:
        n, m = self.shape
        if n != m:
            raise ValueError("not square")
        rows = [list(r) for r in self.rows]
        det = ONE
        for col in range(n):
            pivot = next((i for i in range(col, n) if rows[i][col]), None)
            if pivot is None:
                return ZERO
            if pivot != col:
                rows[col], rows[pivot] = rows[pivot], rows[col]
                det = -det
            det = det * rows[col][col]
            inv = rows[col][col].inverse()
            for i in range(col + 1, n):
                if rows[i][col]:
                    f = rows[i][col] * inv
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[col])]
        return det

    def charpoly(self) -> list[Scalar]:
        """Coefficients of det(t*I - A), highest power first (Faddeev-LeVerrier)."""
        n, _ = self.shape
        coeffs = [ONE]
        m = Matrix.zero(n)
        for k in range(1, n + 1):
            m = self * m + Matrix.identity(n).scale(coeffs[-1])
            c = -(self * m).trace() / Scalar.of(k)
            coeffs.append(c)
        return coeffs

    def to_fraction_rows(self) -> list[list[Fraction]]:
        return [[x.to_fraction() for x in row] for row in self.rows]

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.rows)
        return f"Matrix[{body}]"


def sparse_rank(rows: list[dict[int, Fraction]], ncols: int) -> int:
    """Rank of a sparse rational system; rows are {column: coefficient} maps."""
    pending = [dict(r) for r in rows if r]
    pivot_of_col: dict[int, dict[int, Fraction]] = {}
    rank = 0
    while pending:
        # shortest rows first keeps fill-in low
        pending.sort(key=len, reverse=True)
        row = pending.pop()
        while row:
            col = min(row)
            if col not in pivot_of_col:
                inv = 1 / row[col]
                row = {c: v * inv for c, v in row.items()}
                pivot_of_col[col] = row
                rank += 1
                break
            piv = pivot_of_col[col]
            f = row[col]
            for c, v in piv.items():
                nv = row.get(c, Fraction(0)) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        # empty row: dependent, dropped
    return rank


def sparse_nullity(rows: list[dict[int, Fraction]], ncols: int) -> int:
    return ncols - sparse_rank(rows, ncols)
