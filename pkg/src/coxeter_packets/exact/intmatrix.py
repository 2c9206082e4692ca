"""Exact integer matrices, Smith normal form and integral linear algebra.

Everything here works with Python integers (arbitrary precision) and
``fractions.Fraction``; there is no floating point anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd
from typing import Iterable, Iterator, Optional, Sequence, Tuple

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major."""

    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        ncols = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [tuple(int(x) for x in c) for c in columns]
        if any(len(c) != rows for c in columns):
            raise ValueError("ragged columns")
        return cls(rows, len(columns), tuple(c[i] for i in range(rows) for c in columns))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> Iterator[Vector]:
        for j in range(self.cols):
            yield self.column(j)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(self.entries[i * self.cols + j]
                               for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = [other.column(j) for j in range(other.cols)]
            out = []
            for i in range(self.rows):
                r = self.row(i)
                out.extend(sum(a * b for a, b in zip(r, c)) for c in ocols)
            return IntMatrix(self.rows, other.cols, tuple(out))
        return self.apply(other)

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product; works for int and Fraction vectors alike."""
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for matrix with {self.cols} columns")
        return tuple(sum(a * b for a, b in zip(self.row(i), v)) for i in range(self.rows))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def __pow__(self, n: int) -> "IntMatrix":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        if n < 0:
            raise ValueError("negative powers are not supported")
        result, base = IntMatrix.identity(self.rows), self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == IntMatrix.identity(self.rows)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix.from_rows([self.row(i) + other.row(i) for i in range(self.rows)],
                                   cols=self.cols + other.cols)

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in self.row(i)) + "]"
                               for i in range(self.rows)) + "]"


def as_matrix(m) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix.from_rows(m)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Finite abelian group Z/d1 x ... x Z/dk with d1 | d2 | ... | dk, each >= 2."""

    invariant_factors: Tuple[int, ...] = ()

    def __post_init__(self):
        fs = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        if any(d < 2 for d in fs):
            raise ValueError(f"invariant factors must be >= 2, got {fs}")
        if any(b % a for a, b in zip(fs, fs[1:])):
            raise ValueError(f"invariant factors do not form a divisibility chain: {fs}")

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "FiniteAbelianGroup":
        """Normalise a product of cyclic groups Z/m1 x Z/m2 x ... to invariant factors."""
        orders = [abs(int(m)) for m in orders]
        if any(m == 0 for m in orders):
            raise ValueError("Z/0 is not finite")
        diag = IntMatrix.diagonal(orders) if orders else IntMatrix.zeros(0, 0)
        snf = smith_normal_form(diag)
        return cls(tuple(d for d in snf.diagonal if d > 1))

    @property
    def order(self) -> int:
        return reduce(lambda a, b: a * b, self.invariant_factors, 1)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def elements(self) -> Iterator[Tuple[int, ...]]:
        return product(*(range(d) for d in self.invariant_factors))

    def torsion_order(self, n: int) -> int:
        """|G[n]|, the number of elements killed by n."""
        return reduce(lambda a, b: a * b, (gcd(n, d) for d in self.invariant_factors), 1)

    def primes(self) -> Tuple[int, ...]:
        return tuple(sorted({p for d in self.invariant_factors for p in prime_factors(d)}))

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


def prime_factors(n: int) -> Tuple[int, ...]:
    n = abs(n)
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


@dataclass(frozen=True)
class SmithForm:
    """U @ M @ V == S with U, V unimodular and S diagonal, d_i | d_{i+1}."""

    S: IntMatrix
    U: IntMatrix
    V: IntMatrix

    def __iter__(self):
        return iter((self.S, self.U, self.V))

    @property
    def diagonal(self) -> Tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.rows, self.S.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(m) -> SmithForm:
    """Smith normal form with transforms.

    Pivots are chosen as the entry of smallest absolute value in the
    remaining block (first in row-major order on ties).
    """
    m = as_matrix(m)
    nr, nc = m.rows, m.cols
    a = m.to_rows()
    u = IntMatrix.identity(nr).to_rows()
    v = IntMatrix.identity(nc).to_rows()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        ra, rd = a[src], a[dst]
        for c in range(nc):
            rd[c] += k * ra[c]
        us, ud = u[src], u[dst]
        for c in range(nr):
            ud[c] += k * us[c]

    def add_col(src, dst, k):  # col_dst += k * col_src
        for r in a:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    for t in range(min(nr, nc)):
        while True:
            best = None
            for i in range(t, nr):
                for j in range(t, nc):
                    x = a[i][j]
                    if x and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, nr)
                        if any(a[i][j] % p for j in range(t + 1, nc))), None)
            if bad is None:
                break
            add_row(bad, t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    return SmithForm(IntMatrix.from_rows(a, cols=nc),
                     IntMatrix.from_rows(u, cols=nr),
                     IntMatrix.from_rows(v, cols=nc))


@dataclass(frozen=True)
class Cokernel:
    torsion: FiniteAbelianGroup
    free_rank: int

    def __iter__(self):
        return iter((self.torsion, self.free_rank))

    def is_finite(self) -> bool:
        return self.free_rank == 0


def cokernel(m) -> Cokernel:
    """Z^rows / M Z^cols as torsion invariants plus free rank."""
    m = as_matrix(m)
    snf = smith_normal_form(m)
    diag = snf.diagonal
    torsion = FiniteAbelianGroup(tuple(d for d in diag if d > 1))
    return Cokernel(torsion, m.rows - snf.rank)


def solve_integer(m, b: Sequence[int]) -> Optional[Vector]:
    """An integer x with M x = b, or None when no integral solution exists."""
    m = as_matrix(m)
    if len(b) != m.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {m.rows} rows")
    S, U, V = smith_normal_form(m)
    ub = U.apply(b)
    y = [0] * m.cols
    for i in range(m.rows):
        d = S[i, i] if i < m.cols else 0
        if d == 0:
            if ub[i] != 0:
                return None
        elif ub[i] % d:
            return None
        else:
            y[i] = ub[i] // d
    x = V.apply(y)
    assert m.apply(x) == tuple(b)
    return x


def in_integer_span(m, b: Sequence[int]) -> bool:
    """Membership of b in M Z^cols, decided from the Smith form alone."""
    m = as_matrix(m)
    S, U, _ = smith_normal_form(m)
    ub = U.apply(b)
    for i, x in enumerate(ub):
        d = S[i, i] if i < min(S.rows, S.cols) else 0
        if (d == 0 and x != 0) or (d and x % d):
            return False
    return True


def kernel_basis(m) -> IntMatrix:
    """Columns form a Z-basis of the (saturated) integer kernel of M."""
    m = as_matrix(m)
    snf = smith_normal_form(m)
    r = snf.rank
    cols = [snf.V.column(j) for j in range(r, m.cols)]
    return IntMatrix.from_columns(cols, m.cols)


def solve_rational(m, b: Sequence) -> Optional[Tuple[Fraction, ...]]:
    """Unique solution of a square nonsingular system over Q, or None if singular."""
    m = as_matrix(m)
    if m.rows != m.cols or len(b) != m.rows:
        raise ValueError("solve_rational needs a square system")
    n = m.rows
    a = [[Fraction(x) for x in m.row(i)] + [Fraction(b[i])] for i in range(n)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return None
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return tuple(a[i][n] for i in range(n))


def integer_inverse(m) -> IntMatrix:
    """Inverse of a unimodular matrix; raises if the inverse is not integral."""
    m = as_matrix(m)
    n = m.rows
    cols = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        x = solve_rational(m, e)
        if x is None or any(v.denominator != 1 for v in x):
            raise ValueError("matrix is not invertible over the integers")
        cols.append(tuple(int(v) for v in x))
    return IntMatrix.from_columns(cols, n)


def rational_nullspace(m) -> list:
    """Basis of ker(M) over Q via reduced row echelon form."""
    m = as_matrix(m)
    a = [[Fraction(x) for x in m.row(i)] for i in range(m.rows)]
    pivots, r = [], 0
    for c in range(m.cols):
        piv = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * m.cols
        v[fc] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -a[row][fc]
        basis.append(v)
    return basis
