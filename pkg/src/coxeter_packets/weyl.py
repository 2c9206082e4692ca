"""Weyl group elements as integer matrices on the root lattice.

A :class:`WeylElement` stores the matrix of ``w`` on Q in the simple-root
basis (column ``j`` is ``w(alpha_j)``).  The contragredient action on
coweight coordinates is ``(M^T)^{-1}``, see :attr:`WeylElement.coweight_matrix`.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd, prod
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import IntMatrix, integer_inverse, solve_rational
from .rootsys import RootDatum

Poly = Tuple[int, ...]  # integer coefficients, constant term first

MAX_ORDER = 10_000


class WeylBoundExceeded(ValueError):
    """Raised when a full Weyl group enumeration would exceed the caller's bound."""

    def __init__(self, order: int, bound: int):
        super().__init__(f"|W| = {order} exceeds the enumeration bound {bound}")
        self.order = order
        self.bound = bound


@dataclass(frozen=True, eq=False)
class WeylElement:
    datum: RootDatum = field(repr=False)
    matrix: IntMatrix

    def __post_init__(self):
        n = self.datum.rank
        if self.matrix.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix")

    @classmethod
    def checked(cls, datum: RootDatum, matrix: IntMatrix) -> "WeylElement":
        """Construct after verifying that ``matrix`` permutes the roots."""
        w = cls(datum, matrix)
        roots = datum.root_set
        if any(matrix.apply(r) not in roots for r in datum.roots):
            raise ValueError("matrix does not permute the root system")
        return w

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix.entries)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.datum, self.matrix @ other.matrix)

    def __pow__(self, n: int) -> "WeylElement":
        if n < 0:
            return self.inverse() ** (-n)
        return WeylElement(self.datum, self.matrix ** n)

    def __call__(self, root: Sequence[int]) -> Tuple[int, ...]:
        return self.matrix.apply(root)

    def inverse(self) -> "WeylElement":
        return self ** (self.order - 1)

    @cached_property
    def order(self) -> int:
        ident = IntMatrix.identity(self.datum.rank)
        m = self.matrix
        for k in range(1, MAX_ORDER + 1):
            if m == ident:
                return k
            m = m @ self.matrix
        raise ArithmeticError("element has no finite order below the search cap")

    @cached_property
    def coweight_matrix(self) -> IntMatrix:
        """Action on P^vee in the fundamental coweight basis."""
        return integer_inverse(self.matrix.T)

    def weight_matrix(self) -> IntMatrix:
        """Action on P in the fundamental weight basis."""
        return _conjugate_by_cartan(self.datum.cartan, self.matrix)

    def is_identity(self) -> bool:
        return self.matrix.is_identity()


def _conjugate_by_cartan(c: IntMatrix, m: IntMatrix) -> IntMatrix:
    # X = C M C^{-1} satisfies C^T X^T = (C M)^T, so row i of X solves C^T y = row i of C M
    cm = c @ m
    ct = c.T
    rows = []
    for i in range(c.rows):
        y = solve_rational(ct, cm.row(i))
        assert all(v.denominator == 1 for v in y)
        rows.append([int(v) for v in y])
    return IntMatrix.from_rows(rows)


def identity(d: RootDatum) -> WeylElement:
    return WeylElement(d, IntMatrix.identity(d.rank))


def simple_reflection(d: RootDatum, i: int) -> WeylElement:
    """s_i(a) = a - <alpha_i^vee, a> alpha_i."""
    n = d.rank
    rows = [[int(r == c) for c in range(n)] for r in range(n)]
    for c in range(n):
        rows[i][c] -= d.cartan[i, c]
    return WeylElement(d, IntMatrix.from_rows(rows))


def reflection(d: RootDatum, root: Sequence[int]) -> WeylElement:
    """s_beta(a) = a - <beta^vee, a> beta."""
    cor = d.coroot(tuple(root))
    n = d.rank
    pair = [sum(cor[k] * d.cartan[k, j] for k in range(n)) for j in range(n)]  # <beta^vee, alpha_j>
    rows = [[int(r == c) - root[r] * pair[c] for c in range(n)] for r in range(n)]
    return WeylElement(d, IntMatrix.from_rows(rows))


def coxeter_element(d: RootDatum, ordering: Optional[Sequence[int]] = None) -> WeylElement:
    """Product s_{o[0]} s_{o[1]} ... of the simple reflections, default Bourbaki order."""
    n = d.rank
    ordering = tuple(range(n)) if ordering is None else tuple(ordering)
    if sorted(ordering) != list(range(n)):
        raise ValueError(f"{ordering} is not a permutation of the simple indices 0..{n - 1}")
    w = identity(d)
    for i in ordering:
        w = w * simple_reflection(d, i)
    return w


# -- integer polynomials -----------------------------------------------------

def char_poly(w) -> Poly:
    """det(X I - M) by Faddeev-LeVerrier (exact: every division is exact over Z)."""
    m = w.matrix if isinstance(w, WeylElement) else w
    n = m.rows
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    ident = IntMatrix.identity(n)
    mk = IntMatrix.zeros(n, n)
    c = 1
    for k in range(1, n + 1):
        mk = m @ mk + ident.scale(c)
        am = m @ mk
        tr = sum(am[i, i] for i in range(n))
        assert tr % k == 0
        c = -tr // k
        coeffs[n - k] = c
    return tuple(coeffs)


def _ptrim(a: List[int]) -> List[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def poly_divmod(a: Poly, b: Poly) -> Tuple[Poly, Poly]:
    """Division by a monic integer polynomial."""
    if b[-1] != 1:
        raise ValueError("divisor must be monic")
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return (0,), tuple(a)
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            q[k - db] = c
            for i, x in enumerate(b):
                a[k - db + i] -= c * x
    return tuple(_ptrim(q)), tuple(_ptrim(a[:db] or [0]))


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> Poly:
    """Phi_m, by dividing X^m - 1 by Phi_d for proper divisors d of m."""
    num = (-1,) + (0,) * (m - 1) + (1,)
    for dd in range(1, m):
        if m % dd == 0:
            num, r = poly_divmod(num, cyclotomic(dd))
            assert r == (0,)
    return num


def format_poly(p: Poly, var: str = "X") -> str:
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and abs(c) == 1:
            coef = ""
        else:
            coef = str(abs(c))
        sign = "-" if c < 0 else "+"
        terms.append((sign, coef + mono))
    if not terms:
        return "0"
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, t in terms[1:]:
        s += f" {sign} {t}"
    return s


def cyclotomic_factorization(p: Poly, h: int) -> Dict[int, int]:
    """Exponents e_m with p = prod_{m | h} Phi_m^{e_m}; raises if p is not of that shape."""
    out: Dict[int, int] = {}
    rest = p
    for m in sorted(k for k in range(1, h + 1) if h % k == 0):
        phi = cyclotomic(m)
        while len(rest) - 1 >= len(phi) - 1:
            q, r = poly_divmod(rest, phi)
            if r != (0,):
                break
            out[m] = out.get(m, 0) + 1
            rest = q
    if rest != (1,):
        raise ValueError(f"{format_poly(p)} is not a product of cyclotomic polynomials Phi_m, m | {h}")
    return out


def exponents(d: RootDatum, ordering: Optional[Sequence[int]] = None) -> Tuple[int, ...]:
    """Exponents as the multiset of 0 < i < h with zeta_h^i a root of the Coxeter polynomial."""
    h = d.coxeter_number
    fac = cyclotomic_factorization(char_poly(coxeter_element(d, ordering)), h)
    out = []
    for i in range(1, h):
        m = h // gcd(i, h)  # zeta_h^i is a primitive m-th root of unity
        out += [i] * fac.get(m, 0)
    return tuple(out)


def is_elliptic(w: WeylElement) -> bool:
    return (w.matrix - IntMatrix.identity(w.datum.rank)).det() != 0


def norm_map(w: WeylElement) -> IntMatrix:
    """sum_{k < ord(w)} w^k."""
    n = w.datum.rank
    acc = IntMatrix.zeros(n, n)
    p = IntMatrix.identity(n)
    for _ in range(w.order):
        acc = acc + p
        p = p @ w.matrix
    return acc


def weyl_order(d: RootDatum) -> int:
    return prod(m + 1 for m in exponents(d))


def enumerate_weyl(d: RootDatum, bound: int) -> List[WeylElement]:
    """All of W by breadth-first closure over simple reflections, sorted by matrix entries.

    Left multiplication by s_i changes only row i of a matrix, so each new
    element costs one sparse row update.
    """
    order = weyl_order(d)
    if order > bound:
        raise WeylBoundExceeded(order, bound)
    n = d.rank
    cartan = d.cartan
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    seen = {ident}
    queue = deque([ident])
    while queue:
        rows = queue.popleft()
        for i in range(n):
            ci = cartan.row(i)
            new_row = list(rows[i])
            for k in range(n):
                c = ci[k]
                if c:
                    rk = rows[k]
                    for j in range(n):
                        new_row[j] -= c * rk[j]
            new = rows[:i] + (tuple(new_row),) + rows[i + 1:]
            if new not in seen:
                seen.add(new)
                queue.append(new)
    if len(seen) != order:
        raise AssertionError(f"closure produced {len(seen)} elements, expected {order}")
    mats = sorted(tuple(x for r in rows for x in r) for rows in seen)
    return [WeylElement(d, IntMatrix(n, n, m)) for m in mats]
