"""Irreducible reduced root systems in Bourbaki numbering.

Conventions used throughout the package:

* ``cartan[i][j] = <alpha_i^vee, alpha_j>``, so row ``i`` of the Cartan
  matrix lists the coweight coordinates of the simple coroot ``alpha_i^vee``
  and ``cartan @ a`` gives the weight coordinates of the root with simple
  root coordinates ``a``.
* Roots are integer vectors in the simple-root basis.
* Points of the apartment are rational vectors in the fundamental
  coweight basis, so ``alpha_i(x) = x[i]``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, List, Tuple

from .exact import FiniteAbelianGroup, IntMatrix, cokernel, prime_factors, solve_rational
from .report import Report

Root = Tuple[int, ...]

FAMILY_ORDER = "ABCDEFG"
DEFAULT_CLASSICAL_CAP = 8


@dataclass(frozen=True, order=True)
class RootSystemType:
    family: str
    rank: int

    def __post_init__(self):
        f, n = self.family, self.rank
        if f not in FAMILY_ORDER:
            raise ValueError(f"unknown family {f!r}")
        ok = {
            "A": n >= 1, "B": n >= 2, "C": n >= 2, "D": n >= 3,
            "E": n in (6, 7, 8), "F": n == 4, "G": n == 2,
        }[f]
        if not ok:
            raise ValueError(f"invalid rank {n} for family {f}")

    @classmethod
    def parse(cls, text: str) -> "RootSystemType":
        m = re.fullmatch(r"\s*([A-Ga-g])\s*_?\s*(\d+)\s*", text)
        if not m:
            raise ValueError(f"cannot parse root system type {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    def sort_key(self) -> Tuple[int, int]:
        return FAMILY_ORDER.index(self.family), self.rank

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


def _chain(n: int) -> List[List[int]]:
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2
        if i + 1 < n:
            c[i][i + 1] = c[i + 1][i] = -1
    return c


def cartan_matrix(t: RootSystemType) -> IntMatrix:
    f, n = t.family, t.rank
    if f == "A":
        c = _chain(n)
    elif f == "B":
        c = _chain(n)
        c[n - 1][n - 2] = -2  # alpha_n short
    elif f == "C":
        c = _chain(n)
        c[n - 2][n - 1] = -2  # alpha_n long
    elif f == "D":
        c = _chain(n)
        c[n - 2][n - 1] = c[n - 1][n - 2] = 0
        c[n - 3][n - 1] = c[n - 1][n - 3] = -1
    elif f == "E":
        c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        edges = [(0, 2), (2, 3), (3, 1)] + [(k, k + 1) for k in range(3, n - 1)]
        for i, j in edges:
            c[i][j] = c[j][i] = -1
    elif f == "F":
        c = [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -2, 2, -1], [0, 0, -1, 2]]
    else:  # G2, alpha_1 short
        c = [[2, -3], [-1, 2]]
    return IntMatrix.from_rows(c)


def _symmetrizer(cartan: IntMatrix) -> Tuple[Fraction, ...]:
    """d_i = (alpha_i, alpha_i)/2, normalised so short roots have d = 1."""
    n = cartan.rows
    d: List = [None] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and cartan[i, j] and d[j] is None:
                # d_i c_ij = d_j c_ji
                d[j] = d[i] * cartan[i, j] / cartan[j, i]
                stack.append(j)
    if any(x is None for x in d):
        raise ValueError("Cartan matrix is not connected")
    m = min(d)
    return tuple(x / m for x in d)


def positive_root_closure(cartan: IntMatrix) -> List[Root]:
    """Positive roots by simple-root string closure, sorted by height then lexicographically."""
    n = cartan.rows
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = set()
        for b in layer:
            pair = cartan.apply(b)  # <alpha_i^vee, b>
            for i in range(n):
                if b == simple[i]:
                    continue
                p = 0
                down = list(b)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        p += 1
                    else:
                        break
                if p - pair[i] > 0:
                    up = list(b)
                    up[i] += 1
                    nxt.add(tuple(up))
        nxt -= roots
        roots |= nxt
        layer = sorted(nxt)
    return sorted(roots, key=lambda r: (sum(r), r))


@dataclass(frozen=True)
class RootDatum:
    """Combinatorial data of an irreducible root system."""

    type: RootSystemType
    cartan: IntMatrix
    positive_roots: Tuple[Root, ...]
    lengths: Tuple[Fraction, ...] = field(repr=False)  # (alpha_i, alpha_i)/2

    @property
    def rank(self) -> int:
        return self.type.rank

    @property
    def simple_roots(self) -> Tuple[Root, ...]:
        n = self.rank
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))

    @cached_property
    def roots(self) -> Tuple[Root, ...]:
        return self.positive_roots + tuple(tuple(-x for x in r) for r in self.positive_roots)

    @cached_property
    def root_set(self) -> frozenset:
        return frozenset(self.roots)

    @staticmethod
    def height(root: Root) -> int:
        return sum(root)

    @property
    def highest_root(self) -> Root:
        return self.positive_roots[-1]

    @property
    def coxeter_number(self) -> int:
        return self.height(self.highest_root) + 1

    @property
    def num_roots(self) -> int:
        return 2 * len(self.positive_roots)

    def inner(self, a: Root, b: Root) -> Fraction:
        """Invariant form with short roots of squared length 2."""
        ca = self.cartan.apply(b)
        return sum(Fraction(a[i]) * self.lengths[i] * ca[i] for i in range(self.rank))

    def coroot(self, root: Root) -> Tuple[int, ...]:
        """Coordinates of root^vee in the simple-coroot basis."""
        d = self.inner(root, root) / 2
        out = tuple(Fraction(root[i]) * self.lengths[i] / d for i in range(self.rank))
        assert all(x.denominator == 1 for x in out)
        return tuple(int(x) for x in out)

    def coroot_coweight_coords(self, root: Root) -> Tuple[int, ...]:
        """Coordinates of root^vee in the fundamental coweight basis."""
        return self.cartan.T.apply(self.coroot(root))

    def pairing(self, root: Root, coroot: Tuple[int, ...]) -> int:
        """<root, coroot> with the coroot in simple-coroot coordinates."""
        return sum(c * x for c, x in zip(coroot, self.cartan.apply(root)))

    def weight_coords(self, root: Root) -> Tuple[int, ...]:
        return self.cartan.apply(root)

    @cached_property
    def fundamental_weights(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """omega_j in the simple-root basis (rational)."""
        n = self.rank
        return tuple(solve_rational(self.cartan, [int(i == j) for i in range(n)]) for j in range(n))

    @cached_property
    def fundamental_coweights(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """omega_j^vee in the simple-coroot basis (rational)."""
        n = self.rank
        ct = self.cartan.T
        return tuple(solve_rational(ct, [int(i == j) for i in range(n)]) for j in range(n))

    @cached_property
    def connection_group(self) -> FiniteAbelianGroup:
        return connection_invariants(self)

    def dual(self) -> "RootDatum":
        fam = {"B": "C", "C": "B"}.get(self.type.family, self.type.family)
        return _from_cartan(RootSystemType(fam, self.rank), self.cartan.T)

    def __str__(self) -> str:
        return str(self.type)


def _from_cartan(t: RootSystemType, cartan: IntMatrix) -> RootDatum:
    lengths = _symmetrizer(cartan)
    pos = tuple(positive_root_closure(cartan))
    d = RootDatum(t, cartan, pos, lengths)
    h = d.coxeter_number
    tops = [r for r in pos if sum(r) == h - 1]
    assert len(tops) == 1, "highest root is not unique"
    assert abs(cartan.det()) == d.connection_group.order
    return d


@lru_cache(maxsize=None)
def build(t) -> RootDatum:
    """Root datum for a type, given as :class:`RootSystemType` or a string like ``"E8"``."""
    if isinstance(t, str):
        t = RootSystemType.parse(t)
    return _from_cartan(t, cartan_matrix(t))


def connection_invariants(d: RootDatum) -> FiniteAbelianGroup:
    """Invariant factors of P/Q, the cokernel of the Cartan matrix in weight coordinates."""
    torsion, free = cokernel(d.cartan)
    assert free == 0
    return torsion


def coweight_quotient(d: RootDatum) -> FiniteAbelianGroup:
    """P^vee/Q^vee, computed from the transpose of the Cartan matrix."""
    torsion, free = cokernel(d.cartan.T)
    assert free == 0
    return torsion


def verify_fact2(d: RootDatum) -> Report:
    """Connection-index primes, bad primes and torsion primes all divide h."""
    h = d.coxeter_number
    rep = Report(f"fact2 {d}")
    conn = set(prime_factors(d.connection_group.order))
    bad = {p for c in d.highest_root for p in prime_factors(c)}
    torsion = {p for c in d.dual().highest_root for p in prime_factors(c)}
    for label, primes in (("connection", conn), ("bad", bad), ("torsion", torsion)):
        for p in sorted(primes):
            rep.add(f"{label} prime {p} | h={h}", h % p == 0, kind=label, prime=p, h=h)
    if not (conn | bad | torsion):
        rep.note("no relevant primes")
    return rep


def swan_rank_identity(d: RootDatum) -> Tuple[Fraction, bool]:
    swan = Fraction(d.num_roots, d.coxeter_number)
    return swan, swan == d.rank


def default_types(max_rank: int = DEFAULT_CLASSICAL_CAP) -> List[RootSystemType]:
    out = []
    for n in range(1, max_rank + 1):
        out.append(RootSystemType("A", n))
    for fam, lo in (("B", 2), ("C", 2), ("D", 4)):
        out += [RootSystemType(fam, n) for n in range(lo, max_rank + 1)]
    out += [RootSystemType("E", n) for n in (6, 7, 8) if n <= max(max_rank, 8)]
    out += [RootSystemType("F", 4), RootSystemType("G", 2)]
    return sorted(out, key=RootSystemType.sort_key)
