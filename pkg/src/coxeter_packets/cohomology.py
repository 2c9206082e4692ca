"""Tate cohomology of finite cyclic groups acting on lattices.

For a lattice L with an automorphism c of order n and norm N = 1 + c + ... + c^{n-1}:

    H^1 = ker(N) / im(c - 1)        H^0_Tate = ker(c - 1) / im(N)

Everything is computed with integral bases; no rational kernels leak into
the group structure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import lcm
from typing import List, Optional, Sequence, Tuple

from .exact import (
    FiniteAbelianGroup,
    IntMatrix,
    cokernel,
    kernel_basis,
    rational_nullspace,
    smith_normal_form,
    solve_integer,
    solve_rational,
)
from .report import Report
from .rootsys import RootDatum, coweight_quotient
from .weyl import WeylElement, coxeter_element, is_elliptic, simple_reflection

Vector = Tuple[int, ...]


class NotElliptic(ValueError):
    """The acting element has nonzero fixed vectors."""


@dataclass(frozen=True)
class CyclicAction:
    """Z/order acting on Z^rank through ``generator`` (the action need not be faithful)."""

    generator: IntMatrix
    order: int

    def __post_init__(self):
        c, n = self.generator, self.order
        if c.rows != c.cols:
            raise ValueError("generator must be square")
        if n < 1:
            raise ValueError("order must be positive")
        if c ** n != IntMatrix.identity(c.rows):
            raise ValueError(f"generator^{n} is not the identity")

    @classmethod
    def of(cls, generator: IntMatrix, max_order: int = 10_000) -> "CyclicAction":
        """The faithful action: order is the exact order of the generator."""
        ident = IntMatrix.identity(generator.rows)
        p = generator
        for k in range(1, max_order + 1):
            if p == ident:
                return cls(generator, k)
            p = p @ generator
        raise ValueError("generator does not have finite order")

    @property
    def rank(self) -> int:
        return self.generator.rows

    @cached_property
    def norm(self) -> IntMatrix:
        acc = IntMatrix.zeros(self.rank, self.rank)
        p = IntMatrix.identity(self.rank)
        for _ in range(self.order):
            acc = acc + p
            p = p @ self.generator
        return acc

    @cached_property
    def minus_one(self) -> IntMatrix:
        return self.generator - IntMatrix.identity(self.rank)

    def conjugate(self, u: IntMatrix, u_inv: IntMatrix) -> "CyclicAction":
        """Same action in the basis given by the columns of u."""
        return CyclicAction(u_inv @ self.generator @ u, self.order)


@dataclass(frozen=True)
class Subquotient:
    """ker(A) / im(B) for integer matrices with im(B) inside ker(A), with coordinates."""

    group: FiniteAbelianGroup
    kernel: IntMatrix           # columns: Z-basis of the kernel
    _u: IntMatrix = field(repr=False)
    _diag: Tuple[int, ...] = field(repr=False)
    generators: Tuple[Vector, ...] = ()

    def coordinates(self, z: Sequence[int]) -> Tuple[int, ...]:
        """Coordinates of a kernel vector with respect to :attr:`generators`."""
        k = solve_integer(self.kernel, z)
        if k is None:
            raise ValueError(f"{tuple(z)} is not in the kernel")
        uk = self._u.apply(k)
        out = []
        for i, d in enumerate(self._diag):
            if d > 1:
                out.append(uk[i] % d)
            elif d == 0:
                if uk[i]:
                    raise ValueError("class has infinite order")
        return tuple(out)

    def is_zero(self, z: Sequence[int]) -> bool:
        return not any(self.coordinates(z))


def _subquotient(kernel_of: IntMatrix, image_of: IntMatrix) -> Subquotient:
    kb = kernel_basis(kernel_of)
    k = kb.cols
    if k == 0:
        return Subquotient(FiniteAbelianGroup(), kb, IntMatrix.zeros(0, 0), ())
    cols = []
    for col in image_of.columns():
        y = solve_integer(kb, col)
        assert y is not None, "image is not inside the kernel"
        cols.append(y)
    y = IntMatrix.from_columns(cols, k) if cols else IntMatrix.zeros(k, 0)
    snf = smith_normal_form(y)
    diag = [snf.S[i, i] if i < min(snf.S.rows, snf.S.cols) else 0 for i in range(k)]
    if any(d == 0 for d in diag):
        raise ValueError("subquotient is infinite")
    u_inv = _unimodular_inverse(snf.U)
    gens = tuple(kb.apply(u_inv.column(i)) for i, d in enumerate(diag) if d > 1)
    group = FiniteAbelianGroup(tuple(d for d in diag if d > 1))
    return Subquotient(group, kb, snf.U, tuple(diag), gens)


def _unimodular_inverse(u: IntMatrix) -> IntMatrix:
    cols = []
    n = u.rows
    for j in range(n):
        x = solve_rational(u, [int(i == j) for i in range(n)])
        cols.append(tuple(int(v) for v in x))
    return IntMatrix.from_columns(cols, n)


def h1(a: CyclicAction) -> Subquotient:
    return _subquotient(a.norm, a.minus_one)


def tate_h1(a: CyclicAction) -> FiniteAbelianGroup:
    return h1(a).group


def tate_h0(a: CyclicAction) -> FiniteAbelianGroup:
    """L^c / N L, with an integral basis of L^c from the Smith form of c - 1."""
    return _subquotient(a.minus_one, a.norm).group


def tate_h2(a: CyclicAction) -> FiniteAbelianGroup:
    """ker(c - 1) / im(N) via a rational kernel saturated to the lattice.

    Deliberately a different route from :func:`tate_h0` so the two can be
    compared (they agree by periodicity).
    """
    basis = rational_nullspace(a.minus_one)
    if not basis:
        return FiniteAbelianGroup()
    # clear denominators, then saturate: L^c = L intersect (Q-span)
    ints = []
    for v in basis:
        den = lcm(*(x.denominator for x in v))
        ints.append(tuple(int(x * den) for x in v))
    b = IntMatrix.from_columns(ints, a.rank)
    # B = U^{-1} S V^{-1}, so the first rank(B) columns of U^{-1} span the saturation
    snf = smith_normal_form(b)
    u_inv = _unimodular_inverse(snf.U)
    sat = IntMatrix.from_columns([u_inv.column(i) for i in range(snf.rank)], a.rank)
    cols = []
    for col in a.norm.columns():
        y = solve_integer(sat, col)
        assert y is not None
        cols.append(y)
    torsion, free = cokernel(IntMatrix.from_columns(cols, sat.cols))
    if free:
        raise ValueError("H^2 is infinite")
    return torsion


@dataclass(frozen=True)
class LatticeMap:
    source: CyclicAction
    target: CyclicAction
    matrix: IntMatrix

    def __post_init__(self):
        m = self.matrix
        if m.shape != (self.target.rank, self.source.rank):
            raise ValueError("map has the wrong shape")
        if m @ self.source.generator != self.target.generator @ m:
            raise ValueError("map is not equivariant")
        if smith_normal_form(m).rank != self.source.rank:
            raise ValueError("map is not injective")


@dataclass(frozen=True)
class InducedMap:
    matrix: Tuple[Tuple[int, ...], ...]  # row k: coordinates of the image of source generator k
    is_trivial: bool

    def __iter__(self):
        return iter((self.matrix, self.is_trivial))


def induced_h1_map(f: LatticeMap) -> InducedMap:
    src, tgt = h1(f.source), h1(f.target)
    rows = tuple(tgt.coordinates(f.matrix.apply(g)) for g in src.generators)
    return InducedMap(rows, all(not any(r) for r in rows))


# -- root-lattice instances ---------------------------------------------------

def coxeter_action_on_Q(d: RootDatum, ordering=None) -> CyclicAction:
    c = coxeter_element(d, ordering)
    return CyclicAction(c.matrix, c.order)


def coxeter_action_on_P(d: RootDatum, ordering=None) -> CyclicAction:
    c = coxeter_element(d, ordering)
    return CyclicAction(c.weight_matrix(), c.order)


def coxeter_action_on_coweights(d: RootDatum, ordering=None) -> CyclicAction:
    c = coxeter_element(d, ordering)
    return CyclicAction(c.coweight_matrix, c.order)


def root_in_weight_lattice(d: RootDatum, ordering=None) -> LatticeMap:
    """The inclusion Q in P in simple-root / fundamental-weight coordinates."""
    return LatticeMap(coxeter_action_on_Q(d, ordering), coxeter_action_on_P(d, ordering), d.cartan)


def coxeter_witness(d: RootDatum, qvec: Sequence[int], ordering=None) -> Vector:
    """p in P (fundamental weight coordinates) with qvec = p - c p.

    ``qvec`` is an element of Q in simple-root coordinates.  The solve is
    rational; integrality in P is checked and the identity is re-verified
    by substitution.
    """
    if len(qvec) != d.rank or any(int(x) != x for x in qvec):
        raise ValueError(f"{tuple(qvec)} is not an element of the root lattice")
    c = coxeter_element(d, ordering)
    if not is_elliptic(c):
        raise NotElliptic("acting element has fixed vectors")
    ident = IntMatrix.identity(d.rank)
    p_root = solve_rational(ident - c.matrix, qvec)
    p_weight = d.cartan.apply(p_root)
    if any(x.denominator != 1 for x in p_weight):
        raise ArithmeticError(f"witness {p_weight} is not in the weight lattice")
    p = tuple(int(x) for x in p_weight)
    cp = c.weight_matrix().apply(p)
    if tuple(a - b for a, b in zip(p, cp)) != d.cartan.apply(qvec):
        raise ArithmeticError("witness failed substitution check")
    return p


def h1_lattice_vs_quotient(d: RootDatum) -> Report:
    rep = Report(f"H1(<c>,P) vs Hom(Z/h,P/Q) for {d}")
    h = d.coxeter_number
    conn = d.connection_group
    h1_p = tate_h1(coxeter_action_on_P(d))
    hom = conn.torsion_order(h)
    rep.add("|H1(<c>,P)| = |(P/Q)[h]|", h1_p.order == hom, h1=str(h1_p), hom_order=hom)
    rep.add("(P/Q)[h] = P/Q", all(h % n == 0 for n in conn.invariant_factors),
            invariants=conn.invariant_factors, h=h)
    rep.add("H0(<c>,Q) trivial", tate_h0(coxeter_action_on_Q(d)).is_trivial())
    return rep


def coinvariants_coxeter(d: RootDatum) -> FiniteAbelianGroup:
    """P^vee / (c - 1) P^vee; raises if it differs from P^vee/Q^vee."""
    a = coxeter_action_on_coweights(d)
    torsion, free = cokernel(a.minus_one)
    assert free == 0
    expected = coweight_quotient(d)
    if torsion != expected:
        raise AssertionError(f"coinvariants {torsion} differ from P^vee/Q^vee = {expected}")
    return torsion


def weyl_acts_trivially_on_quotient(d: RootDatum) -> bool:
    """Every simple reflection moves each coweight by an element of Q^vee."""
    coroots = d.cartan.T  # columns: simple coroots in coweight coordinates
    ident = IntMatrix.identity(d.rank)
    for i in range(d.rank):
        delta = simple_reflection(d, i).coweight_matrix - ident
        for col in delta.columns():
            if solve_integer(coroots, col) is None:
                return False
    return True
