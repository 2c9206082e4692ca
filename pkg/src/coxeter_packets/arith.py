"""Finite-field counts attached to a root datum: centers, eigenspaces, regular torsion."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd, prod
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .exact import FieldElement, FiniteField, IntMatrix, field_of_order, is_prime, matrix_rank_mod, prime_power
from .report import Report
from .rootsys import RootDatum, connection_invariants, coweight_quotient
from .weyl import coxeter_element, exponents, simple_reflection, weyl_order


class InadmissibleResidueField(ValueError):
    """q lies outside the regime the computation is defined for."""


@dataclass(frozen=True)
class ResidueParams:
    q: int
    p: int
    f: int
    require_one_mod_h: bool = False

    @classmethod
    def of(cls, q: int, d: Optional[RootDatum] = None, require_one_mod_h: bool = False) -> "ResidueParams":
        pf = prime_power(q)
        if pf is None:
            raise InadmissibleResidueField(f"q = {q} is not a prime power")
        params = cls(q, pf[0], pf[1], require_one_mod_h)
        if d is not None:
            params.check(d)
        return params

    def check(self, d: RootDatum) -> None:
        h = d.coxeter_number
        if gcd(self.q, h) != 1:
            raise InadmissibleResidueField(
                f"q = {self.q} is not coprime to the Coxeter number h = {h} of {d}")
        if self.require_one_mod_h and (self.q - 1) % h:
            raise InadmissibleResidueField(f"q = {self.q} is not 1 mod h = {h}")

    @property
    def field(self) -> FiniteField:
        return field_of_order(self.q)


def admissible_primes(h: int, count: int, one_mod_h: bool = False, start: int = 2) -> List[int]:
    """The first ``count`` primes coprime to h (optionally also 1 mod h)."""
    out, p = [], start
    while len(out) < count:
        if is_prime(p) and gcd(p, h) == 1 and (not one_mod_h or p % h == 1):
            out.append(p)
        p += 1
    return out


@dataclass(frozen=True)
class TorusPoint:
    """Point of T (coordinates on simple coroots) or T_ad (on fundamental coweights)."""

    datum: RootDatum
    lattice: str  # "T" or "T_ad"
    coords: Tuple[FieldElement, ...]

    def __post_init__(self):
        if self.lattice not in ("T", "T_ad"):
            raise ValueError(f"unknown torus {self.lattice!r}")
        if len(self.coords) != self.datum.rank:
            raise ValueError("wrong number of coordinates")
        if any(not c for c in self.coords):
            raise ValueError("torus coordinates must be nonzero")

    @property
    def field(self) -> FiniteField:
        return self.coords[0].field

    def pairings(self, root: Sequence[int]) -> Tuple[int, ...]:
        """<root, basis_j> for the cocharacter basis of this torus."""
        if self.lattice == "T":
            return self.datum.cartan.apply(tuple(root))
        return tuple(root)

    def root_value(self, root: Sequence[int]) -> FieldElement:
        """root(t) = prod_j t_j^{<root, basis_j>}."""
        out = self.field.one()
        for t, e in zip(self.coords, self.pairings(root)):
            if e:
                out = out * t ** e
        return out

    def __mul__(self, other: "TorusPoint") -> "TorusPoint":
        if other.lattice != self.lattice:
            raise ValueError("cannot multiply points of different tori")
        return TorusPoint(self.datum, self.lattice, tuple(a * b for a, b in zip(self.coords, other.coords)))

    def base_change(self, big: FiniteField) -> "TorusPoint":
        return TorusPoint(self.datum, self.lattice, tuple(self.field.embed(c, big) for c in self.coords))

    @classmethod
    def identity(cls, d: RootDatum, field: FiniteField, lattice: str = "T") -> "TorusPoint":
        return cls(d, lattice, tuple(field.one() for _ in range(d.rank)))


def all_torus_points(d: RootDatum, field: FiniteField, lattice: str = "T") -> Iterator[TorusPoint]:
    from itertools import product
    units = field.units()
    for coords in product(units, repeat=d.rank):
        yield TorusPoint(d, lattice, coords)


def center_order(d: RootDatum, q: int) -> int:
    """|Z(G)(F_q)| = prod gcd(q - 1, n_i)."""
    ResidueParams.of(q, d)
    return prod(gcd(q - 1, n) for n in connection_invariants(d).invariant_factors)


def frobenius_kernel_order(d: RootDatum, q: int) -> int:
    """Number of x in P/Q with (q - 1) x = 0, counted element by element."""
    ResidueParams.of(q, d)
    group = connection_invariants(d)
    fs = group.invariant_factors
    return sum(1 for x in group.elements() if all((q - 1) * xi % n == 0 for xi, n in zip(x, fs)))


def lambda_center_match(d: RootDatum) -> Report:
    rep = Report(f"kotalt {d}")
    lam = coweight_quotient(d)          # Smith form of the transposed Cartan matrix
    z = connection_invariants(d)        # Smith form of the Cartan matrix
    rep.add("|P^vee/Q^vee| = |P/Q|", lam.order == z.order, coweight_order=lam.order, weight_order=z.order,
            coweight=str(lam), weight=str(z))
    return rep


def primitive_root_of_unity(field: FiniteField, h: int) -> FieldElement:
    """Least element (by code) of multiplicative order exactly h."""
    try:
        return field.element_of_order(h)
    except ValueError:
        raise InadmissibleResidueField(f"F_{field.order} has no element of order {h}") from None


def eigenspace_dims(d: RootDatum, q: int, i: int) -> int:
    """dim ker(c - zeta^{-i}) on P^vee tensor F_q, zeta the least element of order h."""
    h = d.coxeter_number
    if not 0 < i < h:
        raise ValueError(f"i must satisfy 0 < i < h = {h}")
    params = ResidueParams.of(q, d, require_one_mod_h=True)
    field = params.field
    zeta = primitive_root_of_unity(field, h)
    lam = zeta ** (-i)
    c = coxeter_element(d).coweight_matrix
    n = d.rank
    rows = [[field(c[r, s]) - (lam if r == s else 0) for s in range(n)] for r in range(n)]
    return n - matrix_rank_mod(rows, field)


def regular_h_torsion(d: RootDatum, q: int, weyl_bound: int = 60_000) -> Report:
    """Regularity of prod omega_alpha^vee(zeta^{-1}) and, when |W| is small enough,
    uniqueness of the W-orbit of regular elements in T_ad(F_q)[h]."""
    h = d.coxeter_number
    params = ResidueParams.of(q, d, require_one_mod_h=True)
    field = params.field
    zeta = primitive_root_of_unity(field, h)
    rep = Report(f"regular h-torsion {d} q={q}")
    cbar = TorusPoint(d, "T_ad", tuple(zeta ** -1 for _ in range(d.rank)))
    bad = [r for r in d.roots if cbar.root_value(r) == 1]
    rep.add("cbar regular", not bad, zeta=zeta.code, h=h, roots_fixed=bad,
            max_height=d.coxeter_number - 1)
    rep.add("cbar has order h", _order_of_point(cbar) == h)
    order = weyl_order(d)
    if order > weyl_bound:
        rep.note(f"orbit uniqueness skipped: |W| = {order} > bound {weyl_bound}")
        return rep
    regular = _regular_torsion_codes(d, h)
    orbit = _weyl_orbit_codes(d, h, tuple([h - 1] * d.rank))
    rep.add("regular elements form one W-orbit", orbit == regular,
            regular_count=len(regular), orbit_size=len(orbit), weyl_order=order)
    return rep


def _order_of_point(t: TorusPoint) -> int:
    f = t.field
    k = 1
    for c in t.coords:
        m = f.multiplicative_order(c.code)
        k = k * m // gcd(k, m)
    return k


def _encode(v: Sequence[int], h: int) -> int:
    out = 0
    for x in v:
        out = out * h + x
    return out


def _regular_torsion_codes(d: RootDatum, h: int) -> set:
    """Codes of exponent vectors e in (Z/h)^r with beta . e != 0 mod h for every root beta.

    A point of T_ad[h] is ``prod omega_j^vee(zeta^{e_j})``; beta evaluates to
    ``zeta^{beta . e}``.  Enumerated in numpy blocks over the first coordinate.
    """
    r = d.rank
    pos = np.array(d.positive_roots, dtype=np.int64)  # small entries; products stay tiny
    rest = np.indices((h,) * (r - 1)).reshape(r - 1, -1).T if r > 1 else np.zeros((1, 0), dtype=np.int64)
    weights = h ** np.arange(r - 1, -1, -1, dtype=np.int64)
    out = set()
    for first in range(h):
        block = np.concatenate([np.full((rest.shape[0], 1), first, dtype=np.int64), rest], axis=1)
        vals = (block @ pos.T) % h
        keep = block[(vals != 0).all(axis=1)]
        out.update((keep @ weights).tolist())
    return out


def _weyl_orbit_codes(d: RootDatum, h: int, start: Tuple[int, ...]) -> set:
    gens = [simple_reflection(d, i).coweight_matrix for i in range(d.rank)]
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for g in gens:
            w = tuple(x % h for x in g.apply(v))
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return {_encode(v, h) for v in seen}
